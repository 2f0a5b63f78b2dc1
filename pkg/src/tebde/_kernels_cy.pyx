# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the entropy / divergence / enumeration hot paths.

Same API as tebde._kernels_py; see tebde.kernels for backend selection.
"""

from libc.math cimport INFINITY, exp, lgamma, log

import numpy as np

cimport numpy as cnp

cnp.import_array()


def tsallis(double[::1] p):
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(p.shape[0]):
        s += p[i] * p[i]
    return 1.0 - s


def shannon(double[::1] p):
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(p.shape[0]):
        if p[i] > 0.0:
            s -= p[i] * log(p[i])
    return s


def kl(double[::1] p, double[::1] q):
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(p.shape[0]):
        if p[i] > 0.0:
            if q[i] <= 0.0:
                return INFINITY
            s += p[i] * log(p[i] / q[i])
    return s


def jsd(double[::1] p, double[::1] q):
    cdef Py_ssize_t i
    cdef double mid, s = 0.0
    for i in range(p.shape[0]):
        mid = 0.5 * (p[i] + q[i])
        if p[i] > 0.0:
            s += 0.5 * p[i] * log(p[i] / mid)
        if q[i] > 0.0:
            s += 0.5 * q[i] * log(q[i] / mid)
    return s


def lidstone_probs(counts, double f):
    cdef double[::1] x = np.ascontiguousarray(counts, dtype=np.float64)
    cdef Py_ssize_t i, m = x.shape[0]
    cdef double n = 0.0
    for i in range(m):
        n += x[i]
    out = np.empty(m, dtype=np.float64)
    cdef double[::1] o = out
    cdef double denom = n + f * m
    for i in range(m):
        o[i] = (x[i] + f) / denom
    return out


def cross_entropy(double[::1] p, double[::1] est):
    cdef Py_ssize_t i
    cdef double s = 0.0
    for i in range(p.shape[0]):
        if p[i] > 0.0:
            if est[i] <= 0.0:
                return INFINITY
            s -= p[i] * log(est[i])
    return s


cdef Py_ssize_t _n_compositions(long n, long m):
    # C(n+m-1, m-1) without overflow for desk-scale inputs
    cdef double acc = 1.0
    cdef long i
    for i in range(1, m):
        acc *= (n + i) / <double> i
    return <Py_ssize_t> (acc + 0.5)


def compositions(long n, long m):
    """All length-m nonnegative integer vectors summing to n (lex order)."""
    if m < 1:
        raise ValueError("need at least one part")
    if m == 1:
        return np.array([[n]], dtype=np.int64)
    cdef Py_ssize_t total = _n_compositions(n, m)
    out = np.zeros((total, m), dtype=np.int64)
    cdef long[:, ::1] o = out
    cdef long[::1] x = np.zeros(m - 1, dtype=np.int64)
    cdef long rem = n
    cdef Py_ssize_t row = 0
    cdef long j
    while True:
        for j in range(m - 1):
            o[row, j] = x[j]
        o[row, m - 1] = rem
        row += 1
        # odometer increment on the first m-1 digits, last digit fastest
        j = m - 2
        while j >= 0:
            if rem > 0:
                x[j] += 1
                rem -= 1
                break
            rem += x[j]
            x[j] = 0
            j -= 1
        if j < 0:
            break
    return out


def sampling_law(double[::1] p, long n):
    """Every size-n multinomial outcome over p with its probability."""
    cdef long m = p.shape[0]
    counts = compositions(n, m)
    cdef long[:, ::1] c = counts
    cdef Py_ssize_t rows = counts.shape[0]
    probs = np.empty(rows, dtype=np.float64)
    cdef double[::1] pr = probs
    cdef double lognfact = lgamma(n + 1.0)
    cdef double ll
    cdef Py_ssize_t i
    cdef long j
    cdef bint impossible
    for i in range(rows):
        ll = lognfact
        impossible = False
        for j in range(m):
            if c[i, j] > 0:
                if p[j] <= 0.0:
                    impossible = True
                    break
                ll += c[i, j] * log(p[j]) - lgamma(c[i, j] + 1.0)
        pr[i] = 0.0 if impossible else exp(ll)
    return counts, probs


def enum_expected_tsallis(double[::1] p, long n):
    """Exact expected Tsallis entropy of the size-n sampling distribution.

    Single fused pass over the composition walk; nothing is materialized.
    Returns (expectation, total probability mass).
    """
    cdef long m = p.shape[0]
    if m == 1:
        return 0.0, 1.0
    cdef long[::1] x = np.zeros(m - 1, dtype=np.int64)
    cdef long rem = n
    cdef double lognfact = lgamma(n + 1.0)
    cdef double inv_n2 = 1.0 / (<double> n * <double> n)
    cdef double acc = 0.0, mass = 0.0
    cdef double ll, prob, sumsq
    cdef long j
    cdef bint impossible
    while True:
        ll = lognfact
        sumsq = <double> rem * <double> rem
        impossible = (rem > 0 and p[m - 1] <= 0.0)
        if not impossible:
            if rem > 0:
                ll += rem * log(p[m - 1]) - lgamma(rem + 1.0)
            for j in range(m - 1):
                if x[j] > 0:
                    if p[j] <= 0.0:
                        impossible = True
                        break
                    ll += x[j] * log(p[j]) - lgamma(x[j] + 1.0)
                    sumsq += <double> x[j] * <double> x[j]
        if not impossible:
            prob = exp(ll)
            mass += prob
            acc += prob * (1.0 - sumsq * inv_n2)
        j = m - 2
        while j >= 0:
            if rem > 0:
                x[j] += 1
                rem -= 1
                break
            rem += x[j]
            x[j] = 0
            j -= 1
        if j < 0:
            break
    return acc, mass
