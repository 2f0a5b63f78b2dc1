"""Pure-NumPy implementations of the hot numeric kernels.

Mirrors the API of the compiled module ``tebde._kernels_cy``; backend
selection happens once, in :mod:`tebde.kernels`.  All functions take plain
float64 / int64 arrays and return Python floats or NumPy arrays.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

__all__ = [
    "tsallis",
    "shannon",
    "kl",
    "jsd",
    "lidstone_probs",
    "cross_entropy",
    "compositions",
    "sampling_law",
    "enum_expected_tsallis",
]


def tsallis(p: np.ndarray) -> float:
    """Quadratic (q=2) Tsallis entropy, 1 - sum(p**2)."""
    p = np.asarray(p, dtype=np.float64)
    return 1.0 - float(np.dot(p, p))


def shannon(p: np.ndarray) -> float:
    """Shannon entropy in nats with the 0*log(0)=0 convention."""
    p = np.asarray(p, dtype=np.float64)
    pos = p[p > 0.0]
    return float(-np.dot(pos, np.log(pos)))


def kl(p: np.ndarray, q: np.ndarray) -> float:
    """KL divergence in nats; +inf when q vanishes on the support of p."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    mask = p > 0.0
    if np.any(q[mask] <= 0.0):
        return float("inf")
    return float(np.dot(p[mask], np.log(p[mask] / q[mask])))


def jsd(p: np.ndarray, q: np.ndarray) -> float:
    """Jensen-Shannon divergence in nats (always finite)."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    mid = 0.5 * (p + q)
    return 0.5 * kl(p, mid) + 0.5 * kl(q, mid)


def lidstone_probs(counts: np.ndarray, f: float) -> np.ndarray:
    """Additive-smoothing probabilities (x_i + f) / (n + f*m)."""
    counts = np.asarray(counts, dtype=np.float64)
    n = counts.sum()
    m = counts.shape[0]
    if f == 0.0:
        return counts / n
    return (counts + f) / (n + f * m)


def cross_entropy(p: np.ndarray, est: np.ndarray) -> float:
    """-sum(p * log(est)) over the support of p; +inf if est vanishes there."""
    p = np.asarray(p, dtype=np.float64)
    est = np.asarray(est, dtype=np.float64)
    mask = p > 0.0
    if np.any(est[mask] <= 0.0):
        return float("inf")
    return float(-np.dot(p[mask], np.log(est[mask])))


def compositions(n: int, m: int) -> np.ndarray:
    """All length-m nonnegative integer vectors summing to n.

    Rows are emitted in ascending lexicographic order of the first m-1
    coordinates, matching the compiled walker exactly.
    """
    if m < 1:
        raise ValueError("need at least one part")
    if m == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n + 1):
        rest = compositions(n - first, m - 1)
        head = np.full((rest.shape[0], 1), first, dtype=np.int64)
        blocks.append(np.hstack([head, rest]))
    return np.vstack(blocks)


def _log_probs(counts: np.ndarray, p: np.ndarray) -> np.ndarray:
    n = int(counts[0].sum())
    # 0**0 = 1: zero counts contribute nothing even on zero-probability bins.
    with np.errstate(divide="ignore"):
        logp = np.log(p)
    term = np.zeros_like(counts, dtype=np.float64)
    mask = counts > 0
    cols = np.broadcast_to(logp, counts.shape)
    term[mask] = counts[mask] * cols[mask]
    return gammaln(n + 1) - gammaln(counts + 1).sum(axis=1) + term.sum(axis=1)


def sampling_law(p: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Every size-n multinomial outcome over p with its probability."""
    p = np.asarray(p, dtype=np.float64)
    counts = compositions(n, p.shape[0])
    with np.errstate(invalid="ignore"):
        probs = np.exp(_log_probs(counts, p))
    # exp(-inf) from impossible outcomes (positive count on a zero bin)
    probs = np.nan_to_num(probs, nan=0.0, posinf=0.0)
    return counts, probs


def enum_expected_tsallis(p: np.ndarray, n: int) -> tuple[float, float]:
    """Exact expected Tsallis entropy of the size-n sampling distribution.

    Returns (expectation, total probability mass); the second value is a
    self-check and should be 1 up to rounding.
    """
    counts, probs = sampling_law(p, n)
    freqs = counts / float(n)
    t_vals = 1.0 - np.einsum("ij,ij->i", freqs, freqs)
    return float(np.dot(t_vals, probs)), float(probs.sum())
