"""Probability-vector types and the entropy / divergence primitives.

Conventions used throughout the package:

* natural logarithm everywhere (rankings by affine-normalized scores are
  base-invariant);
* Tsallis entropy is the quadratic (q=2) form ``1 - sum(p**2)`` with the
  Boltzmann constant omitted;
* ``0 * log(0) = 0``;
* KL divergence is ``+inf`` when the second argument vanishes on the
  support of the first (no penalty constants).

All types are immutable after construction and all operations are pure, so
everything here is safe for unrestricted concurrent use.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import kernels

SIMPLEX_ATOL = 1e-12


class SimplexError(ValueError):
    """Raised when a vector fails the probability-simplex invariants."""


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Distribution:
    """A point on the probability simplex (length >= 2).

    Construction validates the invariants and never renormalizes; use
    :meth:`normalize` to build a distribution from arbitrary nonnegative
    weights.
    """

    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.shape[0] < 2:
            raise SimplexError("need a 1-d vector with at least two entries")
        if not np.all(np.isfinite(probs)):
            raise SimplexError("probabilities must be finite")
        if np.any(probs < 0.0):
            raise SimplexError("probabilities must be nonnegative")
        if abs(float(probs.sum()) - 1.0) > SIMPLEX_ATOL:
            raise SimplexError(
                f"probabilities sum to {probs.sum()!r}, not 1 within {SIMPLEX_ATOL}"
            )
        object.__setattr__(self, "probs", _freeze(probs))

    @classmethod
    def normalize(cls, weights) -> "Distribution":
        """Explicitly renormalize nonnegative weights onto the simplex."""
        w = np.asarray(weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] < 2:
            raise SimplexError("need a 1-d vector with at least two entries")
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise SimplexError("weights must be finite and nonnegative")
        total = float(w.sum())
        if total <= 0.0:
            raise SimplexError("weights must have positive total mass")
        return cls(w / total)

    @classmethod
    def uniform(cls, m: int) -> "Distribution":
        if m < 2:
            raise SimplexError("need at least two bins")
        return cls(np.full(m, 1.0 / m))

    @property
    def m(self) -> int:
        return int(self.probs.shape[0])

    def to_json(self) -> str:
        return json.dumps({"p": self.probs.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "Distribution":
        payload = json.loads(text)
        return cls(np.asarray(payload["p"], dtype=np.float64))


@dataclass(frozen=True, eq=False)
class CountSample:
    """Integer event counts with total n >= 1."""

    counts: np.ndarray
    n: int = field(init=False)

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        if counts.ndim != 1 or counts.shape[0] < 2:
            raise ValueError("need a 1-d count vector with at least two bins")
        if not np.issubdtype(counts.dtype, np.integer):
            as_int = np.asarray(counts, dtype=np.int64)
            if np.any(as_int != counts):
                raise ValueError("counts must be integers")
            counts = as_int
        counts = counts.astype(np.int64, copy=False)
        if np.any(counts < 0):
            raise ValueError("counts must be nonnegative")
        total = int(counts.sum())
        if total < 1:
            raise ValueError("total count must be at least 1")
        object.__setattr__(self, "counts", _freeze(counts))
        object.__setattr__(self, "n", total)

    @property
    def m(self) -> int:
        return int(self.counts.shape[0])

    def to_distribution(self) -> Distribution:
        """The induced sampling distribution, counts / n."""
        return Distribution(self.counts / float(self.n))

    @classmethod
    def from_csv(cls, path: str | Path) -> "CountSample":
        """Read counts from a file: one integer per line, or one
        comma-separated row."""
        text = Path(path).read_text().strip()
        if not text:
            raise ValueError(f"empty counts file: {path}")
        if "," in text.splitlines()[0]:
            tokens = text.splitlines()[0].split(",")
        else:
            tokens = text.split()
        try:
            counts = np.array([int(tok.strip()) for tok in tokens], dtype=np.int64)
        except ValueError as exc:
            raise ValueError(f"non-integer count in {path}: {exc}") from exc
        return cls(counts)


def tsallis_entropy(d: Distribution) -> float:
    """Quadratic Tsallis entropy, in [0, 1 - 1/m]."""
    return kernels.tsallis(d.probs)


def shannon_entropy(d: Distribution) -> float:
    """Shannon entropy in nats, in [0, ln m]."""
    return kernels.shannon(d.probs)


def _check_lengths(p: Distribution, q: Distribution) -> None:
    if p.m != q.m:
        raise ValueError(f"length mismatch: {p.m} vs {q.m}")


def kl_divergence(p: Distribution, q: Distribution) -> float:
    """KL divergence in nats; may be +inf on disjoint support."""
    _check_lengths(p, q)
    return kernels.kl(p.probs, q.probs)


def js_divergence(p: Distribution, q: Distribution) -> float:
    """Jensen-Shannon divergence in nats: symmetric, finite, <= ln 2."""
    _check_lengths(p, q)
    return kernels.jsd(p.probs, q.probs)
