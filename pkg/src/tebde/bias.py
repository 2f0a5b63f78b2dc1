"""Entropy-bias estimators.

A size-n sample systematically understates the quadratic Tsallis entropy of
the distribution it was drawn from: the expected entropy of the sampling
distribution is exactly ``(n-1)/n`` times the true entropy.  The estimators
here quantify the shortfall so downstream models can compensate it:

* ``frequentist_teb_naive``  -- unbiased plug-in correction T[sample]/(n-1);
* ``frequentist_teb_bootstrap`` -- least-squares slope fit over resampled
  subsample sizes;
* ``bayesian_teb`` -- (m-1)/(n*(m+1)), the exact gap under a flat prior over
  the whole simplex;
* ``seb`` -- the classic Miller-style Shannon correction (m-1)/(2n), kept as
  a comparative baseline (it is not an unbiased correction);
* ``teb_std`` -- the closed-form standard deviation of the expected sampling
  entropy under the flat prior.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .core import CountSample, Distribution, tsallis_entropy


class BiasKind(enum.Enum):
    FREQUENTIST_NAIVE = "frequentist_naive"
    FREQUENTIST_BOOTSTRAP = "frequentist_bootstrap"
    BAYESIAN_UNIFORM = "bayesian_uniform"
    SHANNON_MILLER = "shannon_miller"


@dataclass(frozen=True)
class BiasEstimate:
    """A scalar entropy correction with method provenance.

    ``raw_delta`` records the pre-clamp value for the bootstrap estimator,
    whose least-squares slope can come out below the sample entropy.
    """

    delta: float
    kind: BiasKind
    slope_khat: float | None = None
    raw_delta: float | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.delta) or self.delta < 0.0:
            raise ValueError(f"bias correction must be finite and >= 0, got {self.delta}")

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "delta": self.delta, "khat": self.slope_khat}


@dataclass(frozen=True)
class BootstrapConfig:
    """Resampling plan for the bootstrap estimator.

    ``size_grid=None`` selects the default grid: 16 geometrically spaced
    subsample sizes in [max(2, n//16), n-1].
    """

    replicates_per_size: int = 200
    size_grid: tuple[int, ...] | None = None
    seed: int = 0

    def resolved_grid(self, n: int) -> tuple[int, ...]:
        if self.size_grid is not None:
            grid = tuple(int(i) for i in self.size_grid)
            if not grid:
                raise ValueError("size grid must be nonempty")
            if any(i < 2 or i > n for i in grid):
                raise ValueError(f"size grid entries must lie in [2, {n}]")
            return grid
        return default_size_grid(n)


def default_size_grid(n: int, points: int = 16) -> tuple[int, ...]:
    """Geometric grid of subsample sizes in [max(2, n//16), n-1]."""
    if n < 3:
        return (2,)
    lo = max(2, n // 16)
    hi = n - 1
    raw = np.geomspace(lo, hi, num=points)
    grid = sorted(set(int(round(v)) for v in raw))
    return tuple(max(2, min(hi, g)) for g in grid)


def frequentist_teb_naive(s: CountSample) -> BiasEstimate:
    """Plug-in correction T[sample]/(n-1); unbiased for the n/(n-1) gap."""
    if s.n < 2:
        raise ValueError("sample too small for Frequentist-TEB (need n >= 2)")
    t_hat = tsallis_entropy(s.to_distribution())
    return BiasEstimate(delta=t_hat / (s.n - 1), kind=BiasKind.FREQUENTIST_NAIVE)


def frequentist_teb_bootstrap(s: CountSample, cfg: BootstrapConfig) -> BiasEstimate:
    """Least-squares slope estimate of the true entropy, then its gap.

    For each subsample size i the mean Tsallis entropy over
    ``replicates_per_size`` multinomial resamples (with replacement from the
    empirical distribution) estimates the expected sampling entropy, which
    grows linearly in (i-1)/i.  The fitted slope estimates the underlying
    entropy; the correction is its excess over the sample entropy, clamped
    at zero.
    """
    if s.n < 2:
        raise ValueError("sample too small for Frequentist-TEB (need n >= 2)")
    if cfg.replicates_per_size < 1:
        raise ValueError("need at least one replicate per size")
    grid = cfg.resolved_grid(s.n)
    phat = s.counts / float(s.n)
    rng = np.random.default_rng(cfg.seed)

    weights = np.array([(i - 1) / i for i in grid])
    means = np.empty(len(grid))
    for gi, size in enumerate(grid):
        draws = rng.multinomial(size, phat, size=cfg.replicates_per_size)
        freqs = draws / float(size)
        t_vals = 1.0 - np.einsum("ij,ij->i", freqs, freqs)
        means[gi] = t_vals.mean()

    khat = float(np.dot(weights, means) / np.dot(weights, weights))
    t_hat = tsallis_entropy(s.to_distribution())
    raw = khat - t_hat
    return BiasEstimate(
        delta=max(0.0, raw),
        kind=BiasKind.FREQUENTIST_BOOTSTRAP,
        slope_khat=khat,
        raw_delta=raw,
    )


def bayesian_teb(m: int, n: int) -> BiasEstimate:
    """Exact expected entropy gap under the flat simplex prior."""
    _check_mn(m, n)
    return BiasEstimate(delta=(m - 1) / (n * (m + 1)), kind=BiasKind.BAYESIAN_UNIFORM)


def seb(m: int, n: int) -> BiasEstimate:
    """Miller-style Shannon entropy correction (m-1)/(2n)."""
    _check_mn(m, n)
    return BiasEstimate(delta=(m - 1) / (2.0 * n), kind=BiasKind.SHANNON_MILLER)


def expected_sampling_tsallis(d: Distribution, n: int) -> float:
    """Expected Tsallis entropy of a size-n sampling distribution of d."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    return (n - 1) / n * tsallis_entropy(d)


def teb_std(m: int, n: int) -> float:
    """Standard deviation of the expected sampling entropy under the flat
    prior: 2/sqrt((m-1)(m+2)(m+3)) times its mean (n-1)(m-1)/(n(m+1))."""
    _check_mn(m, n)
    mean = (n - 1) * (m - 1) / (n * (m + 1))
    return 2.0 / math.sqrt((m - 1) * (m + 2) * (m + 3)) * mean


def _check_mn(m: int, n: int) -> None:
    if m < 2:
        raise ValueError("need at least two bins")
    if n < 1:
        raise ValueError("sample size must be >= 1")
