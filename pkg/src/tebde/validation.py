"""Independent numerical checks of the closed-form entropy identities.

Three facts are checked against brute force:

1. exact enumeration of every multinomial outcome confirms that the
   expected sampling entropy equals (n-1)/n times the source entropy;
2. Monte Carlo over the flat simplex prior confirms the prior mean
   (n-1)(m-1)/(n(m+1));
3. the same draws confirm the closed-form standard deviation and that the
   std/mean ratio does not depend on n.

The flat prior is realized as normalized independent unit-rate exponential
draws, which is exactly the constant-density measure on the simplex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bias import teb_std
from .core import CountSample, Distribution, tsallis_entropy

OUTCOME_CAP_DEFAULT = 2_000_000


class OutcomeCapError(ValueError):
    """Enumeration would exceed the configured outcome cap."""


@dataclass(frozen=True)
class ValidationReport:
    """One closed-form-vs-measurement comparison.

    ``mode`` is "enumeration" (exact, absolute tolerance ``abs_tol``) or
    "monte-carlo" (pass within ``tolerance_sigmas`` standard errors, or
    within relative tolerance ``rel_tol`` when that is set instead).
    """

    closed_form: float
    estimate: float
    std_error: float
    draws_or_outcomes: int
    passed: bool
    tolerance_sigmas: float
    mode: str
    abs_tol: float = 0.0
    rel_tol: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "closed_form": self.closed_form,
            "estimate": self.estimate,
            "std_error": self.std_error,
            "draws_or_outcomes": self.draws_or_outcomes,
            "passed": self.passed,
            "tolerance_sigmas": self.tolerance_sigmas,
            "mode": self.mode,
            "abs_tol": self.abs_tol,
            "rel_tol": self.rel_tol,
        }


def outcome_count(m: int, n: int) -> int:
    return math.comb(n + m - 1, m - 1)


def enumerate_sampling_law(
    d: Distribution, n: int, cap: int = OUTCOME_CAP_DEFAULT
) -> list[tuple[CountSample, float]]:
    """All size-n multinomial outcomes of d with their probabilities.

    Uses the 0**0 = 1 convention, so zero-probability bins simply never
    receive counts.  Probabilities sum to 1 up to rounding.
    """
    if n < 1:
        raise ValueError("sample size must be >= 1")
    total = outcome_count(d.m, n)
    if total > cap:
        raise OutcomeCapError(
            f"{total} outcomes exceed the cap of {cap}; reduce m or n"
        )
    counts, probs = kernels.sampling_law(d.probs, n)
    return [
        (CountSample(counts[i]), float(probs[i]))
        for i in range(counts.shape[0])
    ]


def check_sampling_entropy_identity(
    d: Distribution,
    n: int,
    cap: int = OUTCOME_CAP_DEFAULT,
    abs_tol: float = 1e-10,
) -> ValidationReport:
    """Exact enumeration check of the (n-1)/n expected-entropy identity."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    total = outcome_count(d.m, n)
    if total > cap:
        raise OutcomeCapError(
            f"{total} outcomes exceed the cap of {cap}; reduce m or n"
        )
    estimate, mass = kernels.enum_expected_tsallis(d.probs, n)
    closed = (n - 1) / n * tsallis_entropy(d)
    # mass is a self-check on the enumeration itself
    passed = abs(estimate - closed) <= abs_tol and abs(mass - 1.0) <= 1e-12
    return ValidationReport(
        closed_form=closed,
        estimate=estimate,
        std_error=0.0,
        draws_or_outcomes=total,
        passed=passed,
        tolerance_sigmas=0.0,
        mode="enumeration",
        abs_tol=abs_tol,
    )


def uniform_simplex_draws(rng: np.random.Generator, draws: int, m: int) -> np.ndarray:
    """Draws from the flat density on the m-simplex (rows sum to 1)."""
    e = rng.standard_exponential((draws, m))
    return e / e.sum(axis=1, keepdims=True)


def _expected_entropies(m: int, n: int, draws: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    p = uniform_simplex_draws(rng, draws, m)
    t_vals = 1.0 - np.einsum("ij,ij->i", p, p)
    return (n - 1) / n * t_vals


def check_uniform_prior_mean(
    m: int,
    n: int,
    draws: int = 200_000,
    seed: int = 0,
    tolerance_sigmas: float = 4.0,
) -> ValidationReport:
    """Monte Carlo check of the flat-prior mean of the expected sampling
    entropy; each draw contributes its exact (n-1)/n scaled entropy, no
    inner sampling."""
    _check_args(m, n, draws)
    vals = _expected_entropies(m, n, draws, seed)
    estimate = float(vals.mean())
    se = float(vals.std(ddof=1) / math.sqrt(draws))
    closed = (n - 1) * (m - 1) / (n * (m + 1))
    passed = abs(estimate - closed) <= tolerance_sigmas * se
    return ValidationReport(
        closed_form=closed,
        estimate=estimate,
        std_error=se,
        draws_or_outcomes=draws,
        passed=passed,
        tolerance_sigmas=tolerance_sigmas,
        mode="monte-carlo",
    )


def check_uniform_prior_std(
    m: int,
    n: int,
    draws: int = 200_000,
    seed: int = 0,
    rel_tol: float = 0.05,
) -> ValidationReport:
    """Monte Carlo check of the closed-form flat-prior standard deviation."""
    _check_args(m, n, draws)
    vals = _expected_entropies(m, n, draws, seed)
    estimate = float(vals.std(ddof=1))
    closed = teb_std(m, n)
    # std error of a sample std, normal approximation
    se = estimate / math.sqrt(2.0 * (draws - 1))
    passed = abs(estimate - closed) <= rel_tol * closed
    return ValidationReport(
        closed_form=closed,
        estimate=estimate,
        std_error=se,
        draws_or_outcomes=draws,
        passed=passed,
        tolerance_sigmas=0.0,
        mode="monte-carlo",
        rel_tol=rel_tol,
    )


def _check_args(m: int, n: int, draws: int) -> None:
    if m < 2:
        raise ValueError("need at least two bins")
    if n < 1:
        raise ValueError("sample size must be >= 1")
    if draws < 1000:
        raise ValueError("need at least 1000 draws")
