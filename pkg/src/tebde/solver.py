"""Convex programs over the probability simplex and their barrier solver.

One engine covers every model in the package: minimize a smooth convex
objective subject to linear partial-sum equalities (the full-simplex sum is
always implied), per-coordinate box inequalities, nonnegativity, and at
most one concave entropy lower bound.

The algorithm is a logarithmic-barrier interior-point method.  Equalities
are eliminated through an orthonormal null-space parameterization, so every
iterate satisfies them to rounding; inequalities (including the entropy
floor) become barrier terms; each barrier weight is centered with a damped
Newton inner loop and the weight shrinks geometrically until the duality
gap proxy (weight times number of inequality terms) falls below the
tolerance.  A strictly feasible start is found, when needed, by an
auxiliary max-min-slack program solved with the same machinery; its optimum
being nonpositive is the infeasibility certificate.

Every solve is single-threaded, allocation-local, and deterministic for
identical inputs.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np
import scipy.linalg

from .core import CountSample, Distribution

__all__ = [
    "L22Distance",
    "JsdToTarget",
    "NegLogLikelihood",
    "NegShannonEntropy",
    "NegTsallisEntropy",
    "LinearEquality",
    "BoxConstraint",
    "EntropyFloor",
    "ConvexProgram",
    "SolveStatus",
    "SolveReport",
    "solve",
    "max_feasible_entropy",
    "max_feasible_entropy_report",
]

_FEAS_MARGIN = 1e-9  # phase-1 optimum below this counts as infeasible


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    ITERATION_LIMIT = "iteration_limit"


class InfeasibleProgramError(RuntimeError):
    """No point satisfies the program's constraints within tolerance."""


# ---------------------------------------------------------------------------
# objectives: value / gradient / diagonal Hessian on the open simplex


@dataclass(frozen=True)
class L22Distance:
    target: Distribution

    def value(self, p: np.ndarray) -> float:
        d = p - self.target.probs
        return float(np.dot(d, d))

    def grad(self, p: np.ndarray) -> np.ndarray:
        return 2.0 * (p - self.target.probs)

    def hess_diag(self, p: np.ndarray) -> np.ndarray:
        return np.full(p.shape[0], 2.0)


@dataclass(frozen=True)
class JsdToTarget:
    target: Distribution

    def value(self, p: np.ndarray) -> float:
        q = self.target.probs
        mid = 0.5 * (p + q)
        val = 0.5 * float(np.dot(p, np.log(p / mid)))
        mask = q > 0.0
        val += 0.5 * float(np.dot(q[mask], np.log(q[mask] / mid[mask])))
        return val

    def grad(self, p: np.ndarray) -> np.ndarray:
        mid = 0.5 * (p + self.target.probs)
        return 0.5 * np.log(p / mid)

    def hess_diag(self, p: np.ndarray) -> np.ndarray:
        mid = 0.5 * (p + self.target.probs)
        return 0.5 / p - 0.25 / mid


@dataclass(frozen=True)
class NegLogLikelihood:
    counts: CountSample

    def value(self, p: np.ndarray) -> float:
        x = self.counts.counts
        mask = x > 0
        return float(-np.dot(x[mask], np.log(p[mask])))

    def grad(self, p: np.ndarray) -> np.ndarray:
        x = self.counts.counts
        g = np.zeros(p.shape[0])
        mask = x > 0
        g[mask] = -x[mask] / p[mask]
        return g

    def hess_diag(self, p: np.ndarray) -> np.ndarray:
        x = self.counts.counts
        h = np.zeros(p.shape[0])
        mask = x > 0
        h[mask] = x[mask] / (p[mask] * p[mask])
        return h


@dataclass(frozen=True)
class NegShannonEntropy:
    def value(self, p: np.ndarray) -> float:
        return float(np.dot(p, np.log(p)))

    def grad(self, p: np.ndarray) -> np.ndarray:
        return np.log(p) + 1.0

    def hess_diag(self, p: np.ndarray) -> np.ndarray:
        return 1.0 / p


@dataclass(frozen=True)
class NegTsallisEntropy:
    def value(self, p: np.ndarray) -> float:
        return float(np.dot(p, p)) - 1.0

    def grad(self, p: np.ndarray) -> np.ndarray:
        return 2.0 * p

    def hess_diag(self, p: np.ndarray) -> np.ndarray:
        return np.full(p.shape[0], 2.0)


Objective = Union[
    L22Distance, JsdToTarget, NegLogLikelihood, NegShannonEntropy, NegTsallisEntropy
]


# ---------------------------------------------------------------------------
# constraints


@dataclass(frozen=True)
class LinearEquality:
    """sum of p over ``indices`` equals ``value``."""

    indices: tuple[int, ...]
    value: float


@dataclass(frozen=True)
class BoxConstraint:
    """|p[index] - center| <= radius."""

    index: int
    center: float
    radius: float


@dataclass(frozen=True)
class EntropyFloor:
    """Tsallis or Shannon entropy of the solution must reach ``level``."""

    kind: str  # "tsallis" | "shannon"
    level: float

    def __post_init__(self) -> None:
        if self.kind not in ("tsallis", "shannon"):
            raise ValueError(f"unknown entropy kind: {self.kind!r}")


@dataclass(frozen=True)
class ConvexProgram:
    dimension: int
    objective: Objective
    equalities: tuple[LinearEquality, ...] = ()
    boxes: tuple[BoxConstraint, ...] = ()
    entropy_floor: EntropyFloor | None = None

    def __post_init__(self) -> None:
        m = self.dimension
        if m < 2:
            raise ValueError("need at least two coordinates")
        for eq in self.equalities:
            if not eq.indices or any(i < 0 or i >= m for i in eq.indices):
                raise ValueError(f"equality indices out of range: {eq.indices}")
            if len(set(eq.indices)) != len(eq.indices):
                raise ValueError("equality indices must be distinct")
        for box in self.boxes:
            if box.index < 0 or box.index >= m:
                raise ValueError(f"box index out of range: {box.index}")
            if box.radius <= 0.0:
                raise ValueError("box radius must be positive")


@dataclass(frozen=True)
class SolveReport:
    solution: Distribution
    objective_value: float
    max_equality_residual: float
    max_inequality_violation: float
    entropy_floor_slack: float | None
    iterations: int
    status: SolveStatus
    stationarity_residual: float

    def to_json_dict(self) -> dict:
        return {
            "solution": self.solution.probs.tolist(),
            "objective_value": self.objective_value,
            "max_equality_residual": self.max_equality_residual,
            "max_inequality_violation": self.max_inequality_violation,
            "entropy_floor_slack": self.entropy_floor_slack,
            "iterations": self.iterations,
            "status": self.status.value,
            "stationarity_residual": self.stationarity_residual,
        }


# ---------------------------------------------------------------------------
# entropy-floor slack helpers


def _plogp_extended(p: np.ndarray) -> float:
    """sum p*log(p) with a convex quadratic extension below eps.

    Only the feasibility phase evaluates the Shannon floor at points that
    may have nonpositive coordinates; the extension keeps the slack concave
    and finite there without affecting values on the interior.
    """
    eps = 1e-12
    out = 0.0
    small = p < eps
    if np.any(small):
        ps = p[small]
        out += float(
            np.sum(eps * math.log(eps) + (math.log(eps) + 1.0) * (ps - eps)
                   + (ps - eps) ** 2 / (2.0 * eps))
        )
    pl = p[~small]
    out += float(np.dot(pl, np.log(pl)))
    return out


def _floor_slack(floor: EntropyFloor, p: np.ndarray, extended: bool = False) -> float:
    if floor.kind == "tsallis":
        return (1.0 - float(np.dot(p, p))) - floor.level
    if extended:
        return -_plogp_extended(p) - floor.level
    mask = p > 0.0
    return -float(np.dot(p[mask], np.log(p[mask]))) - floor.level


def _floor_grad(floor: EntropyFloor, p: np.ndarray) -> np.ndarray:
    if floor.kind == "tsallis":
        return -2.0 * p
    eps = 1e-12
    safe = np.maximum(p, eps)
    return -(np.log(safe) + 1.0)


def _floor_neg_curv_diag(floor: EntropyFloor, p: np.ndarray) -> np.ndarray:
    """Diagonal of -hessian(slack); positive semidefinite by concavity."""
    if floor.kind == "tsallis":
        return np.full(p.shape[0], 2.0)
    return 1.0 / np.maximum(p, 1e-12)


# ---------------------------------------------------------------------------
# solver


def _build_equalities(program: ConvexProgram) -> tuple[np.ndarray, np.ndarray]:
    m = program.dimension
    rows = [np.ones(m)]
    vals = [1.0]
    for eq in program.equalities:
        row = np.zeros(m)
        row[list(eq.indices)] = 1.0
        rows.append(row)
        vals.append(eq.value)
    return np.array(rows), np.array(vals)


def _bounds(program: ConvexProgram) -> tuple[np.ndarray, np.ndarray]:
    m = program.dimension
    lo = np.zeros(m)
    hi = np.full(m, np.inf)
    for box in program.boxes:
        lo[box.index] = max(lo[box.index], box.center - box.radius)
        hi[box.index] = min(hi[box.index], box.center + box.radius)
    return lo, hi


def _slack_rows(
    N: np.ndarray, lo: np.ndarray, hi: np.ndarray, finite_hi: np.ndarray
) -> np.ndarray:
    """Derivative rows (w.r.t. the reduced variable z) of the bound slacks."""
    return np.vstack([N, -N[finite_hi]])


def _bound_slacks(
    p: np.ndarray, lo: np.ndarray, hi: np.ndarray, finite_hi: np.ndarray
) -> np.ndarray:
    return np.concatenate([p - lo, (hi[finite_hi] - p[finite_hi])])


def _phase1(
    p0: np.ndarray,
    N: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    finite_hi: np.ndarray,
    floor: EntropyFloor | None,
    max_outer: int,
    max_inner: int,
) -> tuple[np.ndarray, float, int]:
    """Maximize the minimum slack over the equality-restricted space.

    Returns (point, achieved min slack, Newton iterations).  Early-exits as
    soon as the slack comfortably clears zero.
    """
    d = N.shape[1]
    rows = _slack_rows(N, lo, hi, finite_hi)

    def slacks(p: np.ndarray) -> np.ndarray:
        s = _bound_slacks(p, lo, hi, finite_hi)
        if floor is not None:
            s = np.append(s, _floor_slack(floor, p, extended=True))
        return s

    z = np.zeros(d)
    p = p0.copy()
    w = float(slacks(p).min()) - 1.0
    n_slack = rows.shape[0] + (1 if floor is not None else 0)
    mu = 1.0
    total_inner = 0
    for _ in range(max_outer):
        for _ in range(max_inner):
            s = slacks(p) - w
            grad_rows = rows
            if floor is not None:
                fr = _floor_grad(floor, p) @ N
                grad_rows = np.vstack([rows, fr])
            inv_s = 1.0 / s
            # gradient of -w - mu*sum(log s_j(p) - w) in (z, w)
            g = np.concatenate([-mu * grad_rows.T @ inv_s, [-1.0 + mu * inv_s.sum()]])
            V = np.hstack([grad_rows, -np.ones((n_slack, 1))])
            H = mu * (V * (inv_s**2)[:, None]).T @ V
            if floor is not None:
                curv = _floor_neg_curv_diag(floor, p)
                H[:d, :d] += mu * inv_s[-1] * (N.T * curv) @ N
            dy = _newton_step(H, g)
            lam2 = float(-g @ dy)
            if lam2 * 0.5 <= 1e-12:
                break
            zs, ws, ps, ok = _line_search_p1(
                z, w, p, p0, N, dy, slacks, mu, g
            )
            total_inner += 1
            if not ok:
                break
            z, w, p = zs, ws, ps
        if w >= 1e-6:
            break
        if mu * n_slack <= 1e-12:
            break
        mu *= 0.2
    return p, w, total_inner


def _p1_merit(w: float, s: np.ndarray, mu: float) -> float:
    if np.any(s <= 0.0):
        return np.inf
    return -w - mu * float(np.log(s).sum())


def _line_search_p1(z, w, p, p0, N, dy, slacks, mu, g):
    f0 = _p1_merit(w, slacks(p) - w, mu)
    slope = float(g @ dy)
    alpha = 1.0
    for _ in range(60):
        zn = z + alpha * dy[:-1]
        wn = w + alpha * dy[-1]
        pn = p0 + N @ zn
        fn = _p1_merit(wn, slacks(pn) - wn, mu)
        if np.isfinite(fn) and fn <= f0 + 1e-4 * alpha * slope:
            return zn, wn, pn, True
        alpha *= 0.5
    return z, w, p, False


def _newton_step(H: np.ndarray, g: np.ndarray) -> np.ndarray:
    ridge = 0.0
    for _ in range(6):
        try:
            c, low = scipy.linalg.cho_factor(
                H + ridge * np.eye(H.shape[0]), check_finite=False
            )
            return -scipy.linalg.cho_solve((c, low), g, check_finite=False)
        except scipy.linalg.LinAlgError:
            ridge = max(ridge * 100.0, 1e-12 * (1.0 + float(np.trace(H))))
    return -np.linalg.lstsq(H, g, rcond=None)[0]


def _phase2(
    p: np.ndarray,
    N: np.ndarray,
    program: ConvexProgram,
    lo: np.ndarray,
    hi: np.ndarray,
    finite_hi: np.ndarray,
    tol: float,
    max_outer: int,
    max_inner: int,
) -> tuple[np.ndarray, int, bool, float, float]:
    """Barrier loop from a strictly feasible point.

    Returns (point, iterations, converged, final mu, reduced gradient norm).
    """
    obj = program.objective
    floor = program.entropy_floor
    d = N.shape[1]
    rows = _slack_rows(N, lo, hi, finite_hi)
    n_slack = rows.shape[0] + (1 if floor is not None else 0)
    # shrink further when a floor is present: its barrier slack at the
    # central path is mu over the floor's multiplier, and binding floors
    # must close to well under the reporting tolerance
    mu_target = tol / n_slack if floor is None else min(tol, 1e-10) / n_slack
    z = np.zeros(d)
    mu = 1.0
    total_inner = 0
    converged = False
    grad_norm = np.inf

    def barrier_value(pt: np.ndarray) -> float:
        s = _bound_slacks(pt, lo, hi, finite_hi)
        if np.any(s <= 0.0):
            return np.inf
        val = obj.value(pt) - mu * float(np.log(s).sum())
        if floor is not None:
            fs = _floor_slack(floor, pt)
            if fs <= 0.0:
                return np.inf
            val -= mu * math.log(fs)
        return val

    base = p.copy()
    for outer in range(max_outer):
        converged = False
        for _ in range(max_inner):
            s_lo = p - lo
            s_hi = hi[finite_hi] - p[finite_hi]
            g = obj.grad(p) - mu / s_lo
            g[finite_hi] += mu / s_hi
            hd = obj.hess_diag(p) + mu / s_lo**2
            hd[finite_hi] += mu / s_hi**2
            rank1 = None
            if floor is not None:
                fs = _floor_slack(floor, p)
                fg = _floor_grad(floor, p)
                g += -mu * fg / fs
                hd += mu * _floor_neg_curv_diag(floor, p) / fs
                rank1 = math.sqrt(mu) * (fg @ N) / fs
            gr = g @ N
            Hr = (N.T * hd) @ N
            if rank1 is not None:
                Hr += np.outer(rank1, rank1)
            dz = _newton_step(Hr, gr)
            lam2 = float(-gr @ dz)
            grad_norm = float(np.abs(gr).max())
            if lam2 * 0.5 <= 1e-12:
                converged = True
                break
            # backtracking line search on the barrier merit
            f0 = barrier_value(p)
            slope = float(gr @ dz)
            alpha = 1.0
            moved = False
            for _ in range(60):
                zn = z + alpha * dz
                pn = base + N @ zn
                fn = barrier_value(pn)
                if np.isfinite(fn) and fn <= f0 + 1e-4 * alpha * slope:
                    z, p = zn, pn
                    moved = True
                    break
                alpha *= 0.5
            total_inner += 1
            if not moved:
                converged = lam2 * 0.5 <= 1e-6 * (1.0 + abs(f0))
                break
        if mu <= mu_target:
            return p, total_inner, converged, mu, grad_norm
        mu = max(mu * 0.2, mu_target)
    return p, total_inner, False, mu, grad_norm


def _report(
    program: ConvexProgram,
    p: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    iterations: int,
    status: SolveStatus,
    stationarity: float,
) -> SolveReport:
    eq_res = float(np.abs(A @ p - b).max())
    viol = max(float(np.maximum(lo - p, 0.0).max()), 0.0)
    finite = np.isfinite(hi)
    if np.any(finite):
        viol = max(viol, float(np.maximum(p[finite] - hi[finite], 0.0).max()))
    floor_slack = None
    if program.entropy_floor is not None:
        floor_slack = _floor_slack(program.entropy_floor, np.maximum(p, 0.0))
        viol = max(viol, max(0.0, -floor_slack))
    clipped = np.maximum(p, 0.0)
    solution = Distribution(clipped / clipped.sum())
    return SolveReport(
        solution=solution,
        objective_value=program.objective.value(np.maximum(p, 1e-300)),
        max_equality_residual=eq_res,
        max_inequality_violation=viol,
        entropy_floor_slack=floor_slack,
        iterations=iterations,
        status=status,
        stationarity_residual=stationarity,
    )


def solve(
    program: ConvexProgram,
    tol: float = 1e-8,
    max_outer: int = 200,
    max_inner: int = 50,
    initial_point: np.ndarray | None = None,
) -> SolveReport:
    """Solve the program; see the module docstring for the algorithm.

    ``initial_point`` may supply a known strictly feasible point (it must
    satisfy the equalities); this skips the feasibility phase, which
    matters when the feasible set is a sliver, e.g. an entropy floor capped
    just below its maximum.
    """
    A, b = _build_equalities(program)
    m = program.dimension
    lo, hi = _bounds(program)
    finite_hi = np.isfinite(hi)
    if np.any(lo > hi):
        return _report(program, np.full(m, 1.0 / m), A, b, lo, hi, 0,
                       SolveStatus.INFEASIBLE, np.inf)

    uniform = np.full(m, 1.0 / m)
    shift, *_ = np.linalg.lstsq(A, b - A @ uniform, rcond=None)
    p0 = uniform + shift
    if float(np.abs(A @ p0 - b).max()) > 1e-9:
        # inconsistent equalities
        return _report(program, p0, A, b, lo, hi, 0, SolveStatus.INFEASIBLE, np.inf)

    N = scipy.linalg.null_space(A)
    if N.shape[1] == 0:
        ok = _strictly_feasible(program, p0, lo, hi, finite_hi, strict=False)
        status = SolveStatus.OPTIMAL if ok else SolveStatus.INFEASIBLE
        return _report(program, p0, A, b, lo, hi, 0, status, 0.0)

    iterations = 0
    start = None
    if initial_point is not None:
        cand = np.asarray(initial_point, dtype=np.float64)
        if (
            cand.shape == (m,)
            and float(np.abs(A @ cand - b).max()) <= 1e-9
            and _strictly_feasible(program, cand, lo, hi, finite_hi, strict=True)
        ):
            start = cand
    if start is None and _strictly_feasible(program, p0, lo, hi, finite_hi, strict=True):
        start = p0
    if start is None:
        start, w_star, it1 = _phase1(
            p0, N, lo, hi, finite_hi, program.entropy_floor, max_outer, max_inner
        )
        iterations += it1
        if w_star <= _FEAS_MARGIN:
            return _report(program, start, A, b, lo, hi, iterations,
                           SolveStatus.INFEASIBLE, np.inf)

    p, it2, converged, _mu, grad_norm = _phase2(
        start, N, program, lo, hi, finite_hi, tol, max_outer, max_inner
    )
    iterations += it2
    status = SolveStatus.OPTIMAL if converged else SolveStatus.ITERATION_LIMIT
    return _report(program, p, A, b, lo, hi, iterations, status, grad_norm)


def _strictly_feasible(
    program: ConvexProgram,
    p: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    finite_hi: np.ndarray,
    strict: bool,
) -> bool:
    margin = 1e-12 if strict else -1e-9
    if float((p - lo).min()) <= margin:
        return False
    if np.any(finite_hi) and float((hi[finite_hi] - p[finite_hi]).min()) <= margin:
        return False
    if program.entropy_floor is not None:
        if _floor_slack(program.entropy_floor, np.maximum(p, 0.0)) <= margin:
            return False
    return True


def max_feasible_entropy_report(
    program: ConvexProgram, kind: str = "tsallis", tol: float = 1e-8
) -> SolveReport:
    """Maximize the given entropy under the program's equality and box
    constraints (any entropy floor is removed)."""
    objective = NegTsallisEntropy() if kind == "tsallis" else NegShannonEntropy()
    if kind not in ("tsallis", "shannon"):
        raise ValueError(f"unknown entropy kind: {kind!r}")
    stripped = replace(program, objective=objective, entropy_floor=None)
    return solve(stripped, tol=tol)


def max_feasible_entropy(
    program: ConvexProgram, kind: str = "tsallis", tol: float = 1e-8
) -> float:
    """The maximum attainable entropy; raises if the constraints are
    infeasible."""
    report = max_feasible_entropy_report(program, kind=kind, tol=tol)
    if report.status == SolveStatus.INFEASIBLE:
        raise InfeasibleProgramError("equality/box constraints are infeasible")
    return -report.objective_value
