"""Brute-force primal maximization over a lattice on the simplex.

This is a deliberately simple cross-check for the dual solver: enumerate
every point of {k/N} on the simplex, score E_p u - δ C_φ(p‖q) with a
separately written cost routine, keep the best, and optionally polish it by
pairwise line searches.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .divergence import DivergenceSpec, check_probability_vector, resolve_divergence
from .errors import EnumerationBoundError, InputError

__all__ = [
    "GridSpec",
    "OracleResult",
    "RefineResult",
    "MAX_RESOLUTION",
    "MAX_STATES",
    "simplex_lattice",
    "oracle_cost",
    "primal_objective",
    "primal_grid_max",
    "refine_local",
]

MAX_STATES = 5
MAX_RESOLUTION = {1: 2000, 2: 2000, 3: 200, 4: 60, 5: 60}

@dataclass(frozen=True)
class GridSpec:
    resolution: int
    include_boundary: bool = True

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < 2:
            raise InputError(f"grid resolution must be an integer >= 2, got {self.resolution!r}")


class OracleResult(NamedTuple):
    value: float
    argmax_p: np.ndarray
    error_bound: float


class RefineResult(NamedTuple):
    value: float
    p: np.ndarray


@lru_cache(maxsize=32)
def _lattice_counts(n: int, total: int) -> np.ndarray:
    # stars and bars: n - 1 bar positions among total + n - 1 slots
    if n == 1:
        counts = np.array([[total]], dtype=np.int64)
        counts.flags.writeable = False
        return counts
    slots = total + n - 1
    bars = np.array(list(combinations(range(slots), n - 1)), dtype=np.int64).reshape(-1, n - 1)
    edges = np.column_stack(
        [np.full(len(bars), -1, dtype=np.int64), bars, np.full(len(bars), slots, dtype=np.int64)]
    )
    counts = np.diff(edges, axis=1) - 1
    counts.flags.writeable = False
    return counts


def simplex_lattice(n: int, resolution: int, include_boundary: bool = True) -> np.ndarray:
    """All points k/N with nonnegative integer k summing to N, in lexicographic order."""
    N = int(resolution)
    lo = 0 if include_boundary else 1
    if N - lo * n < 0:
        return np.empty((0, n))
    return (_lattice_counts(n, N - lo * n) + lo) / N


def _coordinate_cost(spec: DivergenceSpec, x: np.ndarray, qj: float) -> np.ndarray:
    """q_j φ(x/q_j) for a vector of candidate masses x in one state."""
    x = np.asarray(x, dtype=float)
    if qj > 0:
        term = np.full(x.shape, qj * spec.limit_phi_at_zero)
        pos = x > 0
        if np.any(pos):
            term[pos] = qj * np.asarray(spec.phi(x[pos] / qj), dtype=float)
        return term
    with np.errstate(invalid="ignore"):
        return np.where(x > 0, x * spec.slope_at_infinity, 0.0)


def oracle_cost(spec: DivergenceSpec | str, P: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Row-wise Σ_ω q φ(p/q) for a matrix of candidate beliefs."""
    spec = resolve_divergence(spec)
    P = np.atleast_2d(np.asarray(P, dtype=float))
    q = np.asarray(q, dtype=float)
    out = np.zeros(P.shape[0])
    for j in range(q.size):
        out += _coordinate_cost(spec, P[:, j], q[j])
    return out


def primal_objective(spec, utilities, q, delta, P) -> np.ndarray:
    """Row-wise E_p u - δ C_φ(p‖q); infinite costs map to -inf."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    c = oracle_cost(spec, P, q)
    with np.errstate(invalid="ignore"):
        obj = P @ np.asarray(utilities, dtype=float) - delta * c
    return np.where(np.isfinite(c), obj, -np.inf)


def _check_inputs(spec, utilities, q, delta):
    spec = resolve_divergence(spec)
    q = check_probability_vector(q, "prior")
    u = np.asarray(utilities, dtype=float)
    if u.shape != q.shape:
        raise InputError(f"dimension mismatch: {u.size} utilities vs {q.size} prior entries")
    if not delta > 0:
        raise InputError(f"delta must be positive, got {delta!r}")
    return spec, u, q, float(delta)


def primal_grid_max(
    spec: DivergenceSpec | str, utilities, q, delta: float, grid: GridSpec
) -> OracleResult:
    """Best lattice point of the primal objective and a grid-error bound.

    The bound is L·n/N with L = max|u| + δ·max|φ′| over the likelihood
    ratios of the lattice cell around the winner (coordinates floored at
    1/(2N) so the ratio stays inside dom φ′).
    """
    spec, u, q, delta = _check_inputs(spec, utilities, q, delta)
    n = u.size
    if n > MAX_STATES:
        raise EnumerationBoundError(
            f"oracle enumerates at most {MAX_STATES} states, problem has {n}"
        )
    N = int(grid.resolution)
    if N > MAX_RESOLUTION[n]:
        raise EnumerationBoundError(
            f"grid resolution {N} exceeds the {MAX_RESOLUTION[n]} limit for {n} states"
        )

    P = simplex_lattice(n, N, grid.include_boundary)
    obj = primal_objective(spec, u, q, delta, P)
    best = int(np.argmax(obj))  # first maximum = lexicographically smallest p
    if not np.isfinite(obj[best]):
        raise InputError("every lattice point has infinite divergence cost")
    p = P[best]

    slope = 0.0
    for j in range(n):
        if q[j] > 0:
            pts = np.clip(p[j] + np.array([-1.0, 0.0, 1.0]) / N, 0.5 / N, 1.0)
            d = np.abs(np.asarray(spec.phi_prime(pts / q[j]), dtype=float))
            slope = max(slope, float(d.max()))
        elif p[j] > 0 or np.isfinite(spec.slope_at_infinity):
            slope = max(slope, abs(float(spec.slope_at_infinity)))
    lipschitz = float(np.abs(u).max()) + delta * slope
    return OracleResult(float(obj[best]), p.copy(), lipschitz * n / N)


def _zoom_max(f, a: float, b: float, points: int = 17, tol: float = 1e-14, rounds: int = 24):
    """Maximize a concave function on [a, b] by repeated grid bracketing.

    ``f`` takes a vector of abscissae.  Each round evaluates ``points``
    equispaced values and keeps the two cells around the best one, so the
    bracket shrinks by (points - 1)/2 per round.  Endpoints are evaluated in
    the first round.
    """
    lo, hi = a, b
    best_t, best_val = a, -np.inf
    for _ in range(rounds):
        t = np.linspace(lo, hi, points)
        vals = f(t)
        k = int(np.argmax(vals))
        if vals[k] > best_val or (vals[k] == best_val and t[k] == best_t):
            best_t, best_val = float(t[k]), float(vals[k])
        lo, hi = t[max(k - 1, 0)], t[min(k + 1, points - 1)]
        if hi - lo <= tol:
            break
    return best_val, best_t


def refine_local(
    spec: DivergenceSpec | str, utilities, q, delta: float, p0, iterations: int = 50
) -> RefineResult:
    """Polish a simplex point by moving mass between pairs of states.

    Each pass line-searches p + t(e_i - e_j) for every pair (i, j); only the
    two moved coordinates enter the line objective.  A move is kept only if
    it does not lower the objective, so the objective is nondecreasing
    across passes.
    """
    spec, u, q, delta = _check_inputs(spec, utilities, q, delta)
    p = check_probability_vector(p0, "p0").copy()
    n = p.size

    def score(x):
        return float(primal_objective(spec, u, q, delta, x)[0])

    current = score(p)
    for _ in range(int(iterations)):
        before = current
        for i, j in combinations(range(n), 2):
            pi, pj = p[i], p[j]
            base = sum(
                u[k] * p[k] - delta * float(_coordinate_cost(spec, p[k : k + 1], q[k])[0])
                for k in range(n)
                if k != i and k != j
            )

            def line(t):
                xi = np.maximum(pi + t, 0.0)
                xj = np.maximum(pj - t, 0.0)
                c = _coordinate_cost(spec, xi, q[i]) + _coordinate_cost(spec, xj, q[j])
                with np.errstate(invalid="ignore"):
                    val = base + u[i] * xi + u[j] * xj - delta * c
                return np.where(np.isfinite(c), val, -np.inf)

            val, t = _zoom_max(line, -pi, pj)
            if val >= current:
                trial = p.copy()
                trial[i] = max(pi + t, 0.0)
                trial[j] = max(pj - t, 0.0)
                trial_val = score(trial)
                if trial_val >= current:
                    p, current = trial, trial_val
        if current - before <= 1e-15 * max(1.0, abs(current)):
            break
    p /= p.sum()
    return RefineResult(score(p), p)
