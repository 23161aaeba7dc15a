"""The one-dimensional dual of the belief-distortion problem.

For one action with utility vector ``u`` the optimal subjective value is

    V(u) = max_p { E_p u - δ C_φ(p‖q) } = min_λ  λ + δ E_q φ*((u - λ)/δ)

and the minimizer λ* is the unique root of 1 - E_q φ*′((u - λ)/δ) in
[min u, max u].  Zero-prior states do not enter the expectation; when the
divergence has a finite slope b at infinity they instead impose λ ≥ u - δb,
and if that bound is active the solution is pinned there (emergence).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .divergence import DivergenceSpec, check_probability_vector, resolve_divergence
from .errors import InputError, SolverError

__all__ = [
    "DualSolution",
    "dual_objective",
    "foc_sum",
    "solve_dual",
    "value_closed_form_kl",
    "value_closed_form_chi2",
    "DEFAULT_TOL",
    "MAX_ITER",
]

DEFAULT_TOL = 1e-10
MAX_ITER = 200


@dataclass(frozen=True)
class DualSolution:
    lambda_star: float
    value: float
    bracket: tuple[float, float]
    foc_residual: float
    constrained_at_emergence: bool
    iterations: int


def _prepare(utilities, q, delta):
    u = np.asarray(utilities, dtype=float)
    q = check_probability_vector(q, "prior")
    if u.ndim != 1 or u.shape != q.shape:
        raise InputError(
            f"dimension mismatch: {np.shape(utilities)} utilities vs {q.size} prior entries"
        )
    if not np.all(np.isfinite(u)):
        raise InputError("utilities must be finite")
    if not (np.isfinite(delta) and delta > 0):
        raise InputError(f"delta must be a positive finite number, got {delta!r}")
    return u, q, float(delta)


def dual_objective(spec: DivergenceSpec | str, utilities, q, delta: float, lam: float) -> float:
    """ψ(λ) = λ + δ Σ_{q>0} q φ*((u - λ)/δ); +inf outside dom φ*."""
    spec = resolve_divergence(spec)
    u, q, delta = _prepare(utilities, q, delta)
    support = q > 0
    terms = np.asarray(spec.conj((u[support] - lam) / delta), dtype=float)
    if np.any(np.isposinf(terms)):
        return np.inf
    return float(lam + delta * np.dot(q[support], terms))


def foc_sum(spec: DivergenceSpec, u: np.ndarray, q: np.ndarray, delta: float, lam: float) -> float:
    """E_q φ*′((u - λ)/δ) over the prior's support; equals 1 at an interior optimum."""
    support = q > 0
    w = np.asarray(spec.conj_prime((u[support] - lam) / delta), dtype=float)
    if np.any(np.isposinf(w)):
        return np.inf
    return float(np.dot(q[support], w))


def solve_dual(
    spec: DivergenceSpec | str,
    utilities,
    q,
    delta: float = 1.0,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> DualSolution:
    """Minimize the dual objective for one action.

    The search bracket is [L, max u] with L the largest of min u, the
    emergence bound max_{q=0} u - δb, and the conjugate-domain bound
    max_{q>0} u - δ sup dom φ*.  If the emergence bound is the active one
    and the first-order sum there is at most 1, λ* is pinned at L.
    Otherwise λ* is found by bisection on the nondecreasing derivative
    ψ′(λ) = 1 - E_q φ*′((u - λ)/δ); among a flat set of minimizers the
    smallest is returned.
    """
    spec = resolve_divergence(spec)
    u, q, delta = _prepare(utilities, q, delta)
    if not tol > 0:
        raise InputError(f"tol must be positive, got {tol!r}")

    support = q > 0
    u_lo, u_hi = float(u.min()), float(u.max())

    emergence_bound = -np.inf
    if np.any(~support) and np.isfinite(spec.slope_at_infinity):
        emergence_bound = float(u[~support].max() - delta * spec.slope_at_infinity)
    domain_bound = -np.inf
    if np.isfinite(spec.conj_domain_upper):
        domain_bound = float(u[support].max() - delta * spec.conj_domain_upper)

    lower = max(u_lo, emergence_bound, domain_bound)
    if lower > u_hi:
        raise SolverError(
            f"empty feasible bracket [{lower:.12g}, {u_hi:.12g}] for divergence {spec.name!r}"
        )
    bracket = (lower, u_hi)

    if np.isfinite(emergence_bound) and emergence_bound == lower:
        s_lower = foc_sum(spec, u, q, delta, lower)
        if s_lower <= 1.0:
            value = dual_objective(spec, u, q, delta, lower)
            if not np.isfinite(value):
                raise SolverError(f"pinned dual value is not finite at lambda={lower:.12g}")
            return DualSolution(
                lambda_star=lower,
                value=value,
                bracket=bracket,
                foc_residual=abs(1.0 - s_lower),
                constrained_at_emergence=True,
                iterations=0,
            )

    def slope(lam: float) -> float:
        return 1.0 - foc_sum(spec, u, q, delta, lam)

    lo, hi = lower, u_hi
    iterations = 0
    if slope(lo) >= 0:
        hi = lo
    elif slope(hi) < 0:
        # rounding at max u; the true root lies there
        lo = hi
    else:
        while hi - lo > tol:
            if iterations >= max_iter:
                raise SolverError(
                    f"bisection did not converge in {max_iter} iterations "
                    f"(bracket width {hi - lo:.3g}) for divergence {spec.name!r}"
                )
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
            iterations += 1
            if slope(mid) >= 0:
                hi = mid
            else:
                lo = mid

    lam = hi
    g_lo, g_hi = slope(lo), slope(hi)
    if lo < hi and np.isfinite(g_lo) and g_hi > g_lo:
        # one secant step inside the final bracket; kept only if it shrinks |ψ′|
        cand = lo - g_lo * (hi - lo) / (g_hi - g_lo)
        if lo <= cand <= hi and abs(slope(cand)) < abs(g_hi):
            lam = cand
    value = dual_objective(spec, u, q, delta, lam)
    if not np.isfinite(value):
        raise SolverError(f"dual value is not finite at lambda={lam:.12g}")
    return DualSolution(
        lambda_star=lam,
        value=value,
        bracket=bracket,
        foc_residual=abs(slope(lam)),
        constrained_at_emergence=False,
        iterations=iterations,
    )


def value_closed_form_kl(utilities, q, delta: float = 1.0) -> float:
    """Entropic value δ log E_q exp(u/δ); zero-prior states are dropped."""
    u, q, delta = _prepare(utilities, q, delta)
    support = q > 0
    x = u[support] / delta
    m = x.max()
    return float(delta * (m + np.log(np.dot(q[support], np.exp(x - m)))))


def value_closed_form_chi2(utilities, q, delta: float = 1.0) -> float:
    """Mean-variance value E_q u + Var_q(u)/(4δ) for the modified χ² divergence.

    Only valid while no state is censored, i.e. δ ≥ (E_q u - min u)/2.
    """
    u, q, delta = _prepare(utilities, q, delta)
    support = q > 0
    mean = float(np.dot(q, u))
    u_min = float(u[support].min())
    if delta < (mean - u_min) / 2 - 1e-12:
        raise InputError(
            f"mean-variance form needs delta >= (E_q u - min u)/2 = {(mean - u_min) / 2:.12g}; "
            "some state is censored, use solve_dual"
        )
    var = float(np.dot(q, (u - mean) ** 2))
    return mean + var / (4 * delta)
