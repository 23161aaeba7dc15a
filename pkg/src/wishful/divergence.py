"""φ-divergences, their convex conjugates, and the divergence cost C_φ(p‖q).

Every function on a :class:`DivergenceSpec` accepts a scalar or an array and
returns the same shape. Values outside a function's domain are ``+inf``;
nothing here returns NaN for a finite input.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InputError

__all__ = [
    "DivergenceSpec",
    "BUILTIN_NAMES",
    "builtin_divergence",
    "resolve_divergence",
    "cost",
    "validate",
    "check_probability_vector",
]

PROB_TOL = 1e-9

ArrayFn = Callable[[np.ndarray], np.ndarray]


def _elementwise(fn: ArrayFn) -> Callable:
    """Lift an array kernel to accept scalars and suppress IEEE warnings."""

    def wrapped(x):
        arr = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = fn(np.atleast_1d(arr))
        if arr.ndim == 0:
            return float(out[0])
        return out.reshape(arr.shape)

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@dataclass(frozen=True)
class DivergenceSpec:
    """A member of the class Φ together with everything the solver needs.

    ``phi`` is evaluated on (0, ∞) only; behaviour at t = 0 enters through
    ``limit_phi_at_zero`` and ``limit_phi_prime_at_zero``, and the cost of
    mass on zero-prior states through ``slope_at_infinity``.
    """

    name: str
    phi: Callable
    phi_prime: Callable
    conj: Callable
    conj_prime: Callable
    conj_domain_upper: float
    limit_phi_at_zero: float
    limit_phi_prime_at_zero: float
    slope_at_infinity: float

    def __repr__(self) -> str:
        return f"DivergenceSpec({self.name!r})"


# --- Kullback-Leibler -------------------------------------------------------


@_elementwise
def _kl_phi(t):
    return np.where(t > 0, t * np.log(np.where(t > 0, t, 1.0)) - t + 1.0, np.inf)


@_elementwise
def _kl_phi_prime(t):
    return np.where(t > 0, np.log(np.where(t > 0, t, 1.0)), -np.inf)


@_elementwise
def _kl_conj(s):
    return np.expm1(s)


@_elementwise
def _kl_conj_prime(s):
    return np.exp(s)


# --- Hellinger --------------------------------------------------------------


@_elementwise
def _hellinger_phi(t):
    return np.where(t > 0, (1.0 - np.sqrt(np.abs(t))) ** 2, np.inf)


@_elementwise
def _hellinger_phi_prime(t):
    return np.where(t > 0, 1.0 - 1.0 / np.sqrt(np.abs(t)), -np.inf)


@_elementwise
def _hellinger_conj(s):
    return np.where(s < 1, s / (1.0 - s), np.inf)


@_elementwise
def _hellinger_conj_prime(s):
    return np.where(s < 1, 1.0 / (1.0 - s) ** 2, np.inf)


# --- modified chi-square ----------------------------------------------------


@_elementwise
def _chi2_phi(t):
    return np.where(t > 0, (t - 1.0) ** 2, np.inf)


@_elementwise
def _chi2_phi_prime(t):
    return np.where(t > 0, 2.0 * (t - 1.0), -np.inf)


@_elementwise
def _chi2_conj(s):
    return np.where(s < -2, -1.0, s + 0.25 * s * s)


@_elementwise
def _chi2_conj_prime(s):
    # left limit at the kink: conj_prime(-2) == 0
    return np.where(s <= -2, 0.0, 1.0 + 0.5 * s)


# --- Burg entropy -----------------------------------------------------------


@_elementwise
def _burg_phi(t):
    return np.where(t > 0, -np.log(np.where(t > 0, t, 1.0)) + t - 1.0, np.inf)


@_elementwise
def _burg_phi_prime(t):
    return np.where(t > 0, 1.0 - 1.0 / t, -np.inf)


@_elementwise
def _burg_conj(s):
    return np.where(s < 1, -np.log1p(-np.minimum(s, 1.0)), np.inf)


@_elementwise
def _burg_conj_prime(s):
    return np.where(s < 1, 1.0 / (1.0 - s), np.inf)


_BUILTINS = {
    "kl": DivergenceSpec(
        name="kl",
        phi=_kl_phi,
        phi_prime=_kl_phi_prime,
        conj=_kl_conj,
        conj_prime=_kl_conj_prime,
        conj_domain_upper=np.inf,
        limit_phi_at_zero=1.0,
        limit_phi_prime_at_zero=-np.inf,
        slope_at_infinity=np.inf,
    ),
    "hellinger": DivergenceSpec(
        name="hellinger",
        phi=_hellinger_phi,
        phi_prime=_hellinger_phi_prime,
        conj=_hellinger_conj,
        conj_prime=_hellinger_conj_prime,
        conj_domain_upper=1.0,
        limit_phi_at_zero=1.0,
        limit_phi_prime_at_zero=-np.inf,
        slope_at_infinity=1.0,
    ),
    "mod_chi2": DivergenceSpec(
        name="mod_chi2",
        phi=_chi2_phi,
        phi_prime=_chi2_phi_prime,
        conj=_chi2_conj,
        conj_prime=_chi2_conj_prime,
        conj_domain_upper=np.inf,
        limit_phi_at_zero=1.0,
        limit_phi_prime_at_zero=-2.0,
        slope_at_infinity=np.inf,
    ),
    "burg": DivergenceSpec(
        name="burg",
        phi=_burg_phi,
        phi_prime=_burg_phi_prime,
        conj=_burg_conj,
        conj_prime=_burg_conj_prime,
        conj_domain_upper=1.0,
        limit_phi_at_zero=np.inf,
        limit_phi_prime_at_zero=-np.inf,
        slope_at_infinity=1.0,
    ),
}

BUILTIN_NAMES = tuple(_BUILTINS)


def builtin_divergence(name: str) -> DivergenceSpec:
    """Return one of the built-in divergences: kl, hellinger, mod_chi2 or burg."""
    try:
        return _BUILTINS[name]
    except KeyError:
        raise InputError(
            f"unknown divergence {name!r}; expected one of {', '.join(BUILTIN_NAMES)}"
        ) from None


def resolve_divergence(divergence: str | DivergenceSpec) -> DivergenceSpec:
    if isinstance(divergence, DivergenceSpec):
        return divergence
    return builtin_divergence(divergence)


def check_probability_vector(x, name: str = "vector", tol: float = PROB_TOL) -> np.ndarray:
    """Return ``x`` as a float array or raise :class:`InputError` naming the failure."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InputError(f"{name} must be a non-empty 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} has non-finite entries")
    if np.any(arr < 0):
        raise InputError(f"{name} has negative entries (min {arr.min():.6g})")
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise InputError(f"{name} must sum to 1, sums to {total:.12g}")
    return arr


def cost(spec: DivergenceSpec | str, p, q) -> float:
    """C_φ(p‖q) = Σ q φ(p/q) with the zero-probability conventions.

    0·φ(0/0) = 0, 0·φ(c/0) = c·b with b the slope at infinity, and a censored
    state (p = 0 < q) costs q·lim_{t→0+} φ(t).
    """
    spec = resolve_divergence(spec)
    p = check_probability_vector(p, "p")
    q = check_probability_vector(q, "q")
    if p.shape != q.shape:
        raise InputError(f"dimension mismatch: p has {p.size} states, q has {q.size}")

    total = 0.0
    for pi, qi in zip(p, q):
        if qi > 0 and pi > 0:
            term = qi * float(spec.phi(pi / qi))
        elif qi > 0:
            term = qi * spec.limit_phi_at_zero
        elif pi > 0:
            term = pi * spec.slope_at_infinity
        else:
            term = 0.0
        total += term
    return total


def validate(spec: DivergenceSpec, tol: float = 1e-7) -> None:
    """Check a (possibly user-supplied) spec against the class-Φ invariants.

    Raises :class:`InputError` listing every failed check. Checks are
    numerical, on fixed sample grids: φ(1) = 0 and φ ≥ 0, convexity of φ,
    the Fenchel inequality and equality, φ*(0) = 0, φ*′(0) = 1, φ*′ ≥ 0 and
    nondecreasing, a central-difference check of φ*′, and b = sup dom φ*.
    """
    problems: list[str] = []

    t = np.concatenate([np.geomspace(1e-3, 1.0, 40), np.geomspace(1.0, 50.0, 40)[1:]])
    phi_t = np.asarray(spec.phi(t), dtype=float)
    if abs(float(spec.phi(1.0))) > tol:
        problems.append(f"phi(1) = {float(spec.phi(1.0)):.3g}, expected 0")
    if np.any(phi_t < -tol):
        problems.append("phi is negative somewhere on (0, inf)")

    t1, t2 = np.meshgrid(t[::4], t[::4])
    for alpha in (0.25, 0.5, 0.75):
        mid = np.asarray(spec.phi(alpha * t1 + (1 - alpha) * t2))
        chord = alpha * np.asarray(spec.phi(t1)) + (1 - alpha) * np.asarray(spec.phi(t2))
        if np.any(mid > chord + tol * (1 + np.abs(chord))):
            problems.append(f"phi fails the convexity check at alpha={alpha}")
            break

    upper = spec.conj_domain_upper
    s_hi = min(5.0, upper - 0.05) if np.isfinite(upper) else 5.0
    s = np.linspace(-6.0, s_hi, 101)
    conj_s = np.asarray(spec.conj(s), dtype=float)
    dconj = np.asarray(spec.conj_prime(s), dtype=float)

    if abs(float(spec.conj(0.0))) > tol:
        problems.append(f"conj(0) = {float(spec.conj(0.0)):.3g}, expected 0")
    if abs(float(spec.conj_prime(0.0)) - 1.0) > tol:
        problems.append(f"conj_prime(0) = {float(spec.conj_prime(0.0)):.3g}, expected 1")
    if np.any(dconj < -tol):
        problems.append("conj_prime takes negative values")
    if np.any(np.diff(dconj) < -tol):
        problems.append("conj_prime is not nondecreasing")

    ss, tt = np.meshgrid(s, t)
    gap = np.asarray(spec.conj(ss)) - (ss * tt - np.asarray(spec.phi(tt)))
    if np.any(gap < -tol * (1 + np.abs(ss * tt))):
        problems.append("Fenchel inequality conj(s) >= s*t - phi(t) violated")

    interior = dconj > 0
    t_hat = dconj[interior]
    equality = conj_s[interior] - (s[interior] * t_hat - np.asarray(spec.phi(t_hat)))
    if np.any(np.abs(equality) > tol * (1 + np.abs(conj_s[interior]))):
        problems.append("Fenchel equality fails at t = conj_prime(s)")

    h = 1e-5
    s_fd = s[(s > -6.0 + h) & (s < s_hi - h)]
    fd = (np.asarray(spec.conj(s_fd + h)) - np.asarray(spec.conj(s_fd - h))) / (2 * h)
    exact = np.asarray(spec.conj_prime(s_fd))
    # the kink of a piecewise conjugate straddles the stencil; skip those points
    smooth = np.abs(np.asarray(spec.conj_prime(s_fd + h)) - np.asarray(spec.conj_prime(s_fd - h))) < 1e-3
    if np.any(np.abs(fd - exact)[smooth] > 1e-6 * (1 + np.abs(exact[smooth]))):
        problems.append("conj_prime disagrees with central differences of conj")

    b, ub = spec.slope_at_infinity, spec.conj_domain_upper
    if not (np.isinf(b) and np.isinf(ub)) and not np.isclose(b, ub):
        problems.append(f"slope_at_infinity {b} != conj_domain_upper {ub}")

    if problems:
        raise InputError(f"divergence {spec.name!r} failed validation: " + "; ".join(problems))
