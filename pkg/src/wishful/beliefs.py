"""Optimal distorted beliefs recovered from a dual solution.

The optimal belief in a prior-support state is p*(ω) = w(ω) q(ω) with weight
w(ω) = φ*′((u(ω) - λ*)/δ).  Zero-prior states get nothing unless the dual
was pinned by the emergence bound, in which case the top-utility zero-prior
state absorbs whatever mass the weighted prior leaves over.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .divergence import DivergenceSpec, resolve_divergence
from .dual import DualSolution, _prepare
from .errors import InputError, SolverError

__all__ = [
    "BeliefProfile",
    "recover_beliefs",
    "likelihood_ratio",
    "CensorshipCheck",
    "EmergenceCheck",
    "classify_censorship",
    "classify_emergence",
    "censorship_cutoff",
    "DegenerateEmergenceWarning",
]

RESIDUAL_CLAMP = 1e-9
OVERPRECISION_EPS = 1e-12


class DegenerateEmergenceWarning(UserWarning):
    """Several zero-prior states tie for the top utility; emergent mass was split."""


@dataclass(frozen=True)
class BeliefProfile:
    """Per-action optimal beliefs.

    ``weights`` holds NaN for zero-prior states, where the distortion factor
    is not defined.
    """

    weights: np.ndarray
    beliefs: np.ndarray
    censored: frozenset
    emergent: frozenset
    overprecise: frozenset
    residual_mass: float


def recover_beliefs(
    spec: DivergenceSpec | str, utilities, q, delta: float, dual: DualSolution
) -> BeliefProfile:
    spec = resolve_divergence(spec)
    u, q, delta = _prepare(utilities, q, delta)
    support = q > 0

    weights = np.full(u.shape, np.nan)
    weights[support] = np.asarray(
        spec.conj_prime((u[support] - dual.lambda_star) / delta), dtype=float
    )
    if not np.all(np.isfinite(weights[support])):
        raise SolverError("infinite belief weight; dual solution lies on the conjugate-domain boundary")
    beliefs = np.zeros_like(u)
    beliefs[support] = weights[support] * q[support]

    residual = 0.0
    if dual.constrained_at_emergence:
        residual = 1.0 - float(beliefs.sum())
        if residual < -RESIDUAL_CLAMP:
            raise SolverError(f"negative emergent mass {residual:.3g}; dual solution is inconsistent")
        residual = max(residual, 0.0)
        zero_prior = np.flatnonzero(~support)
        top = zero_prior[u[zero_prior] == u[zero_prior].max()]
        if top.size > 1:
            warnings.warn(
                f"{top.size} zero-prior states tie at the top utility; splitting emergent mass equally",
                DegenerateEmergenceWarning,
                stacklevel=2,
            )
        beliefs[top] = residual / top.size

    censored = frozenset(int(i) for i in np.flatnonzero(support & (beliefs <= 0)))
    emergent = frozenset(int(i) for i in np.flatnonzero(~support & (beliefs > 0)))
    overprecise = frozenset(
        int(i) for i in np.flatnonzero(support & (weights > 1 + OVERPRECISION_EPS))
    )
    return BeliefProfile(
        weights=weights,
        beliefs=beliefs,
        censored=censored,
        emergent=emergent,
        overprecise=overprecise,
        residual_mass=residual,
    )


def likelihood_ratio(profile: BeliefProfile, i: int, j: int) -> Optional[float]:
    """p*(i)/p*(j); ``inf`` if only the denominator is zero, ``None`` if both are."""
    n = profile.beliefs.size
    for idx in (i, j):
        if not -n <= idx < n:
            raise IndexError(f"state index {idx} out of range for {n} states")
    num, den = float(profile.beliefs[i]), float(profile.beliefs[j])
    if den == 0.0:
        return None if num == 0.0 else np.inf
    return num / den


class CensorshipCheck(NamedTuple):
    possible: bool
    reason: str


class EmergenceCheck(NamedTuple):
    possible: bool
    b: float


def classify_censorship(spec: DivergenceSpec | str) -> CensorshipCheck:
    """Censorship needs φ(0+) < ∞ and φ′(0+) > -∞."""
    spec = resolve_divergence(spec)
    failed = []
    if not np.isfinite(spec.limit_phi_at_zero):
        failed.append(f"limit_phi_at_zero = {spec.limit_phi_at_zero}")
    if not np.isfinite(spec.limit_phi_prime_at_zero):
        failed.append(f"limit_phi_prime_at_zero = {spec.limit_phi_prime_at_zero}")
    if failed:
        return CensorshipCheck(False, "; ".join(failed))
    return CensorshipCheck(True, "phi and phi' both have finite limits at 0+")


def classify_emergence(spec: DivergenceSpec | str) -> EmergenceCheck:
    spec = resolve_divergence(spec)
    b = float(spec.slope_at_infinity)
    return EmergenceCheck(bool(np.isfinite(b)), b)


def censorship_cutoff(
    spec: DivergenceSpec | str, utilities, q, delta: float, dual: DualSolution
) -> Optional[float]:
    """Utility level at or below which prior-support states are censored.

    φ*′(s) = 0 exactly for s ≤ φ′(0+), so the cutoff is λ* + δ φ′(0+).
    Returns ``None`` when nothing is censored.
    """
    spec = resolve_divergence(spec)
    profile = recover_beliefs(spec, utilities, q, delta, dual)
    if not profile.censored:
        return None
    s0 = spec.limit_phi_prime_at_zero
    if not np.isfinite(s0):
        raise InputError(f"divergence {spec.name!r} censors states but has phi'(0+) = {s0}")
    return float(dual.lambda_star + delta * s0)
