"""Joint action/belief choice over a finite decision problem."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .beliefs import BeliefProfile, recover_beliefs
from .divergence import DivergenceSpec, cost, resolve_divergence
from .dual import DEFAULT_TOL, DualSolution, dual_objective, solve_dual
from .errors import InputError, SolverError

__all__ = [
    "DecisionProblem",
    "ActionResult",
    "WTAnalysis",
    "SaddleReport",
    "SweepRow",
    "TIE_TOL",
    "analyze",
    "eu_argmax",
    "saddle_report",
    "sweep_prior",
    "argmax_set",
]

TIE_TOL = 1e-9


def argmax_set(values, tol: float = TIE_TOL) -> tuple[int, ...]:
    values = np.asarray(values, dtype=float)
    return tuple(int(i) for i in np.flatnonzero(values >= values.max() - tol))


@dataclass(frozen=True)
class DecisionProblem:
    """Actions × states utility matrix, prior over states, and distortion cost.

    ``delta`` is the marginal cost of belief distortion and applies to every
    action.
    """

    action_labels: tuple[str, ...]
    state_labels: tuple[str, ...]
    utilities: np.ndarray
    prior: np.ndarray
    delta: float = 1.0
    divergence: str | DivergenceSpec = "kl"

    def __post_init__(self):
        u = np.array(self.utilities, dtype=float)
        q = np.array(self.prior, dtype=float)
        actions = tuple(str(a) for a in self.action_labels)
        states = tuple(str(s) for s in self.state_labels)
        if u.ndim != 2:
            raise InputError(f"utilities must be a matrix, got shape {u.shape}")
        if u.shape != (len(actions), len(states)):
            raise InputError(
                f"utilities shape {u.shape} does not match "
                f"{len(actions)} actions x {len(states)} states"
            )
        if not np.all(np.isfinite(u)):
            raise InputError("utilities must all be finite")
        if q.shape != (len(states),):
            raise InputError(f"prior has {q.size} entries for {len(states)} states")
        if not np.all(np.isfinite(q)) or np.any(q < 0):
            raise InputError("prior entries must be finite and nonnegative")
        if abs(q.sum() - 1.0) > 1e-9:
            raise InputError(f"prior must sum to 1 within 1e-9, sums to {q.sum():.12g}")
        delta = float(self.delta)
        if not (np.isfinite(delta) and delta > 0):
            raise InputError(f"delta must be positive, got {self.delta!r}")
        u.flags.writeable = False
        q.flags.writeable = False
        object.__setattr__(self, "utilities", u)
        object.__setattr__(self, "prior", q)
        object.__setattr__(self, "action_labels", actions)
        object.__setattr__(self, "state_labels", states)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "divergence", resolve_divergence(self.divergence))

    @classmethod
    def from_matrix(cls, utilities, prior, delta=1.0, divergence="kl"):
        """Build a problem with default labels a1.. and w1..."""
        u = np.asarray(utilities, dtype=float)
        if u.ndim != 2:
            raise InputError(f"utilities must be a matrix, got shape {u.shape}")
        return cls(
            action_labels=tuple(f"a{i + 1}" for i in range(u.shape[0])),
            state_labels=tuple(f"w{j + 1}" for j in range(u.shape[1])),
            utilities=u,
            prior=prior,
            delta=delta,
            divergence=divergence,
        )

    def replace(self, **changes) -> "DecisionProblem":
        fields = dict(
            action_labels=self.action_labels,
            state_labels=self.state_labels,
            utilities=self.utilities,
            prior=self.prior,
            delta=self.delta,
            divergence=self.divergence,
        )
        fields.update(changes)
        return DecisionProblem(**fields)

    @property
    def spec(self) -> DivergenceSpec:
        return self.divergence  # resolved in __post_init__

    @property
    def n_actions(self) -> int:
        return len(self.action_labels)

    @property
    def n_states(self) -> int:
        return len(self.state_labels)


class ActionResult(NamedTuple):
    dual: DualSolution
    beliefs: BeliefProfile


@dataclass(frozen=True)
class WTAnalysis:
    problem: DecisionProblem
    per_action: tuple[ActionResult, ...]
    wt_optimal: tuple[int, ...]
    eu_optimal: tuple[int, ...]
    transformed_utilities: np.ndarray
    expected_utilities: np.ndarray
    value_gap: float
    values: np.ndarray = field(repr=False)


def eu_argmax(problem: DecisionProblem) -> tuple[int, ...]:
    """Actions maximizing prior expected utility, ties within 1e-9 included."""
    return argmax_set(problem.utilities @ problem.prior)


def _solve_action(problem: DecisionProblem, a: int, tol: float) -> ActionResult:
    u = problem.utilities[a]
    try:
        dual = solve_dual(problem.spec, u, problem.prior, problem.delta, tol=tol)
        profile = recover_beliefs(problem.spec, u, problem.prior, problem.delta, dual)
    except SolverError as exc:
        raise SolverError(f"action {problem.action_labels[a]!r}: {exc}") from exc
    return ActionResult(dual, profile)


def analyze(problem: DecisionProblem, tol: float = DEFAULT_TOL) -> WTAnalysis:
    """Solve every action's belief problem and compare WT and EU choices.

    Each action gets its own beliefs.  The transformed utility of an action,
    λ* + δ E_q φ*((u - λ*)/δ), does not depend on the state, and its argmax
    reproduces the WT-optimal set.
    """
    per_action = tuple(_solve_action(problem, a, tol) for a in range(problem.n_actions))
    values = np.array([r.dual.value for r in per_action])
    transformed = np.array(
        [
            dual_objective(
                problem.spec, problem.utilities[a], problem.prior, problem.delta, r.dual.lambda_star
            )
            for a, r in enumerate(per_action)
        ]
    )
    eu = problem.utilities @ problem.prior
    return WTAnalysis(
        problem=problem,
        per_action=per_action,
        wt_optimal=argmax_set(values),
        eu_optimal=argmax_set(eu),
        transformed_utilities=transformed,
        expected_utilities=eu,
        value_gap=float(values.max() - eu.max()),
        values=values,
    )


class SaddleReport(NamedTuple):
    """Inner minimum of Ψ(a, ·) next to the primal value it must equal.

    ``rational_value`` is the expected utility under the chosen beliefs and
    ``emotional_cost`` the distortion penalty δ C_φ(p*‖q); their difference
    is the primal value.
    """

    lambda_star: float
    psi_at_lambda: float
    primal_value: float
    rational_value: float
    emotional_cost: float
    matches_value: bool


def saddle_report(problem: DecisionProblem, action: int, tol: float = DEFAULT_TOL) -> SaddleReport:
    if not 0 <= action < problem.n_actions:
        raise InputError(f"action index {action} out of range for {problem.n_actions} actions")
    result = _solve_action(problem, action, tol)
    u = problem.utilities[action]
    psi = dual_objective(problem.spec, u, problem.prior, problem.delta, result.dual.lambda_star)
    p = result.beliefs.beliefs
    p = p / p.sum()
    rational = float(p @ u)
    emotional = problem.delta * cost(problem.spec, p, problem.prior)
    primal = rational - emotional
    matches = bool(np.isfinite(primal) and abs(primal - psi) <= TIE_TOL * max(1.0, abs(psi)))
    return SaddleReport(result.dual.lambda_star, psi, primal, rational, emotional, matches)


class SweepRow(NamedTuple):
    q: float
    lambda_star: float
    p_star: float
    censored: bool
    emergent: bool


def sweep_prior(
    problem: DecisionProblem,
    state: int,
    grid: Sequence[float],
    action: int = 0,
    tol: float = DEFAULT_TOL,
) -> list[SweepRow]:
    """Optimal belief in one state of a two-state problem as its prior varies.

    The other state receives prior 1 - q.  ``censored``/``emergent`` refer to
    the swept state.
    """
    if problem.n_states != 2:
        raise InputError(f"prior sweep needs a two-state problem, got {problem.n_states} states")
    if state not in (0, 1):
        raise InputError(f"state index {state} out of range for 2 states")
    u = problem.utilities[action]
    rows = []
    for value in grid:
        value = float(value)
        if not 0.0 <= value <= 1.0:
            raise InputError(f"grid value {value!r} outside [0, 1]")
        q = np.empty(2)
        q[state] = value
        q[1 - state] = 1.0 - value
        try:
            dual = solve_dual(problem.spec, u, q, problem.delta, tol=tol)
            profile = recover_beliefs(problem.spec, u, q, problem.delta, dual)
        except SolverError as exc:
            raise SolverError(f"sweep at q={value:.12g}: {exc}") from exc
        rows.append(
            SweepRow(
                q=value,
                lambda_star=dual.lambda_star,
                p_star=float(profile.beliefs[state]),
                censored=state in profile.censored,
                emergent=state in profile.emergent,
            )
        )
    return rows
