"""Wishful-thinking belief distortion under φ-divergence costs.

A decision maker picks an action and, jointly, a subjective belief p that
trades expected utility against the divergence C_φ(p‖q) from a prior q.
Per action this reduces to a convex risk measure computed from a
one-dimensional dual.
"""

from .beliefs import (
    BeliefProfile,
    censorship_cutoff,
    classify_censorship,
    classify_emergence,
    likelihood_ratio,
    recover_beliefs,
)
from .decision import (
    DecisionProblem,
    WTAnalysis,
    analyze,
    eu_argmax,
    saddle_report,
    sweep_prior,
)
from .divergence import BUILTIN_NAMES, DivergenceSpec, builtin_divergence, cost, validate
from .dual import (
    DualSolution,
    dual_objective,
    solve_dual,
    value_closed_form_chi2,
    value_closed_form_kl,
)
from .errors import EnumerationBoundError, InputError, SolverError
from .oracle import GridSpec, primal_grid_max, refine_local

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "BeliefProfile",
    "DecisionProblem",
    "DivergenceSpec",
    "DualSolution",
    "EnumerationBoundError",
    "GridSpec",
    "InputError",
    "SolverError",
    "WTAnalysis",
    "analyze",
    "builtin_divergence",
    "censorship_cutoff",
    "classify_censorship",
    "classify_emergence",
    "cost",
    "dual_objective",
    "eu_argmax",
    "likelihood_ratio",
    "primal_grid_max",
    "recover_beliefs",
    "refine_local",
    "saddle_report",
    "solve_dual",
    "sweep_prior",
    "validate",
    "value_closed_form_chi2",
    "value_closed_form_kl",
]
