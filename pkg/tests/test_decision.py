import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wishful.decision import (
    DecisionProblem,
    analyze,
    argmax_set,
    eu_argmax,
    saddle_report,
    sweep_prior,
)
from wishful.divergence import BUILTIN_NAMES, builtin_divergence
from wishful.errors import InputError, SolverError

from helpers import random_prior

DISSONANCE = DecisionProblem.from_matrix([[4, 0], [3, 3], [0, 4]], [0.5, 0.5], 1.0, "mod_chi2")
RISKY = DecisionProblem(("a_R", "a_S"), ("w_H", "w_L"), [[4, 0], [1, 1]], [0, 1], 1.0, "burg")


def random_problem(rng, name):
    n_a = int(rng.integers(2, 5))
    n_s = int(rng.integers(2, 5))
    return DecisionProblem.from_matrix(
        rng.uniform(-5, 5, (n_a, n_s)), random_prior(rng, n_s), rng.uniform(0.5, 3), name
    )


class TestDecisionProblem:
    def test_validation(self):
        with pytest.raises(InputError, match="sum to 1"):
            DecisionProblem.from_matrix([[1, 0]], [0.5, 0.4])
        with pytest.raises(InputError, match="delta"):
            DecisionProblem.from_matrix([[1, 0]], [0.5, 0.5], delta=-1)
        with pytest.raises(InputError, match="shape"):
            DecisionProblem(("a",), ("x", "y"), [[1, 0, 2]], [0.5, 0.5])
        with pytest.raises(InputError, match="finite"):
            DecisionProblem.from_matrix([[np.nan, 0]], [0.5, 0.5])
        with pytest.raises(InputError, match="unknown divergence"):
            DecisionProblem.from_matrix([[1, 0]], [0.5, 0.5], divergence="tsallis")

    def test_immutable(self):
        with pytest.raises(ValueError):
            DISSONANCE.utilities[0, 0] = 9.0

    def test_replace(self):
        p = DISSONANCE.replace(delta=2.0)
        assert p.delta == 2.0 and DISSONANCE.delta == 1.0
        assert p.spec.name == "mod_chi2"


class TestAnalyze:
    def test_dissonance(self):
        res = analyze(DISSONANCE)
        np.testing.assert_allclose(res.values, [3, 3, 3], atol=1e-9)
        assert res.wt_optimal == (0, 1, 2)
        assert res.eu_optimal == (1,)
        lams = [r.dual.lambda_star for r in res.per_action]
        np.testing.assert_allclose(lams, [2, 3, 2], atol=1e-9)
        for r, expected in zip(res.per_action, ([1, 0], [0.5, 0.5], [0, 1])):
            np.testing.assert_allclose(r.beliefs.beliefs, expected, atol=1e-9)
        assert res.value_gap == pytest.approx(0.0, abs=1e-9)

    def test_risky_asset(self):
        res = analyze(RISKY)
        assert res.values[0] == pytest.approx(3 - math.log(4), abs=1e-9)
        assert res.values[1] == pytest.approx(1.0, abs=1e-12)
        assert res.wt_optimal == (0,) and res.eu_optimal == (1,)
        np.testing.assert_allclose(res.per_action[0].beliefs.beliefs, [0.75, 0.25], atol=1e-12)
        assert res.per_action[0].beliefs.emergent == {0}
        assert res.value_gap == pytest.approx(0.6137056388801094, abs=1e-9)

    def test_single_constant_action(self):
        res = analyze(DecisionProblem.from_matrix([[2.5, 2.5, 2.5]], [0.2, 0.3, 0.5], 1.3, "hellinger"))
        assert res.values[0] == pytest.approx(2.5)
        np.testing.assert_allclose(res.per_action[0].beliefs.beliefs, [0.2, 0.3, 0.5], atol=1e-12)

    def test_solver_error_names_action(self):
        broken = dataclasses.replace(
            builtin_divergence("kl"), conj=lambda s: np.full(np.shape(s), np.inf)
        )
        p = DecisionProblem.from_matrix([[1, 0], [2, 3]], [0.5, 0.5], divergence=broken)
        with pytest.raises(SolverError, match="'a1'.*not finite"):
            analyze(p)

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_eu_equivalence_and_gap(self, seed, name):
        res = analyze(random_problem(np.random.default_rng(seed), name))
        assert argmax_set(res.transformed_utilities) == res.wt_optimal
        assert res.value_gap > 0

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_scale_coherence(self, seed, name):
        prob = random_problem(np.random.default_rng(seed), name)
        a = analyze(prob)
        b = analyze(prob.replace(utilities=prob.utilities / prob.delta, delta=1.0))
        assert a.wt_optimal == b.wt_optimal
        np.testing.assert_allclose(a.values, b.values * prob.delta, rtol=1e-9, atol=1e-9)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES), c=st.floats(-5, 5))
    def test_row_shift(self, seed, name, c):
        prob = random_problem(np.random.default_rng(seed), name)
        u = prob.utilities.copy()
        u[0] += c
        a, b = analyze(prob), analyze(prob.replace(utilities=u))
        assert b.values[0] == pytest.approx(a.values[0] + c, abs=1e-9)
        np.testing.assert_allclose(
            b.per_action[0].beliefs.beliefs, a.per_action[0].beliefs.beliefs, atol=1e-9
        )


class TestEuArgmax:
    def test_examples(self):
        assert eu_argmax(DISSONANCE) == (1,)
        assert eu_argmax(RISKY) == (1,)
        assert eu_argmax(DecisionProblem.from_matrix([[1, 2]] * 3, [0.5, 0.5])) == (0, 1, 2)


class TestSaddle:
    def test_dissonance(self):
        r1 = saddle_report(DISSONANCE, 0)
        assert r1.lambda_star == pytest.approx(2, abs=1e-9)
        assert r1.psi_at_lambda == pytest.approx(3, abs=1e-9)
        assert r1.matches_value
        r2 = saddle_report(DISSONANCE, 1)
        assert r2.lambda_star == pytest.approx(3, abs=1e-9)
        assert r2.psi_at_lambda == pytest.approx(3, abs=1e-12)
        assert r2.emotional_cost == pytest.approx(0, abs=1e-12)

    def test_decomposition(self):
        r = saddle_report(RISKY, 0)
        # rational 3, emotional cost δ·(0.25·φ(1/4) + 0.75·b)
        assert r.rational_value == pytest.approx(3.0)
        assert r.emotional_cost == pytest.approx(math.log(4), abs=1e-9)
        assert r.matches_value

    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_matches_everywhere(self, seed, name):
        prob = random_problem(np.random.default_rng(seed), name)
        for a in range(prob.n_actions):
            assert saddle_report(prob, a).matches_value

    def test_bad_index(self):
        with pytest.raises(InputError):
            saddle_report(DISSONANCE, 3)


class TestSweep:
    TEMPLATE = DecisionProblem.from_matrix([[4, 0]], [0.5, 0.5])
    GRID = np.linspace(0, 1, 101)

    def rows(self, name):
        return sweep_prior(self.TEMPLATE.replace(divergence=name), 0, self.GRID)

    def test_burg(self):
        rows = self.rows("burg")
        assert rows[0].p_star == pytest.approx(0.75, abs=1e-12)
        assert rows[0].emergent and rows[0].lambda_star == 3.0

    def test_chi2(self):
        for r in self.rows("mod_chi2"):
            if r.q >= 0.5:
                assert r.p_star == pytest.approx(1.0, abs=1e-12)
            else:
                assert r.p_star < 1

    def test_kl(self):
        rows = self.rows("kl")
        assert rows[0].p_star == 0.0 and not rows[0].emergent
        assert rows[-1].p_star == 1.0
        assert rows[-1].lambda_star == pytest.approx(4.0)

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_monotone(self, name):
        p = [r.p_star for r in self.rows(name)]
        assert all(b >= a - 1e-12 for a, b in zip(p, p[1:]))

    def test_second_state(self):
        rows = sweep_prior(self.TEMPLATE.replace(divergence="mod_chi2"), 1, [0.4])
        assert rows[0].censored and rows[0].p_star == 0.0

    def test_errors(self):
        with pytest.raises(InputError, match="outside"):
            sweep_prior(self.TEMPLATE, 0, [1.2])
        with pytest.raises(InputError, match="two-state"):
            sweep_prior(DecisionProblem.from_matrix([[1, 2, 3]], [0.2, 0.3, 0.5]), 0, [0.5])
