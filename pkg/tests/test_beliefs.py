import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wishful.beliefs import (
    DegenerateEmergenceWarning,
    censorship_cutoff,
    classify_censorship,
    classify_emergence,
    likelihood_ratio,
    recover_beliefs,
)
from wishful.divergence import BUILTIN_NAMES, cost
from wishful.dual import DualSolution, solve_dual
from wishful.errors import SolverError

from helpers import chi2_uncensored_delta, random_instance, random_prior


def solve(name, u, q, delta=1.0):
    sol = solve_dual(name, u, q, delta)
    return sol, recover_beliefs(name, u, q, delta, sol)


class TestRecoverExamples:
    def test_chi2_censorship(self):
        _, prof = solve("mod_chi2", [4, 0], [0.6, 0.4])
        np.testing.assert_allclose(prof.beliefs, [1.0, 0.0], atol=1e-12)
        assert prof.censored == {1}
        assert prof.emergent == frozenset()
        assert prof.overprecise == {0}

    def test_burg_emergence(self):
        _, prof = solve("burg", [4, 0], [0.0, 1.0])
        np.testing.assert_allclose(prof.beliefs, [0.75, 0.25], atol=1e-12)
        assert prof.emergent == {0}
        assert prof.residual_mass == pytest.approx(0.75, abs=1e-12)
        assert np.isnan(prof.weights[0])
        assert prof.weights[1] == pytest.approx(0.25)

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_constant_utilities_keep_prior(self, name):
        _, prof = solve(name, [2.0, 2.0], [0.5, 0.5])
        np.testing.assert_allclose(prof.beliefs, [0.5, 0.5], atol=1e-12)
        assert not (prof.censored or prof.emergent or prof.overprecise)
        assert prof.residual_mass == 0.0

    def test_kl_tilt(self):
        _, prof = solve("kl", [4, 0], [0.5, 0.5])
        e4 = math.exp(4)
        assert prof.beliefs[0] == pytest.approx(e4 / (e4 + 1), abs=1e-9)
        assert prof.beliefs[0] == pytest.approx(0.98201, abs=1e-5)

    def test_zero_prior_without_emergence_gets_nothing(self):
        _, prof = solve("kl", [4, 0, 1], [0.0, 0.5, 0.5])
        assert prof.beliefs[0] == 0.0
        assert np.isnan(prof.weights[0])
        assert prof.emergent == frozenset()

    def test_tied_emergent_states_split(self):
        sol = solve_dual("burg", [4, 4, 0], [0.0, 0.0, 1.0], 1.0)
        with pytest.warns(DegenerateEmergenceWarning):
            prof = recover_beliefs("burg", [4, 4, 0], [0.0, 0.0, 1.0], 1.0, sol)
        np.testing.assert_allclose(prof.beliefs, [0.375, 0.375, 0.25], atol=1e-12)
        assert prof.emergent == {0, 1}

    def test_inconsistent_dual_rejected(self):
        bogus = DualSolution(2.1, 1.0, (2.0, 4.0), 0.0, True, 0)
        with pytest.raises(SolverError, match="negative emergent mass"):
            recover_beliefs("burg", [4, 0, 3], [0.0, 0.5, 0.5], 1.0, bogus)


class TestLikelihoodRatio:
    def test_kl_ratio(self):
        _, prof = solve("kl", [4, 0], [0.5, 0.5])
        assert likelihood_ratio(prof, 0, 1) == pytest.approx(math.exp(4), rel=1e-8)

    def test_identical_state(self):
        _, prof = solve("kl", [4, 0], [0.5, 0.5])
        assert likelihood_ratio(prof, 1, 1) == 1.0

    def test_censored_denominator(self):
        _, prof = solve("mod_chi2", [4, 0], [0.6, 0.4])
        assert likelihood_ratio(prof, 0, 1) == np.inf

    def test_both_zero(self):
        _, prof = solve("mod_chi2", [4, 0, -1], [0.6, 0.2, 0.2])
        assert likelihood_ratio(prof, 1, 2) is None

    def test_out_of_range(self):
        _, prof = solve("kl", [4, 0], [0.5, 0.5])
        with pytest.raises(IndexError):
            likelihood_ratio(prof, 0, 2)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_desirable_state_favoured(self, seed, name):
        rng = np.random.default_rng(seed)
        u, q, d = random_instance(rng, n_min=2, n_max=4)
        q[1] = q[0]
        q = q / q.sum()
        u[0] = u[1] + rng.uniform(0.05, 3)
        if name == "mod_chi2":
            d = chi2_uncensored_delta(u, q)
        _, prof = solve(name, u, q, d)
        assert likelihood_ratio(prof, 0, 1) > 1


class TestClassification:
    def test_censorship(self):
        assert classify_censorship("mod_chi2").possible
        kl = classify_censorship("kl")
        assert not kl.possible and "limit_phi_prime_at_zero" in kl.reason
        burg = classify_censorship("burg")
        assert not burg.possible and "limit_phi_at_zero" in burg.reason
        assert not classify_censorship("hellinger").possible

    def test_emergence(self):
        assert tuple(classify_emergence("burg")) == (True, 1.0)
        assert tuple(classify_emergence("hellinger")) == (True, 1.0)
        kl = classify_emergence("kl")
        assert not kl.possible and kl.b == np.inf
        assert not classify_emergence("mod_chi2").possible


class TestCensorshipCutoff:
    def test_chi2_cutoff(self):
        u, q = [4, 0], [0.6, 0.4]
        sol = solve_dual("mod_chi2", u, q, 1.0)
        assert sol.lambda_star == pytest.approx(8 / 3, abs=1e-9)
        assert censorship_cutoff("mod_chi2", u, q, 1.0, sol) == pytest.approx(2 / 3, abs=1e-9)

    def test_interior_branch(self):
        u, q = [4, 0], [0.4, 0.6]
        sol = solve_dual("mod_chi2", u, q, 1.0)
        assert sol.lambda_star == pytest.approx(1.6, abs=1e-9)
        assert censorship_cutoff("mod_chi2", u, q, 1.0, sol) is None

    def test_constant(self):
        sol = solve_dual("mod_chi2", [1, 1], [0.5, 0.5], 1.0)
        assert censorship_cutoff("mod_chi2", [1, 1], [0.5, 0.5], 1.0, sol) is None

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_cutoff_separates_states(self, seed):
        rng = np.random.default_rng(seed)
        u, q, _ = random_instance(rng)
        d = rng.uniform(0.1, 1.0)
        sol, prof = solve("mod_chi2", u, q, d)
        cut = censorship_cutoff("mod_chi2", u, q, d, sol)
        if cut is None:
            return
        for j in range(u.size):
            assert (j in prof.censored) == (u[j] <= cut + 1e-9)


def interior_instance(rng, name):
    # keep every state uncensored so the value is differentiable
    while True:
        u, q, d = random_instance(rng)
        if name == "mod_chi2":
            d = max(d, 1.2 * (q @ u - u.min()) / 2 + 0.1)
        return u, q, d


class TestInvariants:
    @settings(max_examples=60, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_gradient_identity(self, seed, name):
        rng = np.random.default_rng(seed)
        u, q, d = interior_instance(rng, name)
        _, prof = solve(name, u, q, d)
        h = 1e-5
        for j in range(u.size):
            up, dn = u.copy(), u.copy()
            up[j] += h
            dn[j] -= h
            grad = (solve_dual(name, up, q, d).value - solve_dual(name, dn, q, d).value) / (2 * h)
            assert grad == pytest.approx(prof.beliefs[j], abs=1e-4)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_profile_invariants(self, seed, name):
        rng = np.random.default_rng(seed)
        u, q, d = random_instance(rng, zero_states=int(rng.integers(0, 2)))
        sol, prof = solve(name, u, q, d)
        assert prof.beliefs.sum() == pytest.approx(1.0, abs=1e-9)
        assert np.all(prof.beliefs >= 0)
        support = q > 0
        np.testing.assert_allclose(prof.beliefs[support], prof.weights[support] * q[support], rtol=1e-12)
        assert len(prof.emergent) <= 1
        for j in prof.emergent:
            assert all(u[j] > u[k] for k in range(u.size) if k != j)
        if prof.censored:
            kept = [k for k in range(u.size) if support[k] and k not in prof.censored]
            assert max(u[list(prof.censored)]) < min(u[kept])
        c = cost(name, prof.beliefs, q)
        if np.isfinite(c):
            assert prof.beliefs @ u - d * c == pytest.approx(sol.value, abs=1e-7)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1), name=st.sampled_from(BUILTIN_NAMES))
    def test_joint_ranking(self, seed, name):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 5))
        q = random_prior(rng, n)
        u = rng.uniform(-5, 5, n)
        i, j = np.argsort(q)[-1], np.argsort(q)[0]
        if q[i] == q[j]:
            return
        u[i] = u[j] + rng.uniform(0.05, 2)
        d = rng.uniform(0.5, 3)
        if name == "mod_chi2":
            d = max(d, (q @ u - u.min()) / 2 + 0.1)
        _, prof = solve(name, u, q, d)
        assert prof.beliefs[i] > prof.beliefs[j]

    @pytest.mark.parametrize("name", BUILTIN_NAMES)
    def test_raising_utility_raises_belief(self, name):
        rng = np.random.default_rng(7)
        for _ in range(30):
            u, q, d = random_instance(rng)
            j = int(rng.integers(u.size))
            base = solve(name, u, q, d)[1].beliefs[j]
            u2 = u.copy()
            u2[j] += rng.uniform(0.01, 2)
            assert solve(name, u2, q, d)[1].beliefs[j] >= base - 1e-12

    def test_no_warning_in_generic_case(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            solve("burg", [4, 3, 0], [0.0, 0.0, 1.0])
