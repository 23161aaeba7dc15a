"""Random instance generators shared by the property and acceptance tests."""

import numpy as np

DIVERGENCES = ("kl", "hellinger", "mod_chi2", "burg")


def random_prior(rng, n, min_mass=0.02, zero_states=0):
    """Dirichlet prior with every entry >= min_mass, optionally zeroing some states."""
    q = rng.dirichlet(np.ones(n - zero_states))
    q = min_mass + (1 - min_mass * q.size) * q
    q = np.concatenate([q, np.zeros(zero_states)])
    rng.shuffle(q)
    return q / q.sum()


def random_instance(rng, n_min=2, n_max=5, lo=-5.0, hi=5.0, delta=(0.5, 3.0), zero_states=0):
    n = int(rng.integers(n_min, n_max + 1))
    u = rng.uniform(lo, hi, n)
    q = random_prior(rng, n, zero_states=min(zero_states, n - 1))
    d = float(rng.uniform(*delta))
    return u, q, d


def chi2_uncensored_delta(u, q, margin=1.05):
    """Smallest delta (times a margin) keeping every modified-chi2 weight positive."""
    return margin * max((q @ u - u.min()) / 2, 1e-3)
