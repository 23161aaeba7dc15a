# %% [markdown]
# # Divergences and their conjugates
#
# Four built-in costs ship with the package. Each carries its generator φ,
# the convex conjugate φ*, and the limits that decide whether a state can be
# censored (belief driven to zero) or can emerge from a zero prior.

# %%
import numpy as np

from wishful import BUILTIN_NAMES, builtin_divergence, classify_censorship, classify_emergence, cost

for name in BUILTIN_NAMES:
    spec = builtin_divergence(name)
    print(f"{name:10s} phi(2)={spec.phi(2.0):.4f}  conj(0.5)={spec.conj(0.5):.4f}  "
          f"censorship={classify_censorship(spec).possible}  emergence={classify_emergence(spec).possible}")

# %% [markdown]
# The conjugate pair satisfies φ*(φ′(t)) = t φ′(t) - φ(t). A quick check on a grid:

# %%
t = np.linspace(0.2, 4, 9)
for name in BUILTIN_NAMES:
    spec = builtin_divergence(name)
    s = spec.phi_prime(t)
    gap = np.abs(spec.conj(s) - (t * s - spec.phi(t))).max()
    print(f"{name:10s} max Fenchel gap {gap:.2e}")

# %% [markdown]
# Costs follow the zero conventions: a censored state costs q·φ(0+), and
# mass on a zero-prior state costs p·b where b is the slope of φ at infinity.

# %%
q = np.array([0.0, 1.0])
p = np.array([0.75, 0.25])
for name in BUILTIN_NAMES:
    print(name, cost(name, p, q))
