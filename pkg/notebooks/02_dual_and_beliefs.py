# %% [markdown]
# # Valuation and optimal beliefs for one action
#
# `solve_dual` turns a utility vector into its wishful value V and the
# multiplier λ*. `recover_beliefs` then reads off the distorted beliefs.

# %%
import math

import numpy as np

from wishful import censorship_cutoff, recover_beliefs, solve_dual, value_closed_form_kl

u = np.array([4.0, 0.0])
q = np.array([0.5, 0.5])

# %% [markdown]
# ## KL: exponential tilting
# The value is the entropic certainty equivalent and beliefs tilt toward the good state.

# %%
sol = solve_dual("kl", u, q)
prof = recover_beliefs("kl", u, q, 1.0, sol)
print(sol.value, value_closed_form_kl(u, q))
print(prof.beliefs, math.exp(4) / (math.exp(4) + 1))

# %% [markdown]
# ## Modified χ²: censorship
# Once the good state's prior reaches 1/2 the bad state is ignored entirely.

# %%
for q_h in (0.3, 0.5, 0.6, 0.8):
    qq = np.array([q_h, 1 - q_h])
    sol = solve_dual("mod_chi2", u, qq)
    prof = recover_beliefs("mod_chi2", u, qq, 1.0, sol)
    print(f"q_H={q_h}: lambda*={sol.lambda_star:.6f} beliefs={prof.beliefs} "
          f"cutoff={censorship_cutoff('mod_chi2', u, qq, 1.0, sol)}")

# %% [markdown]
# ## Burg: emergence
# A state with zero prior probability can still receive belief. Here the good
# state starts at zero and ends up with probability 3/4.

# %%
q0 = np.array([0.0, 1.0])
sol = solve_dual("burg", u, q0)
prof = recover_beliefs("burg", u, q0, 1.0, sol)
print(sol.lambda_star, sol.constrained_at_emergence, prof.beliefs, prof.emergent)

# %% [markdown]
# The gradient of V with respect to utilities equals the belief vector.

# %%
q = np.array([0.2, 0.5, 0.3])
u = np.array([1.0, -0.5, 2.0])
sol = solve_dual("hellinger", u, q)
prof = recover_beliefs("hellinger", u, q, 1.0, sol)
h = 1e-6
grad = [(solve_dual("hellinger", u + h * e, q).value - solve_dual("hellinger", u - h * e, q).value) / (2 * h)
        for e in np.eye(3)]
print(np.round(grad, 6), np.round(prof.beliefs, 6))
