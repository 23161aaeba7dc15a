# %% [markdown]
# # Choosing actions and beliefs together

# %%
import math

import numpy as np

from wishful import DecisionProblem, analyze, saddle_report

# %% [markdown]
# ## Three-way tie
# With the modified χ² cost, a risky bet on either state is worth exactly as
# much as the safe action, and each bet comes with dogmatic beliefs.

# %%
problem = DecisionProblem.from_matrix([[4, 0], [3, 3], [0, 4]], [0.5, 0.5], 1.0, "mod_chi2")
res = analyze(problem)
for label, r in zip(problem.action_labels, res.per_action):
    print(label, r.dual.value, r.dual.lambda_star, r.beliefs.beliefs)
print("WT:", res.wt_optimal, "EU:", res.eu_optimal)

# %% [markdown]
# ## Risky asset with an impossible payoff
# The prior puts no weight on the high state, yet under Burg costs the agent
# invests anyway.

# %%
risky = DecisionProblem(("a_R", "a_S"), ("w_H", "w_L"), [[4, 0], [1, 1]], [0, 1], 1.0, "burg")
res = analyze(risky)
print(res.values, 3 - math.log(4), res.wt_optimal, res.eu_optimal)
print(res.per_action[0].beliefs.beliefs)

# %% [markdown]
# Taxing the high payoff at rate t lowers V(a_R) to 3 - 4t - log(4 - 4t).
# Bisection locates the tax at which the agent switches to the safe asset.

# %%
def v_risky(t):
    return analyze(risky.replace(utilities=[[4 * (1 - t), 0], [1, 1]])).values[0]

lo, hi = 0.0, 1.0
for _ in range(60):
    mid = (lo + hi) / 2
    lo, hi = (mid, hi) if v_risky(mid) > 1 else (lo, mid)
print("switch at t =", lo)
for t in (0.1, 0.2, 0.4, 0.6):
    print(t, v_risky(t))

# %% [markdown]
# ## Saddle point
# The inner minimum over λ equals expected utility under p* minus the distortion cost.

# %%
rep = saddle_report(risky, 0)
print(rep.psi_at_lambda, rep.rational_value, rep.emotional_cost, rep.matches_value)

# %% [markdown]
# The transformed utilities reproduce the wishful choice as a plain EU ranking.

# %%
rng = np.random.default_rng(0)
p = DecisionProblem.from_matrix(rng.uniform(-5, 5, (4, 3)), [0.2, 0.3, 0.5], 1.5, "kl")
res = analyze(p)
print(res.transformed_utilities, res.values, res.wt_optimal)
