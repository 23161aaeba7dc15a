# %% [markdown]
# # Subjective vs prior probability
#
# Sweep the prior of the good state in the two-state problem u = (4, 0) and
# plot the optimal belief for three divergences. The same table comes out of
# `wishful sweep problems/prior_sweep.json`.

# %%
import numpy as np

from wishful import DecisionProblem, sweep_prior

template = DecisionProblem.from_matrix([[4, 0]], [0.5, 0.5])
grid = np.linspace(0, 1, 101)
curves = {
    name: sweep_prior(template.replace(divergence=name), 0, grid)
    for name in ("kl", "mod_chi2", "burg")
}
for name, rows in curves.items():
    print(name, [round(rows[k].p_star, 4) for k in (0, 10, 50, 90, 100)])

# %%
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 4))
    for name, rows in curves.items():
        ax.plot(grid, [r.p_star for r in rows], label=name)
    ax.plot(grid, grid, "k:", lw=0.8)
    ax.set_xlabel("prior q(w_H)")
    ax.set_ylabel("belief p*(w_H)")
    ax.legend()
    fig.savefig("prior_sweep.png", dpi=120, bbox_inches="tight")
