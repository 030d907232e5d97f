"""Minimize the Beale function with both spectral CG variants and watch how
the curvature constant sigma changes the iteration count.

Writes beale_paths.png (iterate paths on the contour plot) and
beale_convergence.png (gradient norm versus iteration) next to this script.
"""

import numpy as np

from spectralcg import SolverParams, beale, minimize

problem = beale()
x0 = np.array([1.0, 0.8])
sigmas = [0.1, 0.2, 0.4, 0.6, 0.8, 0.9]

runs = {}
print(f"{'sigma':>6} {'mddlscg':>9} {'mscg':>7}")
for sigma in sigmas:
    counts = []
    for rule in ("mddl", "zdk"):
        params = SolverParams(sigma=sigma, epsilon=1e-14, beta_rule=rule)
        res = minimize(problem, x0, params, store_iterates=True)
        runs[(sigma, rule)] = res
        counts.append(res.iterations)
    print(f"{sigma:>6} {counts[0]:>9} {counts[1]:>7}")

res = runs[(0.1, "mddl")]
print(f"\nsigma=0.1 run: {res.iterations} iterations, "
      f"final point {res.final_x}, final max-abs gradient "
      f"{res.final_grad_inf_norm:.2e}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping plots")
    raise SystemExit(0)

xs = np.linspace(-1.0, 4.0, 400)
ys = np.linspace(-1.0, 1.5, 400)
X, Y = np.meshgrid(xs, ys)
Z = np.log10(1e-12 + (1.5 - X + X * Y) ** 2 + (2.25 - X + X * Y ** 2) ** 2
             + (2.625 - X + X * Y ** 3) ** 2)

fig, ax = plt.subplots(figsize=(7, 5))
ax.contour(X, Y, Z, levels=30, cmap="viridis", linewidths=0.6)
for rule, color, label in (("mddl", "tab:red", "mddlscg"),
                           ("zdk", "tab:blue", "mscg")):
    path = np.array(runs[(0.1, rule)].iterates)
    ax.plot(path[:, 0], path[:, 1], "o-", ms=3, lw=1.2, color=color,
            label=label)
ax.plot(3.0, 0.5, "k*", ms=14, label="minimum (3, 0.5)")
ax.set(xlabel="x", ylabel="y", title="iterate paths, sigma = 0.1")
ax.legend()
fig.tight_layout()
fig.savefig("beale_paths.png", dpi=150)

fig, ax = plt.subplots(figsize=(7, 4))
for rule, color, label in (("mddl", "tab:red", "mddlscg"),
                           ("zdk", "tab:blue", "mscg")):
    gnorms = [r.grad_inf_norm for r in runs[(0.1, rule)].trace]
    ax.semilogy(range(1, len(gnorms) + 1), gnorms, "o-", ms=3, color=color,
                label=label)
ax.set(xlabel="iteration", ylabel="max-abs gradient",
       title="convergence, sigma = 0.1")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig("beale_convergence.png", dpi=150)
print("wrote beale_paths.png and beale_convergence.png")
