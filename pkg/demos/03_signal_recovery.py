"""Recover a sparse signal from underdetermined Gaussian measurements by
minimizing the Huber-smoothed l1-regularized least-squares objective.

Writes recovery.png (true versus recovered signal) and recovery_error.png
(mean squared error and relative error per iteration).
"""

from spectralcg import (SolverParams, generate_instance, recover,
                        write_recovery_csv)

m, n, k = 128, 512, 16
inst = generate_instance(m, n, k, seed=7)
print(f"instance: {m} measurements, length-{n} signal, {k} nonzeros")
print(f"penalty weight mu = {inst.mu:.4f}, huber threshold = {inst.lam}")

results = {}
for rule, label in (("mddl", "mddlscg"), ("zdk", "mscg")):
    res = recover(inst, SolverParams(beta_rule=rule))
    results[label] = res
    print(f"  {label:>8}: {res.iterations:>4} iterations, "
          f"final MSE {res.metadata['mse']:.3e}, "
          f"relative error {res.metadata['rel_err']:.3e}")

best = results["mddlscg"]
write_recovery_csv(inst, best.final_x, "recovery.csv")
print("wrote recovery.csv (index, true, recovered)")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not installed; skipping plots")
    raise SystemExit(0)

fig, axes = plt.subplots(2, 1, figsize=(9, 5), sharex=True)
axes[0].stem(inst.x_true, markerfmt="go", basefmt=" ")
axes[0].set(title="true signal", ylabel="amplitude")
axes[1].stem(best.final_x, markerfmt="r.", basefmt=" ")
axes[1].set(title="recovered signal", xlabel="index", ylabel="amplitude")
fig.tight_layout()
fig.savefig("recovery.png", dpi=150)

fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for label, color in (("mddlscg", "tab:red"), ("mscg", "tab:blue")):
    res = results[label]
    axes[0].semilogy(res.metadata["mse_series"], color=color, label=label)
    axes[1].semilogy(res.metadata["rel_err_series"], color=color, label=label)
axes[0].axhline(1e-5, ls="--", c="gray", lw=0.8)
axes[0].set(xlabel="iteration", ylabel="MSE", title="stopping criterion")
axes[1].set(xlabel="iteration", ylabel="relative error", title="recovery error")
for ax in axes:
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig("recovery_error.png", dpi=150)
print("wrote recovery.png and recovery_error.png")
