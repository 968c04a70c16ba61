"""Largest-component growth inside, below and above the critical window.

Inside the window the median largest component grows like n^{2/3}; below it
grows more slowly and above it faster.  Sizes here are small so the script
finishes in well under a minute.
"""

from scalingwindow import loglog_slope, run_experiment, theorem2b_census
from scalingwindow.experiments import preset_spec

n_values = [5_000, 20_000, 80_000]
results = {}
for regime, coef in (("inside", 0.0), ("below", 1.0), ("above", 1.0)):
    res = run_experiment(preset_spec(regime, n_values, 100, master_seed=1, coefficient=coef))
    results[regime] = res
    slope = loglog_slope(res.medians())[0]
    meds = ", ".join(f"{m:.0f}" for _, m in res.medians())
    print(f"{regime:6s}  medians {meds}  slope {slope:.3f}")

print("window ratios inside:", [round(a["window_ratio"], 3) for a in results["inside"].aggregates])
for row in theorem2b_census(results["below"]):
    print(f"below n={row['n']}: complex fraction {row['fraction']:.3f}, 20/ω^3 = {row['bound']:.2f}")
