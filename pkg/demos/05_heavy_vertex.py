"""Why the maximum degree must be bounded.

A single vertex of degree n^0.4 leaves Q near zero, yet the component that
contains it is much larger than the n^{2/3} R^{-1/3} scale predicts.
"""

from scalingwindow import ExperimentSpec, run_experiment

n = 200_000
heavy = run_experiment(ExperimentSpec("heavy_vertex", {"delta_exponent": 0.4}, [n], 60, 2, start_vertex=0))
base = run_experiment(ExperimentSpec("mixed13", {"q_target": 0.0}, [n], 60, 2))
h, b = heavy.aggregates[0], base.aggregates[0]
prediction = b["median_cmax"] * (h["r"] / b["r"]) ** (-1 / 3)
print(f"Δ = {h['max_degree']}, Q = {h['q']:.4f}, R = {h['r']:.2f}")
print(f"median largest component {h['median_cmax']:.0f}, scaled prediction {prediction:.0f}")
print(f"ratio {h['median_cmax'] / prediction:.2f}")
