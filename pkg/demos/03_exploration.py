"""Exposing the matching one copy at a time and reading off the components."""

import numpy as np

from scalingwindow import build_sequence, family_mixed13, largest_component, start_exploration
from scalingwindow.exploration import run_exploration

rng = np.random.default_rng(3)

# Exact expected step from a hand-sized state.
state = start_exploration(build_sequence([1, 1, 1, 3]), start_vertex=3)
print("Y =", state.y, " Q_t =", state.q_t(), " R_t =", state.r_t())
print("E[eta], E[eta^2] by enumeration:", state.exact_step_expectation())
while not state.halted:
    rec = state.step(rng)
    print(f"  t={rec.t} eta={rec.eta:+d} Y={rec.y_after}")
print("census:", state.census().classes)

# A full run at n = 1e5 with the compiled kernel.
seq = family_mixed13(100_000, 0.0)
run = run_exploration(seq, rng, record_trace=True)
cmax, second = largest_component(run.census)
print(f"{len(run.census)} components, largest {cmax}, second {second}, "
      f"complex {run.census.complex_count}")
q = run.trace.q
print("Q_t at t = 0, 1e4, 5e4:", [round(float(q[t]), 5) for t in (0, 10_000, 50_000)])
