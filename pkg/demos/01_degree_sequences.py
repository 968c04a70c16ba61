"""Degree sequences, their Q and R, and the admissibility checks.

Run with ``python3 demos/01_degree_sequences.py``.
"""

from scalingwindow import check_condition_d, family_heavy_vertex, family_mixed13

# A mix of leaves and degree-3 vertices with Q tuned to zero.  R is then 1.
seq = family_mixed13(100_000, 0.0)
print("mixed13, n = 1e5:", seq.summary())

# Q is an exact fraction; small n cannot hit the target exactly.
for n in (10, 101, 1000):
    s = family_mixed13(n, 0.0)
    print(f"  n={n:5d}  n1={s.count(1):4d}  n2={s.count(2)}  n3={s.count(3):4d}  Q={s.q}")

# The max-degree clause is what fails at small n.
for n in (1000, 10_000, 100_000):
    rep = check_condition_d(family_mixed13(n, 0.0))
    print(f"n={n:6d}: all pass {rep.all_pass}, Δ allowed {rep.delta_bound:.2f}")

# One vertex of degree n^0.4 pushes R up and breaks the Δ clause on purpose.
heavy = family_heavy_vertex(10**6, 252)
rep = check_condition_d(heavy)
print(f"heavy vertex: Q={float(heavy.q):.4f} R={float(heavy.r):.2f} pass_a={rep.pass_a}")
