"""Sampling configurations, checking them against exact enumeration, and
conditioning on simplicity.
"""

from collections import Counter

import numpy as np

from scalingwindow import ConfigurationGraph, build_sequence, enumerate_configurations, family_mixed13, sample_simple
from scalingwindow.configuration import acceptance_rate, sample_matchings, simplicity_probability_formula

rng = np.random.default_rng(7)

# Degrees (2, 1, 1): three matchings, one of which puts a loop on vertex 0.
seq = build_sequence([2, 1, 1])
configs = enumerate_configurations(seq)
for g in configs:
    print("matching", g.matching.tolist(), "-> edges", g.edges.tolist())

draws = sample_matchings(seq, rng, 30_000)
keys = Counter(ConfigurationGraph.from_matching(seq, m).matching_key() for m in draws)
print("empirical frequencies:", sorted(v / 30_000 for v in keys.values()))

# About e^{-3/4} of configurations are simple when Q = 0.
big = family_mixed13(10_000, 0.0)
print(f"formula {simplicity_probability_formula(big):.4f}, "
      f"observed {acceptance_rate(big, rng, 4000):.4f}")
g, attempts = sample_simple(big, rng)
print(f"simple graph after {attempts} attempt(s), {len(g.edges)} edges")
