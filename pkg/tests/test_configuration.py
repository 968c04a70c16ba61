import math
from fractions import Fraction

import numpy as np
import pytest

from conftest import chi_square_uniform, matching_codes, oracle_codes, partitions_even
from scalingwindow.configuration import (
    ConfigurationGraph,
    acceptance_rate,
    double_factorial_odd,
    enumerate_configurations,
    is_simple,
    pair_join_frequency,
    pair_join_probability,
    partial_matchings,
    read_edge_list,
    sample_configuration,
    sample_simple,
    simplicity_probability_formula,
    subset_join_counts,
)
from scalingwindow.degrees import build_sequence, family_mixed13
from scalingwindow.exceptions import Exhausted, OverlappingPairs, TooLarge


def test_trivial_samples(rng):
    g = sample_configuration(build_sequence([1, 1]), rng)
    assert g.edges.tolist() == [[0, 1]]
    loop = sample_configuration(build_sequence([2]), rng)
    assert loop.edges.tolist() == [[0, 0]]
    assert loop.vertex_degrees().tolist() == [2]


@pytest.mark.parametrize("degrees", [[1, 1, 1, 3], [3, 3, 2, 2, 1, 1], [5, 1, 4, 2]])
def test_degree_preserved(degrees, rng):
    seq = build_sequence(degrees)
    for _ in range(50):
        g = sample_configuration(seq, rng)
        assert g.vertex_degrees().tolist() == degrees
        assert len(g.edges) == seq.edge_count
        assert sorted(g.matching.ravel().tolist()) == list(range(seq.total_copies))


def test_copy_label():
    g = ConfigurationGraph.from_matching(build_sequence([1, 3, 2]), [[0, 1], [2, 3], [4, 5]])
    assert [g.copy_label(c) for c in range(6)] == [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1)]


@pytest.mark.parametrize("edges, count", [(1, 1), (2, 3), (3, 15), (4, 105), (6, 10395)])
def test_enumeration_counts(edges, count):
    seq = build_sequence([1] * (2 * edges))
    configs = enumerate_configurations(seq)
    assert len(configs) == count == double_factorial_odd(edges)
    assert len({g.matching_key() for g in configs}) == count


def test_enumeration_too_large():
    with pytest.raises(TooLarge):
        enumerate_configurations(build_sequence([1] * 14))


def test_four_leaves_frequencies(rng):
    seq = build_sequence([1, 1, 1, 1])
    codes, _ = oracle_codes(seq)
    draws = np.stack([sample_configuration(seq, rng).matching for _ in range(10**4)])
    got = matching_codes(draws, 4)
    freq = np.array([(got == c).mean() for c in codes])
    sigma = math.sqrt((1 / 3) * (2 / 3) / 10**4)
    assert np.all(np.abs(freq - 1 / 3) < 3 * sigma)


def test_simplicity_verdicts():
    loop = ConfigurationGraph.from_matching(build_sequence([2]), [[0, 1]])
    v = is_simple(loop)
    assert (v.is_simple, v.loop_count, v.multi_edge_count) == (False, 1, 0)
    double = ConfigurationGraph.from_matching(build_sequence([2, 2]), [[0, 2], [1, 3]])
    v = is_simple(double)
    assert (v.is_simple, v.loop_count, v.multi_edge_count) == (False, 0, 1)
    path = ConfigurationGraph.from_matching(build_sequence([1, 2, 1]), [[0, 1], [2, 3]])
    assert is_simple(path).is_simple


def test_sample_simple_trivial(rng):
    g, attempts = sample_simple(build_sequence([1, 1]), rng)
    assert attempts == 1 and g.edges.tolist() == [[0, 1]]
    with pytest.raises(Exhausted):
        sample_simple(build_sequence([2]), rng, max_attempts=20)


def test_sample_simple_uniform_over_simple_subset(rng):
    seq = build_sequence([2, 2, 2, 1, 1])
    codes, configs = oracle_codes(seq)
    simple = [c for c, g in zip(codes, configs) if is_simple(g).is_simple]
    draws = np.stack([sample_simple(seq, rng)[0].matching for _ in range(6000)])
    got = matching_codes(draws, seq.total_copies)
    assert set(np.unique(got)) <= set(int(c) for c in simple)
    assert chi_square_uniform(got, simple) > 1e-3


def test_simplicity_formula():
    assert simplicity_probability_formula(family_mixed13(8000, 0.0)) == pytest.approx(math.exp(-0.75))
    assert simplicity_probability_formula(build_sequence([1] * 10)) == pytest.approx(1.0)
    assert math.exp(-0.75) == pytest.approx(0.472366, abs=1e-6)


def test_acceptance_rate_small_exact(rng):
    # (2, 2): two loops, or a double edge twice over
    assert acceptance_rate(build_sequence([2, 2]), rng, 200) == 0.0
    # (1, 1, 2): two of the three matchings give the path
    seq = build_sequence([1, 1, 2])
    exact = Fraction(
        sum(is_simple(g).is_simple for g in enumerate_configurations(seq)),
        len(enumerate_configurations(seq)),
    )
    rate = acceptance_rate(seq, rng, 30000)
    assert rate == pytest.approx(float(exact), abs=4 * math.sqrt(float(exact * (1 - exact)) / 30000))


def test_pair_join_examples():
    seq2 = build_sequence([1, 1, 1, 1])
    exact, bound = pair_join_probability(seq2, [(0, 1)])
    assert exact == Fraction(1, 3) == pair_join_frequency(seq2, [(0, 1)])
    assert exact <= bound
    assert pair_join_probability(seq2, []) == (1, 1)
    seq3 = build_sequence([1] * 6)
    exact, bound = pair_join_probability(seq3, [(0, 1), (2, 3)])
    assert exact == Fraction(1, 15) == pair_join_frequency(seq3, [(0, 1), (2, 3)])
    assert exact <= bound
    with pytest.raises(OverlappingPairs):
        pair_join_probability(seq3, [(0, 1), (1, 2)])


def test_pair_join_against_enumeration_small():
    seq = build_sequence([3, 2, 1, 2])
    counts = subset_join_counts(seq)
    total = double_factorial_odd(seq.edge_count)
    for ell in range(seq.edge_count + 1):
        for pairs in partial_matchings(range(seq.total_copies), ell):
            exact, bound = pair_join_probability(seq, pairs)
            assert exact == Fraction(counts.get(pairs, 0), total)
            assert exact <= bound


def test_edge_list_export(tmp_path, rng):
    seq = family_mixed13(40, 0.0)
    g = sample_configuration(seq, rng)
    p = tmp_path / "edges.txt"
    g.write_edge_list(p)
    back = read_edge_list(p)
    assert np.array_equal(back, g.sorted_edges())
    assert np.all(back[:, 0] <= back[:, 1])


def test_partitions_helper():
    assert set(partitions_even(4)) == {(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1), (2,), (1, 1)}


def test_sample_matchings_batch_uniform(rng):
    from scalingwindow.configuration import sample_matchings

    seq = build_sequence([3, 1, 2])
    support, _ = oracle_codes(seq)
    batch = sample_matchings(seq, rng, 30000)
    assert batch.shape == (30000, 3, 2)
    assert np.all(np.sort(batch.reshape(30000, -1), axis=1) == np.arange(6))
    assert chi_square_uniform(matching_codes(batch, 6), support) > 1e-3
