import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scalingwindow.degrees import (
    build_sequence,
    check_condition_d,
    check_observations,
    family_heavy_vertex,
    family_mixed13,
    family_three_point,
    read_degree_file,
    write_degree_file,
)
from scalingwindow.exceptions import Infeasible, OddSum, PreconditionError, ZeroDegree


@pytest.mark.parametrize(
    "degrees, n, edges, q, r",
    [
        ((1, 1, 1, 3), 4, 3, Fraction(0), Fraction(1)),
        ((2, 2, 2, 2), 4, 4, Fraction(0), Fraction(0)),
        ((1, 1), 2, 1, Fraction(-1), Fraction(1)),
    ],
)
def test_build_sequence_hand_values(degrees, n, edges, q, r):
    seq = build_sequence(list(degrees))
    assert (seq.n, seq.edge_count, seq.q, seq.r) == (n, edges, q, r)
    assert seq.max_degree == max(degrees)


def test_build_sequence_errors():
    with pytest.raises(ZeroDegree):
        build_sequence([1, 1, 0])
    with pytest.raises(OddSum):
        build_sequence([1, 2])
    with pytest.raises(PreconditionError):
        build_sequence([])


def test_degree_counts():
    seq = build_sequence([1, 3, 1, 1, 2, 2])
    assert seq.degree_counts == {1: 3, 2: 2, 3: 1}
    assert seq.count(7) == 0


def test_sequence_is_read_only():
    seq = build_sequence([1, 1])
    with pytest.raises(ValueError):
        seq.degrees[0] = 5


degree_lists = st.lists(st.integers(1, 12), min_size=1, max_size=60).filter(lambda d: sum(d) % 2 == 0)


@given(degree_lists)
def test_cached_values_match_recomputation(degrees):
    seq = build_sequence(degrees)
    s = sum(degrees)
    assert seq.q == Fraction(sum(d * d for d in degrees), s) - 2
    assert seq.r == Fraction(sum(d * (d - 2) ** 2 for d in degrees), s)
    assert seq.sum_d2 == (4 + 2 * seq.q) * seq.edge_count


@given(degree_lists, st.floats(0.001, 0.0999), st.floats(0.001, 0.0999))
def test_condition_d_monotone_in_zeta(degrees, z1, z2):
    lo, hi = sorted((z1, z2))
    seq = build_sequence(degrees)
    big = check_condition_d(seq, hi)
    small = check_condition_d(seq, lo)
    if big.pass_c:
        assert small.pass_c
    if big.pass_d:
        assert small.pass_d


def test_condition_d_examples():
    reg = build_sequence([2] * 100)
    assert not check_condition_d(reg, 0.05).pass_c
    small = check_condition_d(family_mixed13(1000, 0.0), 0.05)
    assert not small.pass_a
    # n^{1/3}/ln n = 10 / 6.9078 for R = 1
    assert small.delta_bound == pytest.approx(10 / math.log(1000))
    big = check_condition_d(family_mixed13(10**5, 0.0), 0.05)
    assert big.pass_a and big.pass_b and big.pass_c and big.pass_d
    assert big.delta_bound == pytest.approx(10 ** (5 / 3) / math.log(10**5))


def test_condition_d_rejects_bad_zeta():
    with pytest.raises(PreconditionError):
        check_condition_d(build_sequence([1, 1]), 0.1)


def test_check_observations_examples():
    rep = check_observations(build_sequence([1, 1, 1, 3]), 0.05)
    assert rep.all_hold
    assert check_observations(build_sequence([1, 1]), 0.05).all_hold
    with pytest.raises(PreconditionError):
        check_observations(build_sequence([2, 2, 2, 2]), 0.05)


@pytest.mark.parametrize("n", [8, 16, 800, 8000])
def test_mixed13_zero_q_exact(n):
    seq = family_mixed13(n, 0.0)
    assert seq.q == 0 and seq.r == 1
    assert set(seq.degree_counts) == {1, 3}


def test_mixed13_examples():
    seq = family_mixed13(8, 0.0)
    assert seq.count(3) == 2 and seq.count(1) == 6
    assert family_mixed13(4, 0.0).degrees.tolist() == [1, 1, 1, 3]


@given(st.integers(4, 5000), st.floats(-0.5, 0.5))
@settings(max_examples=60)
def test_mixed13_properties(n, q):
    try:
        seq = family_mixed13(n, q)
    except Infeasible:
        return
    assert seq.n == n
    if n % 2 == 0:
        assert seq.r == 1
        assert set(seq.degree_counts) <= {1, 3}
    else:
        # one degree-2 vertex repairs parity
        assert seq.count(2) == 1
        assert seq.r == Fraction(2 * seq.edge_count - 2, 2 * seq.edge_count)
    assert abs(float(seq.q) - q) < 10 / n


def test_heavy_vertex():
    n = 10**5
    delta = math.ceil(n**0.4)
    seq = family_heavy_vertex(n, delta)
    assert seq.degrees[0] == delta == seq.max_degree
    two_e = 2 * seq.edge_count
    # remainder is a Q = 0 mix, so Q = Δ(Δ-2)/2|E| up to rounding
    assert float(seq.q) == pytest.approx(delta * (delta - 2) / two_e, abs=10 / n)
    assert abs(float(seq.q) - delta**2 / two_e) <= 2 * delta / two_e + 10 / n
    closed = delta * (delta - 2) ** 2 / two_e
    assert closed / 2 <= float(seq.r) <= 2 * closed


def test_heavy_vertex_edge_cases():
    seq = family_heavy_vertex(16, 3)
    assert set(seq.degree_counts) <= {1, 2, 3}
    with pytest.raises(Infeasible):
        family_heavy_vertex(10, 11)
    with pytest.raises(PreconditionError):
        family_heavy_vertex(10, 2)


def test_three_point():
    seq = family_three_point(10**5, 10, 1000, 0.0)
    assert abs(float(seq.q)) < 1e-3
    assert seq.r > 1
    assert seq.count(10) == 1000
    with pytest.raises(PreconditionError):
        family_three_point(10**5, 10, 0, 0.0)
    with pytest.raises(Infeasible):
        family_three_point(10**5, 10, 10**4, 0.0)


def test_degree_file_roundtrip(tmp_path):
    seq = family_mixed13(40, 0.0)
    for rle in (False, True):
        p = tmp_path / f"deg_{rle}.txt"
        write_degree_file(seq, p, rle=rle)
        back = read_degree_file(p)
        assert np.array_equal(np.sort(back.degrees), np.sort(seq.degrees))
    p = tmp_path / "rle.txt"
    p.write_text("RLE\n3 1\n1 3\n")
    assert read_degree_file(p).degrees.tolist() == [1, 1, 1, 3]
