"""Configuration-model sampling, simplicity testing and exact small-instance oracles.

Vertex-copies are numbered ``0 .. 2|E|-1`` with the ``d_v`` copies of vertex
``v`` contiguous; :meth:`ConfigurationGraph.copy_label` maps a copy id back to
``(vertex, copy index)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import numpy as np

from .degrees import DegreeSequence
from .exceptions import Exhausted, OverlappingPairs, PreconditionError, TooLarge

MAX_ORACLE_COPIES = 12
DEFAULT_MAX_ATTEMPTS = 200


def copy_owners(seq: DegreeSequence) -> np.ndarray:
    """Vertex id of every vertex-copy."""
    return np.repeat(np.arange(seq.n, dtype=np.int64), seq.degrees)


def copy_offsets(seq: DegreeSequence) -> np.ndarray:
    """Id of the first copy of each vertex (length ``n + 1``)."""
    out = np.zeros(seq.n + 1, dtype=np.int64)
    np.cumsum(seq.degrees, out=out[1:])
    return out


@dataclass(frozen=True, eq=False)
class ConfigurationGraph:
    """A perfect matching on vertex-copies and the multigraph it contracts to.

    ``matching`` is an ``(|E|, 2)`` array of copy ids with the smaller id
    first, rows sorted; ``edges`` holds the owning vertices of each pair
    (``u <= v``), so a loop at ``v`` is the row ``(v, v)``.
    """

    seq: DegreeSequence
    matching: np.ndarray
    edges: np.ndarray

    @classmethod
    def from_matching(cls, seq: DegreeSequence, pairs) -> "ConfigurationGraph":
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        pairs = np.sort(pairs, axis=1)
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        owner = copy_owners(seq)
        edges = owner[pairs]
        return cls(seq=seq, matching=pairs, edges=edges)

    def copy_label(self, copy: int):
        offsets = copy_offsets(self.seq)
        v = int(np.searchsorted(offsets, copy, side="right") - 1)
        return v, int(copy - offsets[v])

    def matching_key(self) -> tuple:
        """Hashable canonical form of the matching."""
        return tuple(map(tuple, self.matching.tolist()))

    def vertex_degrees(self) -> np.ndarray:
        """Degrees recounted from ``edges``; a loop contributes 2."""
        return np.bincount(self.edges.ravel(), minlength=self.seq.n)

    def sorted_edges(self) -> np.ndarray:
        e = self.edges
        return e[np.lexsort((e[:, 1], e[:, 0]))]

    def write_edge_list(self, path) -> None:
        """Write ``u v`` lines in sorted order (loops as ``v v``)."""
        lines = [f"{u} {v}" for u, v in self.sorted_edges().tolist()]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def read_edge_list(path) -> np.ndarray:
    rows = [tuple(map(int, ln.split())) for ln in Path(path).read_text().splitlines() if ln.strip()]
    return np.asarray(rows, dtype=np.int64).reshape(-1, 2)


def sample_configuration(seq: DegreeSequence, rng: np.random.Generator) -> ConfigurationGraph:
    """Uniform random perfect matching of the copies: shuffle, then pair neighbours."""
    copies = rng.permutation(seq.total_copies)
    return ConfigurationGraph.from_matching(seq, copies.reshape(-1, 2))


def sample_matchings(seq: DegreeSequence, rng: np.random.Generator, reps: int) -> np.ndarray:
    """``reps`` independent uniform matchings at once, shape ``(reps, |E|, 2)``.

    Same law as :func:`sample_configuration`; each row is shuffled on its own.
    """
    base = np.broadcast_to(np.arange(seq.total_copies), (reps, seq.total_copies))
    return rng.permuted(base, axis=1).reshape(reps, seq.edge_count, 2)


def enumerate_configurations(seq: DegreeSequence) -> list:
    """Every perfect matching of the copy set, each exactly once.

    Limited to ``2|E| <= 12`` (10395 matchings).
    """
    m2 = seq.total_copies
    if m2 > MAX_ORACLE_COPIES:
        raise TooLarge(f"2|E| = {m2} exceeds {MAX_ORACLE_COPIES}")
    return [ConfigurationGraph.from_matching(seq, p) for p in _perfect_matchings(list(range(m2)))]


def _perfect_matchings(points):
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    for i, partner in enumerate(rest):
        for tail in _perfect_matchings(rest[:i] + rest[i + 1 :]):
            yield [(first, partner)] + tail


def double_factorial_odd(m: int) -> int:
    """``(2m - 1)!!``, the number of perfect matchings of ``2m`` points."""
    return math.prod(range(1, 2 * m, 2))


@dataclass(frozen=True)
class SimplicityVerdict:
    is_simple: bool
    loop_count: int
    multi_edge_count: int


def simplicity(edges: np.ndarray, n: int) -> SimplicityVerdict:
    """Loops and surplus parallel non-loop edges in an ``(m, 2)`` edge array with ``u <= v``."""
    loops = edges[:, 0] == edges[:, 1]
    loop_count = int(loops.sum())
    proper = edges[~loops]
    if len(proper):
        codes = proper[:, 0] * np.int64(n) + proper[:, 1]
        multi = len(codes) - len(np.unique(codes))
    else:
        multi = 0
    return SimplicityVerdict(loop_count == 0 and multi == 0, loop_count, int(multi))


def is_simple(g: ConfigurationGraph) -> SimplicityVerdict:
    return simplicity(g.edges, g.seq.n)


def sample_simple(
    seq: DegreeSequence, rng: np.random.Generator, max_attempts: int = DEFAULT_MAX_ATTEMPTS
):
    """Rejection-sample configurations until one is simple.

    Returns ``(graph, attempts)``; conditioned on simplicity the graph is
    uniform over simple graphs with this degree sequence.
    """
    if max_attempts < 1:
        raise PreconditionError("max_attempts must be >= 1")
    for attempt in range(1, max_attempts + 1):
        g = sample_configuration(seq, rng)
        if is_simple(g).is_simple:
            return g, attempt
    raise Exhausted(max_attempts)


def acceptance_rate(seq: DegreeSequence, rng: np.random.Generator, attempts: int) -> float:
    """Fraction of ``attempts`` independent configurations that are simple."""
    owner = copy_owners(seq)
    hits = 0
    for _ in range(attempts):
        pairs = owner[rng.permutation(seq.total_copies)].reshape(-1, 2)
        hits += simplicity(np.sort(pairs, axis=1), seq.n).is_simple
    return hits / attempts


def simplicity_probability_formula(seq: DegreeSequence) -> float:
    """Limiting probability that a configuration is simple, ``exp(1/4 - (Q + 2)^2 / 4)``.

    This is the large-n limit; the finite-n value differs by an unquantified
    ``o(1)`` term.
    """
    return math.exp(0.25 - 0.25 * float(seq.q + 2) ** 2)


def pair_join_probability(seq: DegreeSequence, pairs):
    """Probability that a uniform matching contains all of the given copy pairs.

    Returns ``(exact, bound)`` where ``exact = prod_{i=1..l} 1/(2|E| - 2i + 1)``
    and ``bound = (|E| - 1 - l)! / (2^l (|E| - 1)!)``; the bound is undefined
    (returned as ``inf``) when ``l >= |E|``.
    """
    pairs = [tuple(int(c) for c in p) for p in pairs]
    flat = [c for p in pairs for c in p]
    if any(len(p) != 2 for p in pairs):
        raise ValueError("pairs must be 2-tuples of copy ids")
    if len(set(flat)) != len(flat):
        raise OverlappingPairs(f"pairs share a copy: {pairs}")
    m2 = seq.total_copies
    if any(c < 0 or c >= m2 for c in flat):
        raise ValueError(f"copy ids must lie in [0, {m2})")
    m, ell = seq.edge_count, len(pairs)
    exact = Fraction(1)
    for i in range(1, ell + 1):
        exact /= 2 * m - 2 * i + 1
    if ell == 0:
        bound = Fraction(1)
    elif ell < m:
        bound = Fraction(math.factorial(m - 1 - ell), 2**ell * math.factorial(m - 1))
    else:
        bound = math.inf
    return exact, bound


def partial_matchings(points, ell: int):
    """All sets of ``ell`` disjoint pairs drawn from ``points``."""
    points = list(points)
    if ell == 0:
        yield ()
        return
    if len(points) < 2 * ell:
        return
    first, rest = points[0], points[1:]
    # pairs containing `first`
    for i, partner in enumerate(rest):
        for tail in partial_matchings(rest[:i] + rest[i + 1 :], ell - 1):
            yield ((first, partner),) + tail
    # pairs avoiding `first`
    yield from partial_matchings(rest, ell)


def pair_join_frequency(seq: DegreeSequence, pairs) -> Fraction:
    """Enumeration oracle: fraction of all matchings that contain ``pairs``."""
    want = {tuple(sorted(p)) for p in pairs}
    configs = enumerate_configurations(seq)
    hits = sum(want <= set(g.matching_key()) for g in configs)
    return Fraction(hits, len(configs))


def subset_join_counts(seq: DegreeSequence) -> dict:
    """For every set of disjoint pairs, the number of matchings containing it."""
    counts: dict = {}
    for g in enumerate_configurations(seq):
        key = g.matching_key()
        for ell in range(len(key) + 1):
            for sub in combinations(key, ell):
                counts[sub] = counts.get(sub, 0) + 1
    return counts
