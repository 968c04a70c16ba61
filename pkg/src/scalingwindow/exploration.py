"""Component exploration of a random configuration by lazy matching.

The matching is exposed one pair at a time.  ``Y_t`` counts unmatched copies
of explored vertices, ``D_t`` all unmatched copies; ``Q_t`` and ``R_t`` are
the conditional mean and second moment of the next change in ``Y_t`` while
``Y_t > 0``.  The copy to be matched next is the oldest unmatched copy of the
current component (FIFO), which makes traces reproducible from a seed.

:class:`Exploration` runs step by step with exact rational bookkeeping;
:func:`explore_all` runs the same procedure through a compiled kernel.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernel
from .configuration import copy_offsets, copy_owners
from .degrees import DEFAULT_ZETA, DegreeSequence
from .exceptions import Halted, PreconditionError, ViolatedIdentity

TREE, UNICYCLIC, COMPLEX = "tree", "unicyclic", "complex"


def _resolve_start(seq: DegreeSequence, start_vertex) -> int:
    if start_vertex is None or start_vertex == "auto":
        return 0
    v = int(start_vertex)
    if not 0 <= v < seq.n:
        raise PreconditionError(f"start vertex {v} outside [0, {seq.n})")
    return v


@dataclass(frozen=True)
class StepRecord:
    t: int
    eta: int
    q_before: Fraction
    r_before: Fraction
    y_after: int
    new_vertex: int | None
    component_id: int


class Exploration:
    """Mutable exploration state (``C_t``, ``Y_t``, ``D_t`` and running sums).

    Parameters
    ----------
    seq : DegreeSequence
    start_vertex : int or None
        First vertex explored; ``None`` (or ``"auto"``) means vertex 0.
    """

    def __init__(self, seq: DegreeSequence, start_vertex=None):
        self.seq = seq
        self._deg = seq.degrees.tolist()
        self._owner = copy_owners(seq).tolist()
        self._offsets = copy_offsets(seq).tolist()
        m2 = seq.total_copies
        self._pool = list(range(m2))
        self._pos = list(range(m2))
        self._queue: deque = deque()
        self.in_component = [False] * seq.n
        self.sum_d_out = 2 * seq.edge_count
        self.sum_d2_out = seq.sum_d2
        self.sum_d3_out = seq.sum_d3
        self.sum_dd2sq_out = int(seq.r * 2 * seq.edge_count)
        self.t = 0
        self.component_sizes = []
        self.component_edges = []
        self.matching = []
        v = _resolve_start(seq, start_vertex)
        self._enter(v, skip_copy=None)
        self.y = self._deg[v]
        self.component_sizes.append(1)
        self.component_edges.append(0)

    # -- bookkeeping ----------------------------------------------------------

    def _enter(self, u, skip_copy):
        d = self._deg[u]
        self.in_component[u] = True
        self.sum_d_out -= d
        self.sum_d2_out -= d * d
        self.sum_d3_out -= d * d * d
        self.sum_dd2sq_out -= d * (d - 2) ** 2
        for c in range(self._offsets[u], self._offsets[u + 1]):
            if c != skip_copy:
                self._queue.append(c)

    def _remove(self, c):
        i = self._pos[c]
        last = self._pool[-1]
        self._pool[i] = last
        self._pos[last] = i
        self._pool.pop()
        self._pos[c] = -1

    @staticmethod
    def _draw(rng, size):
        return min(int(rng.random() * size), size - 1)

    # -- observables -----------------------------------------------------------

    @property
    def d_total(self) -> int:
        return len(self._pool)

    @property
    def halted(self) -> bool:
        return not self._pool

    @property
    def component_id(self) -> int:
        return len(self.component_sizes) - 1

    def q_t(self) -> Fraction:
        return Fraction(self.sum_d2_out, self.d_total - 1) - 2

    def r_t(self) -> Fraction:
        return Fraction(4 * (self.y - 1) + self.sum_dd2sq_out, self.d_total - 1)

    def unmatched_copies(self) -> list:
        return list(self._pool)

    def check_invariants(self) -> None:
        """Recompute the running sums from scratch and compare."""
        out = [d for d, inside in zip(self._deg, self.in_component) if not inside]
        y = sum(
            1 for c in self._pool if self.in_component[self._owner[c]]
        )
        expected = (
            sum(out),
            sum(d * d for d in out),
            sum(d**3 for d in out),
            sum(d * (d - 2) ** 2 for d in out),
        )
        got = (self.sum_d_out, self.sum_d2_out, self.sum_d3_out, self.sum_dd2sq_out)
        if got != expected:
            raise ViolatedIdentity("running sums", f"{got} != {expected}")
        if y != self.y or self.d_total != self.y + self.sum_d_out:
            raise ViolatedIdentity("D_t = Y_t + sum_out", f"Y={self.y}, recount={y}")
        if self.d_total < 2 * self.seq.edge_count - 2 * self.t or self.d_total % 2:
            raise ViolatedIdentity("D_t bound/parity", f"D={self.d_total}, t={self.t}")

    # -- dynamics --------------------------------------------------------------

    def step(self, rng: np.random.Generator) -> StepRecord:
        """Advance one step: expose a partner (Y > 0) or start a new component (Y = 0)."""
        if self.halted:
            raise Halted("no unmatched copies remain")
        q_before, r_before = self.q_t(), self.r_t()
        new_vertex = None
        if self.y == 0:
            # restart at a size-biased vertex; no copy is consumed
            u = self._owner[self._pool[self._draw(rng, len(self._pool))]]
            self._enter(u, skip_copy=None)
            eta = self._deg[u]
            self.component_sizes.append(1)
            self.component_edges.append(0)
            new_vertex = u
        else:
            c = self._queue.popleft()
            while self._pos[c] < 0:
                c = self._queue.popleft()
            self._remove(c)
            p = self._pool[self._draw(rng, len(self._pool))]
            self._remove(p)
            self.matching.append((min(c, p), max(c, p)))
            self.component_edges[-1] += 1
            u = self._owner[p]
            if not self.in_component[u]:
                self._enter(u, skip_copy=p)
                eta = self._deg[u] - 2
                self.component_sizes[-1] += 1
                new_vertex = u
            else:
                eta = -2
        self.y += eta
        self.t += 1
        return StepRecord(self.t, eta, q_before, r_before, self.y, new_vertex, self.component_id)

    def exact_step_expectation(self):
        """Mean and second moment of the next ``eta``, by summing over every outcome.

        For ``Y_t > 0`` the sums are checked against the closed forms ``Q_t``
        and ``R_t``; for ``Y_t = 0`` against ``sum d^2 / D_t`` and
        ``sum d^3 / D_t``, together with ``E[eta^2] >= R_t (D_t - 1)/D_t`` and
        ``E[eta^2] >= R_t / 2``.
        A mismatch raises :class:`ViolatedIdentity`.
        """
        if self.halted:
            raise Halted("no unmatched copies remain")
        pool, owner, deg, inside = self._pool, self._owner, self._deg, self.in_component
        D = len(pool)
        if self.y > 0:
            # the copy being matched is one of the component's copies; the
            # partner is any of the remaining D - 1 unmatched copies
            s1 = s2 = 0
            skipped = False
            for c in pool:
                u = owner[c]
                if inside[u]:
                    if not skipped:
                        skipped = True
                        continue
                    eta = -2
                else:
                    eta = deg[u] - 2
                s1 += eta
                s2 += eta * eta
            mean, second = Fraction(s1, D - 1), Fraction(s2, D - 1)
            if mean != self.q_t():
                raise ViolatedIdentity("E[eta] = Q_t", f"{mean} != {self.q_t()}")
            if second != self.r_t():
                raise ViolatedIdentity("E[eta^2] = R_t", f"{second} != {self.r_t()}")
            return mean, second
        s1 = s2 = 0
        for c in pool:
            d = deg[owner[c]]
            s1 += d
            s2 += d * d
        mean, second = Fraction(s1, D), Fraction(s2, D)
        if mean != Fraction(self.sum_d2_out, D) or second != Fraction(self.sum_d3_out, D):
            raise ViolatedIdentity("restart moments", f"({mean}, {second})")
        r = self.r_t()
        # R_t can be negative here (only degree-2 vertices left), so the two
        # lower bounds are checked separately rather than chained
        if not (second >= r * Fraction(D - 1, D) and second >= r / 2):
            raise ViolatedIdentity("E[eta^2] >= R_t/2", f"{second} vs {r}")
        return mean, second

    def run(self, rng, record=False):
        records = []
        while not self.halted:
            rec = self.step(rng)
            if record:
                records.append(rec)
        return records

    def census(self) -> "ComponentCensus":
        return ComponentCensus(
            np.asarray(self.component_sizes, dtype=np.int64),
            np.asarray(self.component_edges, dtype=np.int64),
        )


def start_exploration(seq: DegreeSequence, start_vertex=None, rng=None) -> Exploration:
    """Initial state ``C_0 = {v}``, ``Y_0 = d_v``.  ``rng`` is accepted for symmetry and unused."""
    return Exploration(seq, start_vertex)


def step(state: Exploration, rng) -> StepRecord:
    return state.step(rng)


def exact_step_expectation(state: Exploration):
    return state.exact_step_expectation()


# ----------------------------------------------------------------------------
# Results


class ComponentCensus:
    """Per-component vertex and edge counts, in discovery order."""

    def __init__(self, vertices, edges):
        self.vertices = np.asarray(vertices, dtype=np.int64)
        self.edges = np.asarray(edges, dtype=np.int64)
        self.excess = self.edges - self.vertices

    def __len__(self):
        return len(self.vertices)

    @property
    def classes(self) -> list:
        return [TREE if x < 0 else UNICYCLIC if x == 0 else COMPLEX for x in self.excess.tolist()]

    @property
    def complex_count(self) -> int:
        return int((self.excess >= 1).sum())

    @property
    def max_excess(self) -> int:
        return int(self.excess.max())

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["component_id", "vertices", "edges", "excess", "class"])
            for i, (v, e, x, k) in enumerate(
                zip(self.vertices.tolist(), self.edges.tolist(), self.excess.tolist(), self.classes)
            ):
                w.writerow([i, v, e, x, k])


def largest_component(census: ComponentCensus):
    """Largest and second-largest component sizes (0 if there is only one component)."""
    if len(census) == 0:
        raise PreconditionError("empty census")
    if len(census) == 1:
        return int(census.vertices[0]), 0
    top = np.partition(census.vertices, len(census) - 2)[-2:]
    return int(top[1]), int(top[0])


@dataclass
class ExplorationTrace:
    """Per-step series, index ``t = 0 .. T``.

    ``q`` and ``r`` are ``Q_t`` and ``R_t`` as floats (NaN once ``D_t < 2``);
    ``eta[0]`` is 0 and ``new_vertex`` is -1 on steps that add no vertex.
    """

    y: np.ndarray
    d_total: np.ndarray
    q: np.ndarray
    r: np.ndarray
    eta: np.ndarray
    component_id: np.ndarray
    new_vertex: np.ndarray

    def __len__(self):
        return len(self.y)

    @classmethod
    def synthetic(cls, q, r):
        """Trace carrying only ``Q_t`` and ``R_t`` series; other columns are zero."""
        q = np.asarray(q, dtype=float)
        r = np.asarray(r, dtype=float)
        z = np.zeros(len(q), dtype=np.int64)
        return cls(z, z.copy(), q, r, z.copy(), z.copy(), np.full(len(q), -1))

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["t", "y", "d_total", "q_t", "r_t", "eta", "component_id"])
            for t in range(len(self)):
                w.writerow(
                    [
                        t,
                        int(self.y[t]),
                        int(self.d_total[t]),
                        _fmt(self.q[t]),
                        _fmt(self.r[t]),
                        int(self.eta[t]),
                        int(self.component_id[t]),
                    ]
                )


def _fmt(x: float) -> str:
    return "" if math.isnan(x) else f"{x:.17g}"


@dataclass
class ExplorationRun:
    census: ComponentCensus
    trace: ExplorationTrace | None
    matching: np.ndarray | None
    steps: int


def _uniforms(seq: DegreeSequence, rng: np.random.Generator) -> np.ndarray:
    # at most |E| matching steps plus n - 1 restarts
    return rng.random(seq.edge_count + seq.n - 1)


def run_exploration(
    seq: DegreeSequence,
    rng: np.random.Generator,
    record_trace: bool = False,
    start_vertex=None,
    record_matching: bool = False,
) -> ExplorationRun:
    """Explore every component with the compiled kernel."""
    start = _resolve_start(seq, start_vertex)
    out = _kernel.explore_kernel(
        seq.degrees,
        copy_owners(seq),
        copy_offsets(seq),
        start,
        _uniforms(seq, rng),
        record_trace,
        record_matching,
    )
    verts, edges, steps, ty, td, tq, tr, te, tc, tn, match = out
    trace = ExplorationTrace(ty, td, tq, tr, te, tc, tn) if record_trace else None
    return ExplorationRun(
        ComponentCensus(verts, edges), trace, match if record_matching else None, int(steps)
    )


def explore_all(seq: DegreeSequence, rng: np.random.Generator, record_trace: bool = False, start_vertex=None):
    """Run the exploration to completion; returns ``(census, trace or None)``."""
    run = run_exploration(seq, rng, record_trace=record_trace, start_vertex=start_vertex)
    return run.census, run.trace


def explore_matchings(seq: DegreeSequence, rng: np.random.Generator, reps: int, start_vertex=None) -> np.ndarray:
    """Matchings exposed by ``reps`` independent explorations, shape ``(reps, |E|, 2)``."""
    start = _resolve_start(seq, start_vertex)
    u = rng.random((reps, seq.edge_count + seq.n - 1))
    return _kernel.explore_matchings_batch(seq.degrees, copy_owners(seq), copy_offsets(seq), start, u)


# ----------------------------------------------------------------------------
# Concentration of Q_t and R_t


@dataclass(frozen=True)
class ConcentrationReport:
    r_pass: bool
    q_pass: bool
    r_horizon: float
    q_horizon: float
    q_tolerance: float
    first_r_violation: int | None
    first_q_violation: int | None


def concentration_horizons(seq: DegreeSequence, zeta: float = DEFAULT_ZETA):
    """Step horizons and Q tolerance for the two concentration checks."""
    n, q, r, delta = seq.n, abs(float(seq.q)), float(seq.r), seq.max_degree
    r_h = zeta * n / (400 * delta)
    q_h = zeta * q * n / (1000 * r) + 2 * n ** (2 / 3) * r ** (-1 / 3)
    q_tol = 0.5 * q + (800 / zeta) * n ** (-1 / 3) * r ** (2 / 3)
    return r_h, q_h, q_tol


def trace_concentration_check(trace: ExplorationTrace, seq: DegreeSequence, zeta: float = DEFAULT_ZETA):
    """Check ``|R_t - R| < R/2`` and ``|Q_t - Q| <= |Q|/2 + (800/zeta) n^{-1/3} R^{2/3}`` up to their horizons.

    Only steps ``1 <= t <= horizon`` present in the trace are examined, so a
    short trace passes vacuously.
    """
    r_h, q_h, q_tol = concentration_horizons(seq, zeta)
    q0, r0 = float(seq.q), float(seq.r)

    def first_bad(series, horizon, bad):
        stop = min(int(math.floor(horizon)), len(series) - 1)
        if stop < 1:
            return None
        seg = series[1 : stop + 1]
        hits = np.flatnonzero(bad(seg) & ~np.isnan(seg))
        return int(hits[0]) + 1 if len(hits) else None

    r_bad = first_bad(trace.r, r_h, lambda s: np.abs(s - r0) >= r0 / 2)
    q_bad = first_bad(trace.q, q_h, lambda s: np.abs(s - q0) > q_tol)
    return ConcentrationReport(r_bad is None, q_bad is None, r_h, q_h, q_tol, r_bad, q_bad)
