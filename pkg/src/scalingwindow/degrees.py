"""Degree sequences, the drift/variance parameters Q and R, and degree families.

Q and R are kept as exact :class:`fractions.Fraction` values; both are ratios
of integer sums, so identities such as ``sum(d**2) == (4 + 2Q)|E|`` can be
tested without rounding.  Convert with ``float()`` only when reporting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .exceptions import Infeasible, OddSum, PreconditionError, ViolatedIdentity, ZeroDegree

DEFAULT_ZETA = 0.05


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """Validated degree sequence with its cached summary statistics.

    Build instances with :func:`build_sequence` (or a family builder) rather
    than calling the constructor directly.
    """

    degrees: np.ndarray
    n: int
    edge_count: int
    sum_d2: int
    sum_d3: int
    q: Fraction
    r: Fraction
    max_degree: int
    degree_counts: dict = field(repr=False)

    def __len__(self):
        return self.n

    @property
    def total_copies(self) -> int:
        """Number of vertex-copies, ``2|E|``."""
        return 2 * self.edge_count

    def count(self, degree: int) -> int:
        return self.degree_counts.get(degree, 0)

    def summary(self) -> dict:
        return {
            "n": self.n,
            "edges": self.edge_count,
            "q": float(self.q),
            "r": float(self.r),
            "max_degree": self.max_degree,
        }


def _exact_sums(degrees: np.ndarray):
    # python ints so that large n cannot overflow the cubic sums
    vals, counts = np.unique(degrees, return_counts=True)
    s1 = s2 = s3 = s_r = 0
    for d, c in zip(vals.tolist(), counts.tolist()):
        s1 += c * d
        s2 += c * d * d
        s3 += c * d * d * d
        s_r += c * d * (d - 2) ** 2
    return s1, s2, s3, s_r, dict(zip(vals.tolist(), counts.tolist()))


def build_sequence(degrees) -> DegreeSequence:
    """Validate ``degrees`` and compute ``n, |E|, Q, R, Δ`` and the ``n_i`` counts.

    Raises
    ------
    ZeroDegree
        If any degree is 0 (vertices of degree 0 are rejected, not stripped).
    OddSum
        If the degree sum is odd.
    """
    arr = np.asarray(degrees, dtype=np.int64).ravel()
    if arr.size == 0:
        raise PreconditionError("degree sequence must be non-empty")
    if (arr < 0).any():
        raise ValueError("degrees must be non-negative integers")
    if (arr == 0).any():
        raise ZeroDegree(f"{int((arr == 0).sum())} vertices of degree 0")
    s1, s2, s3, s_r, counts = _exact_sums(arr)
    if s1 % 2:
        raise OddSum(f"degree sum {s1} is odd")
    arr = arr.copy()
    arr.setflags(write=False)
    return DegreeSequence(
        degrees=arr,
        n=int(arr.size),
        edge_count=s1 // 2,
        sum_d2=s2,
        sum_d3=s3,
        q=Fraction(s2, s1) - 2,
        r=Fraction(s_r, s1),
        max_degree=int(arr.max()),
        degree_counts=counts,
    )


# --------------------------------------------------------------------------
# Condition D and the elementary identities


@dataclass(frozen=True)
class ConditionDReport:
    """Outcome of the four admissibility clauses.

    Margins are ratios ``observed / allowed``, so a clause passes when its
    margin is at most 1.
    """

    zeta: float
    pass_a: bool
    pass_b: bool
    pass_c: bool
    pass_d: bool
    margin_a: float
    margin_c: float
    margin_d: float
    delta_bound: float

    @property
    def all_pass(self) -> bool:
        return self.pass_a and self.pass_b and self.pass_c and self.pass_d

    def to_dict(self) -> dict:
        return {
            "zeta": self.zeta,
            "pass_a": self.pass_a,
            "pass_b": self.pass_b,
            "pass_c": self.pass_c,
            "pass_d": self.pass_d,
            "margin_a": self.margin_a,
            "margin_c": self.margin_c,
            "margin_d": self.margin_d,
            "delta_bound": self.delta_bound,
            "all_pass": self.all_pass,
        }


def _check_zeta(zeta):
    if not 0 < zeta < 0.1:
        raise PreconditionError(f"zeta must lie in (0, 1/10), got {zeta}")


def max_degree_bound(n: int, r) -> float:
    """``n^{1/3} R^{1/3} / ln n``, the admissible maximum degree (infinite for n = 1)."""
    if n <= 1:
        return math.inf
    return (n * float(r)) ** (1.0 / 3.0) / math.log(n)


def check_condition_d(seq: DegreeSequence, zeta: float = DEFAULT_ZETA) -> ConditionDReport:
    _check_zeta(zeta)
    n = seq.n
    bound = max_degree_bound(n, seq.r)
    n2 = seq.count(2)
    abs_q = abs(seq.q)
    return ConditionDReport(
        zeta=zeta,
        pass_a=seq.max_degree <= bound,
        pass_b=seq.count(0) == 0,
        pass_c=n2 <= (1 - zeta) * n,
        pass_d=float(abs_q) <= zeta / 2,
        margin_a=seq.max_degree / bound if bound > 0 else math.inf,
        margin_c=(n2 / n) / (1 - zeta),
        margin_d=float(abs_q) / (zeta / 2),
        delta_bound=bound,
    )


@dataclass(frozen=True)
class ObservationReport:
    edges_lower: bool
    edges_upper: bool
    square_identity: bool
    r_lower: bool
    r_upper: bool

    @property
    def all_hold(self) -> bool:
        return all(
            (self.edges_lower, self.edges_upper, self.square_identity, self.r_lower, self.r_upper)
        )


def check_observations(seq: DegreeSequence, zeta: float = DEFAULT_ZETA, strict: bool = True):
    """Check the elementary bounds on ``|E|``, ``sum d^2`` and ``R``.

    Requires no degree-0 vertices, ``n_2 <= (1 - zeta) n`` and ``Q <= 1``
    (the bound ``R <= 2Δ`` needs it).  With ``strict`` a failed check raises
    :class:`ViolatedIdentity` naming it; otherwise the report is returned
    with the failing flag cleared.
    """
    _check_zeta(zeta)
    n, m, q, r = seq.n, seq.edge_count, seq.q, seq.r
    if seq.count(0) or seq.count(2) > (1 - zeta) * n:
        raise PreconditionError("sequence violates the no-isolated / degree-2 fraction clauses")
    if q > 1:
        raise PreconditionError(f"Q = {float(q):.4g} > 1")
    zeta_f = Fraction(zeta)
    report = ObservationReport(
        edges_lower=Fraction(n, 2) <= m,
        edges_upper=m <= (1 + q / 2) * n,
        square_identity=seq.sum_d2 == (4 + 2 * q) * m,
        r_lower=zeta_f / 4 <= r,
        r_upper=r <= 2 * seq.max_degree,
    )
    if strict:
        for name in ("edges_lower", "edges_upper", "square_identity", "r_lower", "r_upper"):
            if not getattr(report, name):
                raise ViolatedIdentity(name, f"(n={n}, |E|={m}, Q={q}, R={r}, Δ={seq.max_degree})")
    return report


# --------------------------------------------------------------------------
# Degree families


def _repair_parity(ones: int, twos: int, threes: int):
    """Make ``ones + 2*twos + 3*threes`` even by turning one vertex into degree 2.

    A 1 <-> 3 swap changes the sum by 2 and cannot fix parity, so one
    degree-1 vertex is promoted to degree 2 (or a degree-3 vertex demoted
    when there are no degree-1 vertices).
    """
    if (ones + 3 * threes) % 2 == 0:
        return ones, twos, threes
    if ones > 0:
        return ones - 1, twos + 1, threes
    if threes > 0:
        return ones, twos + 1, threes - 1
    raise Infeasible("cannot repair parity")


def _assemble(prefix, ones, twos, threes):
    return np.concatenate(
        [
            np.asarray(prefix, dtype=np.int64),
            np.ones(ones, dtype=np.int64),
            np.full(twos, 2, dtype=np.int64),
            np.full(threes, 3, dtype=np.int64),
        ]
    )


def family_mixed13(n: int, q_target: float = 0.0) -> DegreeSequence:
    """Degrees 1 and 3 with the proportion of 3s set so that Q ≈ ``q_target``.

    ``n_3 = round(n (1 + Q) / (4 - 2Q))``.  The sum ``n + 2 n_3`` has the
    parity of ``n``; for odd ``n`` one degree-1 vertex becomes degree 2, so
    R = 1 exactly only when ``n`` is even.
    """
    if n < 4:
        raise PreconditionError("n must be at least 4")
    if not abs(q_target) < 1:
        raise PreconditionError("|q_target| must be < 1")
    threes = round(n * (1 + q_target) / (4 - 2 * q_target))
    if threes < 1 or threes > n - 1:
        raise Infeasible(f"n_3 = {threes} outside [1, n-1]")
    ones, twos, threes = _repair_parity(n - threes, 0, threes)
    return build_sequence(_assemble([], ones, twos, threes))


def family_heavy_vertex(n: int, delta: int) -> DegreeSequence:
    """One vertex of degree ``delta`` (vertex 0) plus a 3:1 mix of degree-1/3 vertices."""
    if delta < 3:
        raise PreconditionError("delta must be >= 3")
    if n < 2 or delta > n - 1:
        raise Infeasible(f"delta = {delta} exceeds n - 1 = {n - 1}")
    rest = n - 1
    threes = round(rest / 4)
    if threes < 1:
        raise Infeasible("too few vertices for the degree-1/3 remainder")
    ones, twos, threes = rest - threes, 0, threes
    if (delta + ones + 3 * threes) % 2:
        if ones == 0:
            raise Infeasible("cannot repair parity")
        ones, twos = ones - 1, 1
    return build_sequence(_assemble([delta], ones, twos, threes))


def family_three_point(n: int, d_high: int, count_high: int, q_target: float = 0.0) -> DegreeSequence:
    """``count_high`` vertices of degree ``d_high`` with a degree-1/3 remainder tuned to ``q_target``.

    Lets R be raised while Q is held near a target.
    """
    if d_high < 4 or count_high < 1 or count_high * d_high > n:
        raise PreconditionError("need d_high >= 4, count_high >= 1 and count_high * d_high <= n")
    rest = n - count_high
    c, h, q = count_high, d_high, q_target
    # solve sum d^2 = (2 + q) sum d for the number of degree-3 vertices
    exact = ((1 + q) * rest - c * h * (h - 2 - q)) / (4 - 2 * q)
    best = None
    for threes in {math.floor(exact), math.ceil(exact)}:
        if threes < 0 or threes > rest:
            continue
        ones, twos, th = _repair_parity(rest - threes, 0, threes)
        seq = build_sequence(_assemble([h] * c, ones, twos, th))
        err = abs(float(seq.q) - q_target)
        if best is None or err < best[0]:
            best = (err, seq)
    if best is None or not best[0] < 10 / n:
        raise Infeasible(f"no degree-1/3 split brings Q within 10/n of {q_target}")
    return best[1]


# --------------------------------------------------------------------------
# Degree files


def read_degree_file(path) -> DegreeSequence:
    """Read raw degrees (one per line) or ``count degree`` lines after an ``RLE`` header.

    Blank lines and ``#`` comments are ignored.
    """
    lines = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise ValueError(f"{path}: no degrees")
    if lines[0] == "RLE":
        chunks = []
        for line in lines[1:]:
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}: bad RLE line {line!r}")
            count, degree = int(parts[0]), int(parts[1])
            if count < 0:
                raise ValueError(f"{path}: negative count in {line!r}")
            chunks.append(np.full(count, degree, dtype=np.int64))
        return build_sequence(np.concatenate(chunks) if chunks else [])
    return build_sequence([int(line) for line in lines])


def write_degree_file(seq: DegreeSequence, path, rle: bool = False) -> None:
    if rle:
        body = ["RLE"]
        vals, counts = np.unique(seq.degrees, return_counts=True)
        body += [f"{c} {d}" for d, c in zip(vals.tolist(), counts.tolist())]
    else:
        body = [str(d) for d in seq.degrees.tolist()]
    Path(path).write_text("\n".join(body) + "\n")
