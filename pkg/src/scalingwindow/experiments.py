"""Reproducible Monte Carlo sweeps over degree families and sizes.

Every replicate draws from its own generator, seeded by a stable hash of
``(master_seed, family, n, replicate)``, so a result depends only on the
spec and not on execution order or worker count.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import degrees as dg
from .configuration import DEFAULT_MAX_ATTEMPTS, copy_owners, simplicity
from .exceptions import Degenerate, Exhausted, PreconditionError
from .exploration import largest_component, run_exploration, trace_concentration_check

log = logging.getLogger(__name__)

FAMILIES = ("mixed13", "heavy_vertex", "three_point", "file")
QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)
CSV_COLUMNS = [
    "family", "n", "q", "r", "replicate", "seed", "cmax", "second_cmax",
    "complex_components", "max_excess", "conc_q_pass", "conc_r_pass", "wall_ms",
]


@dataclass
class ExperimentSpec:
    """Sweep description.

    ``family_params`` carries the family arguments plus the rule for Q:

    * ``q_target``: a fixed value, or
    * ``q_rule = "window"`` with ``coefficient``: ``Q = c n^{-1/3} R^{2/3}``, or
    * ``q_rule = "power"`` with ``coefficient`` and ``exponent``: ``Q = c n^{exponent}``.

    ``heavy_vertex`` takes ``delta`` or ``delta_exponent`` (``Δ = ceil(n^x)``);
    ``three_point`` takes ``d_high`` and ``count_high`` or ``high_fraction``;
    ``file`` takes ``path``.
    """

    family: str
    family_params: dict = field(default_factory=dict)
    n_values: list = field(default_factory=list)
    replicates: int = 1
    master_seed: int = 0
    zeta: float = dg.DEFAULT_ZETA
    record_traces: bool = False
    mode: str = "multigraph"
    start_vertex: int | None = None
    max_attempts: int = DEFAULT_MAX_ATTEMPTS

    def validate(self):
        if self.family not in FAMILIES:
            raise PreconditionError(f"unknown family {self.family!r}")
        if self.replicates < 1:
            raise PreconditionError("replicates must be >= 1")
        if self.family != "file":
            if not self.n_values or any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
                raise PreconditionError("n_values must be non-empty and strictly increasing")
        if self.mode not in ("multigraph", "simple"):
            raise PreconditionError(f"unknown mode {self.mode!r}")
        dg._check_zeta(self.zeta)


# ----------------------------------------------------------------------------
# Sequence construction


def _family_reference_r(family: str, params: dict, n: int):
    """R of the family at Q = 0, used to place window-scaled targets."""
    if family == "mixed13":
        return 1.0
    return float(_build(family, dict(params, q_rule=None, q_target=0.0), n).r)


def resolve_q_target(family: str, params: dict, n: int) -> float:
    rule = params.get("q_rule")
    if rule == "window":
        r = _family_reference_r(family, params, n)
        return params["coefficient"] * n ** (-1 / 3) * r ** (2 / 3)
    if rule == "power":
        return params["coefficient"] * n ** params["exponent"]
    return float(params.get("q_target", 0.0))


def _build(family: str, params: dict, n: int) -> dg.DegreeSequence:
    if family == "file":
        return dg.read_degree_file(params["path"])
    if family == "heavy_vertex":
        delta = params.get("delta")
        if delta is None:
            delta = math.ceil(n ** params.get("delta_exponent", 0.4))
        return dg.family_heavy_vertex(n, int(delta))
    q = resolve_q_target(family, params, n)
    if family == "mixed13":
        return dg.family_mixed13(n, q)
    count = params.get("count_high")
    if count is None:
        count = max(1, round(params["high_fraction"] * n))
    return dg.family_three_point(n, int(params["d_high"]), int(count), q)


def build_for(spec: ExperimentSpec, n: int) -> dg.DegreeSequence:
    return _build(spec.family, spec.family_params, n)


def regime_preset(regime: str, n: int, coefficient: float = 1.0, family: str = "mixed13", **params) -> dict:
    """Family parameters placing Q inside, below or above the scaling window.

    ``inside`` sets ``Q = c n^{-1/3} R^{2/3}``; ``below``/``above`` set
    ``Q = ∓c n^{-1/4}``, i.e. a window multiple ``ω(n) = c n^{1/12}`` (for R = 1).
    The returned dict holds the reusable ``family_params`` and the resolved
    ``q_target`` at this ``n``.
    """
    if coefficient < 0 or (coefficient == 0 and regime != "inside"):
        raise PreconditionError("coefficient must be > 0")
    if regime == "inside":
        fp = dict(params, q_rule="window", coefficient=coefficient)
    elif regime in ("below", "above"):
        sign = -1.0 if regime == "below" else 1.0
        fp = dict(params, q_rule="power", coefficient=sign * coefficient, exponent=-0.25)
    else:
        raise PreconditionError(f"unknown regime {regime!r}")
    return {"family": family, "family_params": fp, "q_target": resolve_q_target(family, fp, n)}


def preset_spec(regime, n_values, replicates, master_seed, coefficient=1.0, **kw) -> ExperimentSpec:
    frag = regime_preset(regime, n_values[0], coefficient)
    return ExperimentSpec(
        family=frag["family"], family_params=frag["family_params"], n_values=list(n_values),
        replicates=replicates, master_seed=master_seed, **kw,
    )


# ----------------------------------------------------------------------------
# Seeds and replicates


def derive_seed(master_seed: int, family: str, n: int, replicate: int) -> int:
    """Stable 64-bit seed for one replicate."""
    key = f"{int(master_seed)}|{family}|{int(n)}|{int(replicate)}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


@dataclass
class ReplicateRecord:
    family: str
    n: int
    q: float
    r: float
    replicate: int
    seed: int
    cmax: int
    second_cmax: int
    complex_components: int
    max_excess: int
    conc_q_pass: bool | None
    conc_r_pass: bool | None
    wall_ms: float
    attempts: int = 1


def _run_replicate(spec: ExperimentSpec, seq, n: int, rep: int) -> ReplicateRecord:
    seed = derive_seed(spec.master_seed, spec.family, n, rep)
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    simple = spec.mode == "simple"
    attempts = 0
    while True:
        attempts += 1
        run = run_exploration(
            seq, rng, record_trace=spec.record_traces, start_vertex=spec.start_vertex,
            record_matching=simple,
        )
        if not simple:
            break
        edges = np.sort(copy_owners(seq)[run.matching], axis=1)
        if simplicity(edges, seq.n).is_simple:
            break
        if attempts >= spec.max_attempts:
            raise Exhausted(spec.max_attempts)
    cmax, second = largest_component(run.census)
    conc_q = conc_r = None
    if run.trace is not None:
        rep_c = trace_concentration_check(run.trace, seq, spec.zeta)
        conc_q, conc_r = rep_c.q_pass, rep_c.r_pass
    return ReplicateRecord(
        family=spec.family, n=seq.n, q=float(seq.q), r=float(seq.r), replicate=rep, seed=seed,
        cmax=cmax, second_cmax=second, complex_components=run.census.complex_count,
        max_excess=run.census.max_excess, conc_q_pass=conc_q, conc_r_pass=conc_r,
        wall_ms=(time.perf_counter() - t0) * 1e3, attempts=attempts,
    )



# ----------------------------------------------------------------------------
# Results


@dataclass
class ExperimentResult:
    spec: ExperimentSpec
    records: list
    aggregates: list

    def for_n(self, n: int) -> list:
        return [r for r in self.records if r.n == n]

    def aggregate(self, n: int) -> dict:
        for a in self.aggregates:
            if a["n"] == n:
                return a
        raise KeyError(n)

    def medians(self):
        return [(a["n"], a["median_cmax"]) for a in self.aggregates]

    def slopes(self) -> dict:
        if len(self.aggregates) < 3:
            return {}
        s, b, res = loglog_slope(self.medians())
        return {"median_cmax": {"slope": s, "intercept": b, "residual": res}}

    def to_csv(self, path, include_timing: bool = False) -> None:
        """One row per replicate.  ``wall_ms`` is left blank unless ``include_timing``."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_COLUMNS)
            for r in self.records:
                w.writerow([
                    r.family, r.n, _f17(r.q), _f17(r.r), r.replicate, r.seed, r.cmax,
                    r.second_cmax, r.complex_components, r.max_excess,
                    _flag(r.conc_q_pass), _flag(r.conc_r_pass),
                    _f17(r.wall_ms) if include_timing else "",
                ])

    def summary(self) -> dict:
        return {"spec": asdict(self.spec), "aggregates": self.aggregates, "slopes": self.slopes()}

    def to_json(self, path, extra: dict | None = None) -> None:
        summary = dict(self.summary(), **(extra or {}))
        Path(path).write_text(json.dumps(_round17(summary), indent=2, sort_keys=True) + "\n")


def _f17(x: float) -> str:
    return f"{x:.17g}"


def _flag(x):
    return "" if x is None else int(bool(x))


def _round17(obj):
    # floats are serialized through 17 significant digits
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.17g}")
    if isinstance(obj, dict):
        return {k: _round17(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round17(v) for v in obj]
    return obj


def _aggregate(n, seq, report, recs) -> dict:
    cmax = np.array([r.cmax for r in recs], dtype=float)
    qs = np.quantile(cmax, QUANTILES)
    scale = n ** (2 / 3) * float(seq.r) ** (-1 / 3)
    conc = [r for r in recs if r.conc_q_pass is not None]
    return {
        "n": n,
        "q": float(seq.q),
        "r": float(seq.r),
        "max_degree": seq.max_degree,
        "replicates": len(recs),
        "cmax_quantiles": dict(zip(["q05", "q25", "q50", "q75", "q95"], qs.tolist())),
        "median_cmax": float(qs[2]),
        "mean_cmax": float(cmax.mean()),
        "median_second_cmax": float(np.median([r.second_cmax for r in recs])),
        "complex_fraction": float(np.mean([r.complex_components > 0 for r in recs])),
        "window_ratio": float(qs[2]) / scale,
        "window_multiple": float(abs(seq.q)) / (n ** (-1 / 3) * float(seq.r) ** (2 / 3)),
        "condition_d": report.to_dict(),
        "concentration_pass_fraction": (
            float(np.mean([r.conc_q_pass and r.conc_r_pass for r in conc])) if conc else None
        ),
    }


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> ExperimentResult:
    """Run every ``(n, replicate)`` of ``spec`` and aggregate per ``n``.

    Sequences failing the no-isolated-vertex or degree-2 clauses are refused.
    Failures of the maximum-degree or ``|Q|`` clauses are logged and recorded
    in the aggregates, since the counterexample and out-of-window sweeps
    violate them on purpose at desk-scale ``n``.
    """
    spec.validate()
    if spec.family == "file":
        n_values = [build_for(spec, 0).n]
    else:
        n_values = list(spec.n_values)
    records, aggregates = [], []
    pool = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for n in n_values:
            seq = build_for(spec, n)
            report = dg.check_condition_d(seq, spec.zeta)
            if not (report.pass_b and report.pass_c):
                raise PreconditionError(f"n={n}: sequence fails Condition D(b)/(c)")
            if not report.pass_a:
                log.warning("n=%d: Δ=%d exceeds n^{1/3}R^{1/3}/ln n (margin %.3g)", n, seq.max_degree, report.margin_a)
            if not report.pass_d:
                log.warning("n=%d: |Q|=%.4g exceeds zeta/2 (margin %.3g)", n, abs(float(seq.q)), report.margin_d)
            reps = range(spec.replicates)
            if pool is None:
                recs = [_run_replicate(spec, seq, n, r) for r in reps]
            else:
                recs = list(pool.map(lambda r: _run_replicate(spec, seq, n, r), reps))
            records.extend(recs)
            aggregates.append(_aggregate(seq.n, seq, report, recs))
    finally:
        if pool is not None:
            pool.shutdown()
    return ExperimentResult(spec, records, aggregates)


# ----------------------------------------------------------------------------
# Analysis


def loglog_slope(points):
    """Least-squares fit of ``log(statistic)`` on ``log(n)``.

    Returns ``(slope, intercept, residual)`` with ``residual`` the RMS of the
    log-space residuals.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or len(pts) < 3:
        raise PreconditionError("need at least 3 (n, statistic) points")
    if (pts <= 0).any():
        raise PreconditionError("all values must be positive")
    x, y = np.log(pts[:, 0]), np.log(pts[:, 1])
    if np.ptp(x) == 0:
        raise Degenerate("all n are equal")
    A = np.column_stack([x, np.ones_like(x)])
    (slope, intercept), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (slope * x + intercept)
    return float(slope), float(intercept), float(np.sqrt(np.mean(resid**2)))


def theorem2b_census(result: ExperimentResult) -> list:
    """Fraction of replicates with a complex component, next to ``20 / ω(n)^3``.

    ``ω(n) = |Q| n^{1/3} R^{-2/3}`` is computed from each sequence's actual
    Q and R.  Only meaningful below the window, so any ``Q >= 0`` is refused.
    """
    out = []
    for a in result.aggregates:
        if a["q"] >= 0:
            raise PreconditionError(f"n={a['n']}: Q={a['q']:.4g} is not subcritical")
        omega = a["window_multiple"]
        out.append({
            "n": a["n"],
            "fraction": a["complex_fraction"],
            "omega": omega,
            "bound": 20 / omega**3,
        })
    return out
