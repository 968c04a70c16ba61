"""Command-line entry point: ``scalingwindow {validate,sample,explore,experiment,oracle}``.

Exit codes: 0 success, 1 validation/check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import logging
import secrets
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import configuration as cfg
from . import degrees as dg
from . import experiments as ex
from .exceptions import Exhausted, ScalingWindowError
from .exploration import explore_all, explore_matchings, start_exploration

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _add_source(p, required=True):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--degrees", type=Path, help="degree file (raw or RLE)")
    src.add_argument("--family", choices=["mixed13", "heavy_vertex", "three_point"])
    p.add_argument("--n", type=int, help="number of vertices for --family")
    p.add_argument("--q-target", type=float, default=0.0)
    p.add_argument("--delta", type=int, help="heavy vertex degree (default ceil(n^0.4))")
    p.add_argument("--d-high", type=int, default=10, help="three_point high degree")
    p.add_argument("--count-high", type=int, help="three_point number of high-degree vertices")


def _add_seed(p):
    p.add_argument("--seed", type=int, help="master seed (drawn from system entropy if absent)")


def _sequence(args) -> dg.DegreeSequence:
    if args.degrees is not None:
        return dg.read_degree_file(args.degrees)
    if args.n is None:
        raise UsageError("--family requires --n")
    if args.family == "mixed13":
        return dg.family_mixed13(args.n, args.q_target)
    if args.family == "heavy_vertex":
        delta = args.delta if args.delta is not None else int(np.ceil(args.n**0.4))
        return dg.family_heavy_vertex(args.n, delta)
    if args.count_high is None:
        raise UsageError("three_point requires --count-high")
    return dg.family_three_point(args.n, args.d_high, args.count_high, args.q_target)


def _rng(args):
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed: {seed}", file=sys.stderr)
    return np.random.default_rng(seed), seed


def cmd_validate(args):
    seq = _sequence(args)
    report = dg.check_condition_d(seq, args.zeta)
    out = dict(seq.summary(), **report.to_dict())
    print(json.dumps(out, indent=2))
    return EXIT_OK if report.all_pass else EXIT_FAIL


def cmd_sample(args):
    seq = _sequence(args)
    rng, _ = _rng(args)
    if args.simple:
        try:
            g, attempts = cfg.sample_simple(seq, rng, args.max_attempts)
        except Exhausted as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAIL
        print(f"attempts: {attempts}", file=sys.stderr)
    else:
        g = cfg.sample_configuration(seq, rng)
    g.write_edge_list(args.out)
    return EXIT_OK


def cmd_explore(args):
    seq = _sequence(args)
    rng, _ = _rng(args)
    census, trace = explore_all(
        seq, rng, record_trace=args.trace is not None, start_vertex=args.start_vertex
    )
    census.to_csv(args.census)
    if trace is not None:
        trace.to_csv(args.trace)
    return EXIT_OK


def cmd_experiment(args):
    if args.seed is None:
        args.seed = secrets.randbits(63)
        print(f"seed: {args.seed}", file=sys.stderr)
    spec = ex.preset_spec(
        args.preset, args.n_list, args.replicates, args.seed, coefficient=args.coefficient,
        zeta=args.zeta, record_traces=args.traces, mode="simple" if args.simple else "multigraph",
    )
    result = ex.run_experiment(spec, workers=args.workers)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result.to_csv(out / "replicates.csv", include_timing=args.timing)
    extra = {"complex_census": ex.theorem2b_census(result)} if args.preset == "below" else None
    result.to_json(out / "summary.json", extra=extra)
    return EXIT_OK


def _check_uniformity(seq, rng, reps):
    from scipy import stats

    configs = cfg.enumerate_configurations(seq)
    index = {g.matching_key(): i for i, g in enumerate(configs)}
    pvalues = {}
    batches = {
        "sampler": cfg.sample_matchings(seq, rng, reps),
        "exploration": explore_matchings(seq, rng, reps),
    }
    for name, batch in batches.items():
        counts = np.zeros(len(configs))
        for m in batch:
            counts[index[cfg.ConfigurationGraph.from_matching(seq, m).matching_key()]] += 1
        pvalues[name] = 1.0 if len(configs) == 1 else float(stats.chisquare(counts).pvalue)
    return {
        "matchings": len(configs),
        "samples": reps,
        "pvalues": pvalues,
        "pass": all(p > 1e-3 for p in pvalues.values()),
    }


def _check_pairjoin(seq):
    counts = cfg.subset_join_counts(seq)
    total = cfg.double_factorial_odd(seq.edge_count)
    checked, ok = 0, True
    single = None
    for ell in range(seq.edge_count + 1):
        for pairs in cfg.partial_matchings(range(seq.total_copies), ell):
            exact, bound = cfg.pair_join_probability(seq, pairs)
            ok &= exact == Fraction(counts.get(pairs, 0), total) and exact <= bound
            checked += 1
            if ell == 1 and single is None:
                single = str(exact)
    return {"pair_sets": checked, "single_pair_probability": single, "pass": bool(ok)}


def _check_expectation(seq, start):
    state = start_exploration(seq, start_vertex=start)
    mean, second = state.exact_step_expectation()
    return {"mean": str(mean), "second_moment": str(second), "q_t": str(state.q_t()),
            "r_t": str(state.r_t()), "pass": True}


def cmd_oracle(args):
    seq = dg.read_degree_file(args.degrees)
    if args.check == "uniformity":
        rng, _ = _rng(args)
        report = _check_uniformity(seq, rng, args.samples)
    elif args.check == "pairjoin":
        report = _check_pairjoin(seq)
    else:
        report = _check_expectation(seq, args.start_vertex)
    print(json.dumps(report, indent=2))
    return EXIT_OK if report["pass"] else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scalingwindow", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="report Condition D as JSON")
    _add_source(p)
    p.add_argument("--zeta", type=float, default=dg.DEFAULT_ZETA)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sample", help="write a sampled configuration as an edge list")
    _add_source(p)
    _add_seed(p)
    p.add_argument("--simple", action="store_true", help="reject until simple")
    p.add_argument("--max-attempts", type=int, default=cfg.DEFAULT_MAX_ATTEMPTS)
    p.add_argument("--out", type=Path, required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("explore", help="explore all components and write the census")
    _add_source(p)
    _add_seed(p)
    p.add_argument("--start-vertex", type=int, help="first vertex (default: lowest index)")
    p.add_argument("--trace", type=Path, help="also write the per-step trace CSV")
    p.add_argument("--census", type=Path, required=True)
    p.set_defaults(func=cmd_explore)

    p = sub.add_parser("experiment", help="run a regime preset sweep")
    p.add_argument("--preset", choices=["inside", "below", "above"], required=True)
    p.add_argument("--n-list", type=int, nargs="+", required=True)
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--coefficient", type=float, default=1.0)
    p.add_argument("--zeta", type=float, default=dg.DEFAULT_ZETA)
    p.add_argument("--traces", action="store_true", help="record traces for concentration checks")
    p.add_argument("--simple", action="store_true", help="condition on simplicity")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the wall_ms column")
    p.add_argument("--out-dir", type=Path, required=True)
    _add_seed(p)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("oracle", help="exact checks on a tiny degree sequence")
    p.add_argument("--degrees", type=Path, required=True)
    p.add_argument("--check", choices=["uniformity", "pairjoin", "expectation"], required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--start-vertex", type=int)
    _add_seed(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR)
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScalingWindowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
