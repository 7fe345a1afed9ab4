"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data error, 3 internal numeric
assertion failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import defaultdict
from pathlib import Path

import numpy as np

from . import io as xio
from .exceptions import DataError, ExplainSimError, NumericAssertionError
from .metrics import METRICS, compare_rankings
from .ranking import RankedList, rank_features
from .stats import kde, pooled_ttest, sample_metric_distribution, summarize, ttest_from_summary
from .study import emit_reports, load_config, run_study

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _ranked(text: str) -> RankedList:
    items = [s.strip() for s in text.split(",") if s.strip()]
    return RankedList(tuple(items))


def cmd_distance(args) -> int:
    value = compare_rankings(
        _ranked(args.a), _ranked(args.b), args.metric, symmetric=args.symmetric
    )
    print(repr(value))
    return EXIT_OK


def cmd_compare(args) -> int:
    records = xio.ingest_importances(args.input)
    by_name = defaultdict(dict)
    for rec in records:
        by_name[rec.explainer][rec.instance_id] = rec
    for name in (args.reference, args.comparison):
        if name not in by_name:
            raise DataError(f"explainer {name!r} not found in {args.input}")
    ref, cmp_ = by_name[args.reference], by_name[args.comparison]
    if set(ref) != set(cmp_):
        raise DataError(
            f"explainers {args.reference!r} and {args.comparison!r} cover different instances"
        )
    print("instance_id,value")
    values = []
    for iid in sorted(ref):
        v = compare_rankings(
            rank_features(ref[iid], not args.signed),
            rank_features(cmp_[iid], not args.signed),
            args.metric,
            args.symmetric,
        )
        values.append(v)
        print(f"{iid},{v!r}")
    print(f"mean,{float(np.mean(values))!r}")
    return EXIT_OK


def cmd_sample_dist(args) -> int:
    shreyan, pearson = sample_metric_distribution(args.x, args.n, args.seed)
    out = {}
    for label, sample in (("shreyan", shreyan), ("pearson", pearson)):
        entry = {"mean": float(sample.mean()), "median": float(np.median(sample))}
        if sample.size >= 2:
            s = summarize(sample)
            entry.update(variance=s.variance, skewness=s.skewness, kurtosis=s.kurtosis)
        out[label] = entry
    print(json.dumps(out, indent=2))
    if args.out_dir:
        d = Path(args.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        xio.write_rows(d / "samples.csv", ["shreyan", "pearson"], zip(shreyan.tolist(), pearson.tolist()))
        for label, sample in (("shreyan", shreyan), ("pearson", pearson)):
            try:
                xio.write_density_csv(kde(sample), d / f"density_{label}.csv")
            except DataError as e:
                logging.warning("no density for %s: %s", label, e)
    return EXIT_OK


def cmd_ttest(args) -> int:
    if args.summary is not None:
        m1, v1, n1, m2, v2, n2 = args.summary
        if not (float(n1).is_integer() and float(n2).is_integer()):
            raise _UsageError("sample sizes must be integers")
        res = ttest_from_summary(m1, v1, int(n1), m2, v2, int(n2), args.alpha)
    elif args.a and args.b:
        res = pooled_ttest(xio.read_sample(args.a), xio.read_sample(args.b), args.alpha)
    else:
        raise _UsageError("ttest: give either --a and --b, or --summary")
    print(json.dumps(res.as_dict(), indent=2))
    return EXIT_OK


def cmd_study(args) -> int:
    cfg = load_config(args.config, master_seed=args.seed, out_dir=args.out_dir, jobs=args.jobs)
    result = run_study(cfg)
    out_dir = cfg.out_dir or "study_out"
    paths = emit_reports(result, out_dir, svg=not args.no_svg)
    for task in ("regression", "classification"):
        data = result.data(task)
        mean = f"{data.mean():.6f}" if data.size else "n/a"
        print(f"{task}: {data.size} runs, mean similarity {mean}")
    if result.ttest is not None:
        t = result.ttest
        print(f"t = {t.t:.4f}, df = {t.df:g}, p = {t.p_two_sided:.4g}")
    print(result.verdict())
    for task, kind, rep, msg in result.failures:
        print(f"FAILED {task}/{kind}/rep {rep}: {msg}", file=sys.stderr)
    print(f"wrote {len(paths)} files to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="explainsim", description="Rank-similarity tools for explainer outputs.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("distance", help="compare two comma-separated ranked lists")
    d.add_argument("a", help="reference list, e.g. A,B,C,D,E")
    d.add_argument("b")
    d.add_argument("--metric", choices=sorted(METRICS), default="shreyan")
    d.add_argument("--symmetric", action="store_true")
    d.set_defaults(func=cmd_distance)

    c = sub.add_parser("compare", help="per-instance similarity from an importance file")
    c.add_argument("--input", required=True)
    c.add_argument("--reference", required=True)
    c.add_argument("--comparison", required=True)
    c.add_argument("--metric", choices=sorted(METRICS), default="shreyan")
    c.add_argument("--symmetric", action="store_true")
    c.add_argument("--signed", action="store_true", help="rank by signed score, not magnitude")
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("sample-dist", help="metric distribution over random permutation pairs")
    s.add_argument("--x", type=int, default=9)
    s.add_argument("--n", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_sample_dist)

    t = sub.add_parser("ttest", help="pooled two-sample t-test")
    t.add_argument("--a")
    t.add_argument("--b")
    t.add_argument("--summary", nargs=6, type=float, metavar=("M1", "V1", "N1", "M2", "V2", "N2"))
    t.add_argument("--alpha", type=float, default=0.05)
    t.set_defaults(func=cmd_ttest)

    st = sub.add_parser("study", help="run the regression vs classification study")
    st.add_argument("--config", required=True)
    st.add_argument("--seed", type=int, help="override master_seed")
    st.add_argument("--out-dir")
    st.add_argument("--jobs", type=int)
    st.add_argument("--no-svg", action="store_true")
    st.set_defaults(func=cmd_study)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return EXIT_USAGE
    except NumericAssertionError as e:
        print(f"numeric assertion failed: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ExplainSimError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
