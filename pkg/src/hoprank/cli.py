"""Command-line entry points.

Exit codes: 0 success, 1 dataset validation failure, 2 analysis error,
3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .aggregation import AggregationMethod, MissingResponseError, derive_ranking
from .consensus import OutlierThresholds
from .dataio import Dataset, DatasetFormatError, DatasetValidationError, dataset_hash, load_dataset
from .report import ReportConfig, random_baseline, run_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_ANALYSIS = 2
EXIT_IO = 3


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _load(paths: list[str]) -> Dataset | int:
    for p in paths:
        if not Path(p).exists():
            return _fail(EXIT_IO, f"{p}: no such file")
    try:
        return load_dataset(paths)
    except DatasetValidationError as exc:
        print("dataset invalid:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  - {violation}", file=sys.stderr)
        return EXIT_VALIDATION
    except DatasetFormatError as exc:
        return _fail(EXIT_VALIDATION, str(exc))
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))


def _parse_methods(text: str) -> tuple[AggregationMethod, ...]:
    return tuple(AggregationMethod.parse(part) for part in text.split(",") if part)


def _parse_thresholds(text: str) -> OutlierThresholds:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError("expected two comma-separated numbers, e.g. 0.7,0.3")
    return OutlierThresholds(strong=float(parts[0]), weak=float(parts[1]))


def cmd_validate(args: argparse.Namespace) -> int:
    loaded = _load(args.paths)
    if isinstance(loaded, int):
        return loaded
    d = loaded
    print(
        f"ok: {len(d.scenario.avs)} AVs, {len(d.scenario.hops)} hops, "
        f"{len(d.experts)} experts, {len(d.rankings)} ranking sheets, "
        f"{len(d.responses)} responses"
    )
    print(f"dataset hash: {dataset_hash(d)}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    loaded = _load(args.paths)
    if isinstance(loaded, int):
        return loaded
    try:
        methods = _parse_methods(args.methods)
        thresholds = _parse_thresholds(args.thresholds)
    except ValueError as exc:
        return _fail(EXIT_ANALYSIS, str(exc))
    config = ReportConfig(
        methods=methods,
        thresholds=thresholds,
        seed=args.seed,
        baseline_trials=args.trials,
    )
    try:
        report = run_report(loaded, config, out_dir=args.out)
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    except Exception as exc:
        return _fail(EXIT_ANALYSIS, str(exc))
    print(f"report written to {args.out}")
    print(f"sections: {', '.join(report.sections_present())}")
    for section, reason in sorted(report.unavailable.items()):
        print(f"unavailable: {section} ({reason})")
    return EXIT_OK


def cmd_derive(args: argparse.Namespace) -> int:
    loaded = _load(args.paths)
    if isinstance(loaded, int):
        return loaded
    try:
        method = AggregationMethod.parse(args.method)
    except ValueError as exc:
        return _fail(EXIT_ANALYSIS, str(exc))
    if args.expert not in {e.id for e in loaded.experts}:
        return _fail(EXIT_ANALYSIS, f"unknown expert {args.expert!r}")
    try:
        ranking = derive_ranking(loaded.responses, loaded.scenario, method, args.expert)
    except (MissingResponseError, ValueError) as exc:
        return _fail(EXIT_ANALYSIS, str(exc))
    print("av_id,rank")
    for av_id in sorted(ranking.ranks, key=lambda a: (ranking.ranks[a], a)):
        rank = ranking.ranks[av_id]
        print(f"{av_id},{rank:g}")
    return EXIT_OK


def cmd_baseline(args: argparse.Namespace) -> int:
    try:
        stats = random_baseline(m=args.m, n=args.n, trials=args.trials, seed=args.seed)
    except ValueError as exc:
        return _fail(EXIT_ANALYSIS, str(exc))
    print("m,n,trials,seed,mean_w,sd_w,min_w,max_w")
    print(
        f"{stats.m},{stats.n},{stats.trials},{stats.seed},"
        f"{stats.mean_w!r},{stats.sd_w!r},{stats.min_w!r},{stats.max_w!r}"
    )
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    loaded = _load(args.paths)
    if isinstance(loaded, int):
        return loaded
    try:
        import uvicorn

        from .service import SurveyService, create_app
    except ImportError as exc:
        return _fail(EXIT_IO, f"service dependencies missing: {exc}")
    token = args.admin_token or os.environ.get("HOPRANK_ADMIN_TOKEN")
    try:
        service = SurveyService(
            scenario=loaded.scenario,
            experts=loaded.experts,
            store_dir=Path(args.store),
            admin_token=token,
        )
    except OSError as exc:
        return _fail(EXIT_IO, str(exc))
    app = create_app(service)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoprank",
        description="Elicit, persist, and analyze expert rankings of attack vectors "
        "and interval ratings of their hops.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="load dataset files and report violations")
    p.add_argument("paths", nargs="+", help="dataset files (.json or .csv)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("report", help="compute every analysis table for a dataset")
    p.add_argument("paths", nargs="+", help="dataset files (.json or .csv)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=None, help="seed for the random baseline")
    p.add_argument(
        "--methods",
        default=",".join(m.key for m in ReportConfig().methods),
        help="comma-separated operator:statistic pairs",
    )
    p.add_argument("--thresholds", default="0.7,0.3", help="outlier cutoffs: strong,weak")
    p.add_argument("--trials", type=int, default=1000, help="random-baseline cohort count")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("derive", help="rank AVs from one expert's hop ratings")
    p.add_argument("paths", nargs="+", help="dataset files (.json or .csv)")
    p.add_argument("--expert", required=True, help="expert id")
    p.add_argument("--method", required=True, help="operator:statistic, e.g. mean:mid")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("baseline", help="Kendall's W over uniform-random cohorts")
    p.add_argument("--m", type=int, default=6, help="rankings per cohort")
    p.add_argument("--n", type=int, default=10, help="items per ranking")
    p.add_argument("--trials", type=int, default=1000, help="number of cohorts")
    p.add_argument("--seed", type=int, default=0, help="seed")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("serve", help="run the elicitation HTTP service")
    p.add_argument("paths", nargs="+", help="dataset files providing scenario and experts")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--store", required=True, help="session store directory")
    p.add_argument(
        "--admin-token",
        default=None,
        help="token required by /export (or set HOPRANK_ADMIN_TOKEN)",
    )
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
