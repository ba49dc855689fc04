"""Command-line front end: fit, closed-form, and bootstrap pipelines.

Data goes to stdout or ``--output`` (JSON at full precision, or CSV);
human-readable summaries and diagnostics go to stderr.  Identical
invocations, including the seed, produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import bootstrap, risk_metrics
from .chain_ladder import DevelopmentPattern, fit_pattern
from .closed_form import closed_form_report, report_to_csv, report_to_json
from .tail import TailFitError, TailModel, fit_tail
from .triangle import CumulativeTriangle, TriangleError, parse_triangle

__all__ = ["main"]

_CLI_MODES = {
    "full": ("full",),
    "estimation": ("estimation_only",),
    "process": ("process_only",),
    "all": ("full", "estimation_only", "process_only"),
}


def _default_workers() -> int:
    env = os.environ.get("CDRISK_WORKERS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="triangle CSV file")
    parser.add_argument(
        "--tail",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="extrapolate and include a tail factor",
    )
    parser.add_argument("--i-ult", type=int, default=None, help="ultimate development horizon (required with --tail)")
    parser.add_argument(
        "--tail-dist",
        choices=("normal", "lognormal"),
        default="normal",
        help="tail factor sampling distribution",
    )
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", default=None, help="output file (default stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdrisk",
        description="One-year reserve risk of a claims triangle: analytical errors and bootstrap distribution",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit development factors, variances, and the tail")
    _add_common(p_fit)

    p_cf = sub.add_parser("closed-form", help="analytical error report")
    _add_common(p_cf)

    p_bs = sub.add_parser("bootstrap", help="bootstrap distribution, risk summary, comparison")
    _add_common(p_bs)
    p_bs.add_argument("--iterations", type=int, default=100_000)
    p_bs.add_argument("--seed", type=int, default=0)
    p_bs.add_argument("--mode", choices=tuple(_CLI_MODES), default="all")
    p_bs.add_argument("--dump-samples", default=None, help="write raw samples CSV to this path")
    p_bs.add_argument(
        "--per-year",
        action="store_true",
        help="record the per-origin-year result decomposition",
    )
    p_bs.add_argument(
        "--workers",
        type=int,
        default=_default_workers(),
        help="worker threads (speed only; default from CDRISK_WORKERS)",
    )
    return parser


def _load(args) -> tuple[CumulativeTriangle, DevelopmentPattern, Optional[TailModel]]:
    text = Path(args.input).read_text(encoding="utf-8")
    tri = parse_triangle(text)
    pattern = fit_pattern(tri)
    tail_model = None
    if args.tail:
        if args.i_ult is None:
            raise ValueError("--i-ult is required with --tail")
        tail_model = fit_tail(pattern, args.i_ult, dist=args.tail_dist)
    return tri, pattern, tail_model


def _emit(data: str, output: Optional[str]) -> None:
    if output is None:
        sys.stdout.write(data)
    else:
        Path(output).write_text(data, encoding="utf-8")


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _cmd_fit(args) -> int:
    _, pattern, tail_model = _load(args)
    if args.format == "json":
        doc = {
            "horizon": pattern.horizon,
            "factors": [float(v) for v in pattern.factors],
            "sigma2": [float(v) for v in pattern.sigma2],
        }
        if tail_model is not None:
            doc["tail"] = {
                "factor": tail_model.factor,
                "variance": tail_model.variance,
                "slope": tail_model.slope,
                "intercept": tail_model.intercept,
                "ultimate_horizon": tail_model.ultimate_horizon,
                "dist": tail_model.dist,
                "used_points": list(tail_model.used_points),
            }
        data = json.dumps(doc, indent=2) + "\n"
    else:
        lines = ["column,factor,sigma2"]
        for j in range(pattern.horizon):
            lines.append(f"{j},{pattern.factors[j]!r},{pattern.sigma2[j]!r}")
        if tail_model is not None:
            lines.append(f"ultimate,{tail_model.factor!r},{tail_model.variance!r}")
        data = "\n".join(lines) + "\n"
    _emit(data, args.output)

    print("development pattern:", file=sys.stderr)
    for j in range(pattern.horizon):
        print(
            f"  column {j}: factor {_fmt(pattern.factors[j])}  "
            f"sigma2 {_fmt(pattern.sigma2[j])}",
            file=sys.stderr,
        )
    if tail_model is not None:
        print(
            f"  tail: factor {_fmt(tail_model.factor)}  "
            f"variance {_fmt(tail_model.variance)}",
            file=sys.stderr,
        )
    return 0


def _cmd_closed_form(args) -> int:
    tri, pattern, tail_model = _load(args)
    report = closed_form_report(tri, pattern, tail_model)
    data = report_to_json(report) + "\n" if args.format == "json" else report_to_csv(report)
    _emit(data, args.output)
    print(
        "closed-form totals (std dev): "
        f"estimation {_fmt(report.estimation_total)}  "
        f"process {_fmt(report.process_total)}  "
        f"prediction {_fmt(report.prediction_total)}",
        file=sys.stderr,
    )
    return 0


def _dump_path(base: str, mode: str, multiple: bool) -> Path:
    path = Path(base)
    if not multiple:
        return path
    suffix = path.suffix or ".csv"
    return path.with_name(f"{path.stem}_{mode}{suffix}")


def _cmd_bootstrap(args) -> int:
    tri, pattern, tail_model = _load(args)
    modes = _CLI_MODES[args.mode]
    report = closed_form_report(tri, pattern, tail_model)
    pool = bootstrap.build_residual_pool(tri, pattern)

    dists = {}
    for mode in modes:
        config = bootstrap.BootstrapConfig(
            iterations=args.iterations,
            seed=args.seed,
            mode=mode,
            tail="none" if tail_model is None else args.tail_dist,
            i_ult=args.i_ult,
            workers=max(1, args.workers),
            per_year=args.per_year,
        )
        dists[mode] = bootstrap.run(tri, pattern, config, tail_model, pool=pool)

    table = risk_metrics.compare(report, dists)
    summaries = {mode: risk_metrics.summarize(dist) for mode, dist in dists.items()}

    if args.dump_samples:
        for mode, dist in dists.items():
            buf = io.StringIO()
            bootstrap.dump_samples(dist, buf)
            _dump_path(args.dump_samples, mode, len(modes) > 1).write_text(
                buf.getvalue(), encoding="utf-8"
            )

    if args.format == "json":
        doc = {
            "be_current": next(iter(dists.values())).be_current,
            "iterations": args.iterations,
            "seed": args.seed,
            "tail": "none" if tail_model is None else args.tail_dist,
            "modes": {
                mode: {
                    "mean": s.mean,
                    "std_dev": s.std_dev,
                    "scr": s.scr,
                    "n": s.n,
                    "negative_cumulative_count": dists[mode].negative_cumulative_count,
                    "quantiles": {str(q): v for q, v in s.quantiles.items()},
                }
                for mode, s in summaries.items()
            },
            "comparison": json.loads(risk_metrics.comparison_to_json(table)),
        }
        data = json.dumps(doc, indent=2) + "\n"
    else:
        data = risk_metrics.comparison_to_csv(table)
    _emit(data, args.output)

    for mode, s in summaries.items():
        print(
            f"{mode}: mean {_fmt(s.mean)}  std {_fmt(s.std_dev)}  scr {_fmt(s.scr)}",
            file=sys.stderr,
        )
    for row in table.totals:
        print(
            f"{row.kind}: analytical {_fmt(row.analytical)}  simulated {_fmt(row.simulated)}  "
            f"distance {row.relative_distance:.4%}",
            file=sys.stderr,
        )
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "fit":
            return _cmd_fit(args)
        if args.command == "closed-form":
            return _cmd_closed_form(args)
        return _cmd_bootstrap(args)
    except (TriangleError, TailFitError, ValueError, OSError) as exc:
        print(f"cdrisk: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
