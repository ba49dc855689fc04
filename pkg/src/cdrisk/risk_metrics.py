"""Summary statistics, quantiles, capital requirement, and comparison tables.

The solvency capital for reserve risk is the negative of the 0.5% quantile
of the one-year claims development result distribution.  Quantiles use
linear interpolation at rank ``(n - 1) * q`` on the sorted sample.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np

from .bootstrap import CdrDistribution
from .closed_form import ClosedFormReport

__all__ = [
    "DEFAULT_QUANTILES",
    "RiskSummary",
    "ErrorComparison",
    "ComparisonTable",
    "summarize",
    "compare",
    "comparison_to_json",
    "comparison_to_csv",
]

DEFAULT_QUANTILES = (0.005, 0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99, 0.995)

SCR_LEVEL = 0.005

# bootstrap mode isolating each error kind
_MODE_TO_KIND = {
    "full": "prediction",
    "estimation_only": "estimation",
    "process_only": "process",
}


@dataclass(frozen=True)
class RiskSummary:
    """Moments, quantiles, and capital of an empirical result distribution."""

    mean: float
    std_dev: float
    quantiles: dict[float, float]
    scr: float
    n: int


def summarize(
    dist: CdrDistribution | np.ndarray,
    quantiles: Sequence[float] = DEFAULT_QUANTILES,
) -> RiskSummary:
    """Summarize a result distribution (sample std dev, interpolated quantiles).

    The capital requirement is ``-quantile(0.005)`` regardless of the
    quantile levels requested.
    """
    samples = dist.cdr if isinstance(dist, CdrDistribution) else np.asarray(dist, float)
    n = len(samples)
    if n < 2:
        raise ValueError("need at least two samples to summarize")
    for q in quantiles:
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"quantile level {q} outside [0, 1]")
    qs = {float(q): float(np.quantile(samples, q, method="linear")) for q in quantiles}
    scr = -float(np.quantile(samples, SCR_LEVEL, method="linear"))
    return RiskSummary(
        mean=float(samples.mean()),
        std_dev=float(samples.std(ddof=1)),
        quantiles=qs,
        scr=scr,
        n=n,
    )


@dataclass(frozen=True)
class ErrorComparison:
    """Analytical vs simulated standard deviation for one error kind."""

    kind: str
    analytical: float
    simulated: float
    relative_distance: float

    @staticmethod
    def of(kind: str, analytical: float, simulated: float) -> "ErrorComparison":
        rel = abs(simulated / analytical - 1.0) if analytical != 0.0 else abs(simulated)
        return ErrorComparison(kind, analytical, simulated, rel)


@dataclass(frozen=True)
class ComparisonTable:
    """Closed-form vs bootstrap comparison, totals plus optional per-year rows.

    ``per_year[kind]`` maps origin year to an :class:`ErrorComparison` when
    the corresponding distribution carries a per-year breakdown.
    """

    totals: tuple[ErrorComparison, ...]
    per_year: dict[str, dict[int, ErrorComparison]]


def compare(
    report: ClosedFormReport,
    dists: Mapping[str, CdrDistribution] | Sequence[CdrDistribution],
) -> ComparisonTable:
    """Compare analytical errors with the matching bootstrap distributions.

    Each distribution's mode selects the error kind it estimates (full ->
    prediction, estimation_only -> estimation, process_only -> process).
    Distributions must have been run with the same tail setting as the
    report.
    """
    if not isinstance(dists, Mapping):
        dists = {d.mode: d for d in dists}
    analytical_total = {
        "estimation": report.estimation_total,
        "process": report.process_total,
        "prediction": report.prediction_total,
    }
    analytical_year = {
        "estimation": report.estimation,
        "process": report.process,
        "prediction": report.prediction,
    }

    totals = []
    per_year: dict[str, dict[int, ErrorComparison]] = {}
    for mode, dist in dists.items():
        if mode not in _MODE_TO_KIND:
            raise ValueError(f"unknown bootstrap mode {mode!r}")
        if dist.mode != mode:
            raise ValueError(f"distribution under key {mode!r} was run in mode {dist.mode!r}")
        if (dist.tail != "none") != report.tail_included:
            raise ValueError(
                f"tail mismatch: report tail_included={report.tail_included}, "
                f"distribution tail={dist.tail!r}"
            )
        kind = _MODE_TO_KIND[mode]
        simulated = float(np.std(dist.cdr, ddof=1))
        totals.append(ErrorComparison.of(kind, analytical_total[kind], simulated))
        if dist.cdr_by_year is not None:
            rows = {}
            for k, year in enumerate(report.years):
                sim_y = float(np.std(dist.cdr_by_year[:, year], ddof=1))
                rows[year] = ErrorComparison.of(kind, float(analytical_year[kind][k]), sim_y)
            per_year[kind] = rows
    order = {"prediction": 0, "estimation": 1, "process": 2}
    totals.sort(key=lambda row: order[row.kind])
    return ComparisonTable(tuple(totals), per_year)


def comparison_to_json(table: ComparisonTable) -> str:
    doc: dict = {}
    for row in table.totals:
        doc[row.kind] = {
            "analytical": row.analytical,
            "simulated": row.simulated,
            "relative_distance": row.relative_distance,
        }
        years = table.per_year.get(row.kind)
        if years:
            doc[row.kind]["per_year"] = {
                str(y): {
                    "analytical": r.analytical,
                    "simulated": r.simulated,
                    "relative_distance": r.relative_distance,
                }
                for y, r in years.items()
            }
    return json.dumps(doc, indent=2)


def comparison_to_csv(table: ComparisonTable) -> str:
    """CSV mirror of the comparison: one row per (year | total) and kind."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "kind", "analytical", "simulated", "relative_distance"])
    for kind, years in table.per_year.items():
        for y, r in years.items():
            writer.writerow([y, kind, repr(r.analytical), repr(r.simulated), repr(r.relative_distance)])
    for row in table.totals:
        writer.writerow(
            ["total", row.kind, repr(row.analytical), repr(row.simulated), repr(row.relative_distance)]
        )
    return buf.getvalue()
