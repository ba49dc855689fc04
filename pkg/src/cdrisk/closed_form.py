"""Analytical one-year error estimators for the claims development result.

Each estimator returns the variance of the one-year claims development
result (the difference between two successive best estimates) attributable
to one source of uncertainty:

* estimation error -- re-estimating development factors from finite data,
* process error -- intrinsic randomness of next year's payments,
* prediction error -- their orthogonal sum, the mean square of predicting
  the observable result by zero.

All three exist with and without a stochastic tail factor.  A separate
estimator gives the mean square error of predicting the true result by the
observable one.  Reports expose standard deviations; variances stay
available on the underlying terms.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .chain_ladder import DevelopmentPattern, project_ultimates
from .tail import TailModel
from .triangle import CumulativeTriangle

__all__ = [
    "ErrorTerms",
    "ClosedFormReport",
    "estimation_error_no_tail",
    "process_error_no_tail",
    "prediction_error_no_tail",
    "msep_true_by_observable",
    "estimation_error_tail",
    "process_error_tail",
    "prediction_error_tail",
    "closed_form_report",
    "report_to_json",
    "report_to_csv",
]


@dataclass(frozen=True)
class ErrorTerms:
    """Variance decomposition of a one-year error across origin years.

    ``per_year[i]`` is the variance for origin year ``i`` (index 0 is zero
    when year 0 carries no uncertainty); ``total`` includes the covariance
    cross terms between origin years.
    """

    per_year: np.ndarray
    total: float

    @property
    def std_per_year(self) -> np.ndarray:
        return np.sqrt(self.per_year)

    @property
    def std_total(self) -> float:
        return float(np.sqrt(self.total))


def _check(tri: CumulativeTriangle, pattern: DevelopmentPattern) -> int:
    if pattern.horizon != tri.horizon:
        raise ValueError("pattern does not match triangle size")
    return tri.horizon


def _estimation_brackets(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> tuple[np.ndarray, np.ndarray]:
    """Per-year estimation variance bracket and covariance bracket.

    ``delta[i]`` scales the squared ultimate into the year-``i`` estimation
    variance.  ``lam[k]`` is the analogous factor for the covariance between
    year ``k`` and any less developed year; it differs from ``delta[k]``
    only in the first term, where the latest diagonal weight replaces the
    full inverse column sum.
    """
    I = tri.horizon
    C = tri.data
    f, s2 = pattern.factors, pattern.sigma2
    si, si1 = pattern.s_i, pattern.s_i1
    delta = np.zeros(I + 1)
    lam = np.zeros(I + 1)
    for i in range(1, I + 1):
        tail_sum = 0.0
        for j in range(I - i + 1, I):
            tail_sum += (C[I - j, j] / si1[j]) ** 2 * s2[j] / (f[j] ** 2 * si[j])
        head = s2[I - i] / (f[I - i] ** 2 * si[I - i])
        delta[i] = head + tail_sum
        lam[i] = (C[i, I - i] / si1[I - i]) * head + tail_sum
    return delta, lam


def _process_brackets(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> tuple[np.ndarray, np.ndarray]:
    """Per-year process variance bracket and covariance bracket.

    Both multiply one-plus terms across the remaining development columns;
    the variance bracket anchors on the year's own diagonal cell, the
    covariance bracket on the enlarged column sum.
    """
    I = tri.horizon
    C = tri.data
    f, s2 = pattern.factors, pattern.sigma2
    si1 = pattern.s_i1
    gamma = np.zeros(I + 1)
    ups = np.zeros(I + 1)
    for i in range(1, I + 1):
        prod = 1.0
        for l in range(I - i + 1, I):
            prod *= 1.0 + s2[l] * C[I - l, l] / (f[l] ** 2 * si1[l] ** 2)
        gamma[i] = (1.0 + s2[I - i] / (f[I - i] ** 2 * C[i, I - i])) * prod - 1.0
        ups[i] = (1.0 + s2[I - i] / (f[I - i] ** 2 * si1[I - i])) * prod - 1.0
    return gamma, ups


def estimation_error_no_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> ErrorTerms:
    """Estimation error variance of the one-year result, no tail factor."""
    I = _check(tri, pattern)
    ult = project_ultimates(tri, pattern)
    delta, lam = _estimation_brackets(tri, pattern)
    per_year = ult * ult * delta
    per_year[0] = 0.0
    total = per_year.sum()
    for k in range(1, I + 1):
        for i in range(k + 1, I + 1):
            total += 2.0 * ult[i] * ult[k] * lam[k]
    return ErrorTerms(per_year, float(total))


def process_error_no_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> ErrorTerms:
    """Process error variance of the one-year result, no tail factor."""
    I = _check(tri, pattern)
    ult = project_ultimates(tri, pattern)
    gamma, ups = _process_brackets(tri, pattern)
    per_year = ult * ult * gamma
    per_year[0] = 0.0
    total = per_year.sum()
    for k in range(1, I + 1):
        for i in range(k + 1, I + 1):
            total += 2.0 * ult[i] * ult[k] * ups[k]
    return ErrorTerms(per_year, float(total))


def prediction_error_no_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> ErrorTerms:
    """Prediction error variance: estimation plus process, which are orthogonal."""
    est = estimation_error_no_tail(tri, pattern)
    proc = process_error_no_tail(tri, pattern)
    return ErrorTerms(est.per_year + proc.per_year, est.total + proc.total)


def msep_true_by_observable(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> ErrorTerms:
    """Mean square error of predicting the true one-year result by the observable one.

    Its process part drops the own-year payment noise shared by both results;
    the estimation part coincides with :func:`estimation_error_no_tail`.
    Defined for the fully developed triangle (no tail variant).
    """
    I = _check(tri, pattern)
    C = tri.data
    f, s2 = pattern.factors, pattern.sigma2
    si1 = pattern.s_i1
    ult = project_ultimates(tri, pattern)
    delta, lam = _estimation_brackets(tri, pattern)

    phi = np.zeros(I + 1)
    for i in range(1, I + 1):
        prod = 1.0
        for l in range(I - i + 1, I):
            prod *= 1.0 + s2[l] * C[I - l, l] / (f[l] ** 2 * si1[l] ** 2)
        own = s2[I - i] / (f[I - i] ** 2 * C[i, I - i])
        phi[i] = ult[i] ** 2 * (1.0 + own) * (prod - 1.0)

    per_year = phi.copy()
    for i in range(1, I + 1):
        per_year[i] += ult[i] ** 2 * delta[i]

    total = per_year.sum()
    for k in range(1, I + 1):
        for i in range(k + 1, I + 1):
            if k == 1:
                psi = 0.0
            else:
                own = s2[I - k] / (f[I - k] ** 2 * C[k, I - k])
                widened = s2[I - k] / (f[I - k] ** 2 * si1[I - k])
                psi = (ult[i] / ult[k]) * (1.0 + widened) / (1.0 + own) * phi[k]
            total += 2.0 * (psi + ult[i] * ult[k] * lam[k])
    return ErrorTerms(per_year, float(total))


def _check_tail(tri: CumulativeTriangle, tail: TailModel) -> None:
    if tail.horizon != tri.horizon:
        raise ValueError("tail model does not match triangle size")


def estimation_error_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern, tail: TailModel
) -> ErrorTerms:
    """Estimation error variance including the stochastic tail factor.

    Year 0 carries pure tail uncertainty; later years compound the tail
    relative variance with the no-tail bracket, and every pair of years is
    coupled at least through the shared tail draw.
    """
    I = _check(tri, pattern)
    _check_tail(tri, tail)
    ult = project_ultimates(tri, pattern, tail)
    delta, lam = _estimation_brackets(tri, pattern)
    rel = tail.variance / (tail.factor * tail.factor)
    rho = 1.0 + rel

    per_year = np.zeros(I + 1)
    per_year[0] = tri.data[0, I] ** 2 * tail.variance
    for i in range(1, I + 1):
        per_year[i] = ult[i] ** 2 * (rho * (1.0 + delta[i]) - 1.0)

    total = per_year.sum()
    for j in range(1, I + 1):
        total += 2.0 * ult[j] * ult[0] * rel
        for i in range(1, j):
            total += 2.0 * ult[i] * ult[j] * (rho * (1.0 + lam[i]) - 1.0)
    return ErrorTerms(per_year, float(total))


def process_error_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern, tail: TailModel
) -> ErrorTerms:
    """Process error variance including the tail factor.

    The tail enters as an expected value only, so year 0 carries no process
    error and the no-tail brackets scale by the squared tail factor through
    the tail-inclusive ultimates.
    """
    I = _check(tri, pattern)
    _check_tail(tri, tail)
    ult = project_ultimates(tri, pattern, tail)
    gamma, ups = _process_brackets(tri, pattern)

    per_year = np.zeros(I + 1)
    for i in range(1, I + 1):
        per_year[i] = ult[i] ** 2 * gamma[i]

    total = per_year.sum()
    for i in range(1, I + 1):
        for j in range(i + 1, I + 1):
            total += 2.0 * ult[i] * ult[j] * ups[i]
    return ErrorTerms(per_year, float(total))


def prediction_error_tail(
    tri: CumulativeTriangle, pattern: DevelopmentPattern, tail: TailModel
) -> ErrorTerms:
    """Prediction error variance including the tail factor."""
    est = estimation_error_tail(tri, pattern, tail)
    proc = process_error_tail(tri, pattern, tail)
    return ErrorTerms(est.per_year + proc.per_year, est.total + proc.total)


@dataclass(frozen=True)
class ClosedFormReport:
    """Analytical errors in standard-deviation units, one row per origin year.

    Without a tail the rows cover years ``1..I`` (year 0 is fully developed);
    with a tail year 0 appears with zero process error.  The true-by-
    observable mean square error is always reported for the developed
    triangle.
    """

    tail_included: bool
    horizon: int
    years: tuple[int, ...]
    estimation: np.ndarray
    process: np.ndarray
    prediction: np.ndarray
    estimation_total: float
    process_total: float
    prediction_total: float
    msep_years: tuple[int, ...]
    msep: np.ndarray
    msep_total: float
    ultimate_horizon: Optional[int] = None
    tail_factor: Optional[float] = None
    tail_variance: Optional[float] = None


def closed_form_report(
    tri: CumulativeTriangle,
    pattern: DevelopmentPattern,
    tail: Optional[TailModel] = None,
) -> ClosedFormReport:
    """Assemble the full analytical report for a triangle."""
    I = _check(tri, pattern)
    if tail is None:
        est = estimation_error_no_tail(tri, pattern)
        proc = process_error_no_tail(tri, pattern)
        years = tuple(range(1, I + 1))
    else:
        est = estimation_error_tail(tri, pattern, tail)
        proc = process_error_tail(tri, pattern, tail)
        years = tuple(range(0, I + 1))
    pred = ErrorTerms(est.per_year + proc.per_year, est.total + proc.total)
    msep = msep_true_by_observable(tri, pattern)
    lo = years[0]
    return ClosedFormReport(
        tail_included=tail is not None,
        horizon=I,
        years=years,
        estimation=est.std_per_year[lo:],
        process=proc.std_per_year[lo:],
        prediction=pred.std_per_year[lo:],
        estimation_total=est.std_total,
        process_total=proc.std_total,
        prediction_total=pred.std_total,
        msep_years=tuple(range(1, I + 1)),
        msep=msep.std_per_year[1:],
        msep_total=msep.std_total,
        ultimate_horizon=None if tail is None else tail.ultimate_horizon,
        tail_factor=None if tail is None else tail.factor,
        tail_variance=None if tail is None else tail.variance,
    )


def report_to_json(report: ClosedFormReport) -> str:
    """Serialize a report to JSON at full float precision."""
    doc = {
        "tail_included": report.tail_included,
        "horizon": report.horizon,
        "per_year": [
            {
                "year": y,
                "estimation": float(report.estimation[k]),
                "process": float(report.process[k]),
                "prediction": float(report.prediction[k]),
            }
            for k, y in enumerate(report.years)
        ],
        "total": {
            "estimation": report.estimation_total,
            "process": report.process_total,
            "prediction": report.prediction_total,
        },
        "msep_true_by_observable": {
            "per_year": [
                {"year": y, "msep": float(report.msep[k])}
                for k, y in enumerate(report.msep_years)
            ],
            "total": report.msep_total,
        },
    }
    if report.tail_included:
        doc["tail"] = {
            "ultimate_horizon": report.ultimate_horizon,
            "factor": report.tail_factor,
            "variance": report.tail_variance,
        }
    return json.dumps(doc, indent=2)


def report_to_csv(report: ClosedFormReport) -> str:
    """Serialize the per-year rows plus total to CSV."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["year", "estimation", "process", "prediction"])
    for k, y in enumerate(report.years):
        writer.writerow(
            [
                y,
                repr(float(report.estimation[k])),
                repr(float(report.process[k])),
                repr(float(report.prediction[k])),
            ]
        )
    writer.writerow(
        [
            "total",
            repr(report.estimation_total),
            repr(report.process_total),
            repr(report.prediction_total),
        ]
    )
    return buf.getvalue()
