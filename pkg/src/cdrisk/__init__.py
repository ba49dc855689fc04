"""One-year reserve risk from run-off triangles.

Measures the uncertainty of the one-year claims development result of a
cumulative claims triangle two ways: closed-form estimation/process/
prediction errors (with or without a stochastic tail factor) and a one-year
recursive bootstrap producing the full empirical distribution, quantiles,
and the reserve-risk capital requirement.
"""

from .bootstrap import (
    BootstrapConfig,
    CdrDistribution,
    ResidualPool,
    build_residual_pool,
    dump_samples,
)
from .bootstrap import run as run_bootstrap
from .chain_ladder import DevelopmentPattern, best_estimate, fit_pattern, project_ultimates
from .closed_form import (
    ClosedFormReport,
    ErrorTerms,
    closed_form_report,
    estimation_error_no_tail,
    estimation_error_tail,
    msep_true_by_observable,
    prediction_error_no_tail,
    prediction_error_tail,
    process_error_no_tail,
    process_error_tail,
    report_to_csv,
    report_to_json,
)
from .risk_metrics import ComparisonTable, RiskSummary, compare, summarize
from .tail import TailFitError, TailModel, fit_tail, sample_tail
from .triangle import (
    CumulativeTriangle,
    IncrementalTriangle,
    TriangleError,
    parse_triangle,
    serialize_triangle,
    to_cumulative,
    to_incremental,
)

__version__ = "0.1.0"

__all__ = [
    "BootstrapConfig",
    "CdrDistribution",
    "ClosedFormReport",
    "ComparisonTable",
    "CumulativeTriangle",
    "DevelopmentPattern",
    "ErrorTerms",
    "IncrementalTriangle",
    "ResidualPool",
    "RiskSummary",
    "TailFitError",
    "TailModel",
    "TriangleError",
    "best_estimate",
    "build_residual_pool",
    "closed_form_report",
    "compare",
    "dump_samples",
    "estimation_error_no_tail",
    "estimation_error_tail",
    "fit_pattern",
    "fit_tail",
    "msep_true_by_observable",
    "parse_triangle",
    "prediction_error_no_tail",
    "prediction_error_tail",
    "process_error_no_tail",
    "process_error_tail",
    "project_ultimates",
    "report_to_csv",
    "report_to_json",
    "run_bootstrap",
    "sample_tail",
    "serialize_triangle",
    "summarize",
    "to_cumulative",
    "to_incremental",
]
