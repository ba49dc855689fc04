"""Tail factor extrapolation with a delta-method variance estimate.

Development factors in excess of one are extrapolated log-linearly:
``ln(f_j - 1) = a * j + b`` fitted by least squares over the observed
columns, then multiplied out from the triangle horizon to the ultimate
horizon.  The variance of the extrapolated tail factor propagates the
coefficient covariance (residual variance times the inverse normal-equation
matrix) through the gradient of the extrapolation product.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain_ladder import DevelopmentPattern

__all__ = [
    "TailFitError",
    "TailModel",
    "fit_tail",
    "tail_product",
    "tail_product_gradient",
    "sample_tail",
]


class TailFitError(ValueError):
    """Raised when the log-linear tail regression cannot be fitted."""


@dataclass(frozen=True)
class TailModel:
    """Fitted tail extrapolation with first-order uncertainty.

    ``factor`` is the expected tail factor (product of extrapolated
    development factors from ``horizon`` to ``ultimate_horizon - 1``) and
    ``variance`` its delta-method variance.  ``dist`` selects the sampling
    distribution: normal, or lognormal matched to the same mean and variance.
    """

    slope: float
    intercept: float
    horizon: int
    ultimate_horizon: int
    factor: float
    variance: float
    cov: np.ndarray
    resid_var: float
    gradient: np.ndarray
    dist: str = "normal"
    used_points: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.ultimate_horizon <= self.horizon:
            raise TailFitError(
                f"ultimate horizon {self.ultimate_horizon} must exceed "
                f"the observed horizon {self.horizon}"
            )
        if self.dist not in ("normal", "lognormal"):
            raise TailFitError(f"unknown tail distribution {self.dist!r}")
        if self.variance < 0:
            raise TailFitError("negative tail factor variance")


def tail_product(a: float, b: float, horizon: int, ultimate_horizon: int) -> float:
    """Product of extrapolated factors ``1 + exp(a*j + b)`` over the tail columns."""
    out = 1.0
    for j in range(horizon, ultimate_horizon):
        out *= 1.0 + math.exp(a * j + b)
    return out


def tail_product_gradient(
    a: float, b: float, horizon: int, ultimate_horizon: int
) -> np.ndarray:
    """Gradient of :func:`tail_product` in ``(a, b)``, by forward recursion.

    Starting from the single-column product at ``horizon``, each further
    column multiplies the product by ``1 + exp(a*m + b)`` and updates the
    two partial derivatives accordingly.
    """
    if ultimate_horizon <= horizon:
        raise ValueError("ultimate_horizon must exceed horizon")
    e = math.exp(a * horizon + b)
    h = 1.0 + e
    da = horizon * e
    db = e
    for m in range(horizon + 1, ultimate_horizon):
        e = math.exp(a * m + b)
        da = m * e * h + (1.0 + e) * da
        db = e * h + (1.0 + e) * db
        h = (1.0 + e) * h
    return np.array([da, db])


def fit_tail(
    pattern: DevelopmentPattern,
    ultimate_horizon: int,
    dist: str = "normal",
    drop_last: bool = False,
) -> TailModel:
    """Fit the log-linear tail regression on the fitted development factors.

    Columns with factors at or below one are excluded (their log transform is
    undefined); ``drop_last`` additionally excludes the final column, whose
    factor rests on a single observation.  At least three usable points are
    required so the residual variance has a degree of freedom.
    """
    factors = pattern.factors
    I = pattern.horizon
    if ultimate_horizon <= I:
        raise TailFitError(
            f"ultimate horizon {ultimate_horizon} must exceed the observed horizon {I}"
        )
    last = I - 1 if drop_last else I
    used = tuple(j for j in range(last) if factors[j] > 1.0)
    if len(used) < 3:
        raise TailFitError(
            f"need at least 3 usable development factors above 1, found {len(used)}"
        )

    x = np.array(used, dtype=float)
    y = np.log(factors[list(used)] - 1.0)
    X = np.column_stack([x, np.ones_like(x)])
    xtx = X.T @ X
    slope, intercept = np.linalg.solve(xtx, X.T @ y)

    resid = y - (slope * x + intercept)
    resid_var = float(np.mean(resid * resid))  # biased: divides by the point count
    cov = resid_var * np.linalg.inv(xtx)

    factor = tail_product(slope, intercept, I, ultimate_horizon)
    grad = tail_product_gradient(slope, intercept, I, ultimate_horizon)
    variance = float(grad @ cov @ grad)

    cov.flags.writeable = False
    grad.flags.writeable = False
    return TailModel(
        slope=float(slope),
        intercept=float(intercept),
        horizon=I,
        ultimate_horizon=ultimate_horizon,
        factor=factor,
        variance=variance,
        cov=cov,
        resid_var=resid_var,
        gradient=grad,
        dist=dist,
        used_points=used,
    )


def lognormal_params(mean: float, variance: float) -> tuple[float, float]:
    """Location and scale of the lognormal with the given mean and variance."""
    s2 = math.log(1.0 + variance / (mean * mean))
    m = math.log(mean) - 0.5 * s2
    return m, math.sqrt(s2)


def sample_tail(model: TailModel, rng: np.random.Generator, size=None):
    """Draw tail factors from the model's distribution.

    A zero-variance model returns the expected factor exactly.
    """
    if model.variance == 0.0:
        return model.factor if size is None else np.full(size, model.factor)
    if model.dist == "normal":
        return rng.normal(model.factor, math.sqrt(model.variance), size)
    m, s = lognormal_params(model.factor, model.variance)
    return rng.lognormal(m, s, size)
