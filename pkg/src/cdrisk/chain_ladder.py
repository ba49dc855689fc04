"""Chain-ladder development pattern fitting and deterministic projection.

Fits volume-weighted development factors and the per-column variance
parameters of the distribution-free chain-ladder model, then projects
ultimates and the best estimate of outstanding claims at the valuation date.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional

import numpy as np

from .triangle import CumulativeTriangle

if TYPE_CHECKING:
    from .tail import TailModel

__all__ = ["DevelopmentPattern", "fit_pattern", "project_ultimates", "best_estimate"]


@dataclass(frozen=True)
class DevelopmentPattern:
    """Fitted development factors and variance parameters for a triangle.

    Attributes
    ----------
    factors : ndarray, shape (I,)
        Volume-weighted development factors taking column ``j`` to ``j + 1``.
    sigma2 : ndarray, shape (I,)
        Variance parameters of the individual factors around ``factors[j]``;
        the last entry uses the standard extrapolation from the two prior
        columns.
    s_i : ndarray, shape (I,)
        Column sums over the rows observed through column ``j + 1``, i.e.
        ``sum(C[i, j] for i in 0..I-j-1)``.
    s_i1 : ndarray, shape (I,)
        Column sums including the latest diagonal cell,
        ``s_i[j] + C[I-j, j]`` (the denominator once next year's diagonal
        lands).
    next_col_sums : ndarray, shape (I,)
        ``sum(C[i, j+1] for i in 0..I-j-1)``, the numerator of ``factors[j]``.
    individual_factors : ndarray, shape (I, I)
        Per-cell link ratios ``C[i, j+1] / C[i, j]`` for ``i + j <= I - 1``,
        NaN elsewhere.
    """

    factors: np.ndarray
    sigma2: np.ndarray
    s_i: np.ndarray
    s_i1: np.ndarray
    next_col_sums: np.ndarray
    individual_factors: np.ndarray

    @property
    def horizon(self) -> int:
        return len(self.factors)

    def individual_factor(self, i: int, j: int) -> float:
        v = self.individual_factors[i, j]
        if np.isnan(v):
            raise IndexError(f"no individual factor at ({i},{j})")
        return float(v)


def fit_pattern(tri: CumulativeTriangle) -> DevelopmentPattern:
    """Fit development factors and variance parameters from a triangle.

    Requires at least three origin years (``I >= 2``).  The last variance
    parameter is extrapolated as ``min(sigma2[I-2]**2 / sigma2[I-3],
    sigma2[I-3], sigma2[I-2])``; when ``sigma2[I-3]`` is zero the ratio is
    taken as 0 if ``sigma2[I-2]`` is also zero, else infinite, so a fully
    deterministic triangle keeps a zero last variance.  For ``I == 2`` the
    extrapolation has no inputs and ``sigma2[I-1]`` falls back to
    ``sigma2[I-2]`` with a warning.
    """
    I = tri.horizon
    if I < 2:
        raise ValueError(f"triangle too small to fit: need I >= 2, got I = {I}")
    C = tri.data

    factors = np.zeros(I)
    sigma2 = np.zeros(I)
    s_i = np.zeros(I)
    s_i1 = np.zeros(I)
    next_col_sums = np.zeros(I)
    individual = np.full((I, I), np.nan)

    for j in range(I):
        n_obs = I - j  # rows with both C[i, j] and C[i, j+1] observed
        cur = C[:n_obs, j]
        nxt = C[:n_obs, j + 1]
        s_i[j] = cur.sum()
        s_i1[j] = s_i[j] + C[n_obs, j]
        next_col_sums[j] = nxt.sum()
        factors[j] = next_col_sums[j] / s_i[j]
        individual[:n_obs, j] = nxt / cur
        if n_obs >= 2:
            dev = individual[:n_obs, j] - factors[j]
            sigma2[j] = float(cur @ (dev * dev)) / (n_obs - 1)

    if I >= 3:
        lo = min(sigma2[I - 3], sigma2[I - 2])
        if sigma2[I - 3] == 0.0:
            ratio = 0.0 if sigma2[I - 2] == 0.0 else np.inf
        else:
            ratio = sigma2[I - 2] ** 2 / sigma2[I - 3]
        sigma2[I - 1] = min(ratio, lo)
    else:
        warnings.warn(
            "triangle has only three origin years; last variance parameter "
            "copied from the previous column",
            stacklevel=2,
        )
        sigma2[I - 1] = sigma2[I - 2]

    for arr in (factors, sigma2, s_i, s_i1, next_col_sums, individual):
        arr.flags.writeable = False
    return DevelopmentPattern(factors, sigma2, s_i, s_i1, next_col_sums, individual)


def project_ultimates(
    tri: CumulativeTriangle,
    pattern: DevelopmentPattern,
    tail: Optional["TailModel"] = None,
) -> np.ndarray:
    """Project each origin year to its ultimate cumulative amount.

    Without a tail the ultimate of year ``i`` is the latest diagonal value
    carried forward through the remaining fitted factors (year 0 is already
    fully developed).  With a tail every ultimate, including year 0, is
    multiplied by the tail factor.
    """
    I = tri.horizon
    if pattern.horizon != I:
        raise ValueError("pattern does not match triangle size")
    ultimates = np.empty(I + 1)
    for i in range(I + 1):
        v = tri.data[i, I - i]
        for j in range(I - i, I):
            v *= pattern.factors[j]
        ultimates[i] = v
    if tail is not None:
        if tail.ultimate_horizon <= I:
            raise ValueError("tail ultimate horizon must exceed the triangle horizon")
        ultimates *= tail.factor
    return ultimates


def best_estimate(
    tri: CumulativeTriangle,
    pattern: DevelopmentPattern,
    tail: Optional["TailModel"] = None,
) -> float:
    """Best estimate of outstanding claims at the valuation date.

    Sum over origin years of projected ultimate minus latest diagonal; the
    year-0 term is zero without a tail.
    """
    ultimates = project_ultimates(tri, pattern, tail)
    diag = tri.latest_diagonal()
    total = 0.0
    for i in range(tri.n_origin_years):
        total += ultimates[i] - diag[i]
    return total
