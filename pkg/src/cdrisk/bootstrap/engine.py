"""One-year recursive bootstrap of the claims development result.

Each iteration resamples standardized residuals of the individual
development factors onto the observed triangle, re-estimates factors,
simulates next year's diagonal payments, re-estimates factors again on the
enlarged data, and re-projects the best estimate one year ahead.  The
iteration's claims development result is the deterministic current best
estimate minus the simulated paid amount minus the simulated next-year best
estimate.

Modes isolate the error sources: ``estimation_only`` skips the payment
noise, ``process_only`` skips residual resampling and tail sampling, and
``full`` keeps both.

Iterations are independent and embarrassingly parallel: each derives its
random substream from ``(seed, iteration)`` alone and batches are fixed-size
slices of the iteration range, so results are bit-identical for any worker
count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import IO, Optional

import numpy as np

from ..chain_ladder import DevelopmentPattern
from ..tail import TailModel
from ..triangle import CumulativeTriangle
from ._backend import get_kernel
from ._context import build_context

__all__ = [
    "MODES",
    "TAILS",
    "ResidualPool",
    "BootstrapConfig",
    "CdrDistribution",
    "build_residual_pool",
    "run",
    "dump_samples",
]

MODES = ("full", "estimation_only", "process_only")
TAILS = ("none", "normal", "lognormal")

BATCH_SIZE = 4096  # fixed batch grid; scheduling must not depend on workers


@dataclass(frozen=True)
class ResidualPool:
    """Centered, bias-adjusted residuals of the individual development factors.

    Residuals are ``sqrt(C[i,j]) * (f[i,j] - fhat[j]) / sigma[j]`` scaled by
    ``sqrt((I-j)/(I-j-1))`` and then centered on the pool mean.  Cells in the
    last factor column are excluded as sources (the adjustment is undefined
    there and the lone residual is identically zero), but remain resampling
    targets.  Columns with zero variance contribute zero-valued residuals.
    """

    residuals: np.ndarray
    cells: tuple[tuple[int, int], ...]
    excluded: tuple[tuple[int, int], ...]
    raw_mean: float

    @property
    def size(self) -> int:
        return len(self.residuals)


def build_residual_pool(
    tri: CumulativeTriangle, pattern: DevelopmentPattern
) -> ResidualPool:
    I = tri.horizon
    if pattern.horizon != I:
        raise ValueError("pattern does not match triangle size")
    C = tri.data
    sigma = np.sqrt(pattern.sigma2)

    values = []
    cells = []
    excluded = []
    for i in range(I):
        for j in range(I - i):
            if j == I - 1:
                excluded.append((i, j))
                continue
            if sigma[j] == 0.0:
                r = 0.0
            else:
                f_ij = pattern.individual_factors[i, j]
                r = math.sqrt(C[i, j]) * (f_ij - pattern.factors[j]) / sigma[j]
            values.append(math.sqrt((I - j) / (I - j - 1)) * r)
            cells.append((i, j))

    arr = np.asarray(values)
    raw_mean = float(arr.mean())
    arr = arr - raw_mean
    arr.flags.writeable = False
    return ResidualPool(arr, tuple(cells), tuple(excluded), raw_mean)


@dataclass(frozen=True)
class BootstrapConfig:
    """Run settings; ``workers`` affects speed only, never the samples."""

    iterations: int
    seed: int = 0
    mode: str = "full"
    tail: str = "none"
    i_ult: Optional[int] = None
    workers: int = 1
    per_year: bool = False

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.tail not in TAILS:
            raise ValueError(f"tail must be one of {TAILS}, got {self.tail!r}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass(frozen=True)
class CdrDistribution:
    """Empirical one-year distribution: one record per iteration.

    ``cdr = be_current - paid - be_next`` holds exactly for every record.
    ``cdr_by_year`` (iterations x origin years) is present when the run was
    configured with ``per_year``.
    """

    paid: np.ndarray
    be_next: np.ndarray
    cdr: np.ndarray
    be_current: float
    negative_cumulative_count: int
    mode: str
    tail: str
    seed: int
    iterations: int
    cdr_by_year: Optional[np.ndarray] = None


def run(
    tri: CumulativeTriangle,
    pattern: DevelopmentPattern,
    config: BootstrapConfig,
    tail_model: Optional[TailModel] = None,
    pool: Optional[ResidualPool] = None,
    kernel: Optional[str] = None,
) -> CdrDistribution:
    """Run the bootstrap and collect the empirical distribution.

    ``tail_model`` must be given exactly when ``config.tail`` is not
    ``"none"``; ``config.i_ult`` must agree with the model's horizon when
    both are set.  A prebuilt ``pool`` may be supplied, e.g. to reuse one
    across modes.
    """
    I = tri.horizon
    if pattern.horizon != I:
        raise ValueError("pattern does not match triangle size")
    if (config.tail != "none") != (tail_model is not None):
        raise ValueError("tail_model must be provided exactly when config.tail != 'none'")
    if tail_model is not None:
        if tail_model.horizon != I:
            raise ValueError("tail model does not match triangle size")
        if config.i_ult is not None and config.i_ult != tail_model.ultimate_horizon:
            raise ValueError(
                f"config.i_ult={config.i_ult} disagrees with the tail model "
                f"horizon {tail_model.ultimate_horizon}"
            )
    if pool is None:
        pool = build_residual_pool(tri, pattern)

    ctx = build_context(
        tri,
        pattern,
        pool.residuals,
        tail_model,
        config.tail,
        config.mode,
        config.per_year,
        config.seed,
    )
    run_batch = get_kernel(kernel)

    n = config.iterations
    paid = np.empty(n)
    be_next = np.empty(n)
    cdr = np.empty(n)
    cdr_year = np.empty((n, I + 1)) if config.per_year else None

    n_batches = (n + BATCH_SIZE - 1) // BATCH_SIZE

    def work(bi: int) -> int:
        s = bi * BATCH_SIZE
        c = min(BATCH_SIZE, n - s)
        return run_batch(ctx, s, c, paid, be_next, cdr, cdr_year)

    if config.workers == 1 or n_batches == 1:
        negatives = sum(work(bi) for bi in range(n_batches))
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as ex:
            negatives = sum(ex.map(work, range(n_batches)))

    for arr in (paid, be_next, cdr):
        arr.flags.writeable = False
    if cdr_year is not None:
        cdr_year.flags.writeable = False
    return CdrDistribution(
        paid=paid,
        be_next=be_next,
        cdr=cdr,
        be_current=ctx.be_current,
        negative_cumulative_count=int(negatives),
        mode=config.mode,
        tail=config.tail,
        seed=config.seed,
        iterations=n,
        cdr_by_year=cdr_year,
    )


def dump_samples(dist: CdrDistribution, out: IO[str]) -> None:
    """Write the raw samples as CSV at full precision.

    Columns are ``iteration,paid_next_year,be_next_year,cdr`` plus one
    ``cdr_year_<i>`` column per origin year when the per-year breakdown was
    recorded.
    """
    header = ["iteration", "paid_next_year", "be_next_year", "cdr"]
    if dist.cdr_by_year is not None:
        header += [f"cdr_year_{i}" for i in range(dist.cdr_by_year.shape[1])]
    out.write(",".join(header) + "\n")
    for b in range(dist.iterations):
        fields = [
            str(b),
            repr(float(dist.paid[b])),
            repr(float(dist.be_next[b])),
            repr(float(dist.cdr[b])),
        ]
        if dist.cdr_by_year is not None:
            fields += [repr(float(v)) for v in dist.cdr_by_year[b]]
        out.write(",".join(fields) + "\n")
