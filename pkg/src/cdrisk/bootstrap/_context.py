"""Static per-run tables shared by the bootstrap kernels.

Everything a kernel needs per iteration is precomputed here once per run:
resampling-target cells in row-major order with their step-3 coefficients,
column sums, diagonal values, one-year payment standard deviations, the
deterministic best estimate, and the tail sampling parameters.  The context
is read-only during a run and safe to share across worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..chain_ladder import DevelopmentPattern, best_estimate, project_ultimates
from ..tail import TailModel, lognormal_params
from ..triangle import CumulativeTriangle

__all__ = ["RunContext", "build_context"]

TAIL_FIXED = 0
TAIL_NORMAL = 1
TAIL_LOGNORMAL = 2


@dataclass(frozen=True)
class RunContext:
    horizon: int
    pool: np.ndarray          # centered adjusted residuals
    target_col: np.ndarray    # column of each resampling-target cell, row-major
    target_kappa: np.ndarray  # sigma_j * sqrt(C[i, j]) per target cell
    fhat: np.ndarray
    s_i: np.ndarray
    s_i1: np.ndarray
    next_col_sums: np.ndarray
    diag: np.ndarray          # C[i, I - i]
    sd_next: np.ndarray       # sqrt(C[i, I - i] * sigma2[I - i]), index 0 unused
    c0_final: float           # C[0, I]
    be_current: float
    be_rows: np.ndarray       # per-year share of the current best estimate
    tail_kind: int            # TAIL_FIXED / TAIL_NORMAL / TAIL_LOGNORMAL
    tail_mean: float          # 1.0 when no tail is configured
    tail_sd: float
    tail_log_m: float
    tail_log_s: float
    do_resample: bool
    do_process: bool
    per_year: bool
    seed: int
    n_index_draws: int
    n_normal_draws: int
    n_tail_draws: int

    @property
    def n_draws(self) -> int:
        return self.n_index_draws + self.n_normal_draws + self.n_tail_draws


def build_context(
    tri: CumulativeTriangle,
    pattern: DevelopmentPattern,
    pool: np.ndarray,
    tail_model: TailModel | None,
    tail_dist: str,
    mode: str,
    per_year: bool,
    seed: int,
) -> RunContext:
    I = tri.horizon
    C = tri.data
    sigma = np.sqrt(pattern.sigma2)

    cols = []
    kappa = []
    for i in range(I):
        for j in range(I - i):
            cols.append(j)
            kappa.append(sigma[j] * math.sqrt(C[i, j]))
    target_col = np.asarray(cols, dtype=np.int64)
    target_kappa = np.asarray(kappa)

    diag = tri.latest_diagonal()
    sd_next = np.zeros(I + 1)
    for i in range(1, I + 1):
        sd_next[i] = math.sqrt(C[i, I - i] * pattern.sigma2[I - i])

    ult = project_ultimates(tri, pattern, tail_model)
    be_rows = ult - diag
    be_cur = best_estimate(tri, pattern, tail_model)

    do_resample = mode != "process_only"
    do_process = mode != "estimation_only"

    if tail_model is None:
        tail_kind = TAIL_FIXED
        tail_mean, tail_sd = 1.0, 0.0
        log_m = log_s = 0.0
    else:
        tail_mean = tail_model.factor
        tail_sd = math.sqrt(tail_model.variance)
        if not do_resample or tail_model.variance == 0.0:
            # expected-value tail: no draw, bit-exact degenerate runs
            tail_kind = TAIL_FIXED
            log_m = log_s = 0.0
        elif tail_dist == "lognormal":
            tail_kind = TAIL_LOGNORMAL
            log_m, log_s = lognormal_params(tail_model.factor, tail_model.variance)
        else:
            tail_kind = TAIL_NORMAL
            log_m = log_s = 0.0

    n_u = len(target_col) if do_resample else 0
    n_z = I if do_process else 0
    n_t = 1 if tail_kind != TAIL_FIXED else 0

    for arr in (pool, target_col, target_kappa, diag, sd_next, be_rows):
        arr.flags.writeable = False
    return RunContext(
        horizon=I,
        pool=pool,
        target_col=target_col,
        target_kappa=target_kappa,
        fhat=pattern.factors,
        s_i=pattern.s_i,
        s_i1=pattern.s_i1,
        next_col_sums=pattern.next_col_sums,
        diag=diag,
        sd_next=sd_next,
        c0_final=float(C[0, I]),
        be_current=be_cur,
        be_rows=be_rows,
        tail_kind=tail_kind,
        tail_mean=tail_mean,
        tail_sd=tail_sd,
        tail_log_m=log_m,
        tail_log_s=log_s,
        do_resample=do_resample,
        do_process=do_process,
        per_year=per_year,
        seed=seed,
        n_index_draws=n_u,
        n_normal_draws=n_z,
        n_tail_draws=n_t,
    )
