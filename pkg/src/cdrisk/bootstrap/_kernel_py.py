"""Pure-numpy bootstrap kernel, vectorized across a batch of iterations.

This module and ``_kernel_cy`` implement the same per-iteration recipe and
must stay in lockstep, including the order of floating-point accumulation,
so both produce bit-identical samples from the same seed:

1. draw one resampling index per target cell (row-major) and accumulate
   each column's weighted residual contribution in visit order;
2. pseudo development factors: ``fhat[j] + colsum[j] / s_i[j]``;
3. next-diagonal payments per origin year ``1..I`` (a normal draw unless
   process noise is off), accumulating the paid amount in year order;
4. re-estimated factors ``(next_col_sums[j] + cb[I - j]) / s_i1[j]``;
5. one tail factor draw (normal or mean/variance-matched lognormal);
6. next year's best estimate: rows 0 and 1 are tail-only, later rows
   cascade the re-estimated factors, accumulated in year order;
7. the result: ``be_current - paid - be_next``.

The only cross-kernel divergence allowed is the last-ulp rounding of the
lognormal ``exp`` (libm vs numpy's vectorized exp).
"""

from __future__ import annotations

import numpy as np
from scipy.special import ndtri

from ._context import TAIL_FIXED, TAIL_LOGNORMAL, TAIL_NORMAL, RunContext
from ._streams import U53_INV, hi53_matrix

__all__ = ["run_batch"]


def run_batch(
    ctx: RunContext,
    start: int,
    count: int,
    paid: np.ndarray,
    be_next: np.ndarray,
    cdr: np.ndarray,
    cdr_year: np.ndarray | None,
) -> int:
    I = ctx.horizon
    end = start + count
    draws = hi53_matrix(ctx.seed, start, count, ctx.n_draws)

    # steps 1-2: column sums of kappa-weighted residuals, then pseudo factors
    colsum = np.zeros((I, count))
    if ctx.do_resample:
        n_u = ctx.n_index_draws
        u = draws[:, :n_u] * U53_INV
        idx = (u * len(ctx.pool)).astype(np.int64)
        res = ctx.pool[idx]
        for c in range(n_u):
            colsum[ctx.target_col[c]] += ctx.target_kappa[c] * res[:, c]
    f_now = ctx.fhat[:, None] + colsum / ctx.s_i[:, None]

    # step 3: simulated next-diagonal cumulatives and the paid amount
    cb = np.empty((I + 1, count))
    cb[0] = ctx.c0_final
    paid_acc = np.zeros(count)
    negatives = 0
    if ctx.do_process:
        z = ndtri((draws[:, ctx.n_index_draws : ctx.n_index_draws + I] + 0.5) * U53_INV)
    for i in range(1, I + 1):
        m = ctx.diag[i] * f_now[I - i]
        if ctx.do_process:
            v = m + ctx.sd_next[i] * z[:, i - 1]
        else:
            v = m
        negatives += int((v < 0.0).sum())
        cb[i] = v
        paid_acc = paid_acc + (v - ctx.diag[i])

    # step 4: factors re-estimated with the simulated diagonal appended
    f_next = np.empty((I, count))
    for j in range(I):
        f_next[j] = (ctx.next_col_sums[j] + cb[I - j]) / ctx.s_i1[j]

    # step 5: tail factor
    if ctx.tail_kind == TAIL_FIXED:
        ft = ctx.tail_mean
    else:
        zt = ndtri((draws[:, ctx.n_draws - 1] + 0.5) * U53_INV)
        if ctx.tail_kind == TAIL_NORMAL:
            ft = ctx.tail_mean + ctx.tail_sd * zt
        elif ctx.tail_kind == TAIL_LOGNORMAL:
            ft = np.exp(ctx.tail_log_m + ctx.tail_log_s * zt)
        else:
            raise ValueError(f"unknown tail kind {ctx.tail_kind}")

    # step 6: next year's best estimate, rows in year order
    ult = ft * ctx.c0_final
    row = ult - ctx.c0_final
    be_acc = np.zeros(count) + row
    if ctx.per_year:
        cdr_year[start:end, 0] = ctx.be_rows[0] - 0.0 - row
    ult = ft * cb[1]
    row = ult - cb[1]
    be_acc = be_acc + row
    if ctx.per_year:
        cdr_year[start:end, 1] = ctx.be_rows[1] - (cb[1] - ctx.diag[1]) - row
    prod = np.ones(count)
    for i in range(2, I + 1):
        prod = prod * f_next[I - i + 1]
        ult = ft * (prod * cb[i])
        row = ult - cb[i]
        be_acc = be_acc + row
        if ctx.per_year:
            cdr_year[start:end, i] = ctx.be_rows[i] - (cb[i] - ctx.diag[i]) - row

    paid[start:end] = paid_acc
    be_next[start:end] = be_acc
    cdr[start:end] = ctx.be_current - paid_acc - be_acc
    return negatives
