# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled bootstrap kernel.

Same per-iteration recipe as ``_kernel_py`` (see its docstring for the
canonical step order); the two must stay in lockstep so a given seed yields
bit-identical samples on either backend.  The Philox4x64-10 stream is
regenerated in C here, one block buffer per iteration.
"""

import numpy as np

from libc.math cimport exp
from libc.stdint cimport int64_t, uint64_t

from scipy.special.cython_special cimport ndtri

from ._context import TAIL_FIXED, TAIL_LOGNORMAL, TAIL_NORMAL

cdef uint64_t M0 = <uint64_t>0xD2E7470EE14C6C93
cdef uint64_t M1 = <uint64_t>0xCA5A826395121157
cdef uint64_t W0 = <uint64_t>0x9E3779B97F4A7C15
cdef uint64_t W1 = <uint64_t>0xBB67AE8584CAA73B
cdef uint64_t FIRST_BLOCK = 1
cdef double U53_INV = 2.0 ** -53


cdef inline uint64_t _mulhi64(uint64_t a, uint64_t b) nogil:
    cdef uint64_t ah = a >> 32
    cdef uint64_t al = a & <uint64_t>0xFFFFFFFF
    cdef uint64_t bh = b >> 32
    cdef uint64_t bl = b & <uint64_t>0xFFFFFFFF
    cdef uint64_t t = ah * bl + ((al * bl) >> 32)
    cdef uint64_t t2 = al * bh + (t & <uint64_t>0xFFFFFFFF)
    return ah * bh + (t >> 32) + (t2 >> 32)


cdef inline void _philox_block(uint64_t blk, uint64_t it, uint64_t seed,
                               uint64_t* out) nogil:
    cdef uint64_t x0 = blk, x1 = 0, x2 = it, x3 = 0
    cdef uint64_t k0 = seed, k1 = 0
    cdef uint64_t hi0, hi1, lo0, lo1
    cdef int r
    for r in range(10):
        if r > 0:
            k0 = k0 + W0
            k1 = k1 + W1
        hi0 = _mulhi64(M0, x0)
        lo0 = M0 * x0
        hi1 = _mulhi64(M1, x2)
        lo1 = M1 * x2
        x0 = hi1 ^ x1 ^ k0
        x1 = lo1
        x2 = hi0 ^ x3 ^ k1
        x3 = lo0
    out[0] = x0
    out[1] = x1
    out[2] = x2
    out[3] = x3


cdef inline void _fill_hi53(uint64_t seed, uint64_t it, Py_ssize_t n_draws,
                            double* out) nogil:
    cdef uint64_t buf[4]
    cdef uint64_t blk = FIRST_BLOCK
    cdef Py_ssize_t k = 0
    cdef int pos
    while k < n_draws:
        _philox_block(blk, it, seed, buf)
        blk += 1
        for pos in range(4):
            if k >= n_draws:
                break
            out[k] = <double>(buf[pos] >> 11)
            k += 1


def run_batch(object ctx, Py_ssize_t start, Py_ssize_t count,
              double[::1] paid, double[::1] be_next, double[::1] cdr,
              object cdr_year_obj):
    cdef Py_ssize_t I = ctx.horizon
    cdef const double[::1] pool = ctx.pool
    cdef const int64_t[::1] tcol = ctx.target_col
    cdef const double[::1] kappa = ctx.target_kappa
    cdef const double[::1] fhat = ctx.fhat
    cdef const double[::1] s_i = ctx.s_i
    cdef const double[::1] s_i1 = ctx.s_i1
    cdef const double[::1] ncs = ctx.next_col_sums
    cdef const double[::1] diag = ctx.diag
    cdef const double[::1] sd_next = ctx.sd_next
    cdef const double[::1] be_rows = ctx.be_rows
    cdef double c0_final = ctx.c0_final
    cdef double be_current = ctx.be_current
    cdef int tail_kind = ctx.tail_kind
    cdef double tail_mean = ctx.tail_mean
    cdef double tail_sd = ctx.tail_sd
    cdef double tail_log_m = ctx.tail_log_m
    cdef double tail_log_s = ctx.tail_log_s
    cdef bint do_resample = ctx.do_resample
    cdef bint do_process = ctx.do_process
    cdef bint per_year = ctx.per_year
    cdef uint64_t seed = ctx.seed
    cdef Py_ssize_t n_u = ctx.n_index_draws
    cdef Py_ssize_t n_draws = ctx.n_draws
    cdef Py_ssize_t n_targets = tcol.shape[0]
    cdef double npool = <double>pool.shape[0]

    cdef int k_fixed = TAIL_FIXED
    cdef int k_normal = TAIL_NORMAL
    cdef int k_lognormal = TAIL_LOGNORMAL

    cdef double[:, ::1] cdr_year
    if per_year:
        cdr_year = cdr_year_obj

    cdef double[::1] hi = np.empty(max(n_draws, 1))
    cdef double[::1] colacc = np.empty(I)
    cdef double[::1] f_now = np.empty(I)
    cdef double[::1] f_next = np.empty(I)
    cdef double[::1] cb = np.empty(I + 1)

    cdef Py_ssize_t it, b, c, idx
    cdef Py_ssize_t i, j
    cdef long negatives = 0
    cdef double u, z, zt, m, v, ft, ult, row, be_acc, paid_acc, prod

    with nogil:
        for it in range(count):
            b = start + it
            _fill_hi53(seed, <uint64_t>b, n_draws, &hi[0])

            for j in range(I):
                colacc[j] = 0.0
            if do_resample:
                for c in range(n_targets):
                    u = hi[c] * U53_INV
                    idx = <Py_ssize_t>(u * npool)
                    colacc[tcol[c]] += kappa[c] * pool[idx]
            for j in range(I):
                f_now[j] = fhat[j] + colacc[j] / s_i[j]

            cb[0] = c0_final
            paid_acc = 0.0
            for i in range(1, I + 1):
                m = diag[i] * f_now[I - i]
                if do_process:
                    z = ndtri((hi[n_u + i - 1] + 0.5) * U53_INV)
                    v = m + sd_next[i] * z
                else:
                    v = m
                if v < 0.0:
                    negatives += 1
                cb[i] = v
                paid_acc = paid_acc + (v - diag[i])

            for j in range(I):
                f_next[j] = (ncs[j] + cb[I - j]) / s_i1[j]

            if tail_kind == k_fixed:
                ft = tail_mean
            else:
                zt = ndtri((hi[n_draws - 1] + 0.5) * U53_INV)
                if tail_kind == k_normal:
                    ft = tail_mean + tail_sd * zt
                else:
                    ft = exp(tail_log_m + tail_log_s * zt)

            ult = ft * c0_final
            row = ult - c0_final
            be_acc = row
            if per_year:
                cdr_year[b, 0] = be_rows[0] - 0.0 - row
            ult = ft * cb[1]
            row = ult - cb[1]
            be_acc = be_acc + row
            if per_year:
                cdr_year[b, 1] = be_rows[1] - (cb[1] - diag[1]) - row
            prod = 1.0
            for i in range(2, I + 1):
                prod = prod * f_next[I - i + 1]
                ult = ft * (prod * cb[i])
                row = ult - cb[i]
                be_acc = be_acc + row
                if per_year:
                    cdr_year[b, i] = be_rows[i] - (cb[i] - diag[i]) - row

            paid[b] = paid_acc
            be_next[b] = be_acc
            cdr[b] = be_current - paid_acc - be_acc
    return int(negatives)
