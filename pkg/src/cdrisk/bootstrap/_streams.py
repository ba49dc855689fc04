"""Counter-based random streams for the bootstrap engine.

Each bootstrap iteration ``b`` under master seed ``s`` owns an independent
substream: the Philox4x64-10 keystream with key ``(s, 0)`` and counter
``(block, 0, b, 0)``.  The stream is a pure function of ``(s, b)``, so
results never depend on batch scheduling or worker count, and the compiled
kernel regenerates the identical stream in C.

The block index starts at 1, matching ``numpy.random.Philox(key=s,
counter=[0, 0, b, 0])``, which advances its counter before emitting its
first block; equivalence with numpy's generator is pinned by a test.

Each 4-word block yields four draws.  A draw is the top 53 bits of a word,
returned as a float ("hi53"); consumers map it to the closed unit interval
``hi * 2**-53`` for resampling indices, or to the open interval
``(hi + 0.5) * 2**-53`` before an inverse-CDF transform.
"""

from __future__ import annotations

import numpy as np

__all__ = ["FIRST_BLOCK", "U53_INV", "philox4x64_10", "hi53_matrix"]

FIRST_BLOCK = 1
U53_INV = 2.0**-53

_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)
_MASK32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S11 = np.uint64(11)


def _mulhi64(a, b):
    # portable high word of the 64x64 product via 32-bit limbs
    ah = a >> _S32
    al = a & _MASK32
    bh = b >> _S32
    bl = b & _MASK32
    t = ah * bl + ((al * bl) >> _S32)
    t2 = al * bh + (t & _MASK32)
    return ah * bh + (t >> _S32) + (t2 >> _S32)


def philox4x64_10(c0, c1, c2, c3, k0, k1):
    """One Philox4x64-10 block per element; counters may be arrays."""
    x0 = np.asarray(c0, dtype=np.uint64)
    x1 = np.asarray(c1, dtype=np.uint64)
    x2 = np.asarray(c2, dtype=np.uint64)
    x3 = np.asarray(c3, dtype=np.uint64)
    k0 = np.uint64(k0)
    k1 = np.uint64(k1)
    with np.errstate(over="ignore"):
        for r in range(10):
            if r > 0:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0 = _mulhi64(_M0, x0)
            lo0 = _M0 * x0
            hi1 = _mulhi64(_M1, x2)
            lo1 = _M1 * x2
            x0, x1, x2, x3 = hi1 ^ x1 ^ k0, lo1, hi0 ^ x3 ^ k1, lo0
    return x0, x1, x2, x3


def hi53_matrix(seed: int, start: int, count: int, n_draws: int) -> np.ndarray:
    """Draws for iterations ``start .. start + count - 1`` as hi53 floats.

    Row ``r`` holds the first ``n_draws`` draws of iteration ``start + r``'s
    substream, in stream order.
    """
    if count == 0 or n_draws == 0:
        return np.zeros((count, n_draws))
    blocks = (n_draws + 3) // 4
    its = np.arange(start, start + count, dtype=np.uint64)
    blk = np.arange(FIRST_BLOCK, FIRST_BLOCK + blocks, dtype=np.uint64)
    c0 = np.broadcast_to(blk, (count, blocks)).ravel()
    c2 = np.repeat(its, blocks)
    w0, w1, w2, w3 = philox4x64_10(c0, 0, c2, 0, seed, 0)
    words = np.stack([w0, w1, w2, w3], axis=1).reshape(count, 4 * blocks)
    return (words[:, :n_draws] >> _S11).astype(np.float64)
