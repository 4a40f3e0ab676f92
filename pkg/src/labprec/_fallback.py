"""Pure numpy implementation of the resampling kernels.

Mirrors ``_kernels.pyx`` operation for operation; the two produce identical
bits.  Used when the compiled extension is unavailable or when
``LABPREC_PURE_PYTHON`` is set.
"""

import numpy as np

from .model import canonical_sums
from .rng import PHILOX_M0, PHILOX_M1, PHILOX_ROUNDS, PHILOX_W0, PHILOX_W1

NAME = "numpy"

BOOT_I, BOOT_J_SINGLE, BOOT_J_REPEATED, BOOT_IJ_REPEATED, BOOT_IJ_SINGLE = range(5)

_U32 = np.uint64(0xFFFFFFFF)
_S32 = np.uint64(32)
_S12 = np.uint64(12)
_CHUNK = 256


def _split(c):
    return np.uint64(c & 0xFFFFFFFF), np.uint64(c >> 32)


_M0 = (np.uint64(PHILOX_M0),) + _split(PHILOX_M0)
_M1 = (np.uint64(PHILOX_M1),) + _split(PHILOX_M1)


def _mulhilo(a, m):
    full, b_lo, b_hi = m
    a_lo = a & _U32
    a_hi = a >> _S32
    ll = a_lo * b_lo
    lh = a_lo * b_hi
    hl = a_hi * b_lo
    mid = (ll >> _S32) + (lh & _U32) + (hl & _U32)
    hi = a_hi * b_hi + (lh >> _S32) + (hl >> _S32) + (mid >> _S32)
    return hi, a * full


def philox_blocks(counter0, key0, key1):
    """Philox4x64-10 of counters ``(counter0, 0, 0, 0)``; arguments broadcast.

    Returns a ``(..., 4)`` uint64 array.
    """
    c0, k0, k1 = np.broadcast_arrays(np.asarray(counter0, dtype=np.uint64),
                                     np.asarray(key0, dtype=np.uint64),
                                     np.asarray(key1, dtype=np.uint64))
    c0 = c0.copy()
    c1 = np.zeros_like(c0)
    c2 = np.zeros_like(c0)
    c3 = np.zeros_like(c0)
    k0 = k0.copy()
    k1 = k1.copy()
    w0 = np.uint64(PHILOX_W0)
    w1 = np.uint64(PHILOX_W1)
    for r in range(PHILOX_ROUNDS):
        if r:
            k0 += w0
            k1 += w1
        hi0, lo0 = _mulhilo(c0, _M0)
        hi1, lo1 = _mulhilo(c2, _M1)
        c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return np.stack([c0, c1, c2, c3], axis=-1)


def stream_words(key0, key1, count):
    """First ``count`` words of the streams keyed ``(key0, key1[t])``.

    ``key1`` is a 1-d array of stream indices; the result has shape
    ``(len(key1), count)``.
    """
    key1 = np.asarray(key1, dtype=np.uint64).reshape(-1, 1)
    nblocks = -(-count // 4)
    blocks = philox_blocks(np.arange(nblocks, dtype=np.uint64)[None, :], key0, key1)
    return blocks.reshape(key1.shape[0], 4 * nblocks)[:, :count]


def random_words(key0, key1, count):
    return stream_words(key0, [key1], count)[0]


def unit_uniforms(key0, key1, count):
    w = random_words(key0, key1, count)
    return ((w >> _S12).astype(np.float64) + 0.5) * 2.0 ** -52


def _bounded(words, bound):
    return ((words >> _S32) * np.uint64(bound)) >> _S32


def n_draws(scheme, k, n):
    return (k, n, k * n, k + k * n, k + n)[scheme]


def _gather(values, scheme, words):
    k, n = values.shape
    m = words.shape[0]
    rows = np.broadcast_to(np.arange(k), (m, k))
    cols = np.broadcast_to(np.arange(n), (m, k, n))
    if scheme in (BOOT_I, BOOT_IJ_REPEATED, BOOT_IJ_SINGLE):
        rows = _bounded(words[:, :k], k).astype(np.intp)
        words = words[:, k:]
    if scheme in (BOOT_J_SINGLE, BOOT_IJ_SINGLE):
        cols = np.broadcast_to(_bounded(words[:, :n], n).astype(np.intp)[:, None, :], (m, k, n))
    elif scheme in (BOOT_J_REPEATED, BOOT_IJ_REPEATED):
        cols = _bounded(words[:, :k * n], n).astype(np.intp).reshape(m, k, n)
    return values[rows[:, :, None], cols]


def resample(values, scheme, key0, key1):
    values = np.ascontiguousarray(values, dtype=np.float64)
    k, n = values.shape
    words = stream_words(key0, [key1], n_draws(scheme, k, n))
    return _gather(values, scheme, words)[0]


def bootstrap_replicates(values, scheme, key0, stream_start, m):
    """``(m, 3)`` array of (sigma_r2, sigma_L2, sigma_R2); replicate ``t`` uses
    the stream ``(key0, stream_start + t)``."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    k, n = values.shape
    d = n_draws(scheme, k, n)
    out = np.empty((m, 3))
    for start in range(0, m, _CHUNK):
        stop = min(start + _CHUNK, m)
        idx = np.uint64(stream_start) + np.arange(start, stop, dtype=np.uint64)
        y = _gather(values, scheme, stream_words(key0, idx, d))
        ssa, sse = canonical_sums(y)
        msa = ssa / (k - 1)
        mse = sse / (k * (n - 1))
        sl = (msa - mse) / n
        out[start:stop, 0] = mse
        out[start:stop, 1] = sl
        out[start:stop, 2] = mse + sl
    return out
