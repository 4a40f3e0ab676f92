# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled resampling kernels.

Same semantics and floating-point operation order as ``_fallback.py``;
the test suite checks the two agree bit for bit.
"""

import numpy as np

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

cdef extern from *:
    """
    #include <stdint.h>
    #define LP_M0 0xD2E7470EE14C6C93ULL
    #define LP_M1 0xCA5A826395121157ULL
    #define LP_W0 0x9E3779B97F4A7C15ULL
    #define LP_W1 0xBB67AE8584CAA73BULL
    static inline uint64_t lp_mulhilo(uint64_t a, uint64_t b, uint64_t *hi) {
        unsigned __int128 p = (unsigned __int128)a * b;
        *hi = (uint64_t)(p >> 64);
        return (uint64_t)p;
    }
    """
    uint64_t LP_M0
    uint64_t LP_M1
    uint64_t LP_W0
    uint64_t LP_W1
    uint64_t lp_mulhilo(uint64_t a, uint64_t b, uint64_t *hi) nogil

NAME = "cython"

cdef enum:
    DEF_BOOT_I = 0
    DEF_BOOT_J_SINGLE = 1
    DEF_BOOT_J_REPEATED = 2
    DEF_BOOT_IJ_REPEATED = 3
    DEF_BOOT_IJ_SINGLE = 4


cdef struct Stream:
    uint64_t k0
    uint64_t k1
    uint64_t block
    uint64_t buf[4]
    int pos


cdef inline void _philox(uint64_t c0, uint64_t k0, uint64_t k1, uint64_t *out) noexcept nogil:
    cdef uint64_t c1 = 0, c2 = 0, c3 = 0
    cdef uint64_t hi0, hi1, lo0, lo1
    cdef int r
    for r in range(10):
        if r:
            k0 += LP_W0
            k1 += LP_W1
        lo0 = lp_mulhilo(LP_M0, c0, &hi0)
        lo1 = lp_mulhilo(LP_M1, c2, &hi1)
        c0 = hi1 ^ c1 ^ k0
        c1 = lo1
        c2 = hi0 ^ c3 ^ k1
        c3 = lo0
    out[0] = c0
    out[1] = c1
    out[2] = c2
    out[3] = c3


cdef inline void _stream_init(Stream *s, uint64_t k0, uint64_t k1) noexcept nogil:
    s.k0 = k0
    s.k1 = k1
    s.block = 0
    s.pos = 4


cdef inline uint64_t _next(Stream *s) noexcept nogil:
    if s.pos == 4:
        _philox(s.block, s.k0, s.k1, s.buf)
        s.block += 1
        s.pos = 0
    s.pos += 1
    return s.buf[s.pos - 1]


cdef inline Py_ssize_t _bounded(uint64_t w, uint64_t bound) noexcept nogil:
    return <Py_ssize_t>(((w >> 32) * bound) >> 32)


cdef void _draw(const double[:, ::1] v, int scheme, Stream *s, Py_ssize_t k, Py_ssize_t n,
                Py_ssize_t *rows, Py_ssize_t *cols, double *y) noexcept nogil:
    cdef Py_ssize_t i, j
    for i in range(k):
        rows[i] = i
    for j in range(k * n):
        cols[j] = j % n
    if scheme == DEF_BOOT_I or scheme == DEF_BOOT_IJ_REPEATED or scheme == DEF_BOOT_IJ_SINGLE:
        for i in range(k):
            rows[i] = _bounded(_next(s), k)
    if scheme == DEF_BOOT_J_SINGLE or scheme == DEF_BOOT_IJ_SINGLE:
        for j in range(n):
            cols[j] = _bounded(_next(s), n)
        for i in range(1, k):
            for j in range(n):
                cols[i * n + j] = cols[j]
    elif scheme == DEF_BOOT_J_REPEATED or scheme == DEF_BOOT_IJ_REPEATED:
        for j in range(k * n):
            cols[j] = _bounded(_next(s), n)
    for i in range(k):
        for j in range(n):
            y[i * n + j] = v[rows[i], cols[i * n + j]]


cdef void _triple(const double *y, Py_ssize_t k, Py_ssize_t n, double *rm, double *res) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double s, gm, ssa, sse, acc, d, msa, mse, sl
    for i in range(k):
        s = 0.0
        for j in range(n):
            s = s + y[i * n + j]
        rm[i] = s / n
    gm = 0.0
    for i in range(k):
        gm = gm + rm[i]
    gm = gm / k
    ssa = 0.0
    for i in range(k):
        d = rm[i] - gm
        ssa = ssa + d * d
    ssa = ssa * n
    sse = 0.0
    for i in range(k):
        acc = 0.0
        for j in range(n):
            d = y[i * n + j] - rm[i]
            acc = acc + d * d
        sse = sse + acc
    msa = ssa / (k - 1)
    mse = sse / (k * (n - 1))
    sl = (msa - mse) / n
    res[0] = mse
    res[1] = sl
    res[2] = mse + sl


def random_words(uint64_t key0, uint64_t key1, Py_ssize_t count):
    out = np.empty(count, dtype=np.uint64)
    cdef uint64_t[::1] o = out
    cdef Stream s
    cdef Py_ssize_t i
    _stream_init(&s, key0, key1)
    for i in range(count):
        o[i] = _next(&s)
    return out


def unit_uniforms(uint64_t key0, uint64_t key1, Py_ssize_t count):
    out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef Stream s
    cdef Py_ssize_t i
    _stream_init(&s, key0, key1)
    for i in range(count):
        o[i] = (<double>(_next(&s) >> 12) + 0.5) * 2.220446049250313e-16
    return out


def resample(values, int scheme, uint64_t key0, uint64_t key1):
    cdef const double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t k = v.shape[0], n = v.shape[1]
    out = np.empty((k, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Stream s
    cdef Py_ssize_t *rows = <Py_ssize_t *>malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cols = <Py_ssize_t *>malloc(k * n * sizeof(Py_ssize_t))
    if rows == NULL or cols == NULL:
        free(rows)
        free(cols)
        raise MemoryError()
    try:
        _stream_init(&s, key0, key1)
        _draw(v, scheme, &s, k, n, rows, cols, &o[0, 0])
    finally:
        free(rows)
        free(cols)
    return out


def bootstrap_replicates(values, int scheme, uint64_t key0, uint64_t stream_start, Py_ssize_t m):
    cdef const double[:, ::1] v = np.ascontiguousarray(values, dtype=np.float64)
    cdef Py_ssize_t k = v.shape[0], n = v.shape[1]
    if k < 2 or n < 2:
        raise ValueError("need k >= 2 and n >= 2")
    out = np.empty((m, 3), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef Stream s
    cdef Py_ssize_t t
    cdef Py_ssize_t *rows = <Py_ssize_t *>malloc(k * sizeof(Py_ssize_t))
    cdef Py_ssize_t *cols = <Py_ssize_t *>malloc(k * n * sizeof(Py_ssize_t))
    cdef double *y = <double *>malloc(k * n * sizeof(double))
    cdef double *rm = <double *>malloc(k * sizeof(double))
    if rows == NULL or cols == NULL or y == NULL or rm == NULL:
        free(rows)
        free(cols)
        free(y)
        free(rm)
        raise MemoryError()
    try:
        with nogil:
            for t in range(m):
                _stream_init(&s, key0, stream_start + <uint64_t>t)
                _draw(v, scheme, &s, k, n, rows, cols, y)
                _triple(y, k, n, rm, &o[t, 0])
    finally:
        free(rows)
        free(cols)
        free(y)
        free(rm)
    return out
