# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels: deterministic projection and univariate depth batches.

Arithmetic contract shared with the numpy fallback (_pyfallback.py): every
projection scalar accumulates its d products one at a time in ascending
coordinate order, each multiply and each add rounded separately (the extension
is compiled with -ffp-contract=off).  Task decomposition -- tiles, chunk
boundaries, worker spans -- may change freely without changing a single bit of
output.  Medians are the midpoint of the two central order statistics.

All span kernels release the GIL so a thread pool can drive disjoint spans
concurrently.
"""

import numpy as np

from libc.math cimport fabs
from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport free, malloc

name = "compiled"


def philox4x32_words(const uint32_t[:, ::1] counter, key0, key1):
    """Philox-4x32-10 over an array of counters; same words as the numpy
    reference implementation, at C speed."""
    cdef Py_ssize_t n = counter.shape[1]
    cdef uint32_t k0_base = <uint32_t> (<uint64_t> key0)
    cdef uint32_t k1_base = <uint32_t> (<uint64_t> key1)
    out_arr = np.empty((4, n), dtype=np.uint32)
    cdef uint32_t[:, ::1] out = out_arr
    cdef uint32_t x0, x1, x2, x3, k0, k1, lo0, lo1, hi0, hi1
    cdef uint64_t p0, p1
    cdef Py_ssize_t i
    cdef int rnd
    with nogil:
        for i in range(n):
            x0 = counter[0, i]
            x1 = counter[1, i]
            x2 = counter[2, i]
            x3 = counter[3, i]
            k0 = k0_base
            k1 = k1_base
            for rnd in range(10):
                p0 = (<uint64_t> x0) * <uint64_t> 0xD2511F53u
                p1 = (<uint64_t> x2) * <uint64_t> 0xCD9E8D57u
                hi0 = <uint32_t> (p0 >> 32)
                lo0 = <uint32_t> p0
                hi1 = <uint32_t> (p1 >> 32)
                lo1 = <uint32_t> p1
                x0 = hi1 ^ x1 ^ k0
                x1 = lo1
                x2 = hi0 ^ x3 ^ k1
                x3 = lo0
                k0 = k0 + <uint32_t> 0x9E3779B9u
                k1 = k1 + <uint32_t> 0xBB67AE85u
            out[0, i] = x0
            out[1, i] = x1
            out[2, i] = x2
            out[3, i] = x3
    return out_arr

cdef extern from *:
    """
    /* Rank-1 update tiles. restrict lets the vectorizer run at full width;
       coordinates l0..l1 are consumed strictly ascending so every output
       scalar sees the same addition order as the naive triple loop. */
    static void df_tile8(const double* restrict xt, long xstride,
                         const double* restrict uu, long ustride,
                         double* restrict o0, double* restrict o1,
                         double* restrict o2, double* restrict o3,
                         double* restrict o4, double* restrict o5,
                         double* restrict o6, double* restrict o7,
                         long l0, long l1, long cnt) {
        for (long l = l0; l < l1; l++) {
            const double* x = xt + l * xstride;
            const double w0 = uu[0 * ustride + l];
            const double w1 = uu[1 * ustride + l];
            const double w2 = uu[2 * ustride + l];
            const double w3 = uu[3 * ustride + l];
            const double w4 = uu[4 * ustride + l];
            const double w5 = uu[5 * ustride + l];
            const double w6 = uu[6 * ustride + l];
            const double w7 = uu[7 * ustride + l];
            for (long i = 0; i < cnt; i++) {
                double v = x[i];
                o0[i] = o0[i] + w0 * v;
                o1[i] = o1[i] + w1 * v;
                o2[i] = o2[i] + w2 * v;
                o3[i] = o3[i] + w3 * v;
                o4[i] = o4[i] + w4 * v;
                o5[i] = o5[i] + w5 * v;
                o6[i] = o6[i] + w6 * v;
                o7[i] = o7[i] + w7 * v;
            }
        }
    }
    static void df_tile1(const double* restrict xt, long xstride,
                         const double* restrict uu,
                         double* restrict o0, long l0, long l1, long cnt) {
        for (long l = l0; l < l1; l++) {
            const double* x = xt + l * xstride;
            const double w0 = uu[l];
            for (long i = 0; i < cnt; i++)
                o0[i] = o0[i] + w0 * x[i];
        }
    }
    """
    void df_tile8(const double* xt, long xstride, const double* uu, long ustride,
                  double* o0, double* o1, double* o2, double* o3,
                  double* o4, double* o5, double* o6, double* o7,
                  long l0, long l1, long cnt) nogil
    void df_tile1(const double* xt, long xstride, const double* uu,
                  double* o0, long l0, long l1, long cnt) nogil

# i-tile keeps eight output row slices plus one xt row slice L1-resident.
DEF TILE_I = 128


cdef void _proj_rect(const double[:, ::1] xt, const double[:, ::1] u,
                     double[:, ::1] out, Py_ssize_t j0, Py_ssize_t j1,
                     Py_ssize_t i0, Py_ssize_t i1, Py_ssize_t d_chunk) noexcept nogil:
    cdef Py_ssize_t d = xt.shape[0]
    cdef Py_ssize_t it, ite, cnt, j, jb, i, l0, l1
    cdef long xs = xt.shape[1]
    cdef long us = u.shape[1]
    it = i0
    while it < i1:
        ite = it + TILE_I
        if ite > i1:
            ite = i1
        cnt = ite - it
        for j in range(j0, j1):
            for i in range(it, ite):
                out[j, i] = 0.0
        jb = j0
        while jb + 8 <= j1:
            l0 = 0
            while l0 < d:
                l1 = l0 + d_chunk
                if l1 > d:
                    l1 = d
                df_tile8(&xt[0, it], xs, &u[jb, 0], us,
                         &out[jb, it], &out[jb + 1, it],
                         &out[jb + 2, it], &out[jb + 3, it],
                         &out[jb + 4, it], &out[jb + 5, it],
                         &out[jb + 6, it], &out[jb + 7, it],
                         l0, l1, cnt)
                l0 = l1
            jb += 8
        while jb < j1:
            l0 = 0
            while l0 < d:
                l1 = l0 + d_chunk
                if l1 > d:
                    l1 = d
                df_tile1(&xt[0, it], xs, &u[jb, 0], &out[jb, it], l0, l1, cnt)
                l0 = l1
            jb += 1
        it = ite


def proj_rect(const double[:, ::1] xt, const double[:, ::1] u,
              double[:, ::1] out, Py_ssize_t j0, Py_ssize_t j1,
              Py_ssize_t i0, Py_ssize_t i1, Py_ssize_t d_chunk):
    """out[j0:j1, i0:i1] = rows of u times xt, fixed-order accumulation."""
    with nogil:
        _proj_rect(xt, u, out, j0, j1, i0, i1, d_chunk)


def proj_naive(const double[:, ::1] x, const double[:, ::1] u,
               double[:, ::1] out):
    """Single-worker triple loop; the oracle the parallel path must match."""
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t d = x.shape[1]
    cdef Py_ssize_t m = u.shape[0]
    cdef Py_ssize_t i, j, l
    cdef double acc
    with nogil:
        for j in range(m):
            for i in range(n):
                acc = 0.0
                for l in range(d):
                    acc = acc + u[j, l] * x[i, l]
                out[j, i] = acc


def proj_point_span(const double[::1] z, const double[:, ::1] u,
                    double[::1] out, Py_ssize_t j0, Py_ssize_t j1):
    """out[j] = z . u[j] for j in [j0, j1), ascending-coordinate accumulation."""
    cdef Py_ssize_t d = u.shape[1]
    cdef Py_ssize_t j, l
    cdef double acc
    with nogil:
        for j in range(j0, j1):
            acc = 0.0
            for l in range(d):
                acc = acc + u[j, l] * z[l]
            out[j] = acc


cdef extern from *:
    """
    /* Quickselect with a branchless Lomuto partition (unconditional swap,
       boundary advanced by the comparison result), median-of-3 pivots, and a
       second equal-run partition so all-tied segments terminate.  On return
       a[t] <= a[k] for t < k and a[t] >= a[k] for t > k. */
    static double df_kth(double* restrict a, long n, long k) {
        long lo = 0, hi = n;  /* half-open [lo, hi) */
        while (hi - lo > 3) {
            long mid = lo + ((hi - lo) >> 1);
            double p0 = a[lo], p1 = a[mid], p2 = a[hi - 1], t;
            if (p1 < p0) { t = p0; p0 = p1; p1 = t; }
            if (p2 < p0) { t = p0; p0 = p2; p2 = t; }
            if (p2 < p1) { t = p1; p1 = p2; p2 = t; }
            const double pivot = p1;
            long write = lo;
            for (long read = lo; read < hi; read++) {
                double x = a[read];
                a[read] = a[write];
                a[write] = x;
                write += (x < pivot);
            }
            if (k < write) { hi = write; continue; }
            /* gather the run equal to the pivot at the front of the right part */
            long eq = write;
            for (long read = write; read < hi; read++) {
                double x = a[read];
                a[read] = a[eq];
                a[eq] = x;
                eq += (x == pivot);
            }
            if (k < eq) return pivot;
            lo = eq;
        }
        /* insertion sort of the tiny remainder */
        for (long i = lo + 1; i < hi; i++) {
            double x = a[i];
            long j = i;
            while (j > lo && a[j - 1] > x) { a[j] = a[j - 1]; j--; }
            a[j] = x;
        }
        return a[k];
    }
    """
    double df_kth(double* a, long n, long k) nogil


cdef double _kth(double* a, Py_ssize_t n, Py_ssize_t k) noexcept nogil:
    """k-th smallest of a[0:n] (0-based); partially reorders a so that
    a[t] <= a[k] for t < k and a[t] >= a[k] for t > k."""
    return df_kth(a, n, k)


cdef double _median_inplace(double* a, Py_ssize_t n) noexcept nogil:
    """Sample median: midpoint of the two central order statistics for even n."""
    cdef Py_ssize_t k = (n - 1) >> 1
    cdef double lo_val = _kth(a, n, k)
    cdef double hi_val
    cdef Py_ssize_t t
    if n & 1:
        return lo_val
    hi_val = a[k + 1]
    for t in range(k + 2, n):
        if a[t] < hi_val:
            hi_val = a[t]
    return (lo_val + hi_val) / 2.0


def halfspace_span(const double[:, ::1] px, const double[::1] pz,
                   double[::1] out, Py_ssize_t j0, Py_ssize_t j1):
    """Halfspace depth per direction: min(#<=, #>=)/n with ties on both sides."""
    cdef Py_ssize_t n = px.shape[1]
    cdef Py_ssize_t j, i
    cdef Py_ssize_t cle, cge, c
    cdef double y, v
    with nogil:
        for j in range(j0, j1):
            y = pz[j]
            cle = 0
            cge = 0
            for i in range(n):
                v = px[j, i]
                if v <= y:
                    cle += 1
                if v >= y:
                    cge += 1
            c = cle if cle < cge else cge
            out[j] = <double>c / <double>n


def projection_span(const double[:, ::1] px, const double[::1] pz,
                    double[::1] out, Py_ssize_t j0, Py_ssize_t j1):
    """Projection depth per direction: (1 + |y - med| / MAD)^-1."""
    cdef Py_ssize_t n = px.shape[1]
    cdef Py_ssize_t j, i
    cdef double med, mad, dev
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    with nogil:
        for j in range(j0, j1):
            for i in range(n):
                buf[i] = px[j, i]
            med = _median_inplace(buf, n)
            for i in range(n):
                buf[i] = fabs(px[j, i] - med)
            mad = _median_inplace(buf, n)
            dev = fabs(pz[j] - med)
            if mad == 0.0:
                out[j] = 1.0 if dev == 0.0 else 0.0
            else:
                out[j] = 1.0 / (1.0 + dev / mad)
    free(buf)


def asym_projection_span(const double[:, ::1] px, const double[::1] pz,
                         double[::1] out, Py_ssize_t j0, Py_ssize_t j1):
    """Asymmetric projection depth: only deviations above the median count.

    MAD+ is the median of the strictly positive deviations; a query at or below
    the median scores 1, and with no sample mass above the median the limit
    value (1 below/at the median, 0 above) applies.
    """
    cdef Py_ssize_t n = px.shape[1]
    cdef Py_ssize_t j, i, npos
    cdef double med, dev, t, madp
    cdef double* buf = <double*> malloc(n * sizeof(double))
    if buf == NULL:
        raise MemoryError()
    with nogil:
        for j in range(j0, j1):
            for i in range(n):
                buf[i] = px[j, i]
            med = _median_inplace(buf, n)
            dev = pz[j] - med
            if dev <= 0.0:
                out[j] = 1.0
                continue
            npos = 0
            for i in range(n):
                t = px[j, i] - med
                if t > 0.0:
                    buf[npos] = t
                    npos += 1
            if npos == 0:
                out[j] = 0.0
            else:
                madp = _median_inplace(buf, npos)
                out[j] = 1.0 / (1.0 + dev / madp)
    free(buf)
