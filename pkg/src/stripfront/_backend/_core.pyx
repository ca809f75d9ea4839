# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: rejection sampling and strip-maxima accumulation.

Scalar mirror of ``_numpy.py`` — same counter-based uniform stream, same
candidate order, same acceptance test, same strip indexing — so either
backend can be swapped in without changing a single output bit.  Releases
the GIL inside the point loops, so replicates parallelise across threads.
"""

from libc.math cimport cos

import numpy as np

NAME = "cython"

ctypedef unsigned long long u64

cdef double _INV53 = 1.0 / 9007199254740992.0
cdef double _TWO_PI = 6.283185307179586
cdef u64 _GOLDEN = <u64>0x9E3779B97F4A7C15
cdef u64 _MIX1 = <u64>0xBF58476D1CE4E5B9
cdef u64 _MIX2 = <u64>0x94D049BB133111EB


cdef inline double _u01(u64 key, u64 ctr) nogil:
    cdef u64 z = key + (ctr + 1) * _GOLDEN
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    z = z ^ (z >> 31)
    return <double>(z >> 11) * _INV53


cdef inline double _feval(int family, const double* p, Py_ssize_t n_par, double x) nogil:
    cdef Py_ssize_t m, j
    cdef double t
    if family == 0:
        return p[0]
    if family == 1:
        return p[0] + p[1] * x
    if family == 2:
        return p[0] + p[1] * cos(_TWO_PI * x)
    m = n_par - 1
    j = <Py_ssize_t>(x * m)
    if j > m - 1:
        j = m - 1
    t = x * m - j
    return p[j] + (p[j + 1] - p[j]) * t


def uniform_points(int family, const double[::1] params, double max_height,
                   Py_ssize_t count, key):
    """First ``count`` accepted points of the rejection stream for ``key``."""
    cdef u64 ckey = <u64>key
    xs = np.empty(count, dtype=np.float64)
    ys = np.empty(count, dtype=np.float64)
    cdef double[::1] xv = xs
    cdef double[::1] yv = ys
    cdef Py_ssize_t have = 0
    cdef Py_ssize_t n_par = params.shape[0]
    cdef u64 ctr = 0
    cdef double x, y
    if count == 0:
        return xs, ys
    with nogil:
        while have < count:
            x = _u01(ckey, 2 * ctr)
            y = _u01(ckey, 2 * ctr + 1) * max_height
            ctr += 1
            if y <= _feval(family, &params[0], n_par, x):
                xv[have] = x
                yv[have] = y
                have += 1
    return xs, ys


def prefix_strip_maxima(int family, const double[::1] params, double max_height,
                        Py_ssize_t k, prefixes, key):
    """Strip maxima of every requested prefix of the accepted stream.

    Same contract as the NumPy twin: one row of k per-strip maxima per
    nondecreasing prefix count, empty strips left at 0.
    """
    cdef u64 ckey = <u64>key
    pref = np.ascontiguousarray(prefixes, dtype=np.int64)
    cdef long long[::1] pv = pref
    cdef Py_ssize_t n_pref = pv.shape[0]
    rows = np.zeros((n_pref, k), dtype=np.float64)
    if n_pref == 0:
        return rows
    if np.any(pref < 0) or np.any(np.diff(pref) < 0):
        raise ValueError("prefixes must be nondecreasing and >= 0")
    u_arr = np.zeros(k, dtype=np.float64)
    cdef double[:, ::1] rv = rows
    cdef double[::1] uv = u_arr
    cdef Py_ssize_t n_par = params.shape[0]
    cdef Py_ssize_t pi = 0
    cdef long long have = 0
    cdef u64 ctr = 0
    cdef Py_ssize_t idx, col
    cdef double x, y
    with nogil:
        while pi < n_pref and pv[pi] == 0:
            pi += 1  # all-zero rows for empty prefixes
        while pi < n_pref:
            x = _u01(ckey, 2 * ctr)
            y = _u01(ckey, 2 * ctr + 1) * max_height
            ctr += 1
            if y <= _feval(family, &params[0], n_par, x):
                idx = <Py_ssize_t>(x * k)
                if idx > k - 1:
                    idx = k - 1
                if y > uv[idx]:
                    uv[idx] = y
                have += 1
                while pi < n_pref and pv[pi] == have:
                    for col in range(k):
                        rv[pi, col] = uv[col]
                    pi += 1
    return rows


def strip_maxima_points(xs, ys, Py_ssize_t k):
    """Per-strip maxima of materialised points; empty strips give 0."""
    xa = np.ascontiguousarray(xs, dtype=np.float64)
    ya = np.ascontiguousarray(ys, dtype=np.float64)
    u_arr = np.zeros(k, dtype=np.float64)
    cdef const double[::1] xv = xa
    cdef const double[::1] yv = ya
    cdef double[::1] uv = u_arr
    cdef Py_ssize_t n = xv.shape[0]
    cdef Py_ssize_t i, idx
    with nogil:
        for i in range(n):
            idx = <Py_ssize_t>(xv[i] * k)
            if idx > k - 1:
                idx = k - 1
            if yv[i] > uv[idx]:
                uv[idx] = yv[i]
    return u_arr
