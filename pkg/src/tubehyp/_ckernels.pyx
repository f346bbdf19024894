# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops: grid flood fill and batch point membership."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, fabs

cnp.import_array()


def flood_fill_count(const unsigned char[:, ::1] free, const unsigned char[:, ::1] hblock):
    """Number of free cells reachable from the first free cell (4-neighbour moves).

    ``hblock[i, j]`` forbids the move between cells ``(i, j)`` and ``(i, j + 1)``.
    """
    cdef Py_ssize_t ny = free.shape[0], nx = free.shape[1]
    cdef Py_ssize_t n = ny * nx, head = 0, tail = 0, start = -1, c, i, j
    if n == 0:
        return 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] queue_arr = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] seen_arr = np.zeros(n, dtype=np.uint8)
    cdef long long[::1] queue = queue_arr
    cdef unsigned char[::1] seen = seen_arr
    for c in range(n):
        if free[c // nx, c % nx]:
            start = c
            break
    if start < 0:
        return 0
    queue[tail] = start
    tail += 1
    seen[start] = 1
    while head < tail:
        c = queue[head]
        head += 1
        i = c // nx
        j = c % nx
        if j + 1 < nx and not hblock[i, j] and free[i, j + 1] and not seen[c + 1]:
            seen[c + 1] = 1
            queue[tail] = c + 1
            tail += 1
        if j > 0 and not hblock[i, j - 1] and free[i, j - 1] and not seen[c - 1]:
            seen[c - 1] = 1
            queue[tail] = c - 1
            tail += 1
        if i + 1 < ny and free[i + 1, j] and not seen[c + nx]:
            seen[c + nx] = 1
            queue[tail] = c + nx
            tail += 1
        if i > 0 and free[i - 1, j] and not seen[c - nx]:
            seen[c - nx] = 1
            queue[tail] = c - nx
            tail += 1
    return tail


def points_in_domain(const double[::1] xs, const double[::1] ys,
                     double y_lo, double y_hi, double mid,
                     const double[::1] slit_x, const double[::1] slit_s0, const double[::1] slit_s1,
                     const double[::1] tooth_apex, const double[::1] tooth_hw,
                     const signed char[::1] tooth_anchor, double slit_tol=0.0):
    """Float membership of each ``(xs[i], ys[i])`` in the strip minus obstacles."""
    cdef Py_ssize_t n = xs.shape[0], ns = slit_x.shape[0], nt = tooth_apex.shape[0]
    cdef Py_ssize_t i, k
    cdef double x, y, s, h
    cdef unsigned char ok
    out_arr = np.empty(n, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    for i in range(n):
        x = xs[i]
        y = ys[i]
        ok = y_lo < y < y_hi
        k = 0
        while ok and k < ns:
            if fabs(x - slit_x[k]) <= slit_tol and slit_s0[k] <= y <= slit_s1[k]:
                ok = 0
            k += 1
        k = 0
        while ok and k < nt:
            s = (x - tooth_apex[k]) / tooth_hw[k]
            if fabs(s) <= 1.0:
                h = exp(1.0 - 1.0 / (1.0 - s * s)) if fabs(s) < 1.0 else 0.0
                if tooth_anchor[k] > 0:
                    if y <= y_lo + (mid - y_lo) * h:
                        ok = 0
                elif y >= y_hi - (y_hi - mid) * h:
                    ok = 0
            k += 1
        out[i] = ok
    return out_arr
