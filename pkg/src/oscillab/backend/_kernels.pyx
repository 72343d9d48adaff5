# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of _kernels_np: identical signatures and semantics."""

from libc.math cimport fabs, floor, pow

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True


cdef inline double _pw(double d, double q) nogil:
    if q == 2.0:
        return d * d
    if q == 1.0:
        return fabs(d)
    return pow(fabs(d), q)


cdef inline double _at(const double[:, ::1] a, Py_ssize_t i, Py_ssize_t j) nogil:
    if i < 0 or j < 0 or i >= a.shape[0] or j >= a.shape[1]:
        return 0.0
    return a[i, j]


def offset_diff_pow_sums(arr, offsets, double q, mask=None):
    """Per offset d: sum over cells x of |arr[x+d] - arr[x]|^q.

    With a boolean mask, only pairs with both endpoints inside the mask
    count; without one, out-of-array endpoints contribute their zero value
    (zero-extension pairs are included via the caller's padding).
    """
    cdef const double[:, ::1] a = np.ascontiguousarray(arr, dtype=np.float64)
    cdef const long long[:, ::1] offs = np.asarray(offsets, dtype=np.int64).reshape(-1, 2)
    cdef cnp.ndarray[double, ndim=1] out = np.zeros(offs.shape[0])
    cdef const unsigned char[:, ::1] msk
    cdef bint use_mask = mask is not None
    if use_mask:
        msk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t k, i, j, di, dj, li, hi, lj, hj
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef double total
    for k in range(offs.shape[0]):
        di = offs[k, 0]
        dj = offs[k, 1]
        total = 0.0
        if use_mask:
            li = max(0, -di); hi = min(m, m - di)
            lj = max(0, -dj); hj = min(n, n - dj)
            with nogil:
                for i in range(li, hi):
                    for j in range(lj, hj):
                        if msk[i, j] and msk[i + di, j + dj]:
                            total += _pw(a[i + di, j + dj] - a[i, j], q)
        else:
            with nogil:
                for i in range(m):
                    for j in range(n):
                        total += _pw(_at(a, i + di, j + dj) - a[i, j], q)
        out[k] = total
    return out


def directional_sum(arr, mask, double si, double sj, double q):
    """Sum over masked cells of |u(x + s) - u(x)|^q with bilinear sampling.

    s = (si, sj) is the shift in cell units. u(x + s) is the bilinear
    interpolant of cell-center samples (zero outside the array); the term is
    dropped when the cell containing x + s is outside the mask.
    """
    cdef const double[:, ::1] a = np.ascontiguousarray(arr, dtype=np.float64)
    cdef const unsigned char[:, ::1] msk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1]
    cdef Py_ssize_t mi = <Py_ssize_t>floor(si), mj = <Py_ssize_t>floor(sj)
    cdef double fi = si - floor(si), fj = sj - floor(sj)
    # the shifted point x + s lands in the cell offset by floor(s + 1/2)
    cdef Py_ssize_t ci = <Py_ssize_t>floor(si + 0.5), cj = <Py_ssize_t>floor(sj + 0.5)
    cdef Py_ssize_t i, j, ti, tj
    cdef double interp, total = 0.0
    with nogil:
        for i in range(m):
            for j in range(n):
                if not msk[i, j]:
                    continue
                ti = i + ci
                tj = j + cj
                if ti < 0 or tj < 0 or ti >= m or tj >= n or not msk[ti, tj]:
                    continue
                interp = (1.0 - fi) * (1.0 - fj) * _at(a, i + mi, j + mj)
                if fi != 0.0:
                    interp += fi * (1.0 - fj) * _at(a, i + mi + 1, j + mj)
                if fj != 0.0:
                    interp += (1.0 - fi) * fj * _at(a, i + mi, j + mj + 1)
                if fi != 0.0 and fj != 0.0:
                    interp += fi * fj * _at(a, i + mi + 1, j + mj + 1)
                total += _pw(interp - a[i, j], q)
    return total
