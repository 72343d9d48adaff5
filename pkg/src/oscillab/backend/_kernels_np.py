"""Numpy implementation of the hot summation kernels.

All functions operate on 2D float64 arrays (1D grids are passed as a single
row). Out-of-box values are zero, matching the compact-support convention of
the grid module. Sums use numpy's pairwise reduction, so results are
independent of any outer parallel schedule.
"""

from __future__ import annotations

import math

import numpy as np

COMPILED = False


def _shifted(arr: np.ndarray, di: int, dj: int) -> np.ndarray:
    """out[i, j] = arr[i + di, j + dj], zero where the source leaves the array."""
    m, n = arr.shape
    out = np.zeros_like(arr)
    li, hi = max(0, -di), min(m, m - di)
    lj, hj = max(0, -dj), min(n, n - dj)
    if hi > li and hj > lj:
        out[li:hi, lj:hj] = arr[li + di : hi + di, lj + dj : hj + dj]
    return out


def _pow_abs(d: np.ndarray, q: float) -> np.ndarray:
    if q == 2.0:
        return d * d
    if q == 1.0:
        return np.abs(d)
    return np.abs(d) ** q


def offset_diff_pow_sums(arr, offsets, q, mask=None):
    """Per offset d: sum over cells x of |arr[x+d] - arr[x]|^q.

    With a boolean mask, only pairs with both endpoints inside the mask
    count; without one, out-of-array endpoints contribute their zero value
    (zero-extension pairs are included via the caller's padding).
    """
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    offsets = np.asarray(offsets, dtype=np.int64).reshape(-1, 2)
    out = np.zeros(len(offsets))
    for idx in range(len(offsets)):
        di, dj = int(offsets[idx, 0]), int(offsets[idx, 1])
        d = _shifted(arr, di, dj) - arr
        pw = _pow_abs(d, q)
        if mask is not None:
            both = mask & _shifted(mask.astype(np.float64), di, dj).astype(bool)
            pw = np.where(both, pw, 0.0)
        out[idx] = float(np.sum(pw))
    return out


def directional_sum(arr, mask, si, sj, q):
    """Sum over masked cells of |u(x + s) - u(x)|^q with bilinear sampling.

    s = (si, sj) is the shift in cell units. u(x + s) is the bilinear
    interpolant of cell-center samples (zero outside the array); the term is
    dropped when the cell containing x + s is outside the mask.
    """
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    mi, mj = math.floor(si), math.floor(sj)
    fi, fj = si - mi, sj - mj
    interp = (1.0 - fi) * (1.0 - fj) * _shifted(arr, mi, mj)
    if fi:
        interp += fi * (1.0 - fj) * _shifted(arr, mi + 1, mj)
    if fj:
        interp += (1.0 - fi) * fj * _shifted(arr, mi, mj + 1)
    if fi and fj:
        interp += fi * fj * _shifted(arr, mi + 1, mj + 1)
    # the shifted point x + s lands in the cell offset by floor(s + 1/2)
    ci, cj = math.floor(si + 0.5), math.floor(sj + 0.5)
    chi = _shifted(mask.astype(np.float64), ci, cj) > 0.5
    pw = _pow_abs(interp - arr, q)
    return float(np.sum(np.where(mask & chi, pw, 0.0)))
