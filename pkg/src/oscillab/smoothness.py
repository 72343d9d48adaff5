"""Moduli of continuity, Besov and Gagliardo quasi-norms, BV variation.

All shift suprema over h in R^N \\ {0} are restricted to an integer-offset
lattice; the restricted sup under-estimates the continuum value, which keeps
every upper-bound inequality valid. Shifted functions use the zero extension
outside the box, realized by padding.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence

import numpy as np

from . import backend
from .grid import GridFunction
from .measure import distribution_of_samples, lebesgue_norm, lorentz_norm
from .report import Report

INF = math.inf

# |S^{N-1}| for the tail-bound integral of the Gagliardo kernel
_SPHERE_AREA = {1: 2.0, 2: 2.0 * math.pi}


@dataclasses.dataclass(frozen=True)
class ShiftLattice:
    """Nonzero integer offsets, closed under negation."""

    offsets: tuple

    def __post_init__(self):
        offs = tuple(tuple(int(x) for x in o) for o in self.offsets)
        if not offs:
            raise ValueError("lattice must be nonempty")
        seen = set(offs)
        for o in offs:
            if all(x == 0 for x in o):
                raise ValueError("lattice must not contain the zero offset")
            if tuple(-x for x in o) not in seen:
                raise ValueError("lattice must be closed under negation")
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def ball(cls, dim: int, radius: int) -> "ShiftLattice":
        """Axis directions and diagonals: all offsets with |o| <= radius."""
        if radius < 1:
            raise ValueError("radius must be >= 1")
        rng = range(-radius, radius + 1)
        if dim == 1:
            offs = [(i,) for i in rng if i != 0]
        else:
            offs = [
                (i, j)
                for i in rng
                for j in rng
                if (i, j) != (0, 0) and i * i + j * j <= radius * radius
            ]
        return cls(tuple(offs))

    def half(self) -> tuple:
        """One representative per {o, -o} pair (first lexicographically positive)."""
        return tuple(o for o in self.offsets if o > tuple(-x for x in o))


def _zero_shift(arr: np.ndarray, off) -> np.ndarray:
    """out[i] = arr[i + off] with zeros where the source leaves the array."""
    out = np.zeros_like(arr)
    src, dst = [], []
    for a, o in enumerate(off):
        n = arr.shape[a]
        lo, hi = max(0, -o), min(n, n - o)
        if hi <= lo:
            return out
        dst.append(slice(lo, hi))
        src.append(slice(lo + o, hi + o))
    out[tuple(dst)] = arr[tuple(src)]
    return out


def _padded_k_diff(u: GridFunction, off, k: int) -> np.ndarray:
    """Delta_h^k of the zero-extended function, h = spacing * off."""
    pad = [(k * abs(o), k * abs(o)) for o in off]
    d = np.pad(u.array, pad)
    for _ in range(k):
        d = _zero_shift(d, off) - d
    return d


def _lp_power(vals: np.ndarray, p: float, cellvol: float) -> float:
    return float(np.sum(np.abs(vals) ** p)) * cellvol


def _offset_length(off, spacing: float) -> float:
    return spacing * math.hypot(*off) if len(off) > 1 else spacing * abs(off[0])


@dataclasses.dataclass(frozen=True)
class ModulusCurve:
    """Omega_k(u; t)_{L^p} per t: sup of ||Delta_h^k u||_p over |h| <= t."""

    t_values: np.ndarray
    omega: np.ndarray
    k: int
    p: float
    unresolved: np.ndarray  # True where t is below one grid spacing


def modulus_of_continuity(
    u: GridFunction, k: int, p: float, lattice: ShiftLattice, t_values: Sequence[float]
) -> ModulusCurve:
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    if not p > 0:
        raise ValueError("p must be positive")
    t = np.asarray(t_values, dtype=np.float64)
    if t.size == 0 or np.any(t <= 0) or np.any(np.diff(t) <= 0):
        raise ValueError("t values must be positive and strictly increasing")
    d = u.domain
    # ||Delta_h^k|| = ||Delta_{-h}^k||, so one representative per pair suffices
    pairs = []
    for off in lattice.half():
        norm_p = _lp_power(_padded_k_diff(u, off, k), p, d.cell_volume) ** (1.0 / p)
        pairs.append((_offset_length(off, d.spacing), norm_p))
    pairs.sort()
    lengths = np.array([ln for ln, _ in pairs])
    running = np.maximum.accumulate(np.array([v for _, v in pairs]))
    omega = np.zeros_like(t)
    for i, ti in enumerate(t):
        # relative nudge so |h| <= t decisions survive exact box dilations
        j = int(np.searchsorted(lengths, ti * (1.0 + 1e-12), side="right"))
        if j > 0:
            omega[i] = running[j - 1]
    return ModulusCurve(t, omega, k, p, t < d.spacing)


@dataclasses.dataclass(frozen=True)
class ShiftSupResult:
    value: float
    argmax_offset: tuple


def _shift_sup(u: GridFunction, s: float, q: float, lattice: ShiftLattice, weak: bool) -> ShiftSupResult:
    d = u.domain
    best, arg = 0.0, lattice.offsets[0]
    for off in lattice.half():
        diff = _padded_k_diff(u, off, 1)
        if weak:
            w = np.full(diff.size, d.cell_volume)
            inner = lorentz_norm(distribution_of_samples(np.abs(diff.reshape(-1)) ** q, w, q), INF)
        else:
            inner = _lp_power(diff, q, d.cell_volume) ** (1.0 / q)
        val = inner / _offset_length(off, d.spacing) ** s
        if val > best:
            best, arg = val, off
    return ShiftSupResult(best, arg)


def besov_sup_norm(u: GridFunction, s: float, q: float, lattice: ShiftLattice) -> ShiftSupResult:
    """sup over lattice shifts of ||u(.+h) - u||_{L^q} / |h|^s."""
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    if not q > 0:
        raise ValueError("q must be positive")
    return _shift_sup(u, s, q, lattice, weak=False)


def besov_sup_norm_weak(u: GridFunction, s: float, q: float, lattice: ShiftLattice) -> ShiftSupResult:
    """Same sup with the weak L^q norm of the shift difference inside."""
    if not 0 < s <= 1:
        raise ValueError("s must lie in (0, 1]")
    if not q > 0:
        raise ValueError("q must be positive")
    return _shift_sup(u, s, q, lattice, weak=True)


def bv_variation(u: GridFunction, lattice: ShiftLattice) -> float:
    """sup_h ||u(.+h) - u||_{L^1} / |h| over the lattice."""
    return besov_sup_norm(u, 1.0, 1.0, lattice).value


def bv_variation_weak(u: GridFunction, lattice: ShiftLattice) -> float:
    return besov_sup_norm_weak(u, 1.0, 1.0, lattice).value


def minimal_difference_order(s: float) -> int:
    """Smallest integer k with s < k."""
    if not s > 0:
        raise ValueError("s must be positive")
    return int(math.floor(s)) + 1


def default_t_grid(u: GridFunction, n_points: int = 64) -> np.ndarray:
    """Log-spaced from one spacing to the box diameter."""
    d = u.domain
    return np.geomspace(d.spacing, d.diameter, n_points)


def besov_integral_norm(
    u: GridFunction,
    s: float,
    p: float,
    q: float,
    lattice: ShiftLattice,
    t_grid: Optional[Sequence[float]] = None,
    k: Optional[int] = None,
) -> float:
    """B^s_{p,q} quasi-norm from the k-th modulus, k minimal with s < k.

    q < inf: log-spaced trapezoid quadrature of (Omega_k(t)/t^s)^q dt/t;
    q = inf: sup of Omega_k(t)/t^s over the t grid.
    """
    if not (s > 0 and p > 0):
        raise ValueError("s and p must be positive")
    if k is None:
        k = minimal_difference_order(s)
    elif k <= s:
        raise ValueError("difference order k must exceed s")
    t = default_t_grid(u) if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    if t.size == 0:
        raise ValueError("t grid must be nonempty")
    curve = modulus_of_continuity(u, k, p, lattice, t)
    ratio = curve.omega / t**s
    if q == INF:
        return float(np.max(ratio))
    if not q > 0:
        raise ValueError("q must be positive or inf")
    return float(np.trapezoid(ratio**q, np.log(t))) ** (1.0 / q)


def _cutoff_offsets(dim: int, spacing: float, cutoff: float) -> list:
    if cutoff < spacing:
        raise ValueError("cutoff radius must be at least one spacing")
    r = int(math.floor(cutoff / spacing))
    rng = range(-r, r + 1)
    if dim == 1:
        return [(0, j) for j in rng if j != 0 and abs(j) * spacing <= cutoff]
    return [
        (i, j)
        for i in rng
        for j in rng
        if (i, j) != (0, 0) and math.hypot(i, j) * spacing <= cutoff
    ]


def _as_2d(u: GridFunction) -> np.ndarray:
    arr = u.array
    return arr[None, :] if u.domain.dim == 1 else arr


def _pad_2d(arr: np.ndarray, pad_i: int, pad_j: int) -> np.ndarray:
    return np.pad(arr, ((pad_i, pad_i), (pad_j, pad_j)))


@dataclasses.dataclass(frozen=True)
class GagliardoResult:
    value: float
    tail_bound: float  # analytic bound on the q-th power omitted beyond the cutoff
    q: float

    @property
    def upper(self) -> float:
        """Value plus the tail bound, combined on the q-th power."""
        return (self.value**self.q + self.tail_bound) ** (1.0 / self.q)


def _gagliardo_terms(u: GridFunction, s: float, q: float, cutoff: float):
    """Per-offset (mu-weight, sum of |diff|^q over x) with zero extension."""
    d = u.domain
    offs = _cutoff_offsets(d.dim, d.spacing, cutoff)
    arr = _as_2d(u)
    pad_i = max(abs(o[0]) for o in offs)
    pad_j = max(abs(o[1]) for o in offs)
    padded = _pad_2d(arr, pad_i, pad_j)
    sums = backend.offset_diff_pow_sums(padded, offs, q)
    weights = np.array(
        [
            (math.hypot(o[0], o[1]) * d.spacing) ** (-(s * q + d.dim)) * d.cell_volume
            for o in offs
        ]
    )
    return offs, weights, sums


def _gagliardo_tail_power(u: GridFunction, s: float, q: float, cutoff: float) -> float:
    """Bound on the omitted pairs: int_{|y|>R} |y|^{-sq-N} dy * sup_y ||u(.+y)-u||_q^q."""
    d = u.domain
    shift_factor = 2.0**q if q >= 1 else 2.0
    tail_integral = _SPHERE_AREA[d.dim] * cutoff ** (-s * q) / (s * q)
    return tail_integral * shift_factor * lebesgue_norm(u, q) ** q


def gagliardo_seminorm(u: GridFunction, s: float, q: float, cutoff_radius: float) -> GagliardoResult:
    """Double sum of |u(x)-u(z)|^q / |x-z|^{sq+N} over pairs within the cutoff.

    Evaluated at cell centers on the zero extension; the diagonal vanishes
    for piecewise-constant data. Pairs beyond the cutoff are covered by the
    reported analytic tail bound (on the q-th power).
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    if not q > 0:
        raise ValueError("q must be positive")
    _, weights, sums = _gagliardo_terms(u, s, q, cutoff_radius)
    power = float(np.sum(weights * sums)) * u.domain.cell_volume
    return GagliardoResult(power ** (1.0 / q), _gagliardo_tail_power(u, s, q, cutoff_radius), q)


def gagliardo_weak_seminorm(u: GridFunction, s: float, q: float, cutoff_radius: float) -> float:
    """sup_t [t * (L^N x mu){|u(x+y)-u(x)|^q > t}]^{1/q} over the same pairs.

    Uses exactly the same offset lattice and mu-weights as the strong form,
    so weak <= strong holds as exact finite-sample Chebyshev.
    """
    if not 0 < s < 1:
        raise ValueError("s must lie in (0, 1)")
    if not q > 0:
        raise ValueError("q must be positive")
    d = u.domain
    offs = _cutoff_offsets(d.dim, d.spacing, cutoff_radius)
    arr = _as_2d(u)
    pad_i = max(abs(o[0]) for o in offs)
    pad_j = max(abs(o[1]) for o in offs)
    padded = _pad_2d(arr, pad_i, pad_j)
    all_vals, all_weights = [], []
    for o in offs:
        diff = (_zero_shift(padded, o) - padded).reshape(-1)
        nz = diff != 0.0
        if not nz.any():
            continue
        mu_w = (math.hypot(o[0], o[1]) * d.spacing) ** (-(s * q + d.dim)) * d.cell_volume
        all_vals.append(np.abs(diff[nz]) ** q)
        all_weights.append(np.full(int(nz.sum()), mu_w * d.cell_volume))
    if not all_vals:
        return 0.0
    curve = distribution_of_samples(np.concatenate(all_vals), np.concatenate(all_weights), q)
    return lorentz_norm(curve, INF)


def central_gradient(u: GridFunction) -> list:
    """Central-difference partials, one array per axis."""
    arr = u.array
    if u.domain.dim == 1:
        return [np.gradient(arr, u.domain.spacing)]
    return list(np.gradient(arr, u.domain.spacing))


def sobolev_difference_check(
    u: GridFunction, q: float, lattice: ShiftLattice, slack: float = 0.05
) -> Report:
    """Difference-quotient vs gradient bounds for smooth samples.

    Checks sup_h int |u(x+h)-u(x)|^q / |h|^q dx <= ||grad u||_q^q (upper) and
    >= (1/N) sum_i ||d_i u||_q^q (lower), both within the slack factor.
    """
    if not q > 1:
        raise ValueError("q must exceed 1")
    d = u.domain
    sup_quot = 0.0
    for off in lattice.half():
        diff = _padded_k_diff(u, off, 1)
        sup_quot = max(
            sup_quot, _lp_power(diff, q, d.cell_volume) / _offset_length(off, d.spacing) ** q
        )
    grads = central_gradient(u)
    per_axis = [_lp_power(g, q, d.cell_volume) for g in grads]
    grad_full = _lp_power(np.sqrt(sum(g * g for g in grads)), q, d.cell_volume)
    upper_ok = sup_quot <= grad_full * (1.0 + slack)
    lower_ok = sup_quot >= (sum(per_axis) / d.dim) * (1.0 - slack)
    return Report(
        op="sobolev_difference_check",
        params={"q": q, "slack": slack, "dim": d.dim, "cells": list(d.cells)},
        lhs=sup_quot,
        rhs=grad_full,
        passed=bool(upper_ok and lower_ok),
        tolerance=slack,
        extras={"lower_bound": sum(per_axis) / d.dim, "per_axis_powers": per_axis},
    )


def marchaud_probe(
    u: GridFunction,
    p: float,
    n: int,
    k: int,
    mu: float,
    t_values: Sequence[float],
    lattice: Optional[ShiftLattice] = None,
) -> Report:
    """Empirical constant witness for the lower-order modulus bound.

    Evaluates Omega_n(t) against t^n [||u||_p + (int_t^inf (s^{-n}Omega_k(s))^mu
    ds/s)^{1/mu}] and reports the worst-case ratio over t; only finiteness is
    asserted. The integral tail beyond the last grid point uses the constant
    large-shift value of Omega_k in closed form.
    """
    if not (0 < mu <= min(1.0, p)):
        raise ValueError("mu must lie in (0, min(1, p)]")
    if not k > n >= 1:
        raise ValueError("orders must satisfy k > n >= 1")
    t = np.asarray(t_values, dtype=np.float64)
    if lattice is None:
        lattice = ShiftLattice.ball(u.domain.dim, 8)
    # one dense grid covering [min t, diameter] for the inner integral
    s_grid = np.geomspace(t[0], max(u.domain.diameter, t[-1]), 128)
    omega_n = modulus_of_continuity(u, n, p, lattice, t).omega
    omega_k = modulus_of_continuity(u, k, p, lattice, s_grid).omega
    norm_p = _lp_power(u.array, p, u.domain.cell_volume) ** (1.0 / p)
    integrand = (omega_k / s_grid**n) ** mu
    log_s = np.log(s_grid)
    ratios = []
    for i, ti in enumerate(t):
        keep = s_grid >= ti
        integral = float(np.trapezoid(integrand[keep], log_s[keep])) if keep.sum() > 1 else 0.0
        # Omega_k is flat beyond the diameter: the tail integrates exactly
        integral += float(omega_k[-1] ** mu) * s_grid[-1] ** (-n * mu) / (n * mu)
        rhs = ti**n * (norm_p + integral ** (1.0 / mu))
        if rhs > 0:
            ratios.append(omega_n[i] / rhs)
    max_ratio = max(ratios) if ratios else 0.0
    return Report(
        op="marchaud_probe",
        params={"p": p, "n": n, "k": k, "mu": mu},
        lhs=max_ratio,
        rhs=1.0,
        passed=bool(math.isfinite(max_ratio)),
        tolerance=math.inf,
        extras={"n_t_points": int(t.size)},
    )
