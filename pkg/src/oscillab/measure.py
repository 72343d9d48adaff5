"""Distribution functions and exact Lebesgue / weak / Lorentz quasi-norms.

For piecewise-constant grid data the distribution function t -> mu{|u|^q > t}
is an exact step function, so every quasi-norm here is evaluated in closed
form per constant piece; no quadrature over t is involved.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from .grid import GridFunction
from .report import Report

INF = math.inf


def _masked_values(u: GridFunction, region: Optional[np.ndarray]) -> np.ndarray:
    if region is None:
        return u.values
    mask = np.asarray(region, dtype=bool).reshape(-1)
    if mask.size != u.values.size:
        raise ValueError("region mask size mismatch")
    if not mask.any():
        raise ValueError("region mask selects no cells")
    return u.values[mask]


@dataclasses.dataclass(frozen=True)
class DistributionCurve:
    """Step function t -> mu{|u|^q > t} stored by its breakpoints.

    breakpoints: strictly increasing positive thresholds (distinct |v|^q);
    measures[j] = mu{|u|^q > breakpoints[j]};
    support_measure = mu{|u|^q > t} for 0 < t < breakpoints[0].
    """

    breakpoints: np.ndarray
    measures: np.ndarray
    support_measure: float
    q: float

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=np.float64)
        m = np.asarray(self.measures, dtype=np.float64)
        if b.size != m.size:
            raise ValueError("breakpoints/measures size mismatch")
        if b.size and (np.any(np.diff(b) <= 0) or b[0] <= 0):
            raise ValueError("breakpoints must be strictly increasing and positive")
        if np.any(np.diff(m) > 0):
            raise ValueError("measures must be nonincreasing")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "measures", m)

    def left_measures(self) -> np.ndarray:
        """lambda(b_j^-) for each breakpoint (value on the piece left of b_j)."""
        if self.breakpoints.size == 0:
            return np.empty(0)
        return np.concatenate([[self.support_measure], self.measures[:-1]])

    def value_at(self, t: float) -> float:
        """mu{|u|^q > t} for t > 0."""
        if t <= 0:
            raise ValueError("distribution function is evaluated for t > 0")
        if self.breakpoints.size == 0:
            return 0.0
        j = int(np.searchsorted(self.breakpoints, t, side="left"))
        # t < breakpoints[j] (or j == len): lambda is constant on [b_{j-1}, b_j)
        if t in self.breakpoints[j : j + 1]:
            return float(self.measures[j])
        if j == 0:
            return float(self.support_measure)
        return float(self.measures[j - 1])


def distribution_of_samples(
    abs_pow_values: np.ndarray, weights: np.ndarray, q: float
) -> DistributionCurve:
    """Exact curve for samples with per-sample measure mass (|v|^q given)."""
    v = np.asarray(abs_pow_values, dtype=np.float64).reshape(-1)
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    pos = v > 0.0
    v, w = v[pos], w[pos]
    if v.size == 0:
        return DistributionCurve(np.empty(0), np.empty(0), 0.0, q)
    order = np.argsort(v, kind="stable")
    v, w = v[order], w[order]
    # suffix sums of weights; measure{> b} excludes ties at b
    b, first_idx = np.unique(v, return_index=True)
    suffix = np.concatenate([np.cumsum(w[::-1])[::-1], [0.0]])
    support = float(suffix[0])
    # index of the first sample strictly greater than each breakpoint
    next_idx = np.concatenate([first_idx[1:], [v.size]])
    measures = suffix[next_idx]
    return DistributionCurve(b, measures, support, q)


def distribution(
    u: GridFunction, q: float, region: Optional[np.ndarray] = None
) -> DistributionCurve:
    """Exact distribution curve of |u|^q over the (optionally masked) grid."""
    if not q > 0:
        raise ValueError("q must be positive")
    vals = _masked_values(u, region)
    w = np.full(vals.shape, u.domain.cell_volume)
    return distribution_of_samples(np.abs(vals) ** q, w, q)


def lorentz_norm(curve: DistributionCurve, gamma: float) -> float:
    """||u||_{L^{q,gamma}} from its exact distribution curve.

    gamma < inf: closed-form integral of lambda(t)^{gamma/q} t^{gamma/q - 1}
    per constant piece; gamma = inf: sup of t * lambda(t^-) over breakpoints.
    """
    q = curve.q
    b = curve.breakpoints
    if b.size == 0:
        return 0.0
    left = curve.left_measures()
    if gamma == INF:
        return float(np.max(b * left)) ** (1.0 / q)
    if not gamma > 0:
        raise ValueError("gamma must be positive or inf")
    a = gamma / q
    edges_pow = np.concatenate([[0.0], b ** a])
    total = float(np.sum(left ** a * (edges_pow[1:] - edges_pow[:-1]))) / a
    return total ** (1.0 / gamma)


def lebesgue_norm(u: GridFunction, p: float, region: Optional[np.ndarray] = None) -> float:
    if not p > 0:
        raise ValueError("p must be positive")
    vals = _masked_values(u, region)
    return float(np.sum(np.abs(vals) ** p) * u.domain.cell_volume) ** (1.0 / p)


def weak_norm(u: GridFunction, q: float, region: Optional[np.ndarray] = None) -> float:
    """[u]_{L^q_w} = sup_t [t * mu{|u|^q > t}]^{1/q}."""
    return lorentz_norm(distribution(u, q, region), INF)


def truncated_sup(curve: DistributionCurve, upper: float) -> float:
    """sup over 0 < s <= upper of s * lambda(s), exact at breakpoint left limits."""
    if not upper > 0:
        raise ValueError("upper must be positive")
    b = curve.breakpoints
    if b.size == 0:
        return 0.0
    left = curve.left_measures()
    inside = b <= upper
    best = float(np.max(b[inside] * left[inside])) if inside.any() else 0.0
    return max(best, upper * curve.value_at(upper))


def power_identity_check(u: GridFunction, r: float, p: float, gamma: float) -> Report:
    """|| |u|^r ||_{L^{p,gamma}} == ||u||^r_{L^{rp, r*gamma}} (exact identity)."""
    if not (r > 0 and p > 0):
        raise ValueError("r and p must be positive")
    powered = u.with_values(np.abs(u.values) ** r)
    lhs = lorentz_norm(distribution(powered, p), gamma)
    rg = INF if gamma == INF else r * gamma
    rhs = lorentz_norm(distribution(u, r * p), rg) ** r
    tol = 1e-9
    scale = max(lhs, rhs, 1e-300)
    passed = abs(lhs - rhs) <= tol * scale
    return Report(
        op="power_identity",
        params={"r": r, "p": p, "gamma": "inf" if gamma == INF else gamma},
        lhs=lhs,
        rhs=rhs,
        passed=passed,
        tolerance=tol,
    )


@dataclasses.dataclass(frozen=True)
class WeightedSampleSet:
    """Finite set of (value, measure-mass) pairs, e.g. a discretized product measure."""

    values: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64).reshape(-1)
        w = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        if v.size != w.size:
            raise ValueError("values/weights size mismatch")
        if v.size == 0:
            raise ValueError("sample set must be nonempty")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)


def weighted_weak_norm(samples: WeightedSampleSet, q: float) -> float:
    """sup_t t * mu{|value|^q > t} over the weighted samples (no 1/q root)."""
    if not q > 0:
        raise ValueError("q must be positive")
    curve = distribution_of_samples(np.abs(samples.values) ** q, samples.weights, q)
    if curve.breakpoints.size == 0:
        return 0.0
    return float(np.max(curve.breakpoints * curve.left_measures()))
