"""Synthetic grid functions: steps, singular profiles, bumps, indicators.

Every fixture has compact support (zero outside its box) and finite sup-norm,
and is sampled at cell centers, so it is an honest piecewise-constant grid
function with exactly computable norms.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .grid import GridDomain, GridFunction

FIXTURE_KINDS = (
    "step",
    "multi_step",
    "log_singular",
    "hoelder_bump",
    "gaussian_bump",
    "disk_indicator",
    "square_indicator",
    "random_piecewise",
)


def domain_1d(n: int, lo: float = -1.0, hi: float = 1.0) -> GridDomain:
    if hi <= lo:
        raise ValueError("box must have positive length")
    return GridDomain(1, (lo,), (n,), (hi - lo) / n)


def domain_2d(n: int, lo: float = -1.0, hi: float = 1.0) -> GridDomain:
    if hi <= lo:
        raise ValueError("box must have positive length")
    return GridDomain(2, (lo, lo), (n, n), (hi - lo) / n)


def _centers_2d(d: GridDomain):
    x = d.axis_centers(0)
    y = d.axis_centers(1)
    return np.meshgrid(x, y, indexing="ij")


def step(n: int = 256, a: float = 1.0, x0: float = 0.0, lo: float = -1.0, hi: float = 1.0) -> GridFunction:
    """a on {x > x0}, 0 below (1D)."""
    d = domain_1d(n, lo, hi)
    return GridFunction(d, np.where(d.axis_centers(0) > x0, a, 0.0), meta={"kind": "step", "a": a, "x0": x0})


def multi_step(jumps, n: int = 256, lo: float = -1.0, hi: float = 1.0) -> GridFunction:
    """Staircase sum of steps: u(x) = sum_i a_i * chi_{x > x_i} (1D)."""
    d = domain_1d(n, lo, hi)
    x = d.axis_centers(0)
    vals = np.zeros(n)
    for xi, ai in jumps:
        vals += np.where(x > xi, float(ai), 0.0)
    return GridFunction(d, vals, meta={"kind": "multi_step", "jumps": list(jumps)})


def log_singular(n: int = 256, lo: float = -1.0, hi: float = 1.0) -> GridFunction:
    """log|x| sampled at cell centers — the classical unbounded BMO profile.

    If a cell center would land exactly on 0, the origin is nudged by half a
    cell so every sample is finite; the nudge is recorded in the metadata.
    """
    d = domain_1d(n, lo, hi)
    x = d.axis_centers(0)
    nudged = False
    if np.any(x == 0.0):
        d = GridDomain(1, (d.origin[0] + d.spacing / 2.0,), d.cells, d.spacing)
        x = d.axis_centers(0)
        nudged = True
    return GridFunction(d, np.log(np.abs(x)), meta={"kind": "log_singular", "origin_nudged": nudged})


def hoelder_bump(n: int = 256, alpha: float = 0.5, a: float = 1.0, dim: int = 1) -> GridFunction:
    """a * (1 - |x|^2)_+^alpha: a C^{0,alpha} bump supported in the unit ball."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    if dim == 1:
        d = domain_1d(n)
        r2 = d.axis_centers(0) ** 2
    else:
        d = domain_2d(n)
        xx, yy = _centers_2d(d)
        r2 = xx**2 + yy**2
    vals = a * np.clip(1.0 - r2, 0.0, None) ** alpha
    return GridFunction(d, vals.reshape(-1), meta={"kind": "hoelder_bump", "alpha": alpha})


def gaussian_bump(n: int = 256, sigma: float = 0.25, a: float = 1.0, dim: int = 1) -> GridFunction:
    """a * exp(-|x|^2 / (2 sigma^2)) on the unit box (tails cut at the box)."""
    if dim == 1:
        d = domain_1d(n)
        r2 = d.axis_centers(0) ** 2
    else:
        d = domain_2d(n)
        xx, yy = _centers_2d(d)
        r2 = xx**2 + yy**2
    vals = a * np.exp(-0.5 * r2 / sigma**2)
    return GridFunction(d, vals.reshape(-1), meta={"kind": "gaussian_bump", "sigma": sigma})


def disk_indicator(n: int = 256, a: float = 1.0, r: float = 0.3, lo: float = -1.0, hi: float = 1.0) -> GridFunction:
    """a on the centered disk of radius r (2D)."""
    d = domain_2d(n, lo, hi)
    xx, yy = _centers_2d(d)
    vals = np.where(xx**2 + yy**2 < r * r, a, 0.0)
    return GridFunction(d, vals.reshape(-1), meta={"kind": "disk_indicator", "a": a, "r": r})


def square_indicator(n: int = 256, a: float = 1.0, side: float = 0.6, lo: float = -1.0, hi: float = 1.0) -> GridFunction:
    """a on the centered axis-aligned square of the given side (2D)."""
    d = domain_2d(n, lo, hi)
    xx, yy = _centers_2d(d)
    half = side / 2.0
    vals = np.where(np.maximum(np.abs(xx), np.abs(yy)) < half, a, 0.0)
    return GridFunction(d, vals.reshape(-1), meta={"kind": "square_indicator", "a": a, "side": side})


def random_piecewise(
    n: int = 256, seed: int = 0, dim: int = 1, blocks: int = 12, amplitude: float = 1.0
) -> GridFunction:
    """Random block-constant function: random levels on a random partition."""
    rng = np.random.default_rng(seed)
    if dim == 1:
        d = domain_1d(n)
        cuts = np.sort(rng.choice(np.arange(1, n), size=min(blocks - 1, n - 1), replace=False))
        levels = amplitude * rng.standard_normal(len(cuts) + 1)
        vals = np.empty(n)
        edges = np.concatenate([[0], cuts, [n]])
        for i in range(len(edges) - 1):
            vals[edges[i] : edges[i + 1]] = levels[i]
    else:
        d = domain_2d(n)
        per_axis = max(2, int(round(blocks**0.5)))
        cx = np.sort(rng.choice(np.arange(1, n), size=min(per_axis - 1, n - 1), replace=False))
        cy = np.sort(rng.choice(np.arange(1, n), size=min(per_axis - 1, n - 1), replace=False))
        ex = np.concatenate([[0], cx, [n]])
        ey = np.concatenate([[0], cy, [n]])
        levels = amplitude * rng.standard_normal((len(ex) - 1, len(ey) - 1))
        vals = np.empty((n, n))
        for i in range(len(ex) - 1):
            for j in range(len(ey) - 1):
                vals[ex[i] : ex[i + 1], ey[j] : ey[j + 1]] = levels[i, j]
        vals = vals.reshape(-1)
    return GridFunction(d, vals, meta={"kind": "random_piecewise", "seed": seed})


@dataclasses.dataclass(frozen=True)
class FixtureFamily:
    """A fixture generator id plus its parameters, buildable at any resolution."""

    kind: str
    params: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FIXTURE_KINDS:
            raise ValueError(f"unknown fixture kind {self.kind!r}")

    def build(self, n: int) -> GridFunction:
        return make_fixture(self.kind, n, **self.params)


def make_fixture(kind: str, n: int, **params) -> GridFunction:
    builders = {
        "step": step,
        "multi_step": multi_step,
        "log_singular": log_singular,
        "hoelder_bump": hoelder_bump,
        "gaussian_bump": gaussian_bump,
        "disk_indicator": disk_indicator,
        "square_indicator": square_indicator,
        "random_piecewise": random_piecewise,
    }
    if kind not in builders:
        raise ValueError(f"unknown fixture kind {kind!r}")
    return builders[kind](n=n, **params)
