"""Uniform-grid sampled functions with exact piecewise-constant semantics.

Every value array represents a function that is constant on each grid cell
and identically zero outside the box, so integrals, distribution functions
and shift differences are exact quantities of that interpolant.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
from typing import Optional, Sequence

import numpy as np


@dataclasses.dataclass(frozen=True)
class GridDomain:
    """Axis-aligned box partitioned into equal cells with uniform spacing."""

    dim: int
    origin: tuple
    cells: tuple
    spacing: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        object.__setattr__(self, "origin", tuple(float(x) for x in self.origin))
        object.__setattr__(self, "cells", tuple(int(n) for n in self.cells))
        object.__setattr__(self, "spacing", float(self.spacing))
        if len(self.origin) != self.dim or len(self.cells) != self.dim:
            raise ValueError("origin/cells length must equal dim")
        if any(n < 1 for n in self.cells):
            raise ValueError("cells_per_axis must be >= 1")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")

    @property
    def shape(self) -> tuple:
        return self.cells

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.cells))

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def total_measure(self) -> float:
        return self.cell_volume * self.n_cells

    @property
    def lengths(self) -> tuple:
        return tuple(n * self.spacing for n in self.cells)

    @property
    def diameter(self) -> float:
        return math.sqrt(sum(L * L for L in self.lengths))

    def axis_centers(self, axis: int) -> np.ndarray:
        n = self.cells[axis]
        return self.origin[axis] + (np.arange(n) + 0.5) * self.spacing

    def scaled(self, factor: float) -> "GridDomain":
        """Dilate the box: origin and spacing multiplied by factor."""
        return GridDomain(
            self.dim,
            tuple(x * factor for x in self.origin),
            self.cells,
            self.spacing * factor,
        )


@dataclasses.dataclass(frozen=True)
class GridFunction:
    """Cell values (row-major) of a piecewise-constant function on a GridDomain."""

    domain: GridDomain
    values: np.ndarray
    meta: Optional[dict] = dataclasses.field(default=None, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64).reshape(-1)
        if vals.size != self.domain.n_cells:
            raise ValueError(
                f"values length {vals.size} != cell count {self.domain.n_cells}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def array(self) -> np.ndarray:
        """Values reshaped to the grid shape (read-only view)."""
        return self.values.reshape(self.domain.shape)

    def with_values(self, values: np.ndarray, meta: Optional[dict] = None) -> "GridFunction":
        return GridFunction(self.domain, values, meta)


class SummedAreaTable:
    """Prefix sums over cells; box sums of any grid-aligned rectangle in O(1)."""

    def __init__(self, u: GridFunction):
        self.domain = u.domain
        arr = u.array
        if self.domain.dim == 1:
            p = np.zeros(arr.shape[0] + 1)
            np.cumsum(arr, out=p[1:])
        else:
            p = np.zeros((arr.shape[0] + 1, arr.shape[1] + 1))
            p[1:, 1:] = arr.cumsum(axis=0).cumsum(axis=1)
        self.prefix = p

    def box_sum(self, lo: Sequence[int], hi: Sequence[int]) -> float:
        """Sum of cell values with index lo <= i < hi (cell counts, not measure)."""
        d = self.domain
        lo = tuple(int(x) for x in lo)
        hi = tuple(int(x) for x in hi)
        if len(lo) != d.dim or len(hi) != d.dim:
            raise ValueError("index rank mismatch")
        for a in range(d.dim):
            if not (0 <= lo[a] <= hi[a] <= d.cells[a]):
                raise ValueError(f"box out of range on axis {a}: [{lo[a]}, {hi[a]})")
        p = self.prefix
        if d.dim == 1:
            return float(p[hi[0]] - p[lo[0]])
        return float(
            p[hi[0], hi[1]] - p[lo[0], hi[1]] - p[hi[0], lo[1]] + p[lo[0], lo[1]]
        )


def shift(u: GridFunction, offset: Sequence[int]) -> GridFunction:
    """v with v[i] = u[i + offset], zero where i + offset leaves the box."""
    d = u.domain
    offset = tuple(int(o) for o in offset)
    if len(offset) != d.dim:
        raise ValueError(f"offset length {len(offset)} != dim {d.dim}")
    arr = u.array
    out = np.zeros_like(arr)
    src = []
    dst = []
    for a in range(d.dim):
        n = d.cells[a]
        o = offset[a]
        lo_dst = max(0, -o)
        hi_dst = min(n, n - o)
        if hi_dst <= lo_dst:
            return u.with_values(out)
        dst.append(slice(lo_dst, hi_dst))
        src.append(slice(lo_dst + o, hi_dst + o))
    out[tuple(dst)] = arr[tuple(src)]
    return u.with_values(out)


def k_difference(u: GridFunction, offset: Sequence[int], k: int) -> GridFunction:
    """k-th finite difference with step h = spacing * offset, zero-filled.

    Built by iterating d_{j+1} = d_j(.+h) - d_j so the difference recursion
    holds bitwise.
    """
    if k < 1:
        raise ValueError("difference order k must be >= 1")
    d = u
    for _ in range(k):
        d = d.with_values(shift(d, offset).values - d.values)
    return d


def truncate(u: GridFunction, level: float) -> GridFunction:
    """Clamp values to [-level, level]."""
    if not level > 0:
        raise ValueError("truncation level must be positive")
    return u.with_values(np.clip(u.values, -level, level))


def mollify(u: GridFunction, kernel, eps: float) -> GridFunction:
    """Discrete convolution with the cell-sampled, renormalized radial kernel.

    The sampled kernel is rescaled to exact unit discrete mass, so constants
    are reproduced exactly on interior cells. A meta flag marks eps below one
    spacing (kernel under-resolved by the grid).
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    d = u.domain
    h = d.spacing
    radius = max(1, int(math.ceil(kernel.effective_radius(eps, d.dim) / h)))
    if d.dim == 1:
        offs = np.arange(-radius, radius + 1)
        r = np.abs(offs) * h
        w = kernel.profile(r, eps, d.dim)
    else:
        oi, oj = np.meshgrid(
            np.arange(-radius, radius + 1), np.arange(-radius, radius + 1), indexing="ij"
        )
        offs = np.stack([oi.ravel(), oj.ravel()], axis=1)
        r = np.hypot(oi.ravel() * h, oj.ravel() * h)
        w = kernel.profile(r, eps, d.dim)
    total = float(np.sum(w)) * d.cell_volume
    if total <= 0:
        raise ValueError("kernel has no mass at this eps/spacing")
    w = w / total  # unit discrete mass: sum(w) * cell_volume == 1

    arr = u.array
    out = np.zeros_like(arr)
    if d.dim == 1:
        for o, wk in zip(offs, w):
            if wk == 0.0:
                continue
            out += wk * shift(u, (int(o),)).array
    else:
        for (oi_, oj_), wk in zip(offs, w):
            if wk == 0.0:
                continue
            out += wk * shift(u, (int(oi_), int(oj_))).array
    out *= d.cell_volume
    meta = {"eps": eps, "under_resolved": bool(eps < h)}
    return u.with_values(out, meta=meta)


# ---------------------------------------------------------------------------
# Grid file I/O: CSV-like header format and a JSON equivalent.


class GridFormatError(ValueError):
    pass


def write_grid(u: GridFunction, path: str) -> None:
    if str(path).endswith(".json"):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(grid_to_json_dict(u), f)
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(grid_to_csv_text(u))


def grid_to_json_dict(u: GridFunction) -> dict:
    d = u.domain
    return {
        "dim": d.dim,
        "cells": list(d.cells),
        "origin": list(d.origin),
        "spacing": d.spacing,
        "values": u.values.tolist(),
    }


def grid_to_csv_text(u: GridFunction) -> str:
    d = u.domain
    lines = [
        f"dim,{d.dim}",
        "cells," + ",".join(str(n) for n in d.cells),
        "origin," + ",".join(repr(x) for x in d.origin),
        f"spacing,{d.spacing!r}",
    ]
    arr = u.array
    rows = arr.reshape(1, -1) if d.dim == 1 else arr
    for row in rows:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def read_grid(path: str) -> GridFunction:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    stripped = text.lstrip()
    if stripped.startswith("{") or str(path).endswith(".json"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as e:
            raise GridFormatError(f"{path}: invalid JSON grid: {e}") from e
        return grid_from_json_dict(obj, where=str(path))
    return grid_from_csv_text(text, where=str(path))


def grid_from_json_dict(obj: dict, where: str = "<json>") -> GridFunction:
    for key in ("dim", "cells", "origin", "spacing", "values"):
        if key not in obj:
            raise GridFormatError(f"{where}: missing key '{key}'")
    domain = GridDomain(obj["dim"], obj["origin"], obj["cells"], obj["spacing"])
    values = np.asarray(obj["values"], dtype=np.float64).reshape(-1)
    return GridFunction(domain, values)


def grid_from_csv_text(text: str, where: str = "<csv>") -> GridFunction:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) < 5:
        raise GridFormatError(f"{where}: expected 4 header lines plus values")
    header = {}
    for i, key in enumerate(("dim", "cells", "origin", "spacing")):
        parts = lines[i].split(",")
        if parts[0].strip() != key:
            raise GridFormatError(
                f"{where}: line {i + 1}: expected '{key},...', got {lines[i]!r}"
            )
        header[key] = [p.strip() for p in parts[1:]]
    try:
        dim = int(header["dim"][0])
        cells = [int(x) for x in header["cells"]]
        origin = [float(x) for x in header["origin"]]
        spacing = float(header["spacing"][0])
    except (ValueError, IndexError) as e:
        raise GridFormatError(f"{where}: malformed header: {e}") from e
    flat = []
    for ln_no, ln in enumerate(lines[4:], start=5):
        try:
            flat.extend(float(x) for x in ln.split(","))
        except ValueError as e:
            raise GridFormatError(f"{where}: line {ln_no}: bad value row: {e}") from e
    domain = GridDomain(dim, origin, cells, spacing)
    if len(flat) != domain.n_cells:
        raise GridFormatError(
            f"{where}: got {len(flat)} values, expected {domain.n_cells}"
        )
    return GridFunction(domain, np.asarray(flat))
