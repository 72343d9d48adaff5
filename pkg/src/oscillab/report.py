"""Machine-readable records of norm evaluations, inequality checks, sweeps."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from typing import Optional

TOOLKIT_VERSION = "0.1.0"


def _jsonable(x):
    import numpy as np

    if isinstance(x, np.generic):
        return x.item()
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, float) and x != x:  # NaN
        return "nan"
    return x


def config_hash(params: dict) -> str:
    blob = json.dumps(_jsonable(params), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclasses.dataclass
class Report:
    """One norm evaluation, inequality check, or sweep outcome."""

    op: str
    params: dict
    lhs: float
    rhs: float
    passed: bool
    tolerance: float
    extras: Optional[dict] = None

    @property
    def ratio(self) -> float:
        if self.rhs == 0.0:
            return float("inf") if self.lhs > 0 else 0.0
        return self.lhs / self.rhs

    def to_dict(self) -> dict:
        d = {
            "op": self.op,
            "params": _jsonable(self.params),
            "lhs": _jsonable(self.lhs),
            "rhs": _jsonable(self.rhs),
            "ratio": _jsonable(self.ratio),
            "pass": bool(self.passed),
            "tolerance": self.tolerance,
            "version": TOOLKIT_VERSION,
            "config_hash": config_hash(self.params),
        }
        if self.extras:
            d["extras"] = _jsonable(self.extras)
        return d

    def to_json(self, indent: Optional[int] = None) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)


def dump_reports(reports, fh, indent: int = 2) -> None:
    json.dump([r.to_dict() for r in reports], fh, sort_keys=True, indent=indent)
    fh.write("\n")
