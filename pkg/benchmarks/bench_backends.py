"""Timing comparison of the compiled kernel core against the numpy fallback.

Run as `python3 benchmarks/bench_backends.py`. The numpy path is forced by
re-importing the backend package with OSCILLAB_FORCE_NUMPY=1, so a single
process measures both implementations on identical inputs.
"""

from __future__ import annotations

import importlib
import math
import os
import sys
import time

import numpy as np


def _load_backend(force_numpy: bool):
    if force_numpy:
        os.environ["OSCILLAB_FORCE_NUMPY"] = "1"
    else:
        os.environ.pop("OSCILLAB_FORCE_NUMPY", None)
    import oscillab.backend

    return importlib.reload(oscillab.backend)


def _time(fn, repeats: int = 3) -> float:
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> int:
    rng = np.random.default_rng(7)
    arr = rng.normal(size=(512, 512))
    mask = np.hypot(*np.meshgrid(*(np.linspace(-1, 1, 512),) * 2, indexing="ij")) < 0.8
    offsets = [
        (i, j)
        for i in range(0, 9)
        for j in range(-8, 9)
        if (i > 0 or j > 0) and math.hypot(i, j) <= 8.0
    ]

    rows = []
    results = {}
    for label, force in (("numpy", True), ("compiled", False)):
        backend = _load_backend(force)
        if label == "compiled" and not backend.COMPILED:
            print("compiled extension unavailable; skipping its column", file=sys.stderr)
            continue
        t_offsets = _time(lambda: backend.offset_diff_pow_sums(arr, offsets, 2.0, mask=mask))
        t_dir = _time(lambda: backend.directional_sum(arr, mask, 3.25, -7.5, 2.0))
        results[label] = (
            np.asarray(backend.offset_diff_pow_sums(arr, offsets, 2.0, mask=mask)),
            backend.directional_sum(arr, mask, 3.25, -7.5, 2.0),
        )
        rows.append((label, backend.COMPILED, t_offsets, t_dir))

    print(f"{'backend':<10} {'compiled':<9} {'offset_sums [s]':<16} {'directional [s]':<16}")
    for label, compiled, t1, t2 in rows:
        print(f"{label:<10} {str(compiled):<9} {t1:<16.4f} {t2:<16.4f}")

    if len(results) == 2:
        a, b = results["numpy"], results["compiled"]
        agree = np.allclose(a[0], b[0], rtol=1e-12) and math.isclose(a[1], b[1], rel_tol=1e-12)
        print(f"backends agree: {agree}")
        return 0 if agree else 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
