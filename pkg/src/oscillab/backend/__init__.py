"""Summation-kernel backend: compiled extension when available, numpy otherwise.

Set OSCILLAB_FORCE_NUMPY=1 to skip the compiled extension (used by the
backend-agreement tests and the benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("OSCILLAB_FORCE_NUMPY") == "1":
    from . import _kernels_np as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_np as _impl

COMPILED = bool(_impl.COMPILED)
offset_diff_pow_sums = _impl.offset_diff_pow_sums
directional_sum = _impl.directional_sum

__all__ = ["COMPILED", "offset_diff_pow_sums", "directional_sum"]
