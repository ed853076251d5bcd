"""Kernel backend selection: compiled extension if built, numpy fallback otherwise.

Set KISINLAB_PURE=1 to force the fallback (used by the benchmark and tests).
"""

import os

if os.environ.get("KISINLAB_PURE"):
    from ._pure import BACKEND, series_mul
else:
    try:
        from kisinlab._speedups import BACKEND, series_mul
    except ImportError:  # pragma: no cover - depends on build environment
        from ._pure import BACKEND, series_mul

__all__ = ["series_mul", "BACKEND"]
