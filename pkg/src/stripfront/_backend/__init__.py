"""Hot-loop backend selection.

The compiled extension is preferred when importable; otherwise the NumPy
implementation takes over.  Set ``STRIPFRONT_BACKEND=numpy`` or
``STRIPFRONT_BACKEND=cython`` to force a choice (useful for the
benchmark and the cross-backend equivalence tests).  Both backends
produce identical outputs for identical ``(parameters, key)``.
"""

from __future__ import annotations

import os

from . import _numpy


def _load_compiled():
    from . import _core
    return _core


def available_backends() -> dict:
    """Name -> module for every importable backend."""
    out = {"numpy": _numpy}
    try:
        out["cython"] = _load_compiled()
    except ImportError:
        pass
    return out


_choice = os.environ.get("STRIPFRONT_BACKEND", "auto").strip().lower() or "auto"
if _choice == "auto":
    try:
        _impl = _load_compiled()
    except ImportError:
        _impl = _numpy
elif _choice in ("cython", "compiled", "c"):
    _impl = _load_compiled()
elif _choice in ("numpy", "python", "fallback"):
    _impl = _numpy
else:
    raise ValueError(
        f"STRIPFRONT_BACKEND={_choice!r} not understood; "
        "use 'auto', 'cython', or 'numpy'")

BACKEND = _impl.NAME
uniform_points = _impl.uniform_points
prefix_strip_maxima = _impl.prefix_strip_maxima
strip_maxima_points = _impl.strip_maxima_points
