"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``GEOCORE_PURE_PYTHON=1`` to force the fallback.
"""

import os

from geocore import _fallback

if os.environ.get("GEOCORE_PURE_PYTHON", "") not in ("", "0"):
    kernels = _fallback
    COMPILED = False
else:
    try:
        from geocore import _kernels as kernels

        COMPILED = True
    except ImportError:  # pragma: no cover - depends on the build
        kernels = _fallback
        COMPILED = False

INF = _fallback.INF
LEFT = _fallback.LEFT
RIGHT = _fallback.RIGHT


def backends():
    """All importable backends keyed by name, compiled first."""
    found = {}
    try:
        from geocore import _kernels

        found["cython"] = _kernels
    except ImportError:  # pragma: no cover
        pass
    found["python"] = _fallback
    return found
