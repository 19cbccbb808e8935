"""Kernel backend selection: compiled Cython core if built, numpy fallback otherwise.

Set KGCOHERENT_PURE_PYTHON=1 to force the fallback (used by the benchmark and
the backend-parity tests).
"""
from __future__ import annotations

import os

from . import _ladder as _py

BACKEND = "python"
_impl = _py

if not os.environ.get("KGCOHERENT_PURE_PYTHON"):
    try:
        from . import _ladder_cy as _cy

        _impl = _cy
        BACKEND = "compiled"
    except ImportError:
        pass

ladder_weights = _impl.ladder_weights
transverse_weights = _impl.transverse_weights
kg_weight_matrix = _impl.kg_weight_matrix


def available_backends() -> dict:
    """Name -> module for every importable kernel backend."""
    out = {"python": _py}
    try:
        from . import _ladder_cy as _cy

        out["compiled"] = _cy
    except ImportError:
        pass
    return out
