"""Select the compiled modular echelon if it was built, else the Python one.

Set ``SBLOB_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from sblob import _echelon_py

if os.environ.get("SBLOB_PURE_PYTHON"):
    ModEchelon = _echelon_py.ModEchelon
    COMPILED = False
else:
    try:
        from sblob._echelon import ModEchelon
        COMPILED = True
    except ImportError:
        ModEchelon = _echelon_py.ModEchelon
        COMPILED = False

PyModEchelon = _echelon_py.ModEchelon
KERNEL = "cython" if COMPILED else "python"
