"""Select the compiled kernels when available, else the numpy fallback.

Set ``WNGDF_BACKEND=python`` to force the fallback.
"""
import importlib
import os

from . import _fallback


def load(name=None):
    """Return the kernel module for ``name`` ("compiled", "python" or None for auto)."""
    name = name or os.environ.get("WNGDF_BACKEND", "auto")
    if name == "python":
        return _fallback
    try:
        return importlib.import_module("wngdf._kernels")
    except ImportError:
        if name == "compiled":
            raise
        return _fallback


kernels = load()
NAME = "python" if kernels is _fallback else "compiled"
