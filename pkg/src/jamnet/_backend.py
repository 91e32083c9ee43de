"""Pick the compiled kernels when available, else the pure-Python ones.

Set ``JAMNET_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

kernels = _pykernels
BACKEND = "python"

if not os.environ.get("JAMNET_PURE_PYTHON"):
    try:
        from . import _ckernels as kernels  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass
