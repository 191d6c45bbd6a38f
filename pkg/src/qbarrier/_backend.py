"""Kernel backend selection.

The compiled extension is used when it imports; setting the environment
variable ``QBARRIER_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("QBARRIER_PURE_PYTHON") == "1":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        kernels = _kernels_py
        BACKEND = "python"

python_kernels = _kernels_py


def compiled_kernels():
    """Return the compiled kernel module, or None when it is not built."""
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
