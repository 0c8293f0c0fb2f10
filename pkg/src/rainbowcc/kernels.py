"""Backend selector for the packet kernels.

Imports the compiled extension when it was built, otherwise the pure-Python
twin. Set RAINBOWCC_PURE=1 in the environment to force the fallback.
"""

import os

if os.environ.get("RAINBOWCC_PURE"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined,no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

BACKEND = _impl.BACKEND
gf256_mul = _impl.gf256_mul
xor_bytes = _impl.xor_bytes
xor_into = _impl.xor_into
gf256_scale = _impl.gf256_scale
gf256_axpy = _impl.gf256_axpy


def backend():
    """Name of the active kernel backend ("cython" or "python")."""
    return BACKEND
