"""Backend selection for the hot displacement-product kernel.

The compiled extension is used when it imports; setting ``QSLBOUND_PURE=1``
forces the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
displacement_product = _kernels_py.displacement_product
displacement_apply = _kernels_py.displacement_apply

if not os.environ.get("QSLBOUND_PURE"):
    try:
        from ._kernels import displacement_apply, displacement_product  # noqa: F811
    except ImportError:
        pass
    else:
        BACKEND = "cython"

__all__ = ["BACKEND", "displacement_apply", "displacement_product"]
