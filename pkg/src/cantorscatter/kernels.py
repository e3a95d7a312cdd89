"""Backend selection for the hot segment-product loop.

The compiled extension is used when it was built; set
``CANTORSCATTER_BACKEND=python`` to force the numpy fallback.
"""

import os

from . import _pykernels

_forced = os.environ.get("CANTORSCATTER_BACKEND", "").strip().lower()
if _forced not in ("", "python", "cython"):
    raise ImportError(f"CANTORSCATTER_BACKEND must be 'python' or 'cython', got {_forced!r}")

if _forced == "python":
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _pykernels

BACKEND = _impl.BACKEND
cell_products = _impl.cell_products
