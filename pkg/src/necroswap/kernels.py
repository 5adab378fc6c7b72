"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy fallback.
Set ``NECROSWAP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("NECROSWAP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND
apply_1q = _impl.apply_1q
apply_2q = _impl.apply_2q
canonical_quantize = _impl.canonical_quantize


def available_backends():
    """Map backend name to kernel module for every importable backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
