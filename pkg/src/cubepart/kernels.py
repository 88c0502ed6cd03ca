"""Hot kernels, compiled when available.

The Cython build (``_core``) is used when it imports; otherwise, or when
``CUBEPART_PURE=1`` is set, the pure-Python ``_pycore`` is used. Both give
identical results in identical order.
"""

import os

from . import _pycore

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

BACKENDS = {"python": _pycore}
if _core is not None:
    BACKENDS["cython"] = _core

if _core is None or os.environ.get("CUBEPART_PURE", "") not in ("", "0"):
    _impl = _pycore
else:
    _impl = _core

BACKEND = _impl.BACKEND
CoverSearch = _impl.CoverSearch
count_cover = _impl.count_cover
neighbor_counts = _impl.neighbor_counts
complete_upward = _impl.complete_upward
