"""Hot-kernel backend selection.

Tries the compiled extension first and falls back to the numpy
implementations when it is missing (build skipped or failed). Set
``APILABELS_PURE=1`` to force the fallback, e.g. for benchmarking.
"""

from __future__ import annotations

import logging
import os

from apilabels.kernels import pure as _pure

logger = logging.getLogger(__name__)

if os.environ.get("APILABELS_PURE", "") not in ("", "0"):
    _impl = _pure
else:
    try:
        from apilabels.kernels import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        logger.info("compiled kernels unavailable, using numpy fallback")
        _impl = _pure

BACKEND: str = _impl.BACKEND
GAIN_EPS: float = _pure.GAIN_EPS
best_split = _impl.best_split
knn_indices = _impl.knn_indices


def get_backend(name: str):
    """Return a specific backend module ("fast" or "pure"), for tests and benchmarks."""
    if name == "pure":
        return _pure
    if name == "fast":
        from apilabels.kernels import _fast

        return _fast
    raise ValueError(f"unknown kernel backend: {name!r}")
