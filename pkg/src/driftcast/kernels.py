"""Backend selection for the distance kernels.

The compiled extension is used when it was built; setting
``DRIFTCAST_PURE_PYTHON=1`` forces the numpy fallback.
"""

import logging
import os

import numpy as np

from . import _pykernels

log = logging.getLogger(__name__)

METRIC_CODES = {"manhattan": 0, "euclidean": 1}

_compiled = None
if not os.environ.get("DRIFTCAST_PURE_PYTHON"):
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        log.debug("compiled kernels unavailable, using numpy fallback")

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["cython"] = _compiled

BACKEND = "cython" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]


def use_backend(name):
    """Switch the active backend ("cython" or "python"); returns the previous name."""
    global BACKEND, _impl
    if name not in BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {sorted(BACKENDS)})")
    prev = BACKEND
    BACKEND, _impl = name, BACKENDS[name]
    return prev


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def pairwise(X, C, metric):
    return _impl.pairwise(_f64(X), _f64(C), METRIC_CODES[metric])


def assign(X, C, metric):
    return _impl.assign(_f64(X), _f64(C), METRIC_CODES[metric])


def sq_residuals(X, C, labels):
    return _impl.sq_residuals(_f64(X), _f64(C), np.ascontiguousarray(labels, dtype=np.intp))


def cluster_sums(X, labels, K):
    return _impl.cluster_sums(_f64(X), np.ascontiguousarray(labels, dtype=np.intp), int(K))
