"""Distance kernels with a compiled fast path and a pure-Python fallback.

The backend is picked once at import time: the Cython extension if it built,
otherwise the NumPy fallback.  Set ECOTAIL_PURE_PYTHON=1 to force the
fallback.  Both backends share the range-based entry points, so the
multi-worker wrappers below are backend-agnostic; results are bit-identical
across backends and across worker counts (integer histograms merge exactly,
per-node values land in disjoint slots).
"""

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

if os.environ.get("ECOTAIL_PURE_PYTHON"):
    from . import fallback as _impl

    COMPILED = False
else:
    try:
        from . import _speedups as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import fallback as _impl

        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "fallback"


def _ranges(n: int, workers: int):
    bounds = [round(i * n / workers) for i in range(workers + 1)]
    return [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]


def pair_distance_histogram(indptr, indices, workers: int = 1) -> np.ndarray:
    """hist[d] = number of ordered node pairs at hop distance d (d >= 1).

    The graph is the undirected simple graph described by the CSR arrays;
    unreachable pairs contribute to no bucket.
    """
    n = len(indptr) - 1
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    workers = max(1, min(int(workers), n))
    if workers == 1:
        return _impl.bfs_histogram_range(indptr, indices, 0, n)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_impl.bfs_histogram_range, indptr, indices, lo, hi)
            for lo, hi in _ranges(n, workers)
        ]
        parts = [f.result() for f in futures]
    return np.sum(parts, axis=0)


def local_efficiency_values(indptr, indices, workers: int = 1) -> np.ndarray:
    """Neighbourhood-subgraph efficiency per node (0.0 for degree < 2)."""
    n = len(indptr) - 1
    if n <= 0:
        return np.zeros(0, dtype=np.float64)
    workers = max(1, min(int(workers), n))
    if workers == 1:
        return _impl.local_efficiency_range(indptr, indices, 0, n)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_impl.local_efficiency_range, indptr, indices, lo, hi)
            for lo, hi in _ranges(n, workers)
        ]
        parts = [f.result() for f in futures]
    return np.concatenate(parts)
