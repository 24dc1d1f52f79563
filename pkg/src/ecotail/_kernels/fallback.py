"""Pure NumPy/SciPy implementations of the distance kernels.

Used when the compiled extension is unavailable (or explicitly disabled via
ECOTAIL_PURE_PYTHON).  The distance histogram is computed by sparse
matrix-vector BFS over blocks of sources; because the histogram is integer
counts, results are bit-identical to the compiled kernel.  Local efficiency
runs a plain per-node BFS in Python with the same float accumulation order
as the compiled code.
"""

from collections import deque

import numpy as np
from scipy import sparse

_BLOCK = 128


def bfs_histogram_range(indptr, indices, s_lo, s_hi):
    """Histogram of ordered-pair hop distances for sources in [s_lo, s_hi)."""
    n = len(indptr) - 1
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    hist = np.zeros(n + 1, dtype=np.int64)
    if s_hi <= s_lo:
        return hist[:n]
    adj = sparse.csr_matrix(
        (np.ones(len(indices), dtype=np.float32), np.asarray(indices), np.asarray(indptr)),
        shape=(n, n),
    )
    for lo in range(s_lo, s_hi, _BLOCK):
        hi = min(lo + _BLOCK, s_hi)
        rows = np.arange(lo, hi)
        visited = np.zeros((len(rows), n), dtype=bool)
        visited[np.arange(len(rows)), rows] = True
        frontier = visited.copy()
        d = 0
        while frontier.any():
            d += 1
            reached = (frontier.astype(np.float32) @ adj) > 0
            frontier = reached & ~visited
            visited |= frontier
            hist[d] += int(frontier.sum())
    return hist[:n]


def local_efficiency_range(indptr, indices, s_lo, s_hi):
    """Efficiency of each node's neighbourhood subgraph, nodes [s_lo, s_hi)."""
    n = len(indptr) - 1
    out = np.zeros(max(s_hi - s_lo, 0), dtype=np.float64)
    if n <= 0:
        return out
    pos = np.full(n, -1, dtype=np.int64)
    for i in range(s_lo, s_hi):
        nbrs = indices[indptr[i]:indptr[i + 1]]
        d = len(nbrs)
        if d < 2:
            continue
        pos[nbrs] = np.arange(d)
        ladj = []
        for u in nbrs:
            local = pos[indices[indptr[u]:indptr[u + 1]]]
            ladj.append(local[local >= 0])
        hist = np.zeros(d, dtype=np.int64)
        ldist = np.empty(d, dtype=np.int64)
        lmark = np.full(d, -1, dtype=np.int64)
        for a in range(d):
            lmark[a] = a
            ldist[a] = 0
            queue = deque([a])
            while queue:
                u = queue.popleft()
                du = ldist[u] + 1
                for v in ladj[u]:
                    if lmark[v] != a:
                        lmark[v] = a
                        ldist[v] = du
                        hist[du] += 1
                        queue.append(v)
        esum = 0.0
        for dd in range(1, d):
            if hist[dd] > 0:
                esum += hist[dd] / float(dd)
        out[i - s_lo] = esum / float(d * (d - 1))
        pos[nbrs] = -1
    return out
