# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled BFS kernels over CSR adjacency.

Both kernels take a CSR structure (indptr int64, indices int32) describing an
undirected simple graph and operate on a contiguous range of source nodes, so
callers can split the node set across threads.  Everything inside the loops
runs without the GIL.  Accumulation is integer-only (distance histograms) or
lands in per-node slots, which keeps results bit-identical regardless of how
the source ranges are carved up.
"""

import numpy as np


def bfs_histogram_range(long long[::1] indptr, int[::1] indices, int s_lo, int s_hi):
    """Histogram of ordered-pair hop distances for BFS sources in [s_lo, s_hi).

    Returns int64 array ``hist`` of length n where hist[d] counts ordered
    pairs (s, t) with s in the range, t reachable from s, and d(s, t) == d.
    Unreachable pairs are simply absent.  hist[0] stays zero.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n <= 0:
        return np.zeros(0, dtype=np.int64)
    hist_arr = np.zeros(n, dtype=np.int64)
    mark_arr = np.full(n, -1, dtype=np.int32)
    dist_arr = np.zeros(n, dtype=np.int32)
    queue_arr = np.zeros(n, dtype=np.int32)
    cdef long long[::1] hist = hist_arr
    cdef int[::1] mark = mark_arr
    cdef int[::1] dist = dist_arr
    cdef int[::1] queue = queue_arr
    cdef int s, u, v, du, head, tail
    cdef long long p
    with nogil:
        for s in range(s_lo, s_hi):
            head = 0
            tail = 0
            queue[tail] = s
            tail += 1
            # mark[] doubles as a visited stamp: a slot equal to the current
            # source id means "seen this sweep", so no O(n) reset per source.
            mark[s] = s
            dist[s] = 0
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u] + 1
                for p in range(indptr[u], indptr[u + 1]):
                    v = indices[p]
                    if mark[v] != s:
                        mark[v] = s
                        dist[v] = du
                        hist[du] += 1
                        queue[tail] = v
                        tail += 1
    return hist_arr


def local_efficiency_range(long long[::1] indptr, int[::1] indices, int s_lo, int s_hi):
    """Efficiency of each node's neighbourhood subgraph, nodes [s_lo, s_hi).

    For node i with neighbours N(i) (i itself excluded), runs all-pairs BFS on
    the subgraph induced by N(i) and returns
    sum(1/d(u, v)) / (k * (k - 1)) per node, 0.0 when k < 2.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(max(s_hi - s_lo, 0), dtype=np.float64)
    if n <= 0 or s_hi <= s_lo:
        return out_arr

    indptr_np = np.asarray(indptr)
    indices_np = np.asarray(indices)
    deg = np.diff(indptr_np)
    # Worst-case scratch sizes over the requested range: the largest
    # neighbourhood, and the largest total adjacency volume of a
    # neighbourhood (sum of neighbour degrees bounds the local edge count).
    cdef long long dmax = int(deg[s_lo:s_hi].max()) if s_hi > s_lo else 0
    if dmax < 1:
        return out_arr
    csum = np.concatenate(([0], np.cumsum(deg[indices_np], dtype=np.int64)))
    work = csum[indptr_np[1:]] - csum[indptr_np[:-1]]
    cdef long long wmax = int(work[s_lo:s_hi].max())

    pos_arr = np.full(n, -1, dtype=np.int32)
    nbr_arr = np.zeros(dmax, dtype=np.int32)
    ladj_arr = np.zeros(max(wmax, 1), dtype=np.int32)
    lptr_arr = np.zeros(dmax + 1, dtype=np.int64)
    lmark_arr = np.zeros(dmax, dtype=np.int32)
    ldist_arr = np.zeros(dmax, dtype=np.int32)
    lqueue_arr = np.zeros(dmax, dtype=np.int32)
    lhist_arr = np.zeros(dmax + 1, dtype=np.int64)

    cdef double[::1] out = out_arr
    cdef int[::1] pos = pos_arr
    cdef int[::1] nbrs = nbr_arr
    cdef int[::1] ladj = ladj_arr
    cdef long long[::1] lptr = lptr_arr
    cdef int[::1] lmark = lmark_arr
    cdef int[::1] ldist = ldist_arr
    cdef int[::1] lqueue = lqueue_arr
    cdef long long[::1] lhist = lhist_arr

    cdef int i, a, b, u, v, d, du, head, tail, dd
    cdef long long p, total
    cdef double esum
    with nogil:
        for i in range(s_lo, s_hi):
            d = <int> (indptr[i + 1] - indptr[i])
            if d < 2:
                continue
            for a in range(d):
                v = indices[indptr[i] + a]
                nbrs[a] = v
                pos[v] = a
            # Build the induced subgraph in local coordinates 0..d-1.
            total = 0
            lptr[0] = 0
            for a in range(d):
                u = nbrs[a]
                for p in range(indptr[u], indptr[u + 1]):
                    b = pos[indices[p]]
                    if b >= 0:
                        ladj[total] = b
                        total += 1
                lptr[a + 1] = total
            for dd in range(d + 1):
                lhist[dd] = 0
            for a in range(d):
                lmark[a] = -1
            for a in range(d):
                head = 0
                tail = 0
                lqueue[tail] = a
                tail += 1
                lmark[a] = a
                ldist[a] = 0
                while head < tail:
                    u = lqueue[head]
                    head += 1
                    du = ldist[u] + 1
                    for p in range(lptr[u], lptr[u + 1]):
                        v = ladj[p]
                        if lmark[v] != a:
                            lmark[v] = a
                            ldist[v] = du
                            lhist[du] += 1
                            lqueue[tail] = v
                            tail += 1
            esum = 0.0
            for dd in range(1, d):
                if lhist[dd] > 0:
                    esum += lhist[dd] / <double> dd
            out[i - s_lo] = esum / (<double> d * (d - 1))
            for a in range(d):
                pos[nbrs[a]] = -1
    return out_arr
