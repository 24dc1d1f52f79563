"""Whole-graph structure metrics.

All metrics are taken over the undirected view of the graph (dependency
direction is ignored once topology is measured).  Quantities that are
mathematically undefined for a given graph -- density of a single node,
assortativity of an edgeless or degree-regular graph -- come back as None
rather than NaN, and ``full_metrics`` propagates those Nones instead of
failing.

Efficiency follows Latora & Marchiori.  Global efficiency of a graph with n
nodes is

    E_glob = (1 / (n (n - 1))) * sum_{i != j} 1 / d(i, j)

with unreachable pairs contributing zero.  Local efficiency is the mean over
nodes of the global efficiency of the subgraph induced by each node's
neighbours (the node itself excluded); nodes with fewer than two neighbours
contribute zero.  Distances come from the BFS kernels in
:mod:`ecotail._kernels`, so the heavy loops run compiled when the extension
is built and results do not depend on the worker count.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import asdict, dataclass

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ecotail import _kernels

__all__ = [
    "Components",
    "MetricsReport",
    "weakly_connected_components",
    "density",
    "degree_assortativity",
    "shortest_path_lengths_from",
    "global_efficiency",
    "local_efficiency",
    "full_metrics",
]


@dataclass(frozen=True)
class Components:
    """Connected-component decomposition (weak connectivity when directed)."""

    count: int
    giant_size: int
    membership: tuple  # component id per node, ids in first-seen order
    labels: tuple

    def partition(self):
        """Components as label tuples, ordered by first appearance."""
        groups = [[] for _ in range(self.count)]
        for label, comp in zip(self.labels, self.membership):
            groups[comp].append(label)
        return tuple(tuple(g) for g in groups)


def weakly_connected_components(graph) -> Components:
    """Connected components of the undirected view of ``graph``.

    For a directed graph this is weak connectivity; for undirected graphs it
    is plain connectivity.
    """
    n = graph.n_nodes
    indptr, indices = graph.undirected_csr()
    if n == 0:
        return Components(0, 0, (), _node_labels(graph))
    mat = sparse.csr_matrix(
        (np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n)
    )
    count, raw = csgraph.connected_components(mat, directed=False)
    # Renumber component ids in first-seen node order for stable output.
    remap = {}
    membership = np.empty(n, dtype=np.int64)
    for i, r in enumerate(raw):
        if r not in remap:
            remap[r] = len(remap)
        membership[i] = remap[r]
    sizes = np.bincount(membership, minlength=count)
    return Components(int(count), int(sizes.max()), tuple(int(c) for c in membership),
                      _node_labels(graph))


def _node_labels(graph):
    if hasattr(graph, "labels"):
        return tuple(graph.labels)
    # Bipartite: combined index space, left block then right block.
    return tuple(graph.left_labels) + tuple(graph.right_labels)


def density(graph, mode: str = "undirected"):
    """Edge density, None when fewer than two nodes.

    undirected: m / (n (n - 1) / 2) with m the undirected edge count;
    directed:   m / (n (n - 1)) with m the directed edge count (undirected
    graphs count each edge in both directions, so the two modes agree there).
    """
    n = graph.n_nodes
    if n < 2:
        return None
    if mode == "undirected":
        return graph.n_undirected_edges / (n * (n - 1) / 2)
    if mode == "directed":
        m = graph.n_edges if hasattr(graph, "edge_src") else 2 * graph.n_undirected_edges
        return m / (n * (n - 1))
    raise ValueError(f"unknown density mode: {mode!r}")


def degree_assortativity(graph):
    """Pearson correlation of degrees across edge endpoints (undirected view).

    Every edge contributes both orientations.  None when the graph has no
    edges or when either endpoint degree sequence has zero variance (e.g. a
    cycle, where the correlation is 0/0).
    """
    indptr, indices = graph.undirected_csr()
    if len(indices) == 0:
        return None
    deg = np.diff(indptr).astype(np.float64)
    x = np.repeat(deg, np.diff(indptr))
    y = deg[indices]
    mx, my = x.mean(), y.mean()
    vx = ((x - mx) ** 2).mean()
    vy = ((y - my) ** 2).mean()
    if vx <= 0.0 or vy <= 0.0:
        return None
    cov = ((x - mx) * (y - my)).mean()
    return float(cov / math.sqrt(vx * vy))


def shortest_path_lengths_from(graph, source: str) -> dict:
    """BFS hop distances from ``source`` over the undirected view.

    Returns {label: distance} for reachable nodes only (source included at
    distance 0).  Unknown source raises KeyError.
    """
    labels = _node_labels(graph)
    try:
        s = labels.index(source) if not hasattr(graph, "_index") else graph._index[source]
    except (KeyError, ValueError):
        raise KeyError(source) from None
    indptr, indices = graph.undirected_csr()
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for v in indices[indptr[u]:indptr[u + 1]]:
            v = int(v)
            if v not in dist:
                dist[v] = du
                queue.append(v)
    return {labels[i]: d for i, d in dist.items()}


def _efficiency_from_histogram(hist: np.ndarray, n: int) -> float:
    if len(hist) < 2:
        return 0.0
    contrib = hist[1:] / np.arange(1, len(hist), dtype=np.float64)
    return float(contrib.sum() / (n * (n - 1)))


def global_efficiency(graph, workers: int = 1):
    """Latora-Marchiori global efficiency; None when n < 2."""
    n = graph.n_nodes
    if n < 2:
        return None
    indptr, indices = graph.undirected_csr()
    hist = _kernels.pair_distance_histogram(indptr, indices, workers=workers)
    return _efficiency_from_histogram(hist, n)


def local_efficiency(graph, workers: int = 1):
    """Mean neighbourhood-subgraph efficiency over all nodes; None when n = 0."""
    n = graph.n_nodes
    if n == 0:
        return None
    indptr, indices = graph.undirected_csr()
    values = _kernels.local_efficiency_values(indptr, indices, workers=workers)
    return float(values.sum() / n)


@dataclass(frozen=True)
class MetricsReport:
    nodes: int
    edges: int
    components: int
    giant_component_size: int
    density: float | None
    assortativity: float | None
    local_efficiency: float | None
    global_efficiency: float | None

    def to_dict(self) -> dict:
        return asdict(self)


def full_metrics(graph, density_mode: str = "undirected", workers: int = 1) -> MetricsReport:
    """All whole-graph metrics in one report.

    ``edges`` is the graph's native edge count (directed for dependency
    graphs, undirected otherwise).  Undefined quantities appear as None.
    """
    if graph.n_nodes == 0:
        raise ValueError("empty graph")
    comps = weakly_connected_components(graph)
    return MetricsReport(
        nodes=graph.n_nodes,
        edges=graph.n_edges,
        components=comps.count,
        giant_component_size=comps.giant_size,
        density=density(graph, mode=density_mode),
        assortativity=degree_assortativity(graph),
        local_efficiency=local_efficiency(graph, workers=workers),
        global_efficiency=global_efficiency(graph, workers=workers),
    )
