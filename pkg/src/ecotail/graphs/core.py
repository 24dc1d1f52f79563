"""Graph containers for dependency and contribution data.

Three shapes cover everything the toolkit measures:

* :class:`DependencyGraph` -- directed simple graph, importer -> imported.
* :class:`BipartiteGraph` -- contributor/library edges with activity weights.
  The two sides are separate namespaces; the same string may appear on both.
* :class:`ProjectionGraph` -- undirected simple graph over contributors,
  linking pairs that touched at least one common library.

All containers intern string labels to integer ids in first-seen order and
store edges as sorted NumPy index arrays, so identical inputs always produce
identical layouts.  The undirected CSR view consumed by the distance kernels
is built lazily and cached.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "DependencyGraph",
    "BipartiteGraph",
    "ProjectionGraph",
    "build_directed_graph",
    "project_onto_contributors",
]

# Pair-generation budget for clique expansion; beyond this a per-anchor loop
# keeps peak memory bounded.
_TRIU_LIMIT = 10_000_000


def _intern(labels):
    index = {}
    order = []
    for label in labels:
        if label not in index:
            index[label] = len(order)
            order.append(label)
    return tuple(order), index


def _check_label(label, where):
    if not isinstance(label, str):
        raise ValueError(f"{where}: labels must be strings, got {type(label).__name__}")
    if not label:
        raise ValueError(f"{where}: empty label")


def _undirected_arcs(n, u, v):
    """Both orientations of the given undirected/directed edge set, deduplicated.

    Returns (indptr int64, indices int32, arc_count).
    """
    if n == 0:
        return np.zeros(1, dtype=np.int64), np.zeros(0, dtype=np.int32), 0
    src = np.concatenate([u, v]).astype(np.int64)
    dst = np.concatenate([v, u]).astype(np.int64)
    enc = np.unique(src * n + dst)
    src = enc // n
    dst = (enc % n).astype(np.int32)
    counts = np.bincount(src, minlength=n)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst, len(enc)


class DependencyGraph:
    """Directed simple graph of ``importer -> imported`` edges.

    Self-dependencies are dropped at build time and repeated edges collapse
    to one; use :func:`build_directed_graph` to construct from label pairs.
    """

    def __init__(self, labels, src, dst):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        n = len(self.labels)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if len(src) != len(dst):
            raise ValueError("edge arrays must have equal length")
        if len(src) and (src.min() < 0 or src.max() >= n or dst.min() < 0 or dst.max() >= n):
            raise ValueError("edge index out of range")
        if np.any(src == dst):
            raise ValueError("self-dependency in edge arrays")
        enc = np.unique(src * max(n, 1) + dst)
        if len(enc) != len(src):
            raise ValueError("duplicate directed edge")
        self._enc = enc
        self.edge_src = (enc // max(n, 1)).astype(np.int32)
        self.edge_dst = (enc % max(n, 1)).astype(np.int32)
        self._und = None

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self._enc)

    @property
    def n_undirected_edges(self) -> int:
        indptr, _, arcs = self._und_parts()
        return arcs // 2

    def has_edge(self, source: str, target: str) -> bool:
        try:
            s = self._index[source]
            t = self._index[target]
        except KeyError:
            return False
        code = s * max(self.n_nodes, 1) + t
        pos = np.searchsorted(self._enc, code)
        return pos < len(self._enc) and self._enc[pos] == code

    def _und_parts(self):
        if self._und is None:
            self._und = _undirected_arcs(self.n_nodes, self.edge_src, self.edge_dst)
        return self._und

    def undirected_csr(self):
        indptr, indices, _ = self._und_parts()
        return indptr, indices

    def out_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_src, minlength=self.n_nodes)

    def in_degrees(self) -> np.ndarray:
        return np.bincount(self.edge_dst, minlength=self.n_nodes)


def build_directed_graph(edges) -> DependencyGraph:
    """Build a :class:`DependencyGraph` from an iterable of (source, target) pairs.

    Labels are interned in first-seen order.  Self-loops are dropped;
    duplicate pairs collapse.  Malformed entries raise ValueError with the
    offending position.
    """
    labels = []
    pairs = []
    for i, edge in enumerate(edges):
        try:
            source, target = edge
        except (TypeError, ValueError):
            raise ValueError(f"edge {i}: expected a (source, target) pair") from None
        _check_label(source, f"edge {i}")
        _check_label(target, f"edge {i}")
        labels.append(source)
        labels.append(target)
        pairs.append((source, target))
    order, index = _intern(labels)
    if pairs:
        src = np.fromiter((index[s] for s, _ in pairs), dtype=np.int64, count=len(pairs))
        dst = np.fromiter((index[t] for _, t in pairs), dtype=np.int64, count=len(pairs))
        keep = src != dst
        src, dst = src[keep], dst[keep]
        enc = np.unique(src * max(len(order), 1) + dst)
        src = enc // max(len(order), 1)
        dst = enc % max(len(order), 1)
    else:
        src = dst = np.zeros(0, dtype=np.int64)
    return DependencyGraph(order, src, dst)


class BipartiteGraph:
    """Weighted contributor/library edges with disjoint label namespaces."""

    def __init__(self, left_labels, right_labels, edge_left, edge_right, weights):
        self.left_labels = tuple(left_labels)
        self.right_labels = tuple(right_labels)
        self._left_index = {lab: i for i, lab in enumerate(self.left_labels)}
        self._right_index = {lab: i for i, lab in enumerate(self.right_labels)}
        L, R = len(self.left_labels), len(self.right_labels)
        li = np.asarray(edge_left, dtype=np.int64)
        ri = np.asarray(edge_right, dtype=np.int64)
        w = np.asarray(weights, dtype=np.int64)
        if not (len(li) == len(ri) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(li):
            if li.min() < 0 or li.max() >= L or ri.min() < 0 or ri.max() >= R:
                raise ValueError("edge index out of range")
            if w.min() < 1:
                raise ValueError("edge weights must be >= 1")
        enc = li * max(R, 1) + ri
        order = np.argsort(enc, kind="stable")
        enc = enc[order]
        if len(enc) > 1 and np.any(enc[1:] == enc[:-1]):
            raise ValueError("duplicate contributor/library edge")
        self.edge_left = li[order].astype(np.int32)
        self.edge_right = ri[order].astype(np.int32)
        self.weights = w[order]
        self._und = None

    @property
    def n_left(self) -> int:
        return len(self.left_labels)

    @property
    def n_right(self) -> int:
        return len(self.right_labels)

    @property
    def n_nodes(self) -> int:
        return self.n_left + self.n_right

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    @property
    def n_undirected_edges(self) -> int:
        return self.n_edges

    def weight(self, contributor: str, library: str) -> int:
        li = self._left_index[contributor]
        ri = self._right_index[library]
        code = li * max(self.n_right, 1) + ri
        enc = self.edge_left.astype(np.int64) * max(self.n_right, 1) + self.edge_right
        pos = np.searchsorted(enc, code)
        if pos < len(enc) and enc[pos] == code:
            return int(self.weights[pos])
        raise KeyError((contributor, library))

    def contributors_per_library(self) -> np.ndarray:
        return np.bincount(self.edge_right, minlength=self.n_right)

    def undirected_csr(self):
        # Combined index space: left nodes 0..L-1, right nodes L..L+R-1.
        if self._und is None:
            u = self.edge_left.astype(np.int64)
            v = self.edge_right.astype(np.int64) + self.n_left
            indptr, indices, arcs = _undirected_arcs(self.n_nodes, u, v)
            self._und = (indptr, indices, arcs)
        return self._und[0], self._und[1]

    def restrict_left(self, keep) -> "BipartiteGraph":
        """Sub-bipartite keeping only edges whose contributor is in ``keep``.

        The right side narrows to libraries still incident to an edge; label
        order on both sides is preserved.
        """
        keep = set(keep)
        mask = np.fromiter(
            (self.left_labels[i] in keep for i in self.edge_left),
            dtype=bool,
            count=self.n_edges,
        )
        li, ri, w = self.edge_left[mask], self.edge_right[mask], self.weights[mask]
        kept_left = sorted(set(li.tolist()))
        kept_right = sorted(set(ri.tolist()))
        lmap = {old: new for new, old in enumerate(kept_left)}
        rmap = {old: new for new, old in enumerate(kept_right)}
        return BipartiteGraph(
            [self.left_labels[i] for i in kept_left],
            [self.right_labels[i] for i in kept_right],
            [lmap[i] for i in li],
            [rmap[i] for i in ri],
            w,
        )


class ProjectionGraph:
    """Undirected simple graph; isolates are legitimate nodes."""

    def __init__(self, labels, u, v):
        self.labels = tuple(labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        n = len(self.labels)
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if len(u) != len(v):
            raise ValueError("edge arrays must have equal length")
        if len(u):
            if u.min() < 0 or v.max() >= n or v.min() < 0 or u.max() >= n:
                raise ValueError("edge index out of range")
            if np.any(u >= v):
                raise ValueError("undirected edges must satisfy u < v")
        enc = np.unique(u * max(n, 1) + v)
        if len(enc) != len(u):
            raise ValueError("duplicate undirected edge")
        self._enc = enc
        self.edge_u = (enc // max(n, 1)).astype(np.int32)
        self.edge_v = (enc % max(n, 1)).astype(np.int32)
        self._und = None

    @property
    def n_nodes(self) -> int:
        return len(self.labels)

    @property
    def n_edges(self) -> int:
        return len(self._enc)

    @property
    def n_undirected_edges(self) -> int:
        return self.n_edges

    def has_edge(self, a: str, b: str) -> bool:
        try:
            i = self._index[a]
            j = self._index[b]
        except KeyError:
            return False
        if i == j:
            return False
        if i > j:
            i, j = j, i
        code = i * max(self.n_nodes, 1) + j
        pos = np.searchsorted(self._enc, code)
        return pos < len(self._enc) and self._enc[pos] == code

    def degrees(self) -> np.ndarray:
        indptr, _ = self.undirected_csr()
        return np.diff(indptr)

    def undirected_csr(self):
        if self._und is None:
            indptr, indices, arcs = _undirected_arcs(self.n_nodes, self.edge_u, self.edge_v)
            self._und = (indptr, indices, arcs)
        return self._und[0], self._und[1]


def project_onto_contributors(graph: BipartiteGraph) -> ProjectionGraph:
    """One-mode projection of a bipartite graph onto its contributor side.

    Two contributors are linked when they share at least one library.  Every
    contributor becomes a node, including those that end up isolated.
    """
    L = graph.n_left
    order = np.lexsort((graph.edge_left, graph.edge_right))
    li = graph.edge_left[order].astype(np.int64)
    ri = graph.edge_right[order]
    pieces = []
    if len(ri):
        starts = np.flatnonzero(np.r_[True, ri[1:] != ri[:-1]])
        ends = np.r_[starts[1:], len(ri)]
        for s, e in zip(starts, ends):
            members = li[s:e]  # ascending and unique within one library
            c = len(members)
            if c < 2:
                continue
            if c * (c - 1) // 2 <= _TRIU_LIMIT:
                iu, iv = np.triu_indices(c, k=1)
                pieces.append(members[iu] * L + members[iv])
            else:
                for a in range(c - 1):
                    pieces.append(members[a] * L + members[a + 1:])
    if pieces:
        enc = np.unique(np.concatenate(pieces))
        u = enc // L
        v = enc % L
    else:
        u = v = np.zeros(0, dtype=np.int64)
    return ProjectionGraph(graph.left_labels, u, v)
