"""Graph containers: construction, deduplication, projection."""

import numpy as np
import pytest

import oracles
from ecotail.graphs import build_directed_graph, project_onto_contributors
from ecotail.graphs.core import BipartiteGraph
from ecotail.ingest import ContributionRecord, build_bipartite_from_records


def test_build_interns_labels_in_first_seen_order():
    g = build_directed_graph([("b", "a"), ("c", "a"), ("b", "c")])
    assert g.labels == ("b", "a", "c")
    assert g.n_nodes == 3
    assert g.n_edges == 3


def test_build_drops_self_loops_and_duplicates():
    g = build_directed_graph([("a", "b"), ("a", "b"), ("a", "a"), ("b", "a")])
    assert g.n_nodes == 2
    assert g.n_edges == 2          # a->b and b->a survive
    assert g.n_undirected_edges == 1
    assert g.has_edge("a", "b") and g.has_edge("b", "a")
    assert not g.has_edge("a", "a")
    assert not g.has_edge("a", "zzz")


def test_build_rejects_malformed_edges():
    with pytest.raises(ValueError, match="edge 1"):
        build_directed_graph([("a", "b"), ("only-one",)])
    with pytest.raises(ValueError, match="edge 0.*strings"):
        build_directed_graph([(1, "b")])
    with pytest.raises(ValueError, match="edge 2.*empty"):
        build_directed_graph([("a", "b"), ("b", "c"), ("", "d")])


def test_degrees():
    g = build_directed_graph([("a", "b"), ("a", "c"), ("b", "c")])
    assert g.out_degrees().tolist() == [2, 1, 0]
    assert g.in_degrees().tolist() == [0, 1, 2]


def test_undirected_csr_shape():
    g = build_directed_graph([("a", "b"), ("b", "a"), ("b", "c")])
    indptr, indices = g.undirected_csr()
    assert indptr.tolist() == [0, 1, 3, 4]
    # reciprocal pair is stored once per direction
    assert sorted(indices[indptr[1]:indptr[2]].tolist()) == [0, 2]


def test_bipartite_basics():
    g = BipartiteGraph(["u", "v"], ["x", "y"], [0, 0, 1], [0, 1, 1], [3, 1, 7])
    assert g.n_left == 2 and g.n_right == 2 and g.n_edges == 3
    assert g.weight("u", "x") == 3
    assert g.weight("v", "y") == 7
    with pytest.raises(KeyError):
        g.weight("v", "x")
    assert g.contributors_per_library().tolist() == [1, 2]


def test_bipartite_rejects_bad_edges():
    with pytest.raises(ValueError, match="duplicate"):
        BipartiteGraph(["u"], ["x"], [0, 0], [0, 0], [1, 2])
    with pytest.raises(ValueError, match="weights"):
        BipartiteGraph(["u"], ["x"], [0], [0], [0])


def test_restrict_left_preserves_label_order_and_narrows_right():
    g = BipartiteGraph(
        ["u", "v", "w"], ["x", "y", "z"],
        [0, 1, 1, 2], [0, 0, 1, 2], [1, 1, 1, 1],
    )
    sub = g.restrict_left({"w", "u"})
    assert sub.left_labels == ("u", "w")
    assert sub.right_labels == ("x", "z")   # y lost its only kept contributor
    assert sub.n_edges == 2
    assert sub.weight("w", "z") == 1


def test_projection_links_shared_library_members():
    records = [
        ContributionRecord("a", "libx", 1, 0),
        ContributionRecord("b", "libx", 2, 0),
        ContributionRecord("c", "libx", 3, 0),
        ContributionRecord("d", "liby", 1, 0),
    ]
    bip, excluded = build_bipartite_from_records(records, min_contributors_per_library=1)
    assert excluded.excluded == ()
    proj = project_onto_contributors(bip)
    assert proj.n_nodes == 4            # d kept as an isolate
    assert proj.n_edges == 3            # triangle a-b-c
    assert proj.has_edge("a", "b") and proj.has_edge("b", "c") and proj.has_edge("a", "c")
    assert not proj.has_edge("a", "d")
    assert proj.degrees().tolist() == [2, 2, 2, 0]


def test_projection_matches_naive_oracle(rng):
    for _ in range(30):
        n_contrib = int(rng.integers(2, 25))
        n_lib = int(rng.integers(1, 8))
        memberships = {}
        edges = []
        for li in range(n_lib):
            members = rng.choice(n_contrib, size=int(rng.integers(1, n_contrib + 1)),
                                 replace=False)
            memberships[f"L{li}"] = {f"c{m}" for m in members}
            edges += [(int(m), li) for m in members]
        bip = BipartiteGraph(
            [f"c{i}" for i in range(n_contrib)],
            [f"L{i}" for i in range(n_lib)],
            [e[0] for e in edges], [e[1] for e in edges], [1] * len(edges),
        )
        proj = project_onto_contributors(bip)
        expected = oracles.project(memberships)
        got = {
            tuple(sorted((proj.labels[u], proj.labels[v])))
            for u, v in zip(proj.edge_u, proj.edge_v)
        }
        assert got == {tuple(sorted(e)) for e in expected}


def test_projection_low_memory_path_agrees(monkeypatch):
    from ecotail.graphs import core

    rng = np.random.default_rng(5)
    edges = [(int(c), int(l)) for c, l in zip(rng.integers(0, 40, 300),
                                              rng.integers(0, 6, 300))]
    edges = sorted(set(edges))
    bip = BipartiteGraph(
        [f"c{i}" for i in range(40)], [f"L{i}" for i in range(6)],
        [e[0] for e in edges], [e[1] for e in edges], [1] * len(edges),
    )
    full = project_onto_contributors(bip)
    monkeypatch.setattr(core, "_TRIU_LIMIT", 4)
    low = project_onto_contributors(bip)
    assert full.labels == low.labels
    assert np.array_equal(full.edge_u, low.edge_u)
    assert np.array_equal(full.edge_v, low.edge_v)
