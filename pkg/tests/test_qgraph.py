import dataclasses

import pytest

from arbortile.errors import ArityError, NotInHtilde
from arbortile.factor import has_factor, verify_tiling
from arbortile.graph import (Graph, complete_graph, complete_multipartite, cycle_graph,
                             disjoint_union, empty_graph, is_forest, is_independent, star_graph)
from arbortile.invariants import AcyclicPartition, f_value, vertex_arboricity
from arbortile.qgraph import QSpec, admissible_pairs, build_q, h_factor_in_q, plan_q, verify_q

SMALL_MENAGERIE = [complete_graph(3), complete_graph(4), complete_graph(5), cycle_graph(4),
                   cycle_graph(6), complete_multipartite([3, 3]), star_graph(3)]


def test_plan_k3_one_one():
    spec = plan_q(complete_graph(3), 1, 1)
    assert spec.s == 2 and spec.case == "odd"
    (forest,) = spec.forests
    assert forest.n == 4 and forest.m() == 2 and is_forest(forest)


def test_plan_k4_zero_two():
    spec = plan_q(complete_graph(4), 0, 2)
    assert spec.s == 4 and spec.case == "even"
    assert all(f.n == 8 and f.m() == 4 for f in spec.forests)


def test_plan_k3_three_zero_is_octahedron():
    spec = plan_q(complete_graph(3), 3, 0)
    assert spec.s == 2 and spec.forests == []
    q = build_q(spec)
    assert q.graph.edges == complete_multipartite([2, 2, 2]).edges


def test_build_k3_one_one_shape():
    q = build_q(plan_q(complete_graph(3), 1, 1))
    u1, u2 = q.clusters
    assert len(u1) == 2 and is_independent(q.graph, u1)
    assert len(u2) == 4 and q.graph.induced(u2)[0].m() == 2
    assert all(q.graph.has_edge(x, y) for x in u1 for y in u2)


def test_build_single_vertex():
    k1 = complete_graph(1)
    spec = QSpec(k1, 1, 0, 1, AcyclicPartition(((0,),)), case="odd")
    q = build_q(spec)
    assert q.graph.n == 1 and q.clusters == [[0]]


def test_factor_rows():
    k3 = complete_graph(3)
    spec = plan_q(k3, 1, 1)
    q = build_q(spec)
    cert = h_factor_in_q(k3, spec, q)
    assert len(cert) == 2
    for c in cert.copies:
        assert sum(v in q.clusters[0] for v in c.map) == 1
    k4 = complete_graph(4)
    spec = plan_q(k4, 0, 2)
    q = build_q(spec)
    cert = h_factor_in_q(k4, spec, q)
    assert len(cert) == 4
    for c in cert.copies:
        assert [sum(v in u for v in c.map) for u in q.clusters] == [2, 2]
    assert len(h_factor_in_q(k3, plan_q(k3, 3, 0))) == 2


def test_arity_and_membership_errors():
    with pytest.raises(ArityError):
        plan_q(complete_graph(3), 2, 0)
    bad = AcyclicPartition(((0, 1), (2,)))  # independent block must come first
    with pytest.raises(NotInHtilde):
        plan_q(complete_graph(3), 1, 1, partition=bad)


def test_corrupted_forest_is_rejected():
    k3 = complete_graph(3)
    spec = plan_q(k3, 1, 1)
    cyclic = Graph.from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    broken = dataclasses.replace(spec, forests=[cyclic])
    check = verify_q(k3, broken)
    assert not check and "forest-acyclic" in check.reason


@pytest.mark.parametrize("h", SMALL_MENAGERIE, ids=lambda g: f"n{g.n}m{g.m()}")
def test_every_admissible_pair_verifies(h):
    f = f_value(h)
    r = vertex_arboricity(h)[0]
    pairs = admissible_pairs(h)
    assert pairs and all(a + 2 * b == f for a, b in pairs)
    for a, b in pairs:
        spec = plan_q(h, a, b)
        q = build_q(spec)
        assert q.graph.n == spec.s * a + 2 * spec.s * b
        cert = h_factor_in_q(h, spec, q)
        assert len(cert) == (2 * r if f == 2 * r else 2)
        assert verify_tiling(q.graph, h, cert, require_factor=True)
        assert verify_q(h, spec)
        for j in range(a):
            assert len(q.clusters[j]) == spec.s and is_independent(q.graph, q.clusters[j])
        for j in range(a, a + b):
            assert len(q.clusters[j]) == 2 * spec.s and is_forest(q.graph, q.clusters[j])
