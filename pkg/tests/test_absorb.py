import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from arbortile.absorb import (IndexVector, check_robust, find_connector, hermite_basis,
                              index_vector, lattice_member, robust_vectors, transferral,
                              verify_absorber)
from arbortile.errors import CapExceeded
from arbortile.factor import has_factor
from arbortile.graph import complete_graph, complete_multipartite, disjoint_union
from oracles import brute_lattice_member

K3 = complete_graph(3)


def _connector_ok(g, h, con):
    u, v = con.pair
    s = con.s_set
    return (len(s) == h.n * con.t - 1 and u not in s and v not in s
            and has_factor(g.induced(s + [u])[0], h)[0] and has_factor(g.induced(s + [v])[0], h)[0])


def test_index_vectors():
    p = [[0, 1, 2], [3, 4], [5]]
    assert index_vector([0, 1, 3], p).coords == (2, 1, 0)
    assert index_vector([], p).coords == (0, 0, 0)
    assert index_vector([3, 4], p).coords == (0, 2, 0)


def test_connector_examples():
    k10 = complete_graph(10)
    con = find_connector(k10, K3, 0, 1, 1)
    assert con is not None and _connector_ok(k10, K3, con)
    split = disjoint_union(complete_graph(7), complete_graph(7))
    assert find_connector(split, K3, 0, 8, 2) is None
    con = find_connector(split, K3, 0, 1, 1)
    assert con is not None and _connector_ok(split, K3, con)


def test_connector_respects_avoid():
    con = find_connector(complete_graph(6), K3, 0, 1, 1, avoid=[2, 3])
    assert con is not None and not set(con.s_set) & {2, 3}


def test_connector_cap():
    split = disjoint_union(complete_graph(7), complete_graph(7))
    with pytest.raises(CapExceeded):
        find_connector(split, K3, 0, 8, 2, cap=3)


def test_absorber_examples():
    k12 = complete_graph(12)
    assert verify_absorber(k12, K3, [0, 1, 2], list(range(3, 12)), 3)
    assert not verify_absorber(k12, K3, [0, 1, 2], list(range(2, 11)), 3)
    assert not verify_absorber(k12, K3, [0, 1, 2], list(range(3, 9)), 3)


def test_robust_vectors_examples():
    k12 = complete_graph(12)
    blocks = [list(range(6)), list(range(6, 12))]
    found = robust_vectors(k12, K3, blocks, Fraction(1, 10))
    assert sorted(rv.vector.coords for rv in found) == [(0, 3), (1, 2), (2, 1), (3, 0)]
    assert all(check_robust(k12, K3, blocks, Fraction(1, 10), rv) for rv in found)
    assert robust_vectors(k12, K3, blocks, Fraction(1, 2)) == []
    bip = complete_multipartite([6, 6])
    assert robust_vectors(bip, K3, blocks, Fraction(1, 10)) == []


def test_transferral_examples():
    assert transferral([(2, 1), (1, 2)]) == (0, 1, (2, 1), (1, 2))
    assert transferral([(3, 0), (0, 3)]) is None
    i, j, s, t = transferral([IndexVector((3, 0)), IndexVector((2, 1)), IndexVector((1, 2))])
    assert (i, j) == (0, 1) and tuple(x - y for x, y in zip(s, t)) == (1, -1)


def test_lattice_examples():
    assert lattice_member([(1, -1)], (1, -1))
    assert not lattice_member([(2, -2)], (1, -1))
    assert not lattice_member([], (1, 0))
    assert lattice_member([], (0, 0))


def test_hermite_basis_is_triangular():
    basis = hermite_basis([(4, 6, 2), (2, 2, 2), (6, 8, 4)])
    leads = [next(k for k, x in enumerate(row) if x) for row in basis]
    assert leads == sorted(set(leads)) and all(basis[i][leads[i]] > 0 for i in range(len(basis)))


vectors = st.lists(st.integers(-4, 4), min_size=3, max_size=3).map(tuple)


@given(st.lists(vectors, min_size=0, max_size=4), vectors)
def test_lattice_matches_determinant_oracle(gens, target):
    assert lattice_member(gens, target) == brute_lattice_member(gens, target)


@given(st.lists(st.lists(st.integers(0, 3), min_size=3, max_size=3).map(tuple), min_size=2, max_size=5))
def test_transferral_implies_membership(iset):
    hit = transferral(iset)
    if hit is None:
        return
    i, j, _, _ = hit
    diffs = [tuple(x - y for x, y in zip(a, b)) for a in iset for b in iset]
    unit = tuple(1 if k == i else -1 if k == j else 0 for k in range(3))
    assert lattice_member(diffs, unit)


def test_complete_hosts_always_connect():
    rng = random.Random(3)
    for n, h in ((12, complete_graph(3)), (16, complete_graph(4)), (20, complete_graph(2))):
        g = complete_graph(n)
        for _ in range(5):
            u, v = rng.sample(range(n), 2)
            con = find_connector(g, h, u, v, 1)
            assert con is not None and _connector_ok(g, h, con)
