from fractions import Fraction

import pytest

from arbortile.errors import BadN, GenFail, NotApplicable, PremiseViolated
from arbortile.extremal import (ExtremalInstance, certify_no_factor, construct, construct_g0,
                                construct_multi_part, construct_space_barrier, construct_two_part,
                                gen_high_girth_low_alpha, space_barrier_sizes, verify_claims)
from arbortile.factor import has_factor, max_tiling
from arbortile.graph import (INFINITE, Graph, complete_graph, complete_multipartite, cycle_graph,
                             disjoint_union, girth, independence_number, min_degree, path_graph)
from arbortile.invariants import hcf_report

K334 = complete_multipartite([3, 3, 4])
# two components with ar = 2, hcf1 = 3 and hcf2 = gcd(7, 4) = 1
TWO_PART_H = disjoint_union(complete_multipartite([1, 1, 1, 4]), complete_graph(4))


def test_generator_examples():
    g = gen_high_girth_low_alpha(60, 4, Fraction(1, 2), seed=1)
    assert g.n == 60 and girth(g) > 4 and independence_number(g)[0] <= 30
    assert gen_high_girth_low_alpha(12, 3, Fraction(1, 2), seed=0).n == 12
    with pytest.raises(GenFail):
        gen_high_girth_low_alpha(10, 20, Fraction(1, 20), seed=0)


def test_generator_is_reproducible():
    a = gen_high_girth_low_alpha(40, 4, Fraction(1, 2), seed=9)
    b = gen_high_girth_low_alpha(40, 4, Fraction(1, 2), seed=9)
    assert a.edges == b.edges


def test_g0_examples():
    inst = construct_g0(12, complete_graph(3))
    assert inst.params["p"] == 7 and [len(b) for b in inst.blocks] == [7, 5]
    assert construct_g0(16, cycle_graph(4)).params["p"] == 9
    with pytest.raises(NotApplicable):
        construct_g0(12, disjoint_union(path_graph(3), path_graph(2)))


def test_g0_certificates_agree_with_solver():
    for n, h in ((12, complete_graph(3)), (16, cycle_graph(4))):
        inst = construct_g0(n, h)
        cert = certify_no_factor(inst, h)
        assert cert.kind == "divisibility-mod-hcf2" and cert.solver == "agrees"
        assert all(cert.premises.values())
        assert has_factor(inst.graph, h) == (False, None)
        assert independence_number(inst.graph)[0] == 2


def test_g0_claims():
    inst = construct_g0(12, complete_graph(3))
    claims = verify_claims(inst, complete_graph(3), Fraction(1, 2))
    assert claims["min_degree"] == {"value": 4, "bound": 4, "ok": True}
    assert claims["alpha"]["value"] == 2 and claims["alpha"]["ok"]


def test_tampered_g0_is_rejected():
    inst = construct_g0(12, complete_graph(3))
    bridged = Graph.from_edges(12, list(inst.graph.edges) + [(0, 11)])
    with pytest.raises(PremiseViolated) as info:
        certify_no_factor(ExtremalInstance(bridged, inst.blocks, "g0", inst.params), complete_graph(3))
    assert info.value.check == "disconnected"


def test_two_part_synthetic_pattern():
    assert hcf_report(TWO_PART_H)[:2] == (3, 1)
    inst = construct_two_part(120, TWO_PART_H, seed=0)
    assert [len(b) for b in inst.blocks] == [61, 59]
    assert min_degree(inst.graph) >= 59
    cert = certify_no_factor(inst, TWO_PART_H)
    assert cert.kind == "difference-mod-hcf1" and all(cert.premises.values())
    with pytest.raises(NotApplicable):
        construct_two_part(120, complete_graph(3), seed=0)


def test_two_part_block_sizes_by_parity():
    odd = construct_two_part(121, TWO_PART_H, seed=2, exact_alpha=False)
    assert [len(b) for b in odd.blocks] == [61, 60]


def test_multi_part_examples():
    inst = construct_multi_part(90, complete_graph(6), seed=0)
    assert [len(b) for b in inst.blocks] == [31, 30, 29]
    claims = verify_claims(inst, complete_graph(6), Fraction(1, 2))
    assert claims["min_degree"]["ok"] and min_degree(inst.graph) >= Fraction(2, 3) * 90 - 1
    with pytest.raises(NotApplicable):
        construct_multi_part(90, K334, seed=0)
    with pytest.raises(NotApplicable):
        construct_multi_part(90, cycle_graph(4), seed=0)


def test_space_barrier_sizes():
    assert space_barrier_sizes(200, K334) == [19, 91, 90]
    assert space_barrier_sizes(40, complete_graph(4)) == [19, 21]
    with pytest.raises(BadN):
        space_barrier_sizes(41, complete_graph(4))


def test_space_barrier_counting_certificate():
    inst = construct_space_barrier(200, K334, seed=0, exact_alpha=False)
    cert = certify_no_factor(inst, K334)
    assert cert.kind == "size-counting" and cert.bound == 19 < 20
    assert cert.solver.startswith("skipped")


def test_space_barrier_k4_against_solver():
    h = complete_graph(4)
    inst = construct_space_barrier(40, h, seed=0)
    cert = certify_no_factor(inst, h)
    assert cert.solver == "agrees" and cert.bound == 9
    assert len(max_tiling(inst.graph, h)) <= 19 // 2
    assert all(girth(inst.graph.induced(b)[0]) > h.n for b in inst.blocks)
    claims = verify_claims(inst, h, Fraction(1, 2))
    assert claims["alpha"]["mode"] == "exact" and claims["alpha"]["ok"]


def test_failed_interior_is_reported():
    blocks = [list(range(10)), list(range(10, 20))]
    g = Graph.from_edges(20, [(u, v) for u in blocks[0] for v in blocks[1]])  # interiors left empty
    inst = ExtremalInstance(g, blocks, "space-barrier", {})
    claims = verify_claims(inst, complete_graph(4), Fraction(1, 4))
    assert claims["alpha"]["value"] == 10 and not claims["alpha"]["ok"]


def test_construct_dispatch():
    assert construct("g0", 12, complete_graph(3)).family == "g0"
    with pytest.raises(ValueError):
        construct("nope", 12, complete_graph(3))


def test_small_generated_instances_agree_with_solver():
    cases = [("space-barrier", 24, complete_graph(4)), ("space-barrier", 40, complete_graph(4)),
             ("g0", 21, complete_graph(3)), ("g0", 24, cycle_graph(4))]
    for family, n, h in cases:
        for seed in range(2):
            inst = construct(family, n, h, seed=seed)
            cert = certify_no_factor(inst, h)
            assert cert.solver == "agrees" and all(cert.premises.values())
