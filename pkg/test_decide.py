"""
判定器测试：组合判定、证书复核、应力证书与数值交叉验证
"""

from fractions import Fraction

import pytest

from constructions import base_graph, random_circuit
from decide import (
    AGREE,
    COINCIDENT,
    CONCENTRIC_RIGIDITY,
    DISAGREE,
    EXEMPT,
    RIGIDITY,
    VFREE_RIGIDITY,
    all_graphs,
    coincident_combinatorial,
    cross_validate,
    generate_corpus,
    globally_rigid,
    globally_rigid_concentric,
    numeric_coincident,
    numeric_rigid,
    numeric_vr_minimal,
    rigid,
    rigid_concentric,
    stress_certificate,
    verify_certificate,
    vfree_rigid,
    vr_deciders,
    vr_redundantly_rigid,
)
from errors import PreconditionError
from graph import (
    Graph,
    complete_graph,
    cycle_graph,
    disjoint_union,
    glue_at_vertex,
    is_connected,
    path_graph,
    star_graph,
)
from numeric import Framework, random_framework, random_radii

K5E = base_graph("K5-e")
BITS = 12


def test_rigid():
    verdict = rigid(complete_graph(3))
    assert verdict.answer
    assert verdict.certificate["kind"] == "complete-small-graph"

    verdict = rigid(K5E)
    assert verdict.answer
    assert verdict.certificate["rank"] == 8
    assert verify_certificate(K5E, verdict.certificate)

    assert not rigid(star_graph(4))
    assert not rigid(path_graph(3))


def test_globally_rigid():
    assert globally_rigid(complete_graph(4)).certificate["kind"] == "complete-small-graph"
    verdict = globally_rigid(K5E)
    assert verdict.answer
    assert verify_certificate(K5E, verdict.certificate)

    glued = glue_at_vertex(K5E, K5E, 0, 0)
    verdict = globally_rigid(glued)
    assert not verdict.answer
    assert verdict.certificate["kind"] == "cut-vertex"
    assert verify_certificate(glued, verdict.certificate)

    assert globally_rigid(disjoint_union(complete_graph(3), complete_graph(3))).certificate["kind"] == "disconnected"
    assert not globally_rigid(path_graph(4))

    verdict = globally_rigid(cycle_graph(5))
    assert verdict.certificate["kind"] == "non-redundant-edge"
    assert verify_certificate(cycle_graph(5), verdict.certificate)


def test_circuits_are_globally_rigid_with_stress():
    for seed in range(3):
        g, _ = random_circuit(7, seed)
        assert globally_rigid(g)
        verdict = stress_certificate(g, seed, bits=BITS)
        assert verdict.answer
        assert verdict.certificate["rank"] == 3 * g.n - 6
        assert verdict.certificate["two_connected"] and verdict.certificate["enough_edges"]


def test_stress_certificate():
    verdict = stress_certificate(K5E, 0, bits=BITS)
    assert verdict.answer
    assert verdict.certificate["rank"] == 9
    assert verdict.certificate["cokernel_dimension"] == 1
    assert verify_certificate(K5E, verdict.certificate)

    k5 = stress_certificate(complete_graph(5), 0, bits=BITS)
    assert k5.answer
    assert k5.certificate["cokernel_dimension"] == 2

    tree = stress_certificate(path_graph(4), 0, bits=BITS)
    assert not tree.answer
    assert tree.certificate["cokernel_dimension"] == 0


def test_stress_certificate_is_reproducible():
    assert stress_certificate(K5E, 5, bits=BITS) == stress_certificate(K5E, 5, bits=BITS)


def test_vfree_rigid():
    for v in range(K5E.n):
        verdict = vfree_rigid(K5E, v)
        assert verdict.answer
        assert verify_certificate(K5E, verdict.certificate)

    pendant = K5E.add_vertex([0, 1])
    assert not vfree_rigid(pendant, 5)
    assert vfree_rigid(pendant, 0)
    assert not vfree_rigid(complete_graph(4), 0)
    with pytest.raises(PreconditionError):
        vfree_rigid(K5E, 9)


def test_vr_deciders():
    k3 = vr_deciders(complete_graph(3))
    assert k3.minimally_rigid and k3.rigid and not k3.globally_rigid

    k4e = vr_deciders(complete_graph(4).remove_edges([(0, 1)]))
    assert k4e.globally_rigid and k4e.rigid and not k4e.minimally_rigid

    tree = vr_deciders(path_graph(5))
    assert not (tree.minimally_rigid or tree.rigid or tree.globally_rigid)

    assert vr_deciders(path_graph(3).add_edges([(0, 2)]).add_vertex([2])).minimally_rigid
    assert not vr_deciders(disjoint_union(cycle_graph(3), complete_graph(1))).rigid


def test_vr_redundantly_rigid():
    assert not vr_redundantly_rigid(cycle_graph(4))
    assert vr_redundantly_rigid(complete_graph(4))
    assert not vr_redundantly_rigid(path_graph(4))


def test_vr_minimal_matches_rank_exhaustively():
    for n in range(1, 5):
        for g in all_graphs(n):
            if not is_connected(g):
                continue
            expected = vr_deciders(g).minimally_rigid.answer
            assert numeric_vr_minimal(random_framework(g, n, bits=BITS)) == expected, g


def test_concentric_deciders():
    assert rigid_concentric(K5E).label == CONCENTRIC_RIGIDITY
    assert rigid_concentric(K5E).theorem == "8.1"
    assert globally_rigid_concentric(K5E).answer
    radii = random_radii(5, 2)
    assert numeric_rigid(random_framework(K5E, 2, radii=radii, bits=BITS))
    assert not numeric_rigid(random_framework(path_graph(5), 2, radii=radii, bits=BITS))


def test_coincident():
    k5 = complete_graph(5)
    assert coincident_combinatorial(k5, 0, 1)
    assert numeric_coincident(random_framework(k5, 3, bits=BITS), 0, 1)
    assert not coincident_combinatorial(K5E, 0, 1)
    assert not numeric_coincident(random_framework(K5E, 3, bits=BITS), 0, 1)


def test_cross_validate_exempts_small_complete_graphs():
    report = cross_validate(complete_graph(3), 0, bits=BITS)
    assert report.check(RIGIDITY).status == EXEMPT
    assert report.agree


def test_cross_validate_corpus_agrees():
    for i, g in enumerate(generate_corpus(count=10, n_max=6, seed=1)):
        report = cross_validate(g, i, bits=BITS)
        assert report.agree, report.to_dict()
        assert all(c.status in (AGREE, EXEMPT) for c in report.checks)


def test_cross_validate_resamples_degenerate_framework():
    # 所有点都在同一条竖直线上
    collinear = Framework(K5E, tuple((1, 0, Fraction(k)) for k in range(1, 6)))
    good = random_framework(K5E, 1, bits=BITS)
    report = cross_validate(K5E, 0, bits=BITS, frameworks=(collinear, good))
    assert report.agree
    assert report.check(RIGIDITY).resamples >= 1
    assert report.check(VFREE_RIGIDITY).resamples >= 1

    flagged = cross_validate(K5E, 0, bits=BITS, frameworks=(collinear, good), max_resamples=0)
    assert not flagged.agree
    assert flagged.check(RIGIDITY).status == DISAGREE
    assert flagged.check(COINCIDENT).status in (AGREE, DISAGREE)


def test_cross_validate_requires_vertices():
    with pytest.raises(PreconditionError):
        cross_validate(Graph(0), 0)


def test_generate_corpus():
    corpus = generate_corpus(count=12, n_max=7, seed=3)
    assert len(corpus) == 12
    assert corpus == generate_corpus(count=12, n_max=7, seed=3)
    assert all(2 <= g.n <= 7 for g in corpus)
    assert generate_corpus(count=0) == []
    with pytest.raises(PreconditionError):
        generate_corpus(count=1, n_max=1, n_min=2)


def test_global_implies_rigid_on_corpus():
    for g in generate_corpus(count=20, n_max=6, seed=4):
        if globally_rigid(g):
            assert rigid(g)


def test_all_graphs():
    assert len(list(all_graphs(3))) == 8
    assert next(all_graphs(2)) == Graph(2)


def test_verdict_json_names_the_theorem():
    assert rigid(K5E).to_dict()["theorem"] == "1.1"
    assert globally_rigid(K5E).to_dict()["theorem"] == "1.2"
    assert vfree_rigid(K5E, 0).to_dict()["theorem"] == "6.5"
    vr = vr_deciders(K5E)
    assert (vr.minimally_rigid.theorem, vr.rigid.theorem, vr.globally_rigid.theorem) == ("7.1", "7.1", "7.5")
    assert stress_certificate(K5E, 0, bits=BITS).theorem == "8.2"
    assert set(rigid(K5E).to_dict()) == {"answer", "theorem", "certificate"}


@pytest.mark.slow
def test_vr_minimal_matches_rank_on_all_connected_graphs_up_to_six_vertices():
    for n in range(1, 7):
        for g in all_graphs(n):
            if not is_connected(g):
                continue
            expected = vr_deciders(g).minimally_rigid.answer
            assert numeric_vr_minimal(random_framework(g, n)) == expected, g


@pytest.mark.slow
def test_full_corpus_agrees():
    corpus = generate_corpus(count=200, n_max=8, seed=0)
    assert len(corpus) == 200
    for i, g in enumerate(corpus):
        report = cross_validate(g, i)
        assert report.agree, report.to_dict()
        assert report.check(VFREE_RIGIDITY).status == AGREE


@pytest.mark.slow
def test_random_circuits_have_maximal_rank_stress():
    for seed in range(50):
        n = 5 + seed % 6
        g, _ = random_circuit(n, seed)
        verdict = stress_certificate(g, seed)
        assert verdict.answer, (seed, verdict.certificate)
        assert verdict.certificate["cokernel_dimension"] == 1
        assert verdict.certificate["rank"] == 3 * n - 6
        assert verify_certificate(g, verdict.certificate)


@pytest.mark.slow
def test_coincident_sample_matches_combinatorial():
    checked = 0
    for i, g in enumerate(generate_corpus(count=50, n_max=8, seed=3)):
        if not g.edges:
            continue
        u, v = g.edges[0]
        assert numeric_coincident(random_framework(g, i), u, v) == coincident_combinatorial(g, u, v), g
        checked += 1
    assert checked > 0
