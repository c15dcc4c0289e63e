"""
图模块测试
"""

from itertools import combinations

import numpy as np
import pytest

from errors import GraphFormatError, PreconditionError, RigidityError, SizeCapError
from graph import (
    THREE_EDGE,
    TWO_VERTEX,
    Graph,
    MultiGraph,
    collapse_k4_sides,
    complete_graph,
    contract_edge,
    cycle_graph,
    cycle_space_dim,
    cut_vertices,
    disjoint_union,
    find_atoms,
    find_isomorphism,
    find_separations,
    format_edge_list,
    glue_at_vertex,
    is_2connected,
    is_connected,
    is_isomorphic,
    parse_graph,
    path_graph,
)


def k5_minus_e() -> Graph:
    return complete_graph(5).remove_edges([(2, 4)])


def h2() -> Graph:
    pairs = [(1, 2), (1, 3), (1, 4), (1, 7), (2, 3), (2, 4), (3, 4),
             (4, 5), (4, 6), (4, 7), (5, 6), (5, 7), (6, 7)]
    return Graph(7, tuple((u - 1, v - 1) for u, v in pairs))


def two_k4_by_matching() -> Graph:
    g = disjoint_union(complete_graph(4), complete_graph(4))
    return g.add_edges([(0, 4), (1, 5), (2, 6)])


def random_graph(rng, n: int, p: float = 0.5) -> Graph:
    return Graph(n, tuple(e for e in combinations(range(n), 2) if rng.random() < p))


def test_graph_normalizes_and_validates():
    g = Graph(3, ((2, 0), (1, 0)))
    assert g.edges == ((0, 1), (0, 2))
    with pytest.raises(RigidityError):
        Graph(3, ((1, 1),))
    with pytest.raises(RigidityError):
        Graph(3, ((0, 1), (1, 0)))
    with pytest.raises(RigidityError):
        Graph(3, ((0, 3),))


def test_multigraph_keeps_parallels():
    h = MultiGraph(3, ((0, 1), (1, 0), (1, 2)))
    assert h.multiplicity(0, 1) == 2
    assert h.degree(1) == 3
    assert not h.is_simple()
    assert h.underlying().m == 2


def test_is_connected():
    assert is_connected(complete_graph(3))
    assert not is_connected(Graph(4, ((0, 1), (2, 3))))
    assert is_connected(path_graph(5))
    assert is_connected(Graph(0))
    assert is_connected(Graph(1))


def test_is_2connected():
    assert is_2connected(cycle_graph(4))
    bowtie = glue_at_vertex(complete_graph(3), complete_graph(3), 0, 0)
    assert not is_2connected(bowtie)
    assert cut_vertices(bowtie) == [0]
    assert is_2connected(k5_minus_e())
    assert not is_2connected(complete_graph(2))


def test_cycle_space_dim():
    tree = Graph(6, ((0, 1), (0, 2), (1, 3), (1, 4), (2, 5)))
    assert cycle_space_dim(tree) == 0
    assert cycle_space_dim(complete_graph(3)) == 1
    assert cycle_space_dim(complete_graph(4)) == 3
    # 对连通分支可加
    union = disjoint_union(complete_graph(4), complete_graph(3))
    assert cycle_space_dim(union) == 4


def test_contract_edge_reports_parallel():
    result = contract_edge(complete_graph(3), (0, 1))
    assert result.graph == Graph(2, ((0, 1),))
    assert result.created_parallel
    assert result.mapping == {0: 0, 1: 0, 2: 1}


def test_contract_pendant_edge():
    result = contract_edge(path_graph(5), (3, 4))
    assert result.graph == path_graph(4)
    assert not result.created_parallel


def test_contract_edge_multigraph_output():
    result = contract_edge(complete_graph(3), (0, 1), keep_simple=False)
    assert isinstance(result.graph, MultiGraph)
    assert result.graph.multiplicity(0, 1) == 2


def test_contract_absent_edge():
    with pytest.raises(PreconditionError):
        contract_edge(path_graph(4), (0, 2))


def test_contract_never_makes_loops():
    rng = np.random.default_rng(3)
    for _ in range(30):
        g = random_graph(rng, 6)
        for e in g.edges:
            result = contract_edge(g, e)
            assert result.graph.n == g.n - 1
            assert all(u != v for u, v in result.graph.edges)


def test_k5_minus_e_has_no_nontrivial_separations():
    g = k5_minus_e()
    assert find_separations(g, TWO_VERTEX) == []
    assert all(s.trivial for s in find_separations(g, THREE_EDGE))


def test_h2_has_k4_side():
    seps = find_separations(h2(), TWO_VERTEX)
    assert any(s.trivial and frozenset({0, 1, 2, 3}) in s.parts for s in seps)
    # 每个 2-顶点分离都有一侧是 K4
    assert all(s.trivial for s in seps)


def test_collapse_k4_sides():
    h, mapping = collapse_k4_sides(h2())
    assert h.n == 3
    assert h.edges == ((0, 1), (0, 1), (0, 2), (1, 2), (1, 2))
    assert mapping == {0: 0, 3: 1, 6: 2}
    h1 = Graph(6, tuple((u - 1, v - 1) for u, v in [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3),
                                                      (2, 4), (3, 4), (4, 5), (4, 6), (5, 6)]))
    h, _ = collapse_k4_sides(h1)
    # 两侧都是 K4 时只折叠一侧
    assert h.n == 4 and h.m == 7 and h.multiplicity(0, 1) == 2
    assert collapse_k4_sides(k5_minus_e())[0] == MultiGraph.from_graph(k5_minus_e())


def test_matching_cut_is_nontrivial():
    g = two_k4_by_matching()
    seps = [s for s in find_separations(g, THREE_EDGE) if not s.trivial]
    assert len(seps) == 1
    assert seps[0].shared == ((0, 4), (1, 5), (2, 6))
    assert set(seps[0].parts) == {frozenset(range(4)), frozenset(range(4, 8))}


def test_find_atoms():
    assert find_atoms(two_k4_by_matching()) == [frozenset(range(4)), frozenset(range(4, 8))]
    assert find_atoms(k5_minus_e()) == []


def test_three_edge_cap():
    with pytest.raises(SizeCapError):
        find_separations(complete_graph(6), THREE_EDGE, cap=10)


def _brute_two_vertex(g: Graph):
    found = set()
    for a, b in combinations(range(g.n), 2):
        rest = [v for v in range(g.n) if v not in (a, b)]
        for r in range(1, len(rest)):
            for side in combinations(rest, r):
                side = set(side)
                if min(rest) not in side:
                    continue
                if any((u in side and v not in side and v not in (a, b)) or
                       (v in side and u not in side and u not in (a, b)) for u, v in g.edges):
                    continue
                found.add(((a, b), frozenset(side | {a, b})))
    return found


def _brute_three_edge(g: Graph):
    found = set()
    others = list(range(1, g.n))
    for r in range(0, len(others)):
        for extra in combinations(others, r):
            side = {0, *extra}
            cut = tuple(e for e in g.edges if (e[0] in side) != (e[1] in side))
            if len(cut) == 3:
                found.add((cut, frozenset(side)))
    return found


def test_separations_match_brute_force():
    rng = np.random.default_rng(11)
    for _ in range(40):
        n = int(rng.integers(4, 8))
        g = random_graph(rng, n, 0.45)
        two = {(s.shared, s.parts[0]) for s in find_separations(g, TWO_VERTEX)}
        assert two == _brute_two_vertex(g)
        three = {(s.shared, s.parts[0]) for s in find_separations(g, THREE_EDGE)}
        assert three == _brute_three_edge(g)


def test_isomorphism():
    g = k5_minus_e()
    perm = {0: 3, 1: 0, 2: 4, 3: 2, 4: 1}
    h = g.relabel(perm)
    mapping = find_isomorphism(g, h)
    assert mapping is not None
    assert all(h.has_edge(mapping[u], mapping[v]) for u, v in g.edges)
    assert is_isomorphic(g, h)
    assert find_isomorphism(g, complete_graph(5)) is None


def test_isomorphism_beyond_seven_vertices():
    g = cycle_graph(12).add_edges([(0, 6), (3, 9)])
    perm = {v: (5 * v + 2) % 12 for v in range(12)}
    h = g.relabel(perm)
    mapping = find_isomorphism(g, h)
    assert sorted(mapping) == list(range(12))
    assert all(h.has_edge(mapping[u], mapping[v]) for u, v in g.edges)
    assert not is_isomorphic(g, cycle_graph(12).add_edges([(0, 6), (1, 7)]))


def test_parse_edge_list_and_json():
    text = "# K3\n3\n0 1\n1 2\n0 2\n"
    g = parse_graph(text)
    assert g == complete_graph(3)
    assert parse_graph(format_edge_list(g)) == g
    assert parse_graph('{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}') == g
    assert parse_graph('{"graph": {"n": 3, "edges": [[0, 1]]}, "trace": {}}') == Graph(3, ((0, 1),))


def test_parse_errors_carry_position():
    with pytest.raises(GraphFormatError) as info:
        parse_graph("3\n0 1\n1 x\n", source="bad.txt")
    assert info.value.line == 3
    assert str(info.value).startswith("bad.txt:3:")

    with pytest.raises(GraphFormatError) as info:
        parse_graph('{"n": 3,\n "edges": [[0, 1],]}')
    assert info.value.line == 2

    with pytest.raises(GraphFormatError):
        parse_graph('{"n": 2, "edges": [[0, 5]]}')
