"""
(2,2)-稀疏计数拟阵
M₂,₂ 作用于多重图，其简单限制 M*₂,₂ 额外规定平行边对相关。
秩由 (k,ℓ)=(2,2) 卵石博弈计算；回路、冗余刚性、拟阵连通与耳分解均建立在秩查询之上。
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from config import Config
from errors import PreconditionError, SizeCapError
from graph import AnyGraph, Edge, Graph, MultiGraph, is_2connected, normalize_edge

logger = logging.getLogger(__name__)


class PebbleGame:
    """
    (k,ℓ) 卵石博弈的可变状态，只在单次调用内部使用。
    每个顶点初始 k 枚卵石；边 uv 在 {u,v} 上能聚集 ℓ+1 枚卵石时被接受，
    并消耗一枚卵石定向为从付出卵石的端点指向另一端。
    """

    def __init__(self, n: int, k: int = 2, l: int = 2, simple_restriction: bool = False):
        self.n = n
        self.k = k
        self.l = l
        self.simple_restriction = simple_restriction
        self.pebbles = [k] * n
        self.out: List[List[int]] = [[] for _ in range(n)]
        self.accepted: List[Edge] = []
        self._accepted_pairs: Set[Edge] = set()

    def _find_pebble(self, root: int, blocked: int) -> bool:
        """从 root 沿出边深度优先找一枚空闲卵石，找到后反转路径把它移到 root"""
        parent: Dict[int, int] = {root: -1, blocked: -1}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self._reverse_path(parent, y)
                    return True
                stack.append(y)
        return False

    def _reverse_path(self, parent: Dict[int, int], end: int):
        self.pebbles[end] -= 1
        y = end
        while parent[y] != -1:
            x = parent[y]
            self.out[x].remove(y)
            self.out[y].append(x)
            y = x
        self.pebbles[y] += 1

    def gather(self, u: int, v: int) -> int:
        """在 {u,v} 上尽量聚集卵石，返回聚集后的总数"""
        while self.pebbles[u] < self.k and self._find_pebble(u, v):
            pass
        while self.pebbles[v] < self.k and self._find_pebble(v, u):
            pass
        return self.pebbles[u] + self.pebbles[v]

    def try_add(self, u: int, v: int) -> bool:
        edge = normalize_edge(u, v)
        if self.simple_restriction and edge in self._accepted_pairs:
            return False
        if self.gather(u, v) < self.l + 1:
            return False
        if self.pebbles[u] > 0:
            self.pebbles[u] -= 1
            self.out[u].append(v)
        else:
            self.pebbles[v] -= 1
            self.out[v].append(u)
        self.accepted.append(edge)
        self._accepted_pairs.add(edge)
        return True

    def check_invariants(self) -> bool:
        per_vertex = all(self.pebbles[i] + len(self.out[i]) == self.k for i in range(self.n))
        return per_vertex and sum(self.pebbles) + len(self.accepted) == self.k * self.n


def _default_restriction(graph: AnyGraph, simple_restriction: Optional[bool]) -> bool:
    if simple_restriction is None:
        return isinstance(graph, Graph)
    return simple_restriction


def _run_game(n: int, edges: Sequence[Edge], simple_restriction: bool) -> PebbleGame:
    game = PebbleGame(n, simple_restriction=simple_restriction)
    for u, v in sorted(normalize_edge(a, b) for a, b in edges):
        game.try_add(u, v)
    return game


def _rank_of(n: int, edges: Sequence[Edge], simple_restriction: bool) -> int:
    return len(_run_game(n, edges, simple_restriction).accepted)


def rank22(graph: AnyGraph, simple_restriction: Optional[bool] = None) -> int:
    """E(H) 在 M₂,₂（或其简单限制）中的秩；简单图默认使用简单限制"""
    return _rank_of(graph.n, graph.edges, _default_restriction(graph, simple_restriction))


def independent_set(graph: AnyGraph, simple_restriction: Optional[bool] = None) -> List[Edge]:
    """按字典序贪心得到的一组基"""
    return list(_run_game(graph.n, graph.edges, _default_restriction(graph, simple_restriction)).accepted)


def is_independent(graph: AnyGraph, edges: Sequence[Edge], simple_restriction: Optional[bool] = None) -> bool:
    return _rank_of(graph.n, edges, _default_restriction(graph, simple_restriction)) == len(edges)


# ---------------------------------------------------------------------------
# 回路
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CircuitWitness:
    edges: Tuple[Edge, ...]
    vertex_support: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {"edges": [list(e) for e in self.edges], "vertex_support": list(self.vertex_support)}


@dataclass(frozen=True)
class CircuitCheck:
    """is_circuit 的结果；布尔上下文中等价于判定值"""

    answer: bool
    witness: Optional[CircuitWitness] = None
    reason: str = ""
    # 仅在 answer 为真时有意义
    spanning: bool = False
    count_holds: bool = False

    def __bool__(self) -> bool:
        return self.answer

    @property
    def spanning_circuit(self) -> bool:
        """回路覆盖全部顶点且 |E| = 2|V| − 1"""
        return self.answer and self.spanning and self.count_holds


def _support(edges: Sequence[Edge]) -> Tuple[int, ...]:
    return tuple(sorted({v for e in edges for v in e}))


def _minimally_dependent(n: int, edges: Sequence[Edge], simple_restriction: bool) -> bool:
    m = len(edges)
    if m == 0 or _rank_of(n, edges, simple_restriction) != m - 1:
        return False
    return all(
        _rank_of(n, edges[:i] + edges[i + 1:], simple_restriction) == m - 1 for i in range(m)
    )


def is_circuit(graph: AnyGraph, simple_restriction: Optional[bool] = None) -> CircuitCheck:
    """
    E(G) 是否为拟阵回路：E 相关且每个 E−e 独立。
    判定为真时另外记录是否无孤立点（spanning）以及 |E| = 2|V(support)| − 1 是否成立；
    简单限制下的平行边对是回路，但计数不成立。
    """
    restriction = _default_restriction(graph, simple_restriction)
    edges = list(graph.edges)
    support = _support(edges)
    if not _minimally_dependent(graph.n, edges, restriction):
        return CircuitCheck(False, reason="不是极小相关集")
    spanning = len(support) == graph.n
    count_holds = len(edges) == 2 * len(support) - 1
    reason = ""
    if not spanning:
        reason = "存在孤立点"
    elif not count_holds:
        reason = f"边数 {len(edges)} ≠ 2|V|−1 = {2 * len(support) - 1}"
    return CircuitCheck(True, CircuitWitness(tuple(edges), support), reason, spanning, count_holds)


def is_rigid_comb(graph: Graph) -> bool:
    if graph.n <= 3 and graph.is_complete():
        return True
    return rank22(graph) == 2 * graph.n - 2


def non_redundant_edges(graph: Graph) -> List[Edge]:
    """删去后不再刚性的边"""
    return [e for e in graph.edges if not is_rigid_comb(graph.remove_edges([e]))]


def is_redundantly_rigid(graph: Graph) -> bool:
    return all(is_rigid_comb(graph.remove_edges([e])) for e in graph.edges)


def edge_in_circuit(graph: Graph, edge: Sequence[int]) -> bool:
    e = graph.check_edge(edge)
    return rank22(graph.remove_edges([e])) == rank22(graph)


def vertex_in_circuit(graph: Graph, v: int) -> bool:
    graph.check_vertex(v)
    full = rank22(graph)
    return any(rank22(graph.remove_edges([e])) == full for e in graph.incident_edges(v))


def fundamental_circuit(graph: AnyGraph, edge: Sequence[int],
                        simple_restriction: Optional[bool] = None) -> Optional[CircuitWitness]:
    """
    e 相对于 E−e 的一组基 B 的基本回路 {e} ∪ {f ∈ B : B+e−f 独立}；
    e 不在任何回路中时返回 None。
    """
    restriction = _default_restriction(graph, simple_restriction)
    e = normalize_edge(int(edge[0]), int(edge[1]))
    edges = list(graph.edges)
    if e not in edges:
        raise PreconditionError(f"边 {e} 不在图中")
    rest = list(edges)
    rest.remove(e)
    basis = list(_run_game(graph.n, rest, restriction).accepted)
    if _rank_of(graph.n, basis + [e], restriction) == len(basis) + 1:
        return None
    circuit = [e]
    for i, f in enumerate(basis):
        swapped = basis[:i] + basis[i + 1:] + [e]
        if _rank_of(graph.n, swapped, restriction) == len(swapped):
            circuit.append(f)
    circuit.sort()
    return CircuitWitness(tuple(circuit), _support(circuit))


def is_matroid_connected(graph: Graph) -> bool:
    return is_2connected(graph) and is_redundantly_rigid(graph)


def enumerate_circuits(graph: Graph, cap: int = None,
                       simple_restriction: Optional[bool] = None) -> List[CircuitWitness]:
    """
    枚举全部回路（指数级，只用于小规模）。
    回路 C 的支撑 X 满足 |C| = 2|X|−1 且 C 中每个点度数 ≥ 3，
    因此对每个顶点子集 X 检查 E[X] 的 (2|X|−1)-子集即可。
    """
    cap = Config.CIRCUIT_CAP if cap is None else cap
    if graph.m > cap:
        raise SizeCapError("回路枚举", graph.m, cap)
    restriction = _default_restriction(graph, simple_restriction)
    edges = list(graph.edges)
    circuits = []
    vertices = _support(edges)
    smallest = 5 if restriction else 2
    for k in range(smallest, len(vertices) + 1):
        for subset in combinations(vertices, k):
            inside = set(subset)
            candidates = [e for e in edges if e[0] in inside and e[1] in inside]
            if len(candidates) < 2 * k - 1:
                continue
            for chosen in combinations(candidates, 2 * k - 1):
                degree = dict.fromkeys(subset, 0)
                for u, v in chosen:
                    degree[u] += 1
                    degree[v] += 1
                if min(degree.values()) < 3 and k > 2:
                    continue
                if _minimally_dependent(graph.n, list(chosen), restriction):
                    circuits.append(CircuitWitness(tuple(chosen), subset))
    logger.debug("图 (n=%d, m=%d) 共有 %d 个回路", graph.n, graph.m, len(circuits))
    return circuits


# ---------------------------------------------------------------------------
# 耳分解
# ---------------------------------------------------------------------------

def _ear_conditions(circuit: Set[Edge], covered: Set[Edge], first: bool) -> bool:
    return (first or bool(circuit & covered)) and bool(circuit - covered)


def verify_ear_decomposition(graph: Graph, ears: List[CircuitWitness],
                             circuits: List[CircuitWitness]) -> bool:
    """逐条核验耳分解的三个条件，以及 D_t = E"""
    covered: Set[Edge] = set()
    all_sets = [set(c.edges) for c in circuits]
    for i, ear in enumerate(ears):
        current = set(ear.edges)
        if current not in all_sets:
            return False
        if not _ear_conditions(current, covered, i == 0):
            return False
        new_part = current - covered
        for other in all_sets:
            if _ear_conditions(other, covered, i == 0) and (other - covered) < new_part:
                return False
        covered |= current
    return covered == set(graph.edges)


def ear_decomposition(graph: Graph, cap: int = None) -> List[CircuitWitness]:
    """
    贪心耳分解：每步在满足 C∩D ≠ ∅、C−D ≠ ∅ 的回路中选 |C−D| 最小者（再按边字典序），
    最后逐条重新核验。
    """
    cap = Config.CIRCUIT_CAP if cap is None else cap
    if graph.m > cap:
        raise SizeCapError("耳分解", graph.m, cap)
    if not is_matroid_connected(graph):
        raise PreconditionError("M*₂,₂(G) 不连通，不存在耳分解")
    circuits = enumerate_circuits(graph, cap)
    covered: Set[Edge] = set()
    ears: List[CircuitWitness] = []
    target = set(graph.edges)
    while covered != target:
        first = not ears
        options = [c for c in circuits if _ear_conditions(set(c.edges), covered, first)]
        if not options:
            raise PreconditionError("找不到可延伸的回路")
        best = min(options, key=lambda c: (len(set(c.edges) - covered), c.edges))
        ears.append(best)
        covered |= set(best.edges)
    if not verify_ear_decomposition(graph, ears, circuits):
        raise RuntimeError("耳分解核验失败")
    return ears


# ---------------------------------------------------------------------------
# 定义式蛮力对照（仅用于小图测试）
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _supersets(n: int, pair_mask: int) -> Tuple[int, ...]:
    return tuple(mask for mask in range(1 << n) if mask & pair_mask == pair_mask)


class CountOracle:
    """
    按定义检查 |F′| ≤ 2|V(F′)|−2：维护每个顶点子集 X 内已接受边的计数。
    简单限制下两顶点子集的上限收紧为 1（平行边对相关）。
    """

    def __init__(self, n: int, simple_restriction: bool = False):
        if n > Config.BRUTE_FORCE_MAX_VERTICES:
            raise SizeCapError("蛮力计数", n, Config.BRUTE_FORCE_MAX_VERTICES)
        self.n = n
        self.count = [0] * (1 << n)
        self.limit = [0] * (1 << n)
        for mask in range(1 << n):
            size = mask.bit_count()
            bound = 2 * size - 2
            if simple_restriction and size == 2:
                bound = 1
            self.limit[mask] = bound

    def _masks_containing(self, pair_mask: int) -> Tuple[int, ...]:
        return _supersets(self.n, pair_mask)

    def can_add(self, u: int, v: int) -> bool:
        pair = (1 << u) | (1 << v)
        return all(self.count[mask] < self.limit[mask] for mask in self._masks_containing(pair))

    def add(self, u: int, v: int):
        for mask in self._masks_containing((1 << u) | (1 << v)):
            self.count[mask] += 1


def brute_force_independent(n: int, edges: Sequence[Edge], simple_restriction: bool = False) -> bool:
    oracle = CountOracle(n, simple_restriction)
    for u, v in edges:
        if not oracle.can_add(u, v):
            return False
        oracle.add(u, v)
    return True


def brute_force_rank(graph: AnyGraph, simple_restriction: Optional[bool] = None) -> int:
    """按定义的独立性检查做贪心（拟阵上贪心即最大独立集）"""
    oracle = CountOracle(graph.n, _default_restriction(graph, simple_restriction))
    rank = 0
    for u, v in graph.edges:
        if oracle.can_add(u, v):
            oracle.add(u, v)
            rank += 1
    return rank


def brute_force_max_rank(n: int, edges: Sequence[Edge], simple_restriction: bool = False) -> int:
    """对所有边子集取最大独立集大小，不依赖拟阵性质；只适用于极小实例"""
    for size in range(len(edges), 0, -1):
        if any(brute_force_independent(n, subset, simple_restriction)
               for subset in combinations(edges, size)):
            return size
    return 0


def brute_force_matroid_connected(graph: Graph, cap: int = None) -> bool:
    """按定义：任意两条边都包含在某个公共回路中"""
    circuits = [set(c.edges) for c in enumerate_circuits(graph, cap)]
    return all(
        any(e in c and f in c for c in circuits) for e, f in combinations(graph.edges, 2)
    )
