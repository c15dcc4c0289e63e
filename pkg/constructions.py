"""
M*₂,₂-回路的归纳构造
扩张（0-扩张、1-扩张、K₄⁻-扩张、广义顶点分裂）、j-连接及其逆操作（约化），
约化搜索、可回放的构造轨迹与随机回路生成。
"""

import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from errors import GraphFormatError, PreconditionError, ReductionError
from graph import Edge, Graph, MultiGraph, contract_edge, find_isomorphism, normalize_edge
from sparsity import is_circuit

logger = logging.getLogger(__name__)

# 步骤类型
ZERO_EXT = "ZeroExt"
ONE_EXT = "OneExt"
K4MINUS_EXT = "K4MinusExt"
VERTEX_SPLIT = "GenVertexSplit"
JOIN1 = "Join1"
JOIN2 = "Join2"
JOIN3 = "Join3"
JOIN_KINDS = {JOIN1: 1, JOIN2: 2, JOIN3: 3}
STEP_KINDS = (ZERO_EXT, ONE_EXT, K4MINUS_EXT, VERTEX_SPLIT, JOIN1, JOIN2, JOIN3)

# 约化类型
K4MINUS_RED = "K4MinusReduction"
ONE_RED = "OneReduction"
EDGE_RED = "EdgeReduction"

# 随机回路中选 K₄⁻-扩张（而非分裂）的概率
K4MINUS_PROBABILITY = 0.25

_BASE_EDGES = {
    "K5-e": (5, [(1, 2), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5), (3, 4), (4, 5)]),
    "H1": (6, [(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (3, 4), (4, 5), (4, 6), (5, 6)]),
    "H2": (7, [(1, 2), (1, 3), (1, 4), (1, 7), (2, 3), (2, 4), (3, 4), (4, 5), (4, 6), (4, 7),
               (5, 6), (5, 7), (6, 7)]),
    "K4": (4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]),
}
BASE_NAMES = tuple(_BASE_EDGES)
# 约化终点
REDUCTION_BASES = ("K5-e", "H1")


def base_graph(name: str) -> Graph:
    """K5-e / H1 / H2 / K4，顶点 v₁..vₙ 依次编号为 0..n−1"""
    if name not in _BASE_EDGES:
        raise PreconditionError(f"未知的基图: {name}，可选 {', '.join(BASE_NAMES)}")
    n, pairs = _BASE_EDGES[name]
    return Graph(n, tuple((u - 1, v - 1) for u, v in pairs))


def _edge(value: Sequence[int]) -> Edge:
    if len(value) != 2:
        raise PreconditionError(f"边必须是两个顶点: {value}")
    return normalize_edge(int(value[0]), int(value[1]))


def circuit_verdict(graph: Graph) -> bool:
    """
    is_circuit 的快速入口：简单图回路必有 |E| = 2|V|−1 且最小度 ≥ 3，
    不满足时直接判否，否则交给卵石博弈。
    """
    if graph.m != 2 * graph.n - 1:
        return False
    if any(graph.degree(v) < 3 for v in range(graph.n)):
        return False
    return bool(is_circuit(graph))


def nodes(graph: Graph) -> List[int]:
    """3 度顶点"""
    return [v for v in range(graph.n) if graph.degree(v) == 3]


def k4_gadgets(graph: Graph) -> List[Tuple[int, int, int, int]]:
    """
    K₄ 挂件 (a, b, c, d)：{a,b,c,d} 导出 K₄，c、d 都是 3 度点（只与挂件内部相邻）。
    """
    found = []
    for c, d in graph.edges:
        if graph.degree(c) != 3 or graph.degree(d) != 3:
            continue
        rest_c = set(graph.adjacency[c]) - {d}
        rest_d = set(graph.adjacency[d]) - {c}
        if rest_c != rest_d:
            continue
        a, b = sorted(rest_c)
        if graph.has_edge(a, b):
            found.append((a, b, c, d))
    return sorted(found)


# ---------------------------------------------------------------------------
# 扩张
# ---------------------------------------------------------------------------

def zero_extension(graph: Graph, x: int, y: int) -> Graph:
    """新增与 x、y 相邻的 2 度顶点 n"""
    graph.check_vertex(x)
    graph.check_vertex(y)
    if x == y:
        raise PreconditionError("0-扩张的两个邻点必须不同")
    return graph.add_vertex([x, y])


def one_extension(graph: Graph, edge: Sequence[int], z: int) -> Graph:
    """删去边 xy，新增顶点 n 与边 nx、ny、nz"""
    x, y = graph.check_edge(_edge(edge))
    graph.check_vertex(z)
    if z in (x, y):
        raise PreconditionError(f"1-扩张要求 z ∉ {{x, y}}，得到 z = {z}")
    return graph.remove_edges([(x, y)]).add_vertex([x, y, z])


def k4minus_extension(graph: Graph, edge: Sequence[int]) -> Graph:
    """删去 v₁v₂，新增 u₁ = n、u₂ = n+1，各自与 v₁、v₂ 相邻且彼此相邻"""
    a, b = graph.check_edge(_edge(edge))
    u1, u2 = graph.n, graph.n + 1
    extra = [(u1, u2), (a, u1), (b, u1), (a, u2), (b, u2)]
    return Graph(graph.n + 2, tuple(e for e in graph.edges if e != (a, b)) + tuple(extra))


@dataclass(frozen=True)
class SplitResult:
    graph: Graph
    verdict: Optional[bool]  # 结果是否为 M*₂,₂-回路；未计算时为 None
    v1: int
    v2: int


def generalized_vertex_split(graph: Graph, v: int, n1: Sequence[int], x: int,
                             with_verdict: bool = True) -> SplitResult:
    """
    删去 v，新增 v₁（下标 n，邻接 N1 ∪ {x}）与 v₂（沿用 v 的下标，邻接 N2 = N(v) ∖ N1），
    再加边 v₁v₂。x 取自 V ∖ ({v} ∪ N1)；|N1| = 1 时即在边 v·N1 上的 1-扩张。
    """
    graph.check_vertex(v)
    graph.check_vertex(x)
    neighbours = set(graph.adjacency[v])
    part1 = sorted(set(int(w) for w in n1))
    if not set(part1) <= neighbours:
        raise PreconditionError(f"N1 = {part1} 不是 N({v}) 的子集")
    if x == v:
        raise PreconditionError("x 不能是被分裂的顶点本身")
    if x in part1:
        raise PreconditionError(f"x = {x} 属于 N1，边 v₁x 会重复")
    part2 = sorted(neighbours - set(part1))
    v1 = graph.n
    edges = [e for e in graph.edges if v not in e]
    edges += [(v, w) for w in part2]
    edges += [(v1, w) for w in part1] + [(v1, x), (v1, v)]
    result = Graph(graph.n + 1, tuple(edges))
    verdict = circuit_verdict(result) if with_verdict else None
    return SplitResult(result, verdict, v1, v)


# ---------------------------------------------------------------------------
# 连接
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JoinResult:
    """
    j-连接的结果与记录：attach1/attach2 为两侧的指定元素，
    map1/map2 把 G1、G2 中保留下来的顶点映到结果图的下标。
    """

    graph: Graph
    kind: int
    n1: int
    n2: int
    attach1: Tuple[int, ...]
    attach2: Tuple[int, ...]
    map1: Dict[int, int]
    map2: Dict[int, int]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "graph": self.graph.to_dict(),
            "attach1": list(self.attach1),
            "attach2": list(self.attach2),
        }


def _check_gadget(graph: Graph, gadget: Sequence[int], side: str) -> Tuple[int, int, int, int]:
    gadget = tuple(int(v) for v in gadget)
    if len(gadget) != 4:
        raise PreconditionError(f"{side} 的 K₄ 挂件需要 (a, b, c, d) 四个顶点")
    a, b, c, d = gadget
    ordered = (min(a, b), max(a, b), min(c, d), max(c, d))
    if ordered not in set(k4_gadgets(graph)):
        raise PreconditionError(f"{side} 中 {gadget} 不是 c、d 为 3 度点的 K₄ 挂件")
    return gadget


def _check_node(graph: Graph, attach: Sequence[int], side: str) -> Tuple[int, int, int, int]:
    attach = tuple(int(v) for v in attach)
    if len(attach) != 4:
        raise PreconditionError(f"{side} 的 3-连接需要 (v, a, b, c)")
    v = attach[0]
    graph.check_vertex(v)
    if graph.degree(v) != 3 or set(attach[1:]) != set(graph.adjacency[v]):
        raise PreconditionError(f"{side} 中 {v} 不是邻点为 {attach[1:]} 的 3 度点")
    return attach


def find_join_attachment(graph: Graph, kind: int, side: int) -> Optional[Tuple[int, ...]]:
    """按字典序找第一个可用的连接位置；side 为 1 或 2"""
    if kind == 1 and side == 1:
        return graph.edges[0] if graph.edges else None
    if kind in (1, 2):
        gadgets = k4_gadgets(graph)
        return gadgets[0] if gadgets else None
    if kind == 3:
        for v in nodes(graph):
            return (v,) + graph.neighbors(v)
        return None
    raise PreconditionError(f"未知的连接类型: {kind}")


def _assemble(g1: Graph, drop1: set, g2: Graph, drop2: set, identify: Dict[int, int],
              skip1: set, skip2: set, cross: Sequence[Tuple[int, int]]):
    map1 = {}
    for v in range(g1.n):
        if v not in drop1:
            map1[v] = len(map1)
    map2 = {}
    size = len(map1)
    for v in range(g2.n):
        if v in identify:
            map2[v] = map1[identify[v]]
        elif v not in drop2:
            map2[v] = size
            size += 1
    edges = [(map1[u], map1[v]) for u, v in g1.edges
             if u in map1 and v in map1 and (u, v) not in skip1]
    edges += [(map2[u], map2[v]) for u, v in g2.edges
              if u in map2 and v in map2 and (u, v) not in skip2]
    edges += [(map1[u], map2[v]) for u, v in cross]
    return Graph(size, tuple(edges)), map1, map2


def join(g1: Graph, g2: Graph, kind: int, attach1: Sequence[int] = None,
         attach2: Sequence[int] = None) -> JoinResult:
    """
    1-连接：G1 的边 a₁b₁，G2 的 K₄ 挂件 (a₂,b₂,c₂,d₂)；合并 aᵢ、bᵢ，删去 a₁b₁、a₂b₂ 与 c₂、d₂。
    2-连接：两侧都是 K₄ 挂件；合并 aᵢ、bᵢ，删去 c₁、d₁、c₂、d₂，保留一条 ab。
    3-连接：两侧 3 度点 vᵢ 及其邻点 (aᵢ,bᵢ,cᵢ)；删去 v₁、v₂，加边 a₁a₂、b₁b₂、c₁c₂。
    未给出位置时按字典序自动选取。
    """
    if kind not in (1, 2, 3):
        raise PreconditionError(f"未知的连接类型: {kind}")
    if attach1 is None:
        attach1 = find_join_attachment(g1, kind, 1)
    if attach2 is None:
        attach2 = find_join_attachment(g2, kind, 2)
    if attach1 is None or attach2 is None:
        raise PreconditionError(f"找不到 {kind}-连接所需的结构")

    if kind == 1:
        g1.check_edge(_edge(attach1))
        a1, b1 = attach1 = tuple(int(v) for v in attach1)
        a2, b2, c2, d2 = _check_gadget(g2, attach2, "G2")
        graph, map1, map2 = _assemble(
            g1, set(), g2, {c2, d2}, {a2: a1, b2: b1},
            {normalize_edge(a1, b1)}, {normalize_edge(a2, b2)}, [],
        )
        attach2 = (a2, b2, c2, d2)
    elif kind == 2:
        a1, b1, c1, d1 = _check_gadget(g1, attach1, "G1")
        a2, b2, c2, d2 = _check_gadget(g2, attach2, "G2")
        graph, map1, map2 = _assemble(
            g1, {c1, d1}, g2, {c2, d2}, {a2: a1, b2: b1},
            set(), {normalize_edge(a2, b2)}, [],
        )
        attach1, attach2 = (a1, b1, c1, d1), (a2, b2, c2, d2)
    else:
        attach1 = _check_node(g1, attach1, "G1")
        attach2 = _check_node(g2, attach2, "G2")
        cross = list(zip(attach1[1:], attach2[1:]))
        graph, map1, map2 = _assemble(g1, {attach1[0]}, g2, {attach2[0]}, {}, set(), set(), cross)

    logger.debug(f"{kind}-连接: {g1.n}+{g2.n} 个顶点 -> {graph.n}")
    return JoinResult(graph, kind, g1.n, g2.n, tuple(attach1), tuple(attach2), map1, map2)


def unjoin(record: JoinResult) -> Tuple[Graph, Graph]:
    """依据连接记录把结果图拆回 G1、G2（原下标）"""
    graph = record.graph
    inverse1 = {new: old for old, new in record.map1.items()}
    inverse2 = {new: old for old, new in record.map2.items()}

    def side(inverse: Dict[int, int], n: int, extra: List[Tuple[int, int]]) -> Graph:
        edges = [(inverse[u], inverse[v]) for u, v in graph.edges if u in inverse and v in inverse]
        return Graph(n, tuple(edges + extra))

    def gadget_edges(a: int, b: int, c: int, d: int) -> List[Tuple[int, int]]:
        return [(a, c), (b, c), (a, d), (b, d), (c, d)]

    if record.kind == 1:
        a1, b1 = record.attach1
        a2, b2, c2, d2 = record.attach2
        g1 = side(inverse1, record.n1, [(a1, b1)])
        g2 = side(inverse2, record.n2, gadget_edges(a2, b2, c2, d2) + [(a2, b2)])
    elif record.kind == 2:
        g1 = side(inverse1, record.n1, gadget_edges(*record.attach1))
        g2 = side(inverse2, record.n2, gadget_edges(*record.attach2))
    else:
        v1, v2 = record.attach1[0], record.attach2[0]
        g1 = side(inverse1, record.n1, [(v1, w) for w in record.attach1[1:]])
        g2 = side(inverse2, record.n2, [(v2, w) for w in record.attach2[1:]])
    return g1, g2


# ---------------------------------------------------------------------------
# 步骤与轨迹
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    """
    一步构造操作。params 只含 JSON 原生值；created_* 用操作结果的下标表示；
    vertex_map 是把操作结果重新编号的置换（列表下标为结果下标），None 表示不重排。
    """

    kind: str
    params: dict
    created_vertices: Tuple[int, ...] = ()
    created_edges: Tuple[Edge, ...] = ()
    vertex_map: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        data = {
            "kind": self.kind,
            "params": self.params,
            "created": {
                "vertices": list(self.created_vertices),
                "edges": [list(e) for e in self.created_edges],
            },
        }
        if self.vertex_map is not None:
            data["vertex_map"] = list(self.vertex_map)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "Step":
        kind = data["kind"]
        if kind not in STEP_KINDS:
            raise GraphFormatError(f"未知的步骤类型: {kind}")
        created = data.get("created", {})
        vertex_map = data.get("vertex_map")
        return cls(
            kind,
            data.get("params", {}),
            tuple(created.get("vertices", [])),
            tuple(tuple(e) for e in created.get("edges", [])),
            tuple(vertex_map) if vertex_map is not None else None,
        )


def _apply_op(graph: Graph, kind: str, params: dict) -> Graph:
    if kind == ZERO_EXT:
        return zero_extension(graph, params["x"], params["y"])
    if kind == ONE_EXT:
        return one_extension(graph, params["edge"], params["z"])
    if kind == K4MINUS_EXT:
        return k4minus_extension(graph, params["edge"])
    if kind == VERTEX_SPLIT:
        return generalized_vertex_split(graph, params["v"], params["n1"], params["x"], with_verdict=False).graph
    if kind in JOIN_KINDS:
        other = Graph.from_dict(params["graph"])
        return join(graph, other, JOIN_KINDS[kind], params["attach1"], params["attach2"]).graph
    raise PreconditionError(f"未知的步骤类型: {kind}")


def make_step(graph: Graph, kind: str, params: dict,
              vertex_map: Sequence[int] = None) -> Tuple[Step, Graph]:
    """在 graph 上执行一步并记录新增的顶点与边，返回 (步骤, 重排后的结果图)"""
    result = _apply_op(graph, kind, params)
    created_vertices = tuple(range(graph.n, result.n))
    old = graph.edge_set
    created_edges = tuple(e for e in result.edges if e not in old)
    if vertex_map is not None:
        vertex_map = tuple(int(v) for v in vertex_map)
    step = Step(kind, params, created_vertices, created_edges, vertex_map)
    return step, _relabel(result, step.vertex_map)


def _relabel(graph: Graph, vertex_map: Optional[Tuple[int, ...]]) -> Graph:
    if vertex_map is None:
        return graph
    if sorted(vertex_map) != list(range(graph.n)):
        raise PreconditionError("vertex_map 必须是结果顶点的一个置换")
    return graph.relabel(dict(enumerate(vertex_map)))


def apply_step(graph: Graph, step: Step) -> Graph:
    return _relabel(_apply_op(graph, step.kind, step.params), step.vertex_map)


@dataclass(frozen=True)
class ConstructionTrace:
    """
    从基图出发的构造证书。base_map[i] 是基图顶点 i 在起始图中的下标（None 为恒等），
    replay 依次执行 steps 即得到被证明的图。
    """

    base: str
    steps: Tuple[Step, ...] = ()
    base_map: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        data = {"base": self.base, "steps": [s.to_dict() for s in self.steps]}
        if self.base_map is not None:
            data["base_map"] = list(self.base_map)
        return data

    @classmethod
    def from_dict(cls, data: dict, source: str = None) -> "ConstructionTrace":
        try:
            base = data["base"]
            if base not in BASE_NAMES:
                raise GraphFormatError(f"未知的基图: {base}", source=source)
            base_map = data.get("base_map")
            return cls(
                base,
                tuple(Step.from_dict(s) for s in data.get("steps", [])),
                tuple(base_map) if base_map is not None else None,
            )
        except (KeyError, TypeError) as e:
            raise GraphFormatError(f"构造轨迹 JSON 格式错误: {e}", source=source)


def replay_prefixes(trace: ConstructionTrace) -> List[Graph]:
    """基图与每一步之后的图"""
    graph = base_graph(trace.base)
    if trace.base_map is not None:
        graph = _relabel(graph, trace.base_map)
    graphs = [graph]
    for step in trace.steps:
        graph = apply_step(graph, step)
        graphs.append(graph)
    return graphs


def replay(trace: ConstructionTrace) -> Graph:
    return replay_prefixes(trace)[-1]


def expected_growth(step: Step) -> Tuple[int, int]:
    """每种步骤带来的 (Δ|V|, Δ|E|)"""
    if step.kind in (ZERO_EXT, ONE_EXT, VERTEX_SPLIT):
        return 1, 2
    if step.kind == K4MINUS_EXT:
        return 2, 4
    other = Graph.from_dict(step.params["graph"])
    return {
        JOIN1: (other.n - 4, other.m - 7),
        JOIN2: (other.n - 6, other.m - 11),
        JOIN3: (other.n - 2, other.m - 3),
    }[step.kind]


@dataclass(frozen=True)
class TraceCheck:
    valid: bool
    graphs: Tuple[Graph, ...]
    failures: Tuple[str, ...] = ()


def verify_trace(trace: ConstructionTrace) -> TraceCheck:
    """逐前缀回放：每个中间图都必须是回路，顶点数与边数的增量必须符合步骤类型"""
    failures = []
    try:
        graph = base_graph(trace.base)
        if trace.base_map is not None:
            graph = _relabel(graph, trace.base_map)
    except PreconditionError as e:
        return TraceCheck(False, (), (str(e),))
    graphs = [graph]
    if not circuit_verdict(graph):
        failures.append(f"基图 {trace.base} 不是回路")
    for index, step in enumerate(trace.steps):
        try:
            result = apply_step(graph, step)
        except (PreconditionError, KeyError, TypeError) as e:
            failures.append(f"第 {index + 1} 步 {step.kind} 无法执行: {e}")
            break
        growth = (result.n - graph.n, result.m - graph.m)
        if growth != expected_growth(step):
            failures.append(f"第 {index + 1} 步 {step.kind} 的增量 {growth} ≠ {expected_growth(step)}")
        if not circuit_verdict(result):
            failures.append(f"第 {index + 1} 步 {step.kind} 之后不是回路")
        graphs.append(result)
        graph = result
    return TraceCheck(not failures, tuple(graphs), tuple(failures))


# ---------------------------------------------------------------------------
# 约化
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Reduction:
    """
    一次约化候选。verdict 为结果是否为更小的回路；
    inverse 是在结果图上重建原图（连同原下标）的正向步骤，只对可接受的候选给出。
    """

    kind: str
    params: dict
    graph: Graph
    verdict: bool
    inverse: Optional[Step] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params,
            "verdict": self.verdict,
            "graph": self.graph.to_dict(),
        }


def _inverse_map(mapping: Dict[int, int], size: int, extra: Dict[int, int]) -> Tuple[int, ...]:
    """把约化时的 旧->新 映射翻转成正向步骤的 vertex_map"""
    result = [0] * size
    for old, new in mapping.items():
        result[new] = old
    for new, old in extra.items():
        result[new] = old
    return tuple(result)


def _k4minus_candidates(graph: Graph) -> List[Tuple[int, int, int, int]]:
    found = []
    for u1, u2 in graph.edges:
        if graph.degree(u1) != 3 or graph.degree(u2) != 3:
            continue
        rest1 = set(graph.adjacency[u1]) - {u2}
        rest2 = set(graph.adjacency[u2]) - {u1}
        if rest1 != rest2:
            continue
        v1, v2 = sorted(rest1)
        if not graph.has_edge(v1, v2):
            found.append((u1, u2, v1, v2))
    return found


def k4minus_reductions(graph: Graph) -> Iterator[Reduction]:
    """相邻的 3 度点 u₁u₂ 有公共邻点 v₁、v₂ 且 v₁v₂ ∉ E：删去 u₁、u₂，加边 v₁v₂"""
    for u1, u2, v1, v2 in _k4minus_candidates(graph):
        smaller, mapping = graph.remove_vertices([u1, u2])
        edge = normalize_edge(mapping[v1], mapping[v2])
        reduced = smaller.add_edges([edge])
        verdict = circuit_verdict(reduced)
        inverse = None
        if verdict:
            vertex_map = _inverse_map(mapping, graph.n, {reduced.n: u1, reduced.n + 1: u2})
            inverse, _ = make_step(reduced, K4MINUS_EXT, {"edge": list(edge)}, vertex_map)
        yield Reduction(K4MINUS_RED, {"u": [u1, u2], "v": [v1, v2]}, reduced, verdict, inverse)


def one_reduction(graph: Graph, v: int) -> List[Reduction]:
    """3 度点 v：删去 v，在其邻点间补一条原本不存在的边；每个候选附带判定"""
    graph.check_vertex(v)
    if graph.degree(v) != 3:
        raise PreconditionError(f"1-约化要求 3 度点，顶点 {v} 的度为 {graph.degree(v)}")
    neighbours = graph.neighbors(v)
    smaller, mapping = graph.remove_vertices([v])
    candidates = []
    for a, b in combinations(neighbours, 2):
        if graph.has_edge(a, b):
            continue
        (c,) = [w for w in neighbours if w not in (a, b)]
        edge = normalize_edge(mapping[a], mapping[b])
        reduced = smaller.add_edges([edge])
        verdict = circuit_verdict(reduced)
        inverse = None
        if verdict:
            vertex_map = _inverse_map(mapping, graph.n, {reduced.n: v})
            inverse, _ = make_step(reduced, ONE_EXT, {"edge": list(edge), "z": mapping[c]}, vertex_map)
        candidates.append(Reduction(ONE_RED, {"v": v, "edge": [a, b]}, reduced, verdict, inverse))
    return candidates


def allowable_nodes(multigraph: MultiGraph) -> List[int]:
    """
    M₂,₂-回路多重图中的可允许节点：在该节点做 1-约化得到更小的 M₂,₂-回路，
    且补上的边不与已有边平行。
    """
    result = []
    for v in range(multigraph.n):
        if multigraph.degree(v) != 3:
            continue
        remaining = [e for e in multigraph.edges if v not in e]
        mapping = {w: (w if w < v else w - 1) for w in range(multigraph.n) if w != v}
        for a, b in combinations(multigraph.neighbors(v), 2):
            if multigraph.multiplicity(a, b) > 0:
                continue
            edges = [(mapping[x], mapping[y]) for x, y in remaining + [(a, b)]]
            if is_circuit(MultiGraph(multigraph.n - 1, tuple(edges)), simple_restriction=False).spanning_circuit:
                result.append(v)
                break
    return result


def edge_reduction(graph: Graph, e: Sequence[int], f: Sequence[int]) -> Reduction:
    """
    删去 e 再收缩与之相邻的 f，是广义顶点分裂的逆操作。
    收缩产生平行边时判否。
    """
    e = graph.check_edge(_edge(e))
    f = graph.check_edge(_edge(f))
    if e == f:
        raise PreconditionError("e 与 f 必须是不同的边")
    shared = set(e) & set(f)
    if len(shared) != 1:
        raise PreconditionError(f"e = {e} 与 f = {f} 必须恰有一个公共端点")
    (c,) = shared
    (x,) = set(e) - shared
    (w,) = set(f) - shared
    params = {"e": list(e), "f": list(f)}

    contracted = contract_edge(graph.remove_edges([e]), f)
    if contracted.created_parallel:
        return Reduction(EDGE_RED, params, contracted.graph, False)
    reduced = contracted.graph
    verdict = circuit_verdict(reduced)
    inverse = None
    if verdict:
        mapping = contracted.mapping
        merged = mapping[c]
        n1 = sorted(mapping[y] for y in graph.adjacency[c] if y not in (x, w))
        survivors = {old: new for old, new in mapping.items() if old not in (c, w)}
        vertex_map = _inverse_map(survivors, graph.n, {merged: w, reduced.n: c})
        inverse, _ = make_step(reduced, VERTEX_SPLIT, {"v": merged, "n1": n1, "x": mapping[x]}, vertex_map)
    return Reduction(EDGE_RED, params, reduced, verdict, inverse)


def edge_reductions(graph: Graph) -> Iterator[Reduction]:
    """按 (公共端点, f, e) 的字典序枚举全部边约化"""
    for c in range(graph.n):
        incident = graph.incident_edges(c)
        for f in incident:
            for e in incident:
                if e != f:
                    yield edge_reduction(graph, e, f)


def find_reduction(graph: Graph, check: bool = True) -> Reduction:
    """
    依次尝试 K₄⁻-约化、1-约化、边约化，返回第一个可接受的约化；
    都不存在时抛出 ReductionError。
    """
    if check and not circuit_verdict(graph):
        raise PreconditionError("约化搜索要求输入是 M*₂,₂-回路")
    for reduction in k4minus_reductions(graph):
        if reduction.verdict:
            return reduction
    for v in nodes(graph):
        for reduction in one_reduction(graph, v):
            if reduction.verdict:
                return reduction
    for reduction in edge_reductions(graph):
        if reduction.verdict:
            return reduction
    raise ReductionError(f"{graph.n} 个顶点的回路找不到可接受的约化", graph)


def match_base(graph: Graph, names: Sequence[str] = REDUCTION_BASES) -> Optional[Tuple[str, Tuple[int, ...]]]:
    """graph 与某个基图同构时返回 (基图名, 基图顶点在 graph 中的像)"""
    for name in names:
        base = base_graph(name)
        if base.n != graph.n or base.m != graph.m:
            continue
        iso = find_isomorphism(base, graph)
        if iso is not None:
            return name, tuple(iso[v] for v in range(base.n))
    return None


def reduce_to_base(graph: Graph, max_steps: int = None) -> ConstructionTrace:
    """
    反复约化直到得到与 K₅−e 或 H₁ 同构的图；
    返回的轨迹从该基图出发，回放后逐个下标地重建输入图。
    """
    max_steps = Config.REDUCE_MAX_STEPS if max_steps is None else max_steps
    if not circuit_verdict(graph):
        raise PreconditionError("只有 M*₂,₂-回路可以约化到基图")
    current = graph
    inverse_steps: List[Step] = []
    for _ in range(max_steps):
        matched = match_base(current) if current.n <= 6 else None
        if matched is not None:
            name, base_map = matched
            logger.info(f"约化完成：{graph.n} 个顶点 -> {name}，共 {len(inverse_steps)} 步")
            return ConstructionTrace(name, tuple(reversed(inverse_steps)), base_map)
        reduction = find_reduction(current, check=False)
        logger.debug(f"{reduction.kind} {reduction.params}: {current.n} -> {reduction.graph.n} 个顶点")
        inverse_steps.append(reduction.inverse)
        current = reduction.graph
    raise ReductionError(f"超过 {max_steps} 步仍未到达基图", current)


# ---------------------------------------------------------------------------
# 随机回路
# ---------------------------------------------------------------------------

def _random_split(graph: Graph, rng: np.random.Generator) -> Optional[Tuple[Step, Graph]]:
    for _ in range(Config.SPLIT_TRIES):
        v = int(rng.integers(graph.n))
        neighbours = graph.neighbors(v)
        n1 = [w for w in neighbours if rng.random() < 0.5]
        # v₁、v₂ 的度都至少为 3
        if not n1 or len(neighbours) - len(n1) < 2:
            continue
        choices = [y for y in range(graph.n) if y != v and y not in n1]
        x = choices[int(rng.integers(len(choices)))]
        if generalized_vertex_split(graph, v, n1, x).verdict:
            return make_step(graph, VERTEX_SPLIT, {"v": v, "n1": n1, "x": x})
    return None


def random_circuit(n: int, seed=None) -> Tuple[Graph, ConstructionTrace]:
    """
    从 K₅−e 或 H₁ 出发，随机施加 K₄⁻-扩张与（判定为真的）广义顶点分裂，直到有 n 个顶点。
    """
    if n < 5:
        raise PreconditionError(f"回路至少有 5 个顶点，得到 n = {n}")
    rng = np.random.default_rng(seed)
    base = "K5-e" if n == 5 or rng.random() < 0.5 else "H1"
    graph = base_graph(base)
    steps = []
    while graph.n < n:
        if n - graph.n >= 2 and rng.random() < K4MINUS_PROBABILITY:
            edge = graph.edges[int(rng.integers(graph.m))]
            step, graph = make_step(graph, K4MINUS_EXT, {"edge": list(edge)})
        else:
            split = _random_split(graph, rng)
            if split is None:
                edge = graph.edges[int(rng.integers(graph.m))]
                z = [y for y in range(graph.n) if y not in edge][0]
                split = make_step(graph, ONE_EXT, {"edge": list(edge), "z": z})
            step, graph = split
        steps.append(step)
    logger.debug(f"随机回路: {base} + {len(steps)} 步 -> {graph.n} 个顶点")
    return graph, ConstructionTrace(base, tuple(steps))
