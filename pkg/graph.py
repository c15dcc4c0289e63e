"""
图与多重图模块
提供简单图/多重图的不可变表示，以及构造、约化过程所需的连通性与分离查询
"""

import json
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx

from config import Config
from errors import GraphFormatError, PreconditionError, RigidityError, SizeCapError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """无向边统一为 (较小端点, 较大端点)"""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """有限简单图，顶点为 0..n-1，边按字典序存储"""

    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise RigidityError(f"顶点数不能为负: {self.n}")
        normalized = []
        for edge in self.edges:
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise RigidityError(f"简单图不允许自环: ({u},{v})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise RigidityError(f"边 ({u},{v}) 的端点超出范围 0..{self.n - 1}")
            normalized.append(normalize_edge(u, v))
        ordered = tuple(sorted(normalized))
        if len(set(ordered)) != len(ordered):
            raise RigidityError("简单图不允许重复边")
        object.__setattr__(self, "edges", ordered)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> FrozenSet[Edge]:
        return frozenset(self.edges)

    @cached_property
    def adjacency(self) -> Tuple[FrozenSet[int], ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edge_set

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def incident_edges(self, v: int) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if v in e)

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def check_vertex(self, v: int):
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise PreconditionError(f"顶点 {v} 不存在（n={self.n}）")

    def check_edge(self, edge: Sequence[int]) -> Edge:
        e = normalize_edge(int(edge[0]), int(edge[1]))
        if e not in self.edge_set:
            raise PreconditionError(f"边 {e} 不在图中")
        return e

    def remove_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        drop = {normalize_edge(int(u), int(v)) for u, v in edges}
        return Graph(self.n, tuple(e for e in self.edges if e not in drop))

    def add_edges(self, edges: Iterable[Sequence[int]]) -> "Graph":
        return Graph(self.n, self.edges + tuple(normalize_edge(int(u), int(v)) for u, v in edges))

    def add_vertex(self, neighbors: Iterable[int] = ()) -> "Graph":
        """追加新顶点 n，并连到给定邻点"""
        new = self.n
        return Graph(self.n + 1, self.edges + tuple((u, new) for u in neighbors))

    def remove_vertices(self, vertices: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        """删除顶点并重新编号，返回 (新图, 旧下标->新下标)"""
        drop = set(vertices)
        mapping = {}
        for v in range(self.n):
            if v not in drop:
                mapping[v] = len(mapping)
        edges = tuple(
            (mapping[u], mapping[v]) for u, v in self.edges if u in mapping and v in mapping
        )
        return Graph(len(mapping), edges), mapping

    def induced(self, vertices: Iterable[int]) -> Tuple["Graph", Dict[int, int]]:
        keep = set(vertices)
        return self.remove_vertices(v for v in range(self.n) if v not in keep)

    def relabel(self, mapping: Dict[int, int], n: Optional[int] = None) -> "Graph":
        """按 mapping 重新编号（mapping 须是到 0..n-1 的单射）"""
        size = self.n if n is None else n
        return Graph(size, tuple((mapping[u], mapping[v]) for u, v in self.edges))

    def to_networkx(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        return cls(int(data["n"]), tuple(tuple(e) for e in data.get("edges", [])))


@dataclass(frozen=True)
class MultiGraph:
    """无自环多重图，平行边以重复元素表示"""

    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        normalized = []
        for edge in self.edges:
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise RigidityError(f"多重图不允许自环: ({u},{v})")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise RigidityError(f"边 ({u},{v}) 的端点超出范围 0..{self.n - 1}")
            normalized.append(normalize_edge(u, v))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def multiplicity(self, u: int, v: int) -> int:
        return self.edges.count(normalize_edge(u, v))

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted({u for e in self.edges if v in e for u in e if u != v}))

    def underlying(self) -> Graph:
        return Graph(self.n, tuple(sorted(set(self.edges))))

    def is_simple(self) -> bool:
        return len(set(self.edges)) == len(self.edges)

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.edges)
        return graph

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_graph(cls, graph: Graph) -> "MultiGraph":
        return cls(graph.n, graph.edges)


AnyGraph = Union[Graph, MultiGraph]


# ---------------------------------------------------------------------------
# 常用图
# ---------------------------------------------------------------------------

def complete_graph(n: int) -> Graph:
    return Graph(n, tuple(combinations(range(n), 2)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise PreconditionError("环至少需要 3 个顶点")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> Graph:
    return Graph(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    shifted = tuple((u + g1.n, v + g1.n) for u, v in g2.edges)
    return Graph(g1.n + g2.n, g1.edges + shifted)


def glue_at_vertex(g1: Graph, g2: Graph, v1: int, v2: int) -> Graph:
    """把 g2 的顶点 v2 与 g1 的顶点 v1 粘合（一点并）"""
    mapping = {}
    next_index = g1.n
    for v in range(g2.n):
        if v == v2:
            mapping[v] = v1
        else:
            mapping[v] = next_index
            next_index += 1
    return Graph(next_index, g1.edges + tuple((mapping[u], mapping[v]) for u, v in g2.edges))


# ---------------------------------------------------------------------------
# 连通性
# ---------------------------------------------------------------------------

def is_connected(graph: AnyGraph) -> bool:
    """空图与单点图视为连通"""
    if graph.n <= 1:
        return True
    return nx.is_connected(graph.to_networkx())


def connected_components(graph: AnyGraph) -> List[Tuple[int, ...]]:
    comps = [tuple(sorted(c)) for c in nx.connected_components(graph.to_networkx())]
    return sorted(comps)


def is_2connected(graph: Graph) -> bool:
    if graph.n < 3:
        return False
    return nx.is_biconnected(graph.to_networkx())


def cut_vertices(graph: Graph) -> List[int]:
    return sorted(nx.articulation_points(graph.to_networkx()))


def cycle_space_dim(graph: AnyGraph) -> int:
    """|E| - |V| + 连通分支数"""
    if graph.n == 0:
        return 0
    return graph.m - graph.n + nx.number_connected_components(graph.to_networkx())


# ---------------------------------------------------------------------------
# 边收缩
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContractionResult:
    graph: AnyGraph
    mapping: Dict[int, int]  # 旧顶点 -> 新顶点，被合并的端点映到保留端点的新下标
    created_parallel: bool


def contract_edge(graph: AnyGraph, edge: Sequence[int], keep_simple: bool = True) -> ContractionResult:
    """
    收缩边 uv：保留较小端点，删除较大端点并重新编号；自环丢弃。
    keep_simple=True 时平行边合并为一条并通过 created_parallel 报告；否则返回多重图。
    """
    u, v = normalize_edge(int(edge[0]), int(edge[1]))
    if normalize_edge(u, v) not in set(graph.edges):
        raise PreconditionError(f"边 {(u, v)} 不在图中")

    mapping = {}
    for w in range(graph.n):
        if w == v:
            continue
        mapping[w] = len(mapping)
    mapping[v] = mapping[u]

    merged = []
    for a, b in graph.edges:
        a2, b2 = mapping[a], mapping[b]
        if a2 != b2:
            merged.append(normalize_edge(a2, b2))

    original_counts = {}
    for a, b in graph.edges:
        original_counts[normalize_edge(a, b)] = original_counts.get(normalize_edge(a, b), 0) + 1
    new_counts = {}
    for e in merged:
        new_counts[e] = new_counts.get(e, 0) + 1
    # 合并后某对顶点的重数超过其任一原像的重数，即产生了新的平行边
    created_parallel = any(
        count > max(
            (c for (a, b), c in original_counts.items()
             if normalize_edge(mapping[a], mapping[b]) == e),
            default=0,
        )
        for e, count in new_counts.items()
    )

    if keep_simple:
        result = Graph(graph.n - 1, tuple(sorted(set(merged))))
    else:
        result = MultiGraph(graph.n - 1, tuple(merged))
    return ContractionResult(result, mapping, created_parallel)


# ---------------------------------------------------------------------------
# 分离
# ---------------------------------------------------------------------------

TWO_VERTEX = "two-vertex"
THREE_EDGE = "three-edge"


@dataclass(frozen=True)
class Separation:
    """2-顶点分离或 3-边分离 (F1, F2)，parts 为两侧的顶点集"""

    kind: str
    parts: Tuple[FrozenSet[int], FrozenSet[int]]
    shared: Tuple
    trivial: bool

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parts": [sorted(p) for p in self.parts],
            "shared": [list(s) if isinstance(s, tuple) else s for s in self.shared],
            "trivial": self.trivial,
        }


def _is_k4(graph: Graph, vertices: FrozenSet[int]) -> bool:
    if len(vertices) != 4:
        return False
    return all(graph.has_edge(a, b) for a, b in combinations(sorted(vertices), 2))


def _bipartitions(groups: List[FrozenSet[int]]):
    """把分支分成两个非空组；第一组总含第 0 个分支，避免 (F1,F2)/(F2,F1) 重复"""
    k = len(groups)
    for mask in range(1 << (k - 1)):
        side_a = [groups[0]] + [groups[i] for i in range(1, k) if mask >> (i - 1) & 1]
        side_b = [groups[i] for i in range(1, k) if not mask >> (i - 1) & 1]
        if side_b:
            yield frozenset().union(*side_a), frozenset().union(*side_b)


def _two_vertex_separations(graph: Graph) -> List[Separation]:
    result = []
    nx_graph = graph.to_networkx()
    for a, b in combinations(range(graph.n), 2):
        rest = nx_graph.subgraph([v for v in range(graph.n) if v not in (a, b)])
        groups = sorted((frozenset(c) for c in nx.connected_components(rest)), key=min)
        if len(groups) < 2:
            continue
        for side_a, side_b in _bipartitions(groups):
            v1 = side_a | {a, b}
            v2 = side_b | {a, b}
            trivial = _is_k4(graph, v1) or _is_k4(graph, v2)
            result.append(Separation(TWO_VERTEX, (v1, v2), (a, b), trivial))
    return result


def _three_edge_separations(graph: Graph) -> List[Separation]:
    result = []
    for cut in combinations(graph.edges, 3):
        rest = graph.remove_edges(cut).to_networkx()
        groups = sorted((frozenset(c) for c in nx.connected_components(rest)), key=min)
        if len(groups) < 2:
            continue
        independent = len({v for e in cut for v in e}) == 6
        for side_a, side_b in _bipartitions(groups):
            # 两侧都是诱导子图，所以删去的三条边必须全部跨越两侧
            if all((u in side_a) != (v in side_a) for u, v in cut):
                result.append(Separation(THREE_EDGE, (side_a, side_b), cut, not independent))
    return result


def find_separations(graph: Graph, kind: str, cap: int = None) -> List[Separation]:
    """
    枚举全部 2-顶点分离（割点对）或 3-边分离（E 的 3-子集），并标记平凡/非平凡。
    结果按共享元素的字典序、再按第一侧顶点集排序。
    """
    if kind == TWO_VERTEX:
        separations = _two_vertex_separations(graph)
    elif kind == THREE_EDGE:
        cap = Config.SEPARATION_CAP if cap is None else cap
        if graph.m > cap:
            raise SizeCapError("3-边分离枚举", graph.m, cap)
        separations = _three_edge_separations(graph)
    else:
        raise PreconditionError(f"未知的分离类型: {kind}")
    return sorted(separations, key=lambda s: (s.shared, sorted(s.parts[0])))


def find_atoms(graph: Graph, cap: int = None) -> List[FrozenSet[int]]:
    """非平凡分离中的极小一侧（按顶点集包含关系，诱导子图由顶点集决定）"""
    cap = Config.SEPARATION_CAP if cap is None else cap
    parts = set()
    for sep in find_separations(graph, TWO_VERTEX):
        if not sep.trivial:
            parts.update(sep.parts)
    if graph.m <= cap:
        for sep in find_separations(graph, THREE_EDGE, cap):
            if not sep.trivial:
                parts.update(sep.parts)
    atoms = [p for p in parts if not any(q < p for q in parts)]
    return sorted(atoms, key=lambda p: (len(p), sorted(p)))


def collapse_k4_sides(graph: Graph) -> Tuple[MultiGraph, Dict[int, int]]:
    """
    对每个一侧为 K₄ 的平凡 2-顶点分离 {x, y}：删去 K₄ 的另两点，xy 变为两条平行边。
    每个分离只折叠一侧；已被折叠掉的顶点不再参与。返回 (多重图, 旧下标->新下标)。
    """
    removed = set()
    doubled = []
    for sep in find_separations(graph, TWO_VERTEX):
        if not sep.trivial:
            continue
        x, y = sep.shared
        for part in sep.parts:
            others = part - {x, y}
            if not _is_k4(graph, part) or others & removed or {x, y} & removed:
                continue
            removed |= others
            doubled.append((x, y))
            logger.debug(f"折叠 K₄ 侧 {sorted(part)}，{(x, y)} 加倍")
            break

    mapping = {}
    for v in range(graph.n):
        if v not in removed:
            mapping[v] = len(mapping)
    edges = [(mapping[u], mapping[v]) for u, v in graph.edges if u in mapping and v in mapping]
    edges += [(mapping[u], mapping[v]) for u, v in doubled]
    return MultiGraph(len(mapping), tuple(edges)), mapping


# ---------------------------------------------------------------------------
# 同构
# ---------------------------------------------------------------------------

def find_isomorphism(g1: Graph, g2: Graph) -> Optional[Dict[int, int]]:
    """返回把 g1 映到 g2 的顶点双射（g1 顶点 -> g2 顶点），不存在时返回 None"""
    if g1.n != g2.n or g1.m != g2.m:
        return None
    matcher = nx.algorithms.isomorphism.GraphMatcher(g1.to_networkx(), g2.to_networkx())
    if not matcher.is_isomorphic():
        return None
    return {int(u): int(v) for u, v in sorted(matcher.mapping.items())}


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    return find_isomorphism(g1, g2) is not None


# ---------------------------------------------------------------------------
# 文件读写
# ---------------------------------------------------------------------------

def _parse_edge_list(text: str, source: str) -> Graph:
    lines = [(i, line.split("#", 1)[0].strip()) for i, line in enumerate(text.splitlines(), 1)]
    lines = [(i, line) for i, line in lines if line]
    if not lines:
        raise GraphFormatError("文件为空", line=1, source=source)
    first_no, first = lines[0]
    try:
        n = int(first)
    except ValueError:
        raise GraphFormatError(f"第一行应为顶点数，得到 {first!r}", line=first_no, column=1, source=source)
    edges = []
    for line_no, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"每行应为 'u v'，得到 {line!r}", line=line_no, column=1, source=source)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise GraphFormatError(f"端点必须是整数: {line!r}", line=line_no, column=1, source=source)
    try:
        return Graph(n, tuple(edges))
    except RigidityError as e:
        raise GraphFormatError(str(e), line=first_no, source=source)


def parse_graph(text: str, source: str = None) -> Graph:
    """解析 JSON 图对象或边列表文本；JSON 中含 "graph" 键时取其值"""
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise GraphFormatError(e.msg, line=e.lineno, column=e.colno, source=source)
        if isinstance(data, dict) and "graph" in data:
            data = data["graph"]
        if not isinstance(data, dict) or "n" not in data:
            raise GraphFormatError('图 JSON 需要 "n" 与 "edges" 字段', line=1, column=1, source=source)
        for index, edge in enumerate(data.get("edges", [])):
            if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(x, int) for x in edge)):
                raise GraphFormatError(f"edges[{index}] 应为 [u, v] 整数对", source=source)
        try:
            return Graph.from_dict(data)
        except (RigidityError, TypeError, ValueError) as e:
            raise GraphFormatError(str(e), source=source)
    return _parse_edge_list(text, source)


def load_graph(path) -> Graph:
    path = Path(path)
    if not path.exists():
        raise GraphFormatError("文件不存在", source=str(path))
    return parse_graph(path.read_text(encoding="utf-8"), source=str(path))


def format_edge_list(graph: Graph) -> str:
    return "\n".join([str(graph.n)] + [f"{u} {v}" for u, v in graph.edges]) + "\n"
