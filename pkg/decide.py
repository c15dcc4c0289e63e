"""
圆柱面刚性判定器
组合判定优先（多项式、精确），数值秩检验作为可选对照；每个判定附带可独立复核的证书。
"""

import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from config import Config
from constructions import random_circuit
from errors import PreconditionError
from graph import (
    Graph,
    connected_components,
    contract_edge,
    cut_vertices,
    cycle_space_dim,
    is_2connected,
    is_connected,
)
from numeric import (
    Framework,
    Stress,
    cokernel,
    coincident_framework,
    is_max_rank,
    matrix_rank,
    random_framework,
    rigidity_matrix,
    stress_matrix_rank,
    verify_stress,
    vfree_matrix,
    vr_matrix,
)
from scalars import parse_scalar
from sparsity import (
    fundamental_circuit,
    independent_set,
    is_circuit,
    is_independent,
    non_redundant_edges,
    rank22,
    vertex_in_circuit,
)

logger = logging.getLogger(__name__)

# 判定依据
RIGIDITY = "rigidity"
GLOBAL_RIGIDITY = "global-rigidity"
VFREE_RIGIDITY = "vfree-rigidity"
VR_MINIMAL = "vr-minimal-rigidity"
VR_RIGIDITY = "vr-rigidity"
VR_GLOBAL = "vr-global-rigidity"
VR_REDUNDANT = "vr-redundant-rigidity"
STRESS_SUFFICIENCY = "stress-sufficiency"
CONCENTRIC_RIGIDITY = "concentric-rigidity"
CONCENTRIC_GLOBAL = "concentric-global-rigidity"
COINCIDENT = "coincident-rigidity"

# JSON 输出中的 "theorem" 字段
THEOREMS = {
    RIGIDITY: "1.1",
    GLOBAL_RIGIDITY: "1.2",
    COINCIDENT: "4.4",
    VFREE_RIGIDITY: "6.5",
    VR_MINIMAL: "7.1",
    VR_RIGIDITY: "7.1",
    VR_GLOBAL: "7.5",
    VR_REDUNDANT: "7.5",
    CONCENTRIC_RIGIDITY: "8.1",
    CONCENTRIC_GLOBAL: "8.1",
    STRESS_SUFFICIENCY: "8.2",
}

# 交叉验证状态
AGREE = "agree"
DISAGREE = "disagree"
EXEMPT = "exempt"


@dataclass(frozen=True)
class Verdict:
    """判定结果；label 是判定所依据的刻画，certificate["kind"] 标明证书类型"""

    answer: bool
    label: str
    certificate: dict

    def __bool__(self) -> bool:
        return self.answer

    @property
    def theorem(self) -> str:
        return THEOREMS[self.label]

    def to_dict(self) -> dict:
        return {"answer": self.answer, "theorem": self.theorem, "certificate": self.certificate}


# ---------------------------------------------------------------------------
# 证书
# ---------------------------------------------------------------------------

def _complete_small(graph: Graph, limit: int) -> Optional[dict]:
    if graph.n <= limit and graph.is_complete():
        return {"kind": "complete-small-graph", "n": graph.n, "limit": limit}
    return None


def _not_2connected(graph: Graph) -> dict:
    if not is_connected(graph) or graph.n < 3:
        return {"kind": "disconnected", "components": [list(c) for c in connected_components(graph)]}
    return {"kind": "cut-vertex", "vertex": cut_vertices(graph)[0]}


def _rigid_by_rank(graph: Graph) -> bool:
    return rank22(graph) == 2 * graph.n - 2


def verify_certificate(graph: Graph, certificate: dict) -> bool:
    """不依赖产生证书的代码路径，重新核验证书"""
    kind = certificate.get("kind")
    if kind == "complete-small-graph":
        return graph.is_complete() and graph.n <= certificate["limit"]
    if kind == "rank":
        basis = [tuple(e) for e in certificate.get("basis", [])]
        if basis and (len(basis) != certificate["rank"] or not is_independent(graph, basis)):
            return False
        if certificate.get("after_any_deletion"):
            return all(_rigid_by_rank(graph.remove_edges([e])) for e in graph.edges)
        return rank22(graph) == certificate["rank"]
    if kind == "disconnected":
        return not is_connected(graph) or graph.n < 3
    if kind == "cut-vertex":
        smaller, _ = graph.remove_vertices([certificate["vertex"]])
        return not is_connected(smaller)
    if kind == "non-redundant-edge":
        return not _rigid_by_rank(graph.remove_edges([certificate["edge"]]))
    if kind == "circuit-containing-v":
        edges = [tuple(e) for e in certificate["edges"]]
        support = sorted({v for e in edges for v in e})
        if certificate["vertex"] not in support:
            return False
        mapping = {v: i for i, v in enumerate(support)}
        sub = Graph(len(support), tuple((mapping[u], mapping[v]) for u, v in edges))
        return bool(is_circuit(sub))
    if kind == "count":
        return (is_connected(graph) == certificate["connected"]
                and graph.m == certificate["edges"]
                and cycle_space_dim(graph) == certificate["cycle_space_dim"])
    if kind == "stress":
        return _verify_stress_certificate(graph, certificate)
    return kind == "none"


def _checked(graph: Graph, verdict: Verdict) -> Verdict:
    if not verify_certificate(graph, verdict.certificate):
        raise RuntimeError(f"{verdict.label} 的证书未通过复核: {verdict.certificate.get('kind')}")
    return verdict


# ---------------------------------------------------------------------------
# 组合判定
# ---------------------------------------------------------------------------

def rigid(graph: Graph) -> Verdict:
    """刚性：至多 3 个顶点的完全图，或 M*₂,₂ 秩为 2n−2"""
    small = _complete_small(graph, 3)
    if small:
        return _checked(graph, Verdict(True, RIGIDITY, small))
    basis = independent_set(graph)
    certificate = {"kind": "rank", "rank": len(basis), "required": 2 * graph.n - 2,
                   "basis": [list(e) for e in basis]}
    return _checked(graph, Verdict(len(basis) == 2 * graph.n - 2, RIGIDITY, certificate))


def globally_rigid(graph: Graph) -> Verdict:
    """全局刚性：至多 4 个顶点的完全图，或 2-连通且冗余刚性"""
    small = _complete_small(graph, 4)
    if small:
        return _checked(graph, Verdict(True, GLOBAL_RIGIDITY, small))
    if not is_2connected(graph):
        return _checked(graph, Verdict(False, GLOBAL_RIGIDITY, _not_2connected(graph)))
    weak = non_redundant_edges(graph)
    if weak:
        certificate = {"kind": "non-redundant-edge", "edge": list(weak[0])}
        return _checked(graph, Verdict(False, GLOBAL_RIGIDITY, certificate))
    certificate = {"kind": "rank", "rank": 2 * graph.n - 2, "after_any_deletion": True}
    return _checked(graph, Verdict(True, GLOBAL_RIGIDITY, certificate))


def vfree_rigid(graph: Graph, v: int) -> Verdict:
    """v-自由刚性：刚性且 v 属于某个 M*₂,₂-回路"""
    graph.check_vertex(v)
    verdict = rigid(graph)
    if not verdict:
        return Verdict(False, VFREE_RIGIDITY, verdict.certificate)
    if not vertex_in_circuit(graph, v):
        return Verdict(False, VFREE_RIGIDITY, {"kind": "none", "vertex": v, "reason": "v 不在任何回路中"})
    for e in graph.incident_edges(v):
        witness = fundamental_circuit(graph, e)
        if witness is not None:
            certificate = {"kind": "circuit-containing-v", "vertex": v,
                           "edges": [list(f) for f in witness.edges]}
            return _checked(graph, Verdict(True, VFREE_RIGIDITY, certificate))
    raise RuntimeError(f"顶点 {v} 属于回路但找不到基本回路")


@dataclass(frozen=True)
class VRVerdicts:
    minimally_rigid: Verdict
    rigid: Verdict
    globally_rigid: Verdict

    def to_dict(self) -> dict:
        return {
            "minimally_rigid": self.minimally_rigid.to_dict(),
            "rigid": self.rigid.to_dict(),
            "globally_rigid": self.globally_rigid.to_dict(),
        }


def vr_deciders(graph: Graph) -> VRVerdicts:
    """
    VR 极小刚性：连通且恰有一个圈；
    VR 刚性：连通且 |E| ≥ n（含生成的连通单圈子图）；
    VR 全局刚性：2-连通且 |E| ≥ n+1。
    """
    connected = is_connected(graph) and graph.n > 0
    count = {"kind": "count", "connected": is_connected(graph), "edges": graph.m,
             "cycle_space_dim": cycle_space_dim(graph)}
    minimal = Verdict(connected and count["cycle_space_dim"] == 1, VR_MINIMAL, count)
    vr_rigid = Verdict(connected and graph.m >= graph.n, VR_RIGIDITY, count)
    if is_2connected(graph):
        vr_global = Verdict(graph.m >= graph.n + 1, VR_GLOBAL, count)
    else:
        vr_global = Verdict(False, VR_GLOBAL, _not_2connected(graph))
    return VRVerdicts(
        _checked(graph, minimal),
        _checked(graph, vr_rigid),
        _checked(graph, vr_global),
    )


def vr_redundantly_rigid(graph: Graph) -> Verdict:
    """删去任意一条边后仍 VR 刚性"""
    if not vr_deciders(graph).rigid:
        return Verdict(False, VR_REDUNDANT, {"kind": "none", "reason": "本身不是 VR 刚性"})
    for e in graph.edges:
        if not vr_deciders(graph.remove_edges([e])).rigid:
            return Verdict(False, VR_REDUNDANT, {"kind": "none", "edge": list(e)})
    return Verdict(True, VR_REDUNDANT, {"kind": "none"})


def rigid_concentric(graph: Graph) -> Verdict:
    """同心圆柱族上的刚性，组合条件与单位圆柱相同"""
    return replace(rigid(graph), label=CONCENTRIC_RIGIDITY)


def globally_rigid_concentric(graph: Graph) -> Verdict:
    return replace(globally_rigid(graph), label=CONCENTRIC_GLOBAL)


# ---------------------------------------------------------------------------
# 数值对照
# ---------------------------------------------------------------------------

def numeric_rigid(framework: Framework, tolerance: float = None) -> bool:
    """无穷小刚性：rank R_cyl = 3n − 2"""
    return matrix_rank(rigidity_matrix(framework), tolerance) == 3 * framework.n - 2


def numeric_vfree(framework: Framework, v: int, tolerance: float = None) -> bool:
    return matrix_rank(vfree_matrix(framework, v), tolerance) == 3 * framework.n - 2


def numeric_vr_rigid(framework: Framework, tolerance: float = None) -> bool:
    return matrix_rank(vr_matrix(framework), tolerance) == 3 * framework.n - 1


def numeric_vr_minimal(framework: Framework, tolerance: float = None) -> bool:
    """rank R^ver = 3n − 1，且删去任意一条边行都会降秩"""
    matrix = vr_matrix(framework)
    full = 3 * framework.n - 1
    if matrix_rank(matrix, tolerance) != full:
        return False
    return all(
        matrix_rank(np.delete(matrix, row, axis=0), tolerance) < full
        for row in range(framework.graph.m)
    )


def numeric_coincident(framework: Framework, u: int, v: int, tolerance: float = None) -> bool:
    """p(u) = p(v) 的重合框架是否无穷小刚性"""
    return numeric_rigid(coincident_framework(framework, u, v), tolerance)


def coincident_combinatorial(graph: Graph, u: int, v: int) -> bool:
    """G − uv 与 G/uv 都是 M*₂,₂ 意义下的刚性图"""
    edge = graph.check_edge((u, v))
    contracted = contract_edge(graph, edge).graph
    return _rigid_by_rank(graph.remove_edges([edge])) and _rigid_by_rank(contracted)


# ---------------------------------------------------------------------------
# 应力证书
# ---------------------------------------------------------------------------

def _verify_stress_certificate(graph: Graph, certificate: dict) -> bool:
    framework = Framework.from_dict(certificate["framework"])
    if framework.graph != graph:
        return False
    d = framework.d if framework.scalar == "quadratic" else None
    read = float if framework.scalar == "f64" else (lambda text: parse_scalar(text, d))
    stress = Stress(
        tuple(read(w) for w in certificate["stress"]["omega"]),
        tuple(read(l) for l in certificate["stress"]["lambda"]),
    )
    if stress.is_zero() or not verify_stress(framework, stress).valid:
        return False
    rank, _ = stress_matrix_rank(stress, framework)
    if rank != certificate["rank"]:
        return False
    return (is_2connected(graph) == certificate["two_connected"]
            and (graph.m >= graph.n + 1) == certificate["enough_edges"])


def _combine(basis: List[list], coefficients: Sequence[int]) -> list:
    result = [coefficients[0] * x for x in basis[0]]
    for c, vector in zip(coefficients[1:], basis[1:]):
        result = [r + c * x for r, x in zip(result, vector)]
    return result


def stress_certificate(graph: Graph, seed=None, bits: int = None, tries: int = None,
                       scalar: str = "rational") -> Verdict:
    """
    全局刚性的单侧充分性检验：在随机精确框架上寻找最大秩（3n−6）的平衡应力。
    余核一维时直接检验唯一应力，否则尝试若干个随机余核组合；找不到不构成反例。
    找到时按充分性推论同时记录“2-连通且 |E| ≥ n+1”。
    """
    tries = Config.STRESS_TRIES if tries is None else tries
    framework_seed, combination_seed = np.random.SeedSequence(seed).spawn(2)
    framework = random_framework(graph, framework_seed, bits=bits, scalar=scalar)
    tol = 0.0 if framework.is_exact else framework.tolerance
    basis = cokernel(rigidity_matrix(framework))
    if not basis:
        return Verdict(False, STRESS_SUFFICIENCY, {"kind": "none", "cokernel_dimension": 0})

    rng = np.random.default_rng(combination_seed)
    candidates = [basis[0]] if len(basis) == 1 else (
        _combine(basis, [Fraction(int(c)) for c in rng.integers(-255, 256, size=len(basis))])
        for _ in range(tries)
    )
    best = None
    for vector in candidates:
        stress = Stress.from_vector(vector, graph.m).normalized(tol)
        if stress.is_zero(tol):
            continue
        rank, _ = stress_matrix_rank(stress, framework)
        best = rank if best is None else max(best, rank)
        if is_max_rank(rank, graph.n):
            certificate = {
                "kind": "stress",
                "rank": rank,
                "max_rank": 3 * graph.n - 6,
                "cokernel_dimension": len(basis),
                "framework": framework.to_dict(),
                "stress": stress.to_dict(graph),
                "two_connected": is_2connected(graph),
                "enough_edges": graph.m >= graph.n + 1,
            }
            return _checked(graph, Verdict(True, STRESS_SUFFICIENCY, certificate))
    logger.debug(f"{len(basis)} 维余核中未找到最大秩应力，最高秩 {best}")
    return Verdict(False, STRESS_SUFFICIENCY,
                   {"kind": "none", "cokernel_dimension": len(basis), "best_rank": best})


# ---------------------------------------------------------------------------
# 交叉验证
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckResult:
    """一项组合判定与其数值对照；numeric 为最终采用的各个框架上的数值结果"""

    name: str
    combinatorial: object
    numeric: Tuple[object, ...]
    status: str
    resamples: int = 0

    def to_dict(self) -> dict:
        def plain(value):
            return list(value) if isinstance(value, tuple) else value

        return {
            "name": self.name,
            "combinatorial": plain(self.combinatorial),
            "numeric": [plain(v) for v in self.numeric],
            "status": self.status,
            "resamples": self.resamples,
        }


@dataclass(frozen=True)
class CrossValidation:
    graph: Graph
    checks: Tuple[CheckResult, ...]

    @property
    def agree(self) -> bool:
        return all(c.status != DISAGREE for c in self.checks)

    def check(self, name: str) -> CheckResult:
        return next(c for c in self.checks if c.name == name)

    def to_dict(self) -> dict:
        return {
            "graph": self.graph.to_dict(),
            "agree": self.agree,
            "checks": [c.to_dict() for c in self.checks],
        }


def cross_validate(graph: Graph, seed=None, bits: int = None, scalar: str = "rational",
                   tolerance: float = None, frameworks: Sequence[Framework] = None,
                   max_resamples: int = None) -> CrossValidation:
    """
    在两个独立的随机精确框架上对照组合判定与数值秩判定：
    刚性、v-自由刚性（每个顶点）、VR 极小刚性、VR 刚性、重合框架刚性，以及“全局刚性 ⇒ 刚性”。
    数值结果与组合判定不一致时换一对新框架重试，最多 max_resamples 次，仍不一致则标记。
    """
    if graph.n == 0:
        raise PreconditionError("交叉验证需要至少一个顶点")
    max_resamples = Config.MAX_RESAMPLES if max_resamples is None else max_resamples
    children = np.random.SeedSequence(seed).spawn(1 + 2 * (1 + max_resamples))
    choice = np.random.default_rng(children[0])
    pairs: Dict[int, Tuple[Framework, Framework]] = {}
    if frameworks is not None:
        pairs[0] = tuple(frameworks)

    def pair(round_: int) -> Tuple[Framework, ...]:
        if round_ not in pairs:
            pairs[round_] = tuple(
                random_framework(graph, children[1 + 2 * round_ + k], bits=bits, scalar=scalar)
                for k in range(2)
            )
        return pairs[round_]

    def run(name: str, expected, numeric: Callable[[Framework], object]) -> CheckResult:
        values = ()
        for round_ in range(max_resamples + 1):
            values = tuple(numeric(f) for f in pair(round_))
            if all(v == expected for v in values):
                if round_:
                    logger.warning(f"{name}: 重采样 {round_} 次后一致")
                return CheckResult(name, expected, values, AGREE, round_)
        logger.warning(f"{name}: {max_resamples} 次重采样后仍不一致")
        return CheckResult(name, expected, values, DISAGREE, max_resamples)

    checks = []
    n = graph.n
    if n <= 3 and graph.is_complete():
        checks.append(CheckResult(RIGIDITY, True, (), EXEMPT))
    else:
        checks.append(run(RIGIDITY, rigid(graph).answer, lambda f: numeric_rigid(f, tolerance)))

    expected = tuple(vfree_rigid(graph, v).answer for v in range(n))
    checks.append(run(VFREE_RIGIDITY, expected,
                      lambda f: tuple(numeric_vfree(f, v, tolerance) for v in range(n))))

    vr = vr_deciders(graph)
    checks.append(run(VR_MINIMAL, vr.minimally_rigid.answer, lambda f: numeric_vr_minimal(f, tolerance)))
    checks.append(run(VR_RIGIDITY, vr.rigid.answer, lambda f: numeric_vr_rigid(f, tolerance)))

    if graph.m:
        u, v = graph.edges[int(choice.integers(graph.m))]
        checks.append(run(COINCIDENT, coincident_combinatorial(graph, u, v),
                          lambda f: numeric_coincident(f, u, v, tolerance)))
    else:
        checks.append(CheckResult(COINCIDENT, None, (), EXEMPT))

    implies = not globally_rigid(graph).answer or rigid(graph).answer
    checks.append(CheckResult("global-implies-rigid", implies, (), AGREE if implies else DISAGREE))
    return CrossValidation(graph, tuple(checks))


def random_graph(n: int, rng: np.random.Generator) -> Graph:
    """每条边以随机密度 p ∈ [0.3, 0.9) 独立出现"""
    p = rng.uniform(0.3, 0.9)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    keep = rng.random(len(pairs)) < p
    return Graph(n, tuple(e for e, k in zip(pairs, keep) if k))


def generate_corpus(count: int = None, n_max: int = None, seed=None, n_min: int = None) -> List[Graph]:
    """带种子的语料：随机图，每四个中一个换成随机回路（n_max ≥ 5 时）"""
    count = Config.CORPUS_COUNT if count is None else count
    n_max = Config.CORPUS_N_MAX if n_max is None else n_max
    n_min = Config.CORPUS_N_MIN if n_min is None else n_min
    if n_min < 1 or n_max < n_min:
        raise PreconditionError(f"顶点数范围 [{n_min}, {n_max}] 不合法")
    rng = np.random.default_rng(seed)
    corpus = []
    for i in range(count):
        if i % 4 == 3 and n_max >= 5:
            n = int(rng.integers(5, n_max + 1))
            graph, _ = random_circuit(n, int(rng.integers(2 ** 31)))
        else:
            graph = random_graph(int(rng.integers(n_min, n_max + 1)), rng)
        corpus.append(graph)
    return corpus


def all_graphs(n: int):
    """n 个顶点上的全部带标号简单图"""
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for mask in range(1 << len(pairs)):
        yield Graph(n, tuple(e for i, e in enumerate(pairs) if mask >> i & 1))
