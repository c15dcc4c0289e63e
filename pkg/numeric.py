"""
圆柱面框架的数值引擎
刚性矩阵（标准、v-自由、竖直受限、同心圆柱）、精确秩与余核、平衡应力、应力矩阵、测量映射与随机采样。
精确矩阵为 numpy object 数组（元素为 Fraction 或 QuadraticNumber），浮点矩阵为 float64 数组。
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from config import Config
from errors import CokernelDimensionError, FrameworkInvariantError, GraphFormatError, PreconditionError
from graph import Graph
from scalars import QuadraticNumber, Scalar, coerce, field_of, format_scalar, is_zero, parse_scalar

logger = logging.getLogger(__name__)

Point = Tuple[Scalar, Scalar, Scalar]


# ---------------------------------------------------------------------------
# 框架
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Framework:
    """
    图 G 加上每个顶点在圆柱 x² + y² = r² 上的位置。
    radii 缺省为全 1（单位圆柱）；精确标量下不变量必须严格成立，浮点下在容差内成立。
    """

    graph: Graph
    points: Tuple[Point, ...]
    radii: Optional[Tuple[Scalar, ...]] = None
    tolerance: float = Config.TOLERANCE
    scalar: str = field(default="", compare=False)
    d: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.points) != self.graph.n:
            raise FrameworkInvariantError(f"点数 {len(self.points)} 与顶点数 {self.graph.n} 不一致")
        radii = self.radii if self.radii is not None else (1,) * self.graph.n
        if len(radii) != self.graph.n:
            raise FrameworkInvariantError("半径个数与顶点数不一致")
        flat = [c for p in self.points for c in p] + list(radii)
        kind, d = field_of(flat)
        if self.scalar == "f64":
            kind, d = "f64", None
        elif self.scalar == "quadratic" and kind == "rational":
            kind, d = "quadratic", self.d or Config.QUADRATIC_D
        points = tuple(tuple(coerce(c, kind, d) for c in p) for p in self.points)
        radii = tuple(coerce(r, kind, d) for r in radii)
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "scalar", kind)
        object.__setattr__(self, "d", d)
        self._check_invariant()

    def _check_invariant(self):
        for i, ((x, y, _), r) in enumerate(zip(self.points, self.radii)):
            if self.scalar == "f64":
                if r <= 0:
                    raise FrameworkInvariantError(f"顶点 {i} 的半径必须为正")
                if abs(x * x + y * y - r * r) > self.tolerance * max(1.0, r * r):
                    raise FrameworkInvariantError(f"顶点 {i} 不在半径 {r} 的圆柱面上")
            else:
                if not r > 0:
                    raise FrameworkInvariantError(f"顶点 {i} 的半径必须为正")
                if x * x + y * y != r * r:
                    raise FrameworkInvariantError(
                        f"顶点 {i} 不在圆柱面上: x²+y² = {format_scalar(x * x + y * y)}，r² = {format_scalar(r * r)}"
                    )

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def is_exact(self) -> bool:
        return self.scalar != "f64"

    def zero(self) -> Scalar:
        return coerce(0, self.scalar, self.d)

    def with_points(self, points: Sequence[Point], radii: Sequence[Scalar] = None,
                    graph: Graph = None) -> "Framework":
        return Framework(
            graph or self.graph,
            tuple(tuple(p) for p in points),
            tuple(radii) if radii is not None else self.radii,
            self.tolerance,
            self.scalar,
            self.d,
        )

    def to_dict(self) -> dict:
        data = {
            "graph": self.graph.to_dict(),
            "scalar": self.scalar,
            "points": [
                {"x": format_scalar(x), "y": format_scalar(y), "z": format_scalar(z)}
                for x, y, z in self.points
            ],
            "radii": [format_scalar(r) for r in self.radii],
        }
        if self.d is not None:
            data["d"] = self.d
        return data

    @classmethod
    def from_dict(cls, data: dict, source: str = None) -> "Framework":
        try:
            graph = Graph.from_dict(data["graph"])
            scalar = data.get("scalar", "rational")
            d = data.get("d")
            if scalar == "quadratic" and d is None:
                d = Config.QUADRATIC_D

            def read(value):
                if scalar == "f64":
                    return float(value)
                return parse_scalar(value, d if scalar == "quadratic" else None)

            points = tuple((read(p["x"]), read(p["y"]), read(p["z"])) for p in data["points"])
            radii = tuple(read(r) for r in data["radii"]) if "radii" in data else None
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, GraphFormatError):
                raise
            raise GraphFormatError(f"框架 JSON 格式错误: {e}", source=source)
        return cls(graph, points, radii, scalar=scalar, d=d)


def to_float_framework(framework: Framework, tolerance: float = None) -> Framework:
    return Framework(
        framework.graph,
        tuple(tuple(float(c) for c in p) for p in framework.points),
        tuple(float(r) for r in framework.radii),
        tolerance if tolerance is not None else framework.tolerance,
        scalar="f64",
    )


# ---------------------------------------------------------------------------
# 随机采样
# ---------------------------------------------------------------------------

def random_rational(rng: np.random.Generator, bits: int, nonzero: bool = False) -> Fraction:
    bound = 1 << bits
    while True:
        value = Fraction(int(rng.integers(-bound, bound)), int(rng.integers(1, bound)))
        if value or not nonzero:
            return value


def circle_point(t: Fraction, r: Scalar = 1) -> Tuple[Scalar, Scalar]:
    """有理参数化：t ↦ (r(1−t²)/(1+t²), 2rt/(1+t²))，缺少点 (−r, 0)"""
    denominator = 1 + t * t
    return r * (1 - t * t) / denominator, r * 2 * t / denominator


def random_radii(n: int, rng: Union[int, np.random.Generator] = None, bits: int = 8) -> Tuple[Fraction, ...]:
    """互不相同的正有理半径"""
    rng = np.random.default_rng(rng)
    radii: List[Fraction] = []
    while len(radii) < n:
        r = Fraction(int(rng.integers(1, 1 << bits)), int(rng.integers(1, 1 << bits)))
        if r not in radii:
            radii.append(r)
    return tuple(radii)


def random_framework(graph: Graph, seed=None, radii: Sequence[Scalar] = None,
                     bits: int = None, scalar: str = "rational") -> Framework:
    """
    精确随机框架：每个点 t、z 取 bits 位的随机有理数；z₀ ≠ 0 得到保证。
    seed 可以是整数、SeedSequence 或现成的 Generator。
    """
    bits = Config.RANDOM_BITS if bits is None else bits
    rng = np.random.default_rng(seed)
    radii = tuple(radii) if radii is not None else (Fraction(1),) * graph.n
    points = []
    for i in range(graph.n):
        x, y = circle_point(random_rational(rng, bits), radii[i])
        z = random_rational(rng, bits, nonzero=(i == 0))
        points.append((x, y, z))
    framework = Framework(graph, tuple(points), radii)
    if scalar == "f64":
        return to_float_framework(framework)
    if scalar == "quadratic":
        return Framework(graph, framework.points, framework.radii, scalar="quadratic", d=Config.QUADRATIC_D)
    return framework


# ---------------------------------------------------------------------------
# 矩阵
# ---------------------------------------------------------------------------

def _empty(rows: int, cols: int, framework: Framework) -> np.ndarray:
    if not framework.is_exact:
        return np.zeros((rows, cols), dtype=float)
    return np.full((rows, cols), framework.zero(), dtype=object)


def _fill_edge_rows(matrix: np.ndarray, framework: Framework):
    for row, (i, j) in enumerate(framework.graph.edges):
        for k in range(3):
            delta = framework.points[i][k] - framework.points[j][k]
            matrix[row, 3 * i + k] = delta
            matrix[row, 3 * j + k] = -delta


def rigidity_matrix(framework: Framework) -> np.ndarray:
    """
    (|E|+|V|) × 3|V| 矩阵 R_cyl：先按边序的边行，再按顶点序的曲面行 (x, y, 0)。
    同心圆柱族使用同一公式。
    """
    m, n = framework.graph.m, framework.n
    matrix = _empty(m + n, 3 * n, framework)
    _fill_edge_rows(matrix, framework)
    for i, (x, y, _) in enumerate(framework.points):
        matrix[m + i, 3 * i] = x
        matrix[m + i, 3 * i + 1] = y
    return matrix


def vfree_matrix(framework: Framework, v: int) -> np.ndarray:
    """R_v：删去顶点 v 的曲面行"""
    framework.graph.check_vertex(v)
    return np.delete(rigidity_matrix(framework), framework.graph.m + v, axis=0)


def vr_matrix(framework: Framework) -> np.ndarray:
    """
    R^ver：边行、n−1 条伸缩行（z₀ż_i − z_iż₀ = 0）、n 条曲面行，共 |E|+2n−1 行。
    """
    n, m = framework.n, framework.graph.m
    if n == 0:
        return _empty(0, 0, framework)
    z0 = framework.points[0][2]
    if is_zero(z0):
        raise PreconditionError("R^ver 需要 z₀ ≠ 0")
    matrix = _empty(m + 2 * n - 1, 3 * n, framework)
    _fill_edge_rows(matrix, framework)
    for i in range(1, n):
        row = m + i - 1
        matrix[row, 2] = -framework.points[i][2]
        matrix[row, 3 * i + 2] = z0
    for i, (x, y, _) in enumerate(framework.points):
        matrix[m + n - 1 + i, 3 * i] = x
        matrix[m + n - 1 + i, 3 * i + 1] = y
    return matrix


def _is_float(matrix: np.ndarray) -> bool:
    return matrix.dtype != object


def _echelon_rank(rows: List[list], divide) -> int:
    """
    Bareiss 无分数消元求秩；divide 对整数是精确整除，对域元素是域除法。
    每一步所有后续行都要更新，保证整除精确。
    """
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank, previous = 0, 1
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        head = rows[rank]
        p = head[col]
        for i in range(rank + 1, n_rows):
            row = rows[i]
            a = row[col]
            for j in range(col + 1, n_cols):
                row[j] = divide(row[j] * p - a * head[j], previous)
            row[col] = 0
        previous = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def _integer_rows(matrix: np.ndarray) -> List[List[int]]:
    rows = []
    for row in matrix:
        values = [Fraction(v) for v in row]
        scale = math.lcm(*(v.denominator for v in values)) if values else 1
        rows.append([int(v * scale) for v in values])
    return rows


def matrix_rank(matrix: np.ndarray, tolerance: float = None) -> int:
    """精确矩阵用 Bareiss 消元；浮点矩阵数奇异值 > τ·σ_max 的个数"""
    if matrix.size == 0:
        return 0
    if _is_float(matrix):
        tolerance = Config.TOLERANCE if tolerance is None else tolerance
        singular = np.linalg.svd(matrix.astype(float), compute_uv=False)
        if singular[0] == 0:
            return 0
        return int(np.sum(singular > tolerance * singular[0]))
    kind, _ = field_of(matrix.flat)
    if kind == "f64":
        return matrix_rank(matrix.astype(float), tolerance)
    if kind == "rational":
        return _echelon_rank(_integer_rows(matrix), lambda a, b: a // b)
    return _echelon_rank([list(row) for row in matrix], lambda a, b: a / b)


def _rref(rows: List[list]) -> Tuple[List[list], List[int]]:
    """精确 Gauss-Jordan 约化行阶梯形"""
    pivots = []
    rank = 0
    n_rows = len(rows)
    n_cols = len(rows[0]) if rows else 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, n_rows) if rows[i][col]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        p = rows[rank][col]
        rows[rank] = [v / p for v in rows[rank]]
        for i in range(n_rows):
            if i != rank and rows[i][col]:
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == n_rows:
            break
    return rows, pivots


def nullspace(matrix: np.ndarray) -> List[list]:
    """右零空间的一组基（精确）"""
    n_cols = matrix.shape[1]
    kind, d = field_of(matrix.flat)
    rows = [[coerce(v, kind, d) for v in row] for row in matrix]
    reduced, pivots = _rref(rows)
    zero, one = coerce(0, kind, d), coerce(1, kind, d)
    basis = []
    for free in (c for c in range(n_cols) if c not in pivots):
        vector = [zero] * n_cols
        vector[free] = one
        for r, p in enumerate(pivots):
            vector[p] = -reduced[r][free]
        basis.append(vector)
    return basis


def cokernel(matrix: np.ndarray, tolerance: float = None) -> List[list]:
    """
    左零空间的一组基，维数 = 行数 − 秩。
    精确矩阵的基向量逐个核验 vᵀM = 0；浮点矩阵取 SVD 中对应小奇异值的左奇异向量。
    """
    n_rows = matrix.shape[0]
    if n_rows == 0:
        return []
    if _is_float(matrix):
        tolerance = Config.TOLERANCE if tolerance is None else tolerance
        u, singular, _ = np.linalg.svd(matrix.astype(float))
        rank = matrix_rank(matrix, tolerance)
        return [list(u[:, k]) for k in range(rank, n_rows)]
    if matrix.shape[1] == 0:
        kind, d = field_of(matrix.flat)
        return [[coerce(int(i == k), kind, d) for i in range(n_rows)] for k in range(n_rows)]
    basis = nullspace(matrix.T)
    for vector in basis:
        product = np.dot(np.array(vector, dtype=object), matrix)
        if any(product):
            raise RuntimeError("余核向量核验失败")
    return basis


def inverse_matrix(matrix: np.ndarray) -> np.ndarray:
    """精确逆矩阵（Gauss-Jordan）；奇异时报前置条件错误"""
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise PreconditionError("只有方阵可逆")
    kind, d = field_of(matrix.flat)
    rows = [[coerce(v, kind, d) for v in row] + [coerce(int(i == j), kind, d) for j in range(n)]
            for i, row in enumerate(matrix)]
    reduced, pivots = _rref(rows)
    if pivots[:n] != list(range(n)):
        raise PreconditionError("矩阵奇异，不可逆")
    result = np.empty((n, n), dtype=object)
    for i in range(n):
        result[i, :] = reduced[i][n:]
    return result


# ---------------------------------------------------------------------------
# 应力
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Stress:
    """ω 按图的边序，λ 按顶点序"""

    omega: Tuple[Scalar, ...]
    lam: Tuple[Scalar, ...]

    @property
    def vector(self) -> Tuple[Scalar, ...]:
        return self.omega + self.lam

    def is_zero(self, tolerance: float = 0.0) -> bool:
        return all(is_zero(v, tolerance) for v in self.vector)

    def scaled(self, factor: Scalar) -> "Stress":
        return Stress(tuple(w * factor for w in self.omega), tuple(l * factor for l in self.lam))

    def normalized(self, tolerance: float = 0.0) -> "Stress":
        """把边序中第一个非零 ω 缩放为 1"""
        for w in self.omega:
            if not is_zero(w, tolerance):
                return self.scaled(1 / w)
        return self

    def proportional_to(self, other: "Stress", tolerance: float = 0.0) -> bool:
        """射影比较：在第一个非零分量处取比例 c，再逐项比较"""
        mine, theirs = self.vector, other.vector
        if len(mine) != len(theirs):
            return False
        k = next((i for i, v in enumerate(theirs) if not is_zero(v, tolerance)), None)
        if k is None:
            return all(is_zero(v, tolerance) for v in mine)
        if is_zero(mine[k], tolerance):
            return False
        c = mine[k] / theirs[k]
        return all(is_zero(a - c * b, tolerance) for a, b in zip(mine, theirs))

    def to_dict(self, graph: Graph) -> dict:
        return {
            "edges": [list(e) for e in graph.edges],
            "omega": [format_scalar(w) for w in self.omega],
            "lambda": [format_scalar(l) for l in self.lam],
        }

    @classmethod
    def from_vector(cls, vector: Sequence[Scalar], m: int) -> "Stress":
        return cls(tuple(vector[:m]), tuple(vector[m:]))


@dataclass(frozen=True)
class Residual:
    """平衡方程在每个顶点处的残差向量"""

    vectors: Tuple[Point, ...]
    max_abs: float
    valid: bool


def verify_stress(framework: Framework, stress: Stress, tolerance: float = None) -> Residual:
    """Σⱼ ωᵢⱼ(pᵢ − pⱼ) + λᵢ(xᵢ, yᵢ, 0) 在每个顶点处的值"""
    graph = framework.graph
    if len(stress.omega) != graph.m or len(stress.lam) != graph.n:
        raise PreconditionError("应力的分量个数与图不一致")
    zero = framework.zero()
    residual = [[zero, zero, zero] for _ in range(graph.n)]
    for w, (i, j) in zip(stress.omega, graph.edges):
        for k in range(3):
            delta = framework.points[i][k] - framework.points[j][k]
            residual[i][k] = residual[i][k] + w * delta
            residual[j][k] = residual[j][k] - w * delta
    for i, l in enumerate(stress.lam):
        x, y, _ = framework.points[i]
        residual[i][0] = residual[i][0] + l * x
        residual[i][1] = residual[i][1] + l * y
    vectors = tuple(tuple(r) for r in residual)
    max_abs = max((abs(float(v)) for r in vectors for v in r), default=0.0)
    if framework.is_exact:
        valid = all(not v for r in vectors for v in r)
    else:
        tolerance = framework.tolerance if tolerance is None else tolerance
        scale = max((abs(float(v)) for v in stress.vector), default=1.0) or 1.0
        valid = max_abs <= tolerance * scale * max(1.0, framework.n)
    return Residual(vectors, max_abs, valid)


def equilibrium_stress(framework: Framework, tolerance: float = None) -> Stress:
    """余核为 1 维时的唯一平衡应力（归一化）；否则报维数错误"""
    matrix = rigidity_matrix(framework)
    basis = cokernel(matrix, tolerance)
    if len(basis) != 1:
        raise CokernelDimensionError(len(basis))
    tol = 0.0 if framework.is_exact else (Config.TOLERANCE if tolerance is None else tolerance)
    stress = Stress.from_vector(basis[0], framework.graph.m).normalized(tol)
    if framework.is_exact and not verify_stress(framework, stress).valid:
        raise RuntimeError("余核应力的平衡残差不为零")
    return stress


@dataclass(frozen=True)
class StressMatrix:
    """Ω（对称、行和为零）与 Λ = diag(λ)；Ω_cyl = diag(Ω+Λ, Ω+Λ, Ω)"""

    omega: np.ndarray
    lam: np.ndarray

    @property
    def n(self) -> int:
        return self.omega.shape[0]

    def full(self) -> np.ndarray:
        n = self.n
        block = self.omega + self.lam
        if self.omega.dtype == object:
            zero = self.omega.flat[0] * 0 if self.omega.size else 0
            result = np.full((3 * n, 3 * n), zero, dtype=object)
        else:
            result = np.zeros((3 * n, 3 * n))
        result[:n, :n] = block
        result[n:2 * n, n:2 * n] = block
        result[2 * n:, 2 * n:] = self.omega
        return result


def stress_matrix(framework: Framework, stress: Stress) -> StressMatrix:
    n = framework.n
    if framework.is_exact:
        zero = framework.zero()
        omega = np.full((n, n), zero, dtype=object)
        lam = np.full((n, n), zero, dtype=object)
    else:
        omega = np.zeros((n, n))
        lam = np.zeros((n, n))
    for w, (i, j) in zip(stress.omega, framework.graph.edges):
        omega[i, j] = omega[i, j] - w
        omega[j, i] = omega[j, i] - w
        omega[i, i] = omega[i, i] + w
        omega[j, j] = omega[j, j] + w
    for i, l in enumerate(stress.lam):
        lam[i, i] = l
    return StressMatrix(omega, lam)


def stress_matrix_rank(stress: Stress, framework: Framework,
                       tolerance: float = None) -> Tuple[int, StressMatrix]:
    """rank Ω_cyl = 2·rank(Ω+Λ) + rank Ω"""
    matrix = stress_matrix(framework, stress)
    rank = 2 * matrix_rank(matrix.omega + matrix.lam, tolerance) + matrix_rank(matrix.omega, tolerance)
    return rank, matrix


def stress_matrix_facts(matrix: StressMatrix, framework: Framework, tolerance: float = None) -> Dict[str, bool]:
    """(Ω+Λ)x = 0、(Ω+Λ)y = 0、Ωz = 0、Ω1 = 0 以及 Ω 的对称性"""
    tol = 0.0 if framework.is_exact else (Config.TOLERANCE if tolerance is None else tolerance) * 1e3
    coords = list(zip(*framework.points)) if framework.n else [(), (), ()]
    block = matrix.omega + matrix.lam
    one = [1] * framework.n

    def annihilates(m, vector) -> bool:
        product = np.dot(m, np.array(vector, dtype=m.dtype))
        return all(is_zero(v, tol) for v in product)

    return {
        "symmetric": all(is_zero(a - b, tol) for a, b in zip(matrix.omega.flat, matrix.omega.T.flat)),
        "x_in_kernel": annihilates(block, coords[0]),
        "y_in_kernel": annihilates(block, coords[1]),
        "z_in_kernel": annihilates(matrix.omega, coords[2]),
        "ones_in_kernel": annihilates(matrix.omega, one),
    }


def is_max_rank(rank: int, n: int) -> bool:
    return rank == 3 * n - 6


# ---------------------------------------------------------------------------
# 测量映射与等价
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Measurement:
    lengths: Tuple[Scalar, ...]  # f_G：边长平方
    ratios: Optional[Tuple[Scalar, ...]]  # h_G：z_i / z_0
    radii: Tuple[Scalar, ...]  # θ_G：x² + y²


def squared_distance(p: Point, q: Point) -> Scalar:
    return sum(((a - b) * (a - b) for a, b in zip(p, q)), 0 * p[0])


def measurement(framework: Framework, with_ratios: bool = True) -> Measurement:
    points = framework.points
    lengths = tuple(squared_distance(points[i], points[j]) for i, j in framework.graph.edges)
    theta = tuple(x * x + y * y for x, y, _ in points)
    ratios = None
    if with_ratios and framework.n:
        z0 = points[0][2]
        if is_zero(z0):
            raise PreconditionError("h_G 需要 z₀ ≠ 0")
        ratios = tuple(p[2] / z0 for p in points[1:])
    return Measurement(lengths, ratios, theta)


def _same(a: Sequence[Scalar], b: Sequence[Scalar], tolerance: float) -> bool:
    return len(a) == len(b) and all(is_zero(x - y, tolerance) for x, y in zip(a, b))


def _tolerance(f1: Framework, f2: Framework) -> float:
    return 0.0 if f1.is_exact and f2.is_exact else max(f1.tolerance, f2.tolerance)


def equivalent(f1: Framework, f2: Framework) -> bool:
    """同一图上边长全部相等"""
    if f1.graph != f2.graph:
        return False
    return _same(measurement(f1, False).lengths, measurement(f2, False).lengths, _tolerance(f1, f2))


def vr_equivalent(f1: Framework, f2: Framework) -> bool:
    if f1.graph != f2.graph:
        return False
    m1, m2 = measurement(f1), measurement(f2)
    tol = _tolerance(f1, f2)
    return _same(m1.lengths, m2.lengths, tol) and _same(m1.ratios, m2.ratios, tol) and _same(m1.radii, m2.radii, tol)


def congruent(f1: Framework, f2: Framework) -> bool:
    """所有点对距离相等"""
    if f1.n != f2.n:
        return False
    tol = _tolerance(f1, f2)
    for i in range(f1.n):
        for j in range(i + 1, f1.n):
            if not is_zero(squared_distance(f1.points[i], f1.points[j]) -
                           squared_distance(f2.points[i], f2.points[j]), tol):
                return False
    return True


# ---------------------------------------------------------------------------
# 重合框架与 Schur 补
# ---------------------------------------------------------------------------

def coincident_framework(framework: Framework, u: int, v: int) -> Framework:
    """令 p(v) = p(u)（半径随之取 u 的半径）；边 uv 的行变为零行但保留"""
    framework.graph.check_vertex(u)
    framework.graph.check_vertex(v)
    if u == v:
        raise PreconditionError("重合框架需要两个不同的顶点")
    points = list(framework.points)
    radii = list(framework.radii)
    points[v] = points[u]
    radii[v] = radii[u]
    return framework.with_points(points, radii)


def coincident_rank(graph: Graph, u: int, v: int, seed=None, bits: int = None) -> int:
    base = random_framework(graph, seed, bits=bits)
    return matrix_rank(rigidity_matrix(coincident_framework(base, u, v)))


@dataclass(frozen=True)
class SchurReport:
    rank_m: int
    rank_a: int
    rank_f: int
    holds: bool


def schur_rank_identity(matrix: np.ndarray, split: Union[int, Tuple[int, int]]) -> SchurReport:
    """
    M = [[A, B], [C, D]]，A 为 k × k 可逆块；F = D − C·A⁻¹·B，
    检查 rank M = rank A + rank F。
    split 可以是 k，也可以是分块大小 (k, n − k)，此时两者之和须等于 M 的阶。
    """
    if isinstance(split, tuple):
        k, rest = split
        if k + rest != matrix.shape[0] or matrix.shape[0] != matrix.shape[1]:
            raise PreconditionError(f"分块大小 {split} 与矩阵形状 {matrix.shape} 不符")
        split = k
    if not 0 < split <= min(matrix.shape):
        raise PreconditionError(f"分块位置 {split} 不合法")
    a = matrix[:split, :split]
    b = matrix[:split, split:]
    c = matrix[split:, :split]
    d = matrix[split:, split:]
    a_inv = inverse_matrix(a)
    f = d - np.dot(np.dot(c, a_inv), b) if d.size else d
    rank_m, rank_a, rank_f = matrix_rank(matrix), matrix_rank(a), matrix_rank(f)
    return SchurReport(rank_m, rank_a, rank_f, rank_m == rank_a + rank_f)


def as_exact_matrix(rows: Sequence[Sequence]) -> np.ndarray:
    """把嵌套列表转为 Fraction/QuadraticNumber 的 object 矩阵"""
    result = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            result[i, j] = v if isinstance(v, (Fraction, QuadraticNumber)) else Fraction(v)
    return result
