"""
三个基图（K5-e、H1、H2）的已发表框架与最大秩平衡应力
数据在 ℚ(√2) 中精确内嵌（"a+b*s" 表示 a + b√2），是黄金测试的唯一数据源。
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Dict, List, Tuple

from config import Config
from constructions import base_graph
from errors import CokernelDimensionError
from numeric import (
    Framework,
    Stress,
    equilibrium_stress,
    matrix_rank,
    rigidity_matrix,
    stress_matrix_rank,
    to_float_framework,
    verify_stress,
)
from scalars import format_scalar, is_zero, parse_scalar

logger = logging.getLogger(__name__)

D = 2


@dataclass(frozen=True)
class AppendixCase:
    """顶点按 v₁..vₙ 排列；omega 按图的边序，lam 按顶点序"""

    name: str
    points: Tuple[Tuple[str, str, str], ...]
    omega: Tuple[str, ...]
    lam: Tuple[str, ...]
    rigidity_rank: int
    stress_rank: int

    def framework(self) -> Framework:
        points = tuple(tuple(parse_scalar(c, D) for c in p) for p in self.points)
        return Framework(base_graph(self.name), points, scalar="quadratic", d=D)

    def stress(self) -> Stress:
        return Stress(
            tuple(parse_scalar(w, D) for w in self.omega),
            tuple(parse_scalar(l, D) for l in self.lam),
        )

    def corrupted(self) -> "AppendixCase":
        """第一个 ω 加 1，用于检验核验流程能发现错误数据"""
        first = parse_scalar(self.omega[0], D) + 1
        return replace(self, omega=(format_scalar(first),) + self.omega[1:])


CASES = (
    AppendixCase(
        "K5-e",
        points=(
            ("0", "1", "0"),
            ("1", "0", "-1"),
            ("1/2*s", "-1/2*s", "1/3"),
            ("-1", "0", "-1/3"),
            ("1/2*s", "1/2*s", "1/2"),
        ),
        omega=("239", "-216-654*s", "201+270*s", "756+616*s", "108+327*s",
               "-1635/2-852*s", "108+88*s", "-108-327*s", "-648-528*s"),
        lam=("290+254*s", "1595+1397*s", "1524+870*s", "3045+2667*s", "1016+580*s"),
        rigidity_rank=13,
        stress_rank=9,
    ),
    AppendixCase(
        "H1",
        points=(
            ("0", "1", "0"),
            ("-1", "0", "-1/3"),
            ("1/2*s", "-1/2*s", "1/3"),
            ("1", "0", "-1"),
            ("0", "-1", "2/3"),
            ("1/2*s", "1/2*s", "1/2"),
        ),
        # ω₁₆ 由 v₁ 处 x 方向的平衡方程确定
        omega=("1", "2*s", "-361/441+10/49*s", "-62/147-82/147*s", "-20/49-80/441*s",
               "s", "1/2+s", "-s", "32/147+12/49*s", "4/49+16/441*s", "-24/49-32/147*s"),
        lam=("-10/9-10/9*s", "-3-3*s", "-4-2*s", "-13/9-13/9*s", "4/3+4/3*s", "8/9+4/9*s"),
        rigidity_rank=16,
        stress_rank=12,
    ),
    AppendixCase(
        "H2",
        points=(
            ("0", "1", "0"),
            ("-1", "0", "-1/3"),
            ("1/2*s", "-1/2*s", "1/3"),
            ("1", "0", "-1"),
            ("0", "-1", "2/3"),
            ("1/2*s", "1/2*s", "1/2"),
            ("-1/2*s", "-1/2*s", "-1/4"),
        ),
        omega=("1", "2*s", "-13/21+4/7*s", "8/7+8/21*s", "s", "1/2+s", "-s",
               "-2652/25165-338/25165*s", "-4652/25165-2764/25165*s", "24784/25165+28424/75495*s",
               "4652/25165+2764/25165*s", "568/3595+16/3595*s", "18608/45297+11056/45297*s"),
        # λ₄ 由 v₄ 处 x 方向的平衡方程确定
        lam=("-82/21-74/21*s", "-3-3*s", "-4-2*s", "-269/105-253/105*s", "-12/35-4/35*s",
             "-328/315-212/315*s", "-1216/315-704/315*s"),
        rigidity_rank=19,
        stress_rank=15,
    ),
)


def find_case(name: str) -> AppendixCase:
    for case in CASES:
        if case.name == name:
            return case
    raise KeyError(name)


@dataclass(frozen=True)
class CaseReport:
    name: str
    checks: Dict[str, bool]
    values: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> List[str]:
        return [name for name, ok in self.checks.items() if not ok]

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checks": self.checks, "values": self.values}


def verify_case(case: AppendixCase, scalar: str = "quadratic", tolerance: float = None) -> CaseReport:
    """
    重建框架与应力并核验：rank R_cyl、平衡残差为零、rank Ω_cyl、
    应力处处非零，以及余核应力与已发表应力射影一致。
    """
    framework = case.framework()
    stress = case.stress()
    tol = 0.0
    if scalar == "f64":
        tolerance = Config.TOLERANCE if tolerance is None else tolerance
        framework = to_float_framework(framework, tolerance)
        stress = Stress(tuple(float(w) for w in stress.omega), tuple(float(l) for l in stress.lam))
        tol = tolerance * 1e3

    rank = matrix_rank(rigidity_matrix(framework), tolerance)
    residual = verify_stress(framework, stress, tolerance)
    omega_rank, _ = stress_matrix_rank(stress, framework, tolerance)
    try:
        computed = equilibrium_stress(framework, tolerance)
        projective = computed.proportional_to(stress, tol)
    except CokernelDimensionError as e:
        logger.warning(f"{case.name}: 余核维数 {e.dimension}")
        projective = False

    checks = {
        "rigidity_rank": rank == case.rigidity_rank,
        "residual": residual.valid,
        "stress_rank": omega_rank == case.stress_rank,
        "nowhere_zero": not any(is_zero(v, tol) for v in stress.vector),
        "projective": projective,
    }
    values = {
        "rigidity_rank": rank,
        "expected_rigidity_rank": case.rigidity_rank,
        "stress_rank": omega_rank,
        "expected_stress_rank": case.stress_rank,
        "max_residual": residual.max_abs,
    }
    report = CaseReport(case.name, checks, values)
    if not report.passed:
        logger.info(f"{case.name} 未通过: {', '.join(report.failures)}")
    return report


def verify_appendix(scalar: str = "quadratic", tolerance: float = None, corrupt: bool = False) -> List[CaseReport]:
    cases = [c.corrupted() for c in CASES] if corrupt else list(CASES)
    return [verify_case(case, scalar, tolerance) for case in cases]
