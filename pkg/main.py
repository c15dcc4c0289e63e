"""
圆柱面刚性分析系统主程序
子命令：rigid、global、circuit、reduce、construct、stress、vfree、vr、verify-appendix、cross-validate
退出码：0 = 性质成立，1 = 性质不成立，2 = 输入或用法错误
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, TextIO, Tuple

import pandas as pd
from tqdm import tqdm

from appendix import CASES, find_case, verify_appendix
from config import Config
from constructions import BASE_NAMES, base_graph, circuit_verdict, random_circuit, reduce_to_base
from decide import (
    DISAGREE,
    cross_validate,
    generate_corpus,
    globally_rigid,
    numeric_rigid,
    numeric_vfree,
    numeric_vr_minimal,
    numeric_vr_rigid,
    rigid,
    stress_certificate,
    vfree_rigid,
    vr_deciders,
)
from errors import CokernelDimensionError, GraphFormatError, ReductionError, RigidityError
from graph import Graph, format_edge_list, load_graph
from numeric import (
    Framework,
    Stress,
    cokernel,
    is_max_rank,
    matrix_rank,
    random_framework,
    rigidity_matrix,
    stress_matrix_rank,
    to_float_framework,
)
from sparsity import ear_decomposition, is_circuit

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
DEFAULT_CSV = str(Path(Config.OUTPUT_DIR) / "cross_validation.csv")


@dataclass(frozen=True)
class RunConfig:
    """命令行参数覆盖 Config 默认值后的运行配置"""

    inputs: Tuple[str, ...] = ()
    scalar: str = Config.DEFAULT_SCALAR
    seed: int = Config.DEFAULT_SEED
    tolerance: float = Config.TOLERANCE
    cap: int = Config.CIRCUIT_CAP
    bits: int = Config.RANDOM_BITS
    output: str = "text"

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        inputs = tuple(p for p in [getattr(args, "input", None)] if p)
        return cls(
            inputs=inputs,
            scalar=args.scalar,
            seed=args.seed,
            tolerance=args.tolerance,
            cap=args.cap,
            bits=args.bits,
            output="json" if args.json else "text",
        )

    @property
    def json(self) -> bool:
        return self.output == "json"


def read_graph(source: str) -> Graph:
    """图文件路径，或内置基图名（K5-e、H1、H2、K4）"""
    if source in BASE_NAMES and not Path(source).exists():
        return base_graph(source)
    return load_graph(source)


def read_framework(source: str) -> Framework:
    """框架 JSON 文件，或附录基图名（使用内嵌的精确框架）"""
    if source in [c.name for c in CASES] and not Path(source).exists():
        return find_case(source).framework()
    path = Path(source)
    if not path.exists():
        raise GraphFormatError("文件不存在", source=source)
    text = path.read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(e.msg, line=e.lineno, column=e.colno, source=source)
    if not isinstance(data, dict):
        raise GraphFormatError("框架 JSON 应为对象", line=1, column=1, source=source)
    if "framework" in data:
        data = data["framework"]
    return Framework.from_dict(data, source=source)


class RigidityToolkit:
    """圆柱面刚性分析命令行工具"""

    def __init__(self, run: RunConfig, out: TextIO = None):
        self.run = run
        self.out = out or sys.stdout

    # ------------------------------------------------------------------
    # 输出
    # ------------------------------------------------------------------

    def emit(self, payload: dict, lines: Sequence[str]):
        """JSON 模式只输出 JSON（带格式版本号），文本模式输出给人看的状态行"""
        if self.run.json:
            document = {"format": Config.FORMAT_VERSION}
            document.update(payload)
            self.out.write(json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
        else:
            for line in lines:
                self.out.write(line + "\n")

    @staticmethod
    def mark(ok: bool) -> str:
        return "✅" if ok else "❌"

    def framework_for(self, graph: Graph) -> Framework:
        return random_framework(graph, self.run.seed, bits=self.run.bits, scalar=self.run.scalar)

    # ------------------------------------------------------------------
    # 判定子命令
    # ------------------------------------------------------------------

    def cmd_rigid(self, source: str, numeric: bool = False) -> int:
        graph = read_graph(source)
        verdict = rigid(graph)
        payload = {"command": "rigid", "graph": graph.to_dict(), "verdict": verdict.to_dict()}
        lines = [f"{self.mark(verdict.answer)} 图（{graph.n} 个顶点，{graph.m} 条边）"
                 f"{'是' if verdict.answer else '不是'}圆柱面上的刚性图"]
        cert = verdict.certificate
        if cert["kind"] == "rank":
            lines.append(f"   M*₂,₂ 秩 = {cert['rank']}，需要 {cert['required']}")
        if numeric:
            ok = numeric_rigid(self.framework_for(graph), self.run.tolerance)
            payload["numeric"] = ok
            lines.append(f"   数值对照：rank R_cyl {'=' if ok else '≠'} 3n−2")
        self.emit(payload, lines)
        return EXIT_OK if verdict.answer else EXIT_FAIL

    def cmd_global(self, source: str, stress: bool = False, ears: bool = False) -> int:
        graph = read_graph(source)
        verdict = globally_rigid(graph)
        payload = {"command": "global", "graph": graph.to_dict(), "verdict": verdict.to_dict()}
        lines = [f"{self.mark(verdict.answer)} 图{'是' if verdict.answer else '不是'}圆柱面上的全局刚性图"]
        cert = verdict.certificate
        if cert["kind"] == "cut-vertex":
            lines.append(f"   割点: {cert['vertex']}")
        elif cert["kind"] == "disconnected":
            lines.append(f"   不连通，分支: {cert['components']}")
        elif cert["kind"] == "non-redundant-edge":
            lines.append(f"   删去边 {tuple(cert['edge'])} 后不再刚性")
        if ears and verdict.answer:
            decomposition = ear_decomposition(graph, cap=self.run.cap)
            payload["ears"] = [ear.to_dict() for ear in decomposition]
            lines.append(f"   耳分解: {len(decomposition)} 个回路")
        if stress:
            certificate = stress_certificate(graph, self.run.seed, bits=self.run.bits)
            payload["stress_certificate"] = certificate.to_dict()
            if certificate.answer:
                lines.append(f"   找到最大秩平衡应力（rank Ω_cyl = {certificate.certificate['rank']}）")
            else:
                lines.append("   未找到最大秩平衡应力（单侧检验，不构成反例）")
        self.emit(payload, lines)
        return EXIT_OK if verdict.answer else EXIT_FAIL

    def cmd_vfree(self, source: str, vertex: int, numeric: bool = False) -> int:
        graph = read_graph(source)
        verdict = vfree_rigid(graph, vertex)
        payload = {"command": "vfree", "graph": graph.to_dict(), "vertex": vertex, "verdict": verdict.to_dict()}
        lines = [f"{self.mark(verdict.answer)} 图{'是' if verdict.answer else '不是'} {vertex}-自由刚性的"]
        if numeric:
            ok = numeric_vfree(self.framework_for(graph), vertex, self.run.tolerance)
            payload["numeric"] = ok
            lines.append(f"   数值对照：rank R_v {'=' if ok else '≠'} 3n−2")
        self.emit(payload, lines)
        return EXIT_OK if verdict.answer else EXIT_FAIL

    def cmd_vr(self, source: str, prop: str = "rigid", numeric: bool = False) -> int:
        graph = read_graph(source)
        verdicts = vr_deciders(graph)
        chosen = {"minimal": verdicts.minimally_rigid, "rigid": verdicts.rigid,
                  "global": verdicts.globally_rigid}[prop]
        payload = {"command": "vr", "graph": graph.to_dict(), "property": prop, "verdicts": verdicts.to_dict()}
        lines = [
            f"{self.mark(verdicts.minimally_rigid.answer)} VR 极小刚性",
            f"{self.mark(verdicts.rigid.answer)} VR 刚性",
            f"{self.mark(verdicts.globally_rigid.answer)} VR 全局刚性",
        ]
        if numeric:
            framework = self.framework_for(graph)
            payload["numeric"] = {
                "minimal": numeric_vr_minimal(framework, self.run.tolerance),
                "rigid": numeric_vr_rigid(framework, self.run.tolerance),
            }
            lines.append(f"   数值对照：{payload['numeric']}")
        self.emit(payload, lines)
        return EXIT_OK if chosen.answer else EXIT_FAIL

    # ------------------------------------------------------------------
    # 回路与构造
    # ------------------------------------------------------------------

    def cmd_circuit(self, source: str) -> int:
        graph = read_graph(source)
        check = is_circuit(graph)
        payload = {
            "command": "circuit",
            "graph": graph.to_dict(),
            "answer": check.answer,
            "reason": check.reason,
            "spanning": check.spanning_circuit,
            "witness": check.witness.to_dict() if check.witness else None,
        }
        lines = [f"{self.mark(check.answer)} 图{'是' if check.answer else '不是'} M*₂,₂-回路"]
        if check.reason:
            lines.append(f"   原因: {check.reason}")
        self.emit(payload, lines)
        return EXIT_OK if check.answer else EXIT_FAIL

    def cmd_reduce(self, source: str) -> int:
        graph = read_graph(source)
        if not circuit_verdict(graph):
            self.emit({"command": "reduce", "graph": graph.to_dict(), "error": "not-a-circuit"},
                      ["❌ 输入不是 M*₂,₂-回路，无法约化到基图"])
            return EXIT_FAIL
        try:
            trace = reduce_to_base(graph)
        except ReductionError as e:
            stuck = e.graph.to_dict() if e.graph is not None else None
            self.emit({"command": "reduce", "graph": graph.to_dict(), "error": str(e), "stuck": stuck},
                      [f"❌ 约化失败: {e}", format_edge_list(e.graph) if e.graph is not None else ""])
            return EXIT_FAIL
        lines = [f"✅ 约化到 {trace.base}，共 {len(trace.steps)} 步（从基图出发的构造轨迹）"]
        lines += [f"   {i + 1}. {step.kind} {step.params}" for i, step in enumerate(trace.steps)]
        self.emit({"command": "reduce", "graph": graph.to_dict(), "trace": trace.to_dict()}, lines)
        return EXIT_OK

    def cmd_construct(self, n: int) -> int:
        graph, trace = random_circuit(n, self.run.seed)
        lines = [f"✅ 随机回路：{graph.n} 个顶点，{graph.m} 条边，基图 {trace.base}，{len(trace.steps)} 步",
                 format_edge_list(graph).rstrip()]
        self.emit({"command": "construct", "graph": graph.to_dict(), "trace": trace.to_dict()}, lines)
        return EXIT_OK

    # ------------------------------------------------------------------
    # 数值引擎
    # ------------------------------------------------------------------

    def cmd_stress(self, source: str, any_stress: bool = False) -> int:
        framework = read_framework(source)
        if self.run.scalar == "f64":
            framework = to_float_framework(framework, self.run.tolerance)
        tol = 0.0 if framework.is_exact else self.run.tolerance
        graph = framework.graph
        matrix = rigidity_matrix(framework)
        rank = matrix_rank(matrix, self.run.tolerance)
        basis = cokernel(matrix, self.run.tolerance)
        if len(basis) != 1 and not (any_stress and basis):
            error = CokernelDimensionError(len(basis))
            self.emit({"command": "stress", "rigidity_rank": rank, "cokernel_dimension": len(basis),
                       "error": str(error)},
                      [f"❌ {error}（可用 --any 取余核的第一个基向量）", f"   rank R_cyl = {rank}"])
            return EXIT_FAIL
        stress = Stress.from_vector(basis[0], graph.m).normalized(tol)
        omega_rank, _ = stress_matrix_rank(stress, framework, self.run.tolerance)
        max_rank = is_max_rank(omega_rank, graph.n)
        payload = {
            "command": "stress",
            "graph": graph.to_dict(),
            "rigidity_rank": rank,
            "cokernel_dimension": len(basis),
            "stress": stress.to_dict(graph),
            "stress_rank": omega_rank,
            "max_rank": max_rank,
        }
        lines = [
            f"rank R_cyl = {rank}，余核维数 = {len(basis)}",
            f"rank Ω_cyl = {omega_rank}（最大秩 3n−6 = {3 * graph.n - 6}）{self.mark(max_rank)}",
            "ω = " + ", ".join(payload["stress"]["omega"]),
            "λ = " + ", ".join(payload["stress"]["lambda"]),
        ]
        self.emit(payload, lines)
        return EXIT_OK

    def cmd_verify_appendix(self, corrupt: bool = False) -> int:
        scalar = "f64" if self.run.scalar == "f64" else "quadratic"
        reports = verify_appendix(scalar, self.run.tolerance, corrupt=corrupt)
        lines = []
        for report in reports:
            values = report.values
            line = (f"{self.mark(report.passed)} {report.name}: rank R_cyl = {values['rigidity_rank']}"
                    f"（期望 {values['expected_rigidity_rank']}），rank Ω_cyl = {values['stress_rank']}"
                    f"（期望 {values['expected_stress_rank']}）")
            lines.append(line)
            if not report.passed:
                lines.append(f"   未通过: {', '.join(report.failures)}")
        passed = sum(r.passed for r in reports)
        lines.append(f"{passed}/{len(reports)} 通过")
        self.emit({"command": "verify-appendix", "scalar": scalar, "cases": [r.to_dict() for r in reports]}, lines)
        return EXIT_OK if passed == len(reports) else EXIT_FAIL

    # ------------------------------------------------------------------
    # 语料交叉验证
    # ------------------------------------------------------------------

    def cmd_cross_validate(self, count: int, n_max: int, csv_file: Optional[str] = None) -> int:
        corpus = generate_corpus(count, n_max, self.run.seed)
        rows = []
        disagreements = []
        for index, graph in enumerate(tqdm(corpus, desc="交叉验证", file=sys.stderr, disable=not corpus)):
            report = cross_validate(graph, [self.run.seed, index], bits=self.run.bits,
                                    scalar=self.run.scalar, tolerance=self.run.tolerance)
            for check in report.checks:
                rows.append({"graph": index, "n": graph.n, "m": graph.m, "check": check.name,
                             "status": check.status, "resamples": check.resamples})
                if check.status == DISAGREE:
                    disagreements.append({"graph": graph.to_dict(), "check": check.to_dict()})

        summary = {}
        table = pd.DataFrame(rows, columns=["graph", "n", "m", "check", "status", "resamples"])
        if not table.empty:
            counts = table.groupby(["check", "status"]).size().unstack(fill_value=0)
            for name, row in counts.iterrows():
                summary[name] = {status: int(value) for status, value in row.items()}
        if csv_file:
            path = Path(csv_file)
            if csv_file == DEFAULT_CSV:
                Config.create_dirs()
            path.parent.mkdir(parents=True, exist_ok=True)
            table.to_csv(path, index=False, encoding="utf-8-sig")
            logger.info(f"明细已保存到: {path}")

        ok = not disagreements
        lines = [f"语料：{len(corpus)} 个图，n ≤ {n_max}，种子 {self.run.seed}"]
        if summary:
            lines.append(pd.DataFrame(summary).T.fillna(0).astype(int).to_string())
        lines.append(f"{self.mark(ok)} {'全部一致' if ok else f'{len(disagreements)} 项不一致'}")
        self.emit({
            "command": "cross-validate",
            "count": len(corpus),
            "n_max": n_max,
            "seed": self.run.seed,
            "summary": summary,
            "disagreements": disagreements,
        }, lines)
        return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="输出 JSON")
    common.add_argument("--scalar", choices=Config.SCALAR_MODES, default=Config.DEFAULT_SCALAR, help="标量类型")
    common.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="随机种子")
    common.add_argument("--tolerance", type=float, default=Config.TOLERANCE, help="浮点秩的相对容差")
    common.add_argument("--cap", type=int, default=Config.CIRCUIT_CAP, help="回路枚举的边数上限")
    common.add_argument("--bits", type=int, default=Config.RANDOM_BITS, help="随机有理参数的位宽")
    common.add_argument("--log-level", default=Config.LOG_LEVEL, help="日志级别")

    parser = argparse.ArgumentParser(description="圆柱面刚性分析系统")
    commands = parser.add_subparsers(dest="command", required=True)

    def graph_command(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("input", help="图文件（JSON 或边列表）或内置基图名")
        return sub

    sub = graph_command("rigid", "刚性判定")
    sub.add_argument("--numeric", action="store_true", help="附加随机框架上的秩检验")
    sub = graph_command("global", "全局刚性判定")
    sub.add_argument("--stress", action="store_true", help="附加最大秩应力证书搜索")
    sub.add_argument("--ears", action="store_true", help="附加 M*₂,₂ 耳分解（受 --cap 限制）")
    graph_command("circuit", "M*₂,₂-回路判定")
    graph_command("reduce", "约化到 K5-e 或 H1，输出构造轨迹")
    sub = graph_command("vfree", "v-自由刚性判定")
    sub.add_argument("--vertex", type=int, required=True, help="可离开圆柱面的顶点")
    sub.add_argument("--numeric", action="store_true", help="附加随机框架上的秩检验")
    sub = graph_command("vr", "竖直受限（VR）刚性判定")
    sub.add_argument("--property", choices=("minimal", "rigid", "global"), default="rigid",
                     help="决定退出码的性质")
    sub.add_argument("--numeric", action="store_true", help="附加随机框架上的秩检验")

    sub = commands.add_parser("construct", parents=[common], help="生成随机回路及其构造轨迹")
    sub.add_argument("--n", type=int, required=True, help="顶点数（≥ 5）")

    sub = commands.add_parser("stress", parents=[common], help="计算平衡应力与应力矩阵秩")
    sub.add_argument("input", help="框架 JSON 文件或附录基图名（K5-e、H1、H2）")
    sub.add_argument("--any", action="store_true", help="余核维数不为 1 时取第一个基向量")

    sub = commands.add_parser("verify-appendix", parents=[common], help="核验内嵌的附录框架与应力")
    sub.add_argument("--corrupt", action="store_true", help="故意篡改数据，检验核验流程")

    sub = commands.add_parser("cross-validate", parents=[common], help="语料上的组合/数值交叉验证")
    sub.add_argument("--count", type=int, default=Config.CORPUS_COUNT, help="语料中的图数")
    sub.add_argument("--n-max", type=int, default=Config.CORPUS_N_MAX, help="最大顶点数")
    sub.add_argument("--csv", nargs="?", const=DEFAULT_CSV, help="逐项明细 CSV 输出路径")
    return parser


def main(argv: List[str] = None, out: TextIO = None) -> int:
    """主函数"""
    parser = build_parser()
    args = parser.parse_args(argv)
    Config.setup_logging(args.log_level)
    toolkit = RigidityToolkit(RunConfig.from_args(args), out)

    try:
        if args.command == "rigid":
            return toolkit.cmd_rigid(args.input, args.numeric)
        if args.command == "global":
            return toolkit.cmd_global(args.input, args.stress, args.ears)
        if args.command == "circuit":
            return toolkit.cmd_circuit(args.input)
        if args.command == "reduce":
            return toolkit.cmd_reduce(args.input)
        if args.command == "vfree":
            return toolkit.cmd_vfree(args.input, args.vertex, args.numeric)
        if args.command == "vr":
            return toolkit.cmd_vr(args.input, args.property, args.numeric)
        if args.command == "construct":
            return toolkit.cmd_construct(args.n)
        if args.command == "stress":
            return toolkit.cmd_stress(args.input, args.any)
        if args.command == "verify-appendix":
            return toolkit.cmd_verify_appendix(args.corrupt)
        if args.command == "cross-validate":
            return toolkit.cmd_cross_validate(args.count, args.n_max, args.csv)
    except RigidityError as e:
        print(f"❌ 错误: {e}", file=sys.stderr)
        return EXIT_USAGE
    parser.error(f"未知的子命令: {args.command}")


if __name__ == "__main__":
    sys.exit(main())
