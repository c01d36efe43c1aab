"""
命令行入口

子命令：
- verify-local: 局部模型检查（联络、滤过、对称性、楔积核）
- slopes: 单点斜率表与失稳判定
- sweep: 参数网格扫描与度数守恒
- cohom-cert: 上同调稳定性反例证书
- lemma25: 模 p 组合数同余
- corollary: E = F_*^n L 时 ∧²E 的失稳判定

标准输出只写机器可读文档，日志写 stderr。

退出码：0 成功，1 检查失败，2 参数错误，3 I/O 错误，4 内部错误
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from loguru import logger

from src.config import get_settings, setup_logging
from src.models.report_models import ReportDocument
from src.utils.helpers import format_fraction, write_text
from src.utils.table_renderer import TableRenderer

from .data_models import BundleClass, CurveContext
from .destabilization import (
    cohom_certificate,
    composed_subbundle_class,
    corollary_check,
    expected_destabilized,
    verdict,
)
from .errors import ContractViolation, PreconditionError
from .local_verifier import LocalModelVerifier
from .modp import check_lemma25, is_prime
from .slope_calculus import (
    canonical_filtration_profile,
    frob_push,
    pushforward_tensor_profile,
    slope,
)
from .sweep import SweepBounds, boundary_points, case_counts, theorem_sweep

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ARGUMENT = 2
EXIT_IO = 3
EXIT_INTERNAL = 4

FORMATS = ("document", "rows", "summary")


class OutputWriteError(Exception):
    """写输出文件失败"""


def _require_prime(p: int, label: str = "p") -> None:
    if not is_prime(p):
        raise PreconditionError(f"{label} 必须为素数: {p}")


def cmd_verify_local(p: int, rank: int, trunc: int, seed: int, max_prime: int,
                     random_pairs: int) -> ReportDocument:
    """局部模型检查"""
    _require_prime(p)
    if not 2 <= p <= max_prime:
        raise PreconditionError(f"p 必须在 [2, {max_prime}] 内: {p}")
    if rank < 1:
        raise PreconditionError(f"秩必须 >= 1: {rank}")
    if trunc < 2:
        raise PreconditionError(f"截断阶必须 >= 2: {trunc}")
    if seed < 0:
        raise PreconditionError(f"种子必须非负: {seed}")

    verifier = LocalModelVerifier(p, rank=rank, trunc=trunc, seed=seed, random_pairs=random_pairs)
    results = verifier.run()
    return ReportDocument(
        command="verify-local",
        parameters={"p": p, "r": rank, "trunc": trunc, "seed": seed},
        results=[r.to_dict() for r in results],
        failures=[
            {"check": r.name, "message": r.message or "check failed"}
            for r in results if not r.passed
        ],
    )


def cmd_slopes(p: int, g: int, n: int, rank: int, degree: int) -> ReportDocument:
    """单点斜率表"""
    _require_prime(p)
    if g < 2:
        raise PreconditionError(f"g 必须 >= 2: {g}")
    if n < 1:
        raise PreconditionError(f"n 必须 >= 1: {n}")
    ctx = CurveContext.of(p, g)
    bundle = BundleClass(rank, degree)
    v = verdict(bundle, n, ctx)
    pushed = frob_push(bundle, n, ctx)

    failures: List[Dict[str, Any]] = []
    composition_ok = True
    try:
        composed_subbundle_class(bundle, n, ctx)
    except ContractViolation as exc:
        composition_ok = False
        failures.append({"check": "composition", "message": str(exc)})
    if not v.closed_form_ok:
        failures.append({"check": "closed_form", "message": f"{v.gap} != {v.expected_gap}"})
    if v.destabilized != expected_destabilized(rank, p, n):
        failures.append({"check": "predicate", "message": f"destabilized={v.destabilized}"})
    filtrations = [
        canonical_filtration_profile(bundle, ctx),
        pushforward_tensor_profile(bundle, ctx),
    ]
    for report in filtrations:
        if not report.conserved:
            failures.append({"check": "conservation", "message": report.name})

    row = {
        **v.to_dict(),
        "bundle": bundle.to_dict(),
        "slope_E": format_fraction(slope(bundle)),
        "pushforward": pushed.to_dict(),
        "slope_pushforward": format_fraction(slope(pushed)),
        "slope_ambient": format_fraction(slope(v.ambient)),
        "slope_sub": format_fraction(slope(v.sub)),
        "composition_ok": composition_ok,
        "filtrations": [report.to_dict() for report in filtrations],
    }
    return ReportDocument(
        command="slopes",
        parameters={**ctx.to_dict(), "n": n, "r": rank, "d": degree},
        results=[row],
        failures=failures,
    )


def cmd_sweep(bounds: SweepBounds, workers: int) -> ReportDocument:
    """网格扫描；结果行含判定、守恒检查"""
    if not bounds.primes:
        raise PreconditionError("pmax 至少为 2")
    if bounds.n_max < 1 or bounds.r_max < 1 or bounds.g_max < 2 or bounds.d_max < 0:
        raise PreconditionError(f"扫描范围非法: {bounds.to_dict()}")
    report = theorem_sweep(bounds, workers=workers)
    results = [{"kind": "verdict", **pt} for pt in report.points]
    results += [{"kind": "conservation", **row} for row in report.conservation]
    return ReportDocument(
        command="sweep",
        parameters=bounds.to_dict(),
        results=results,
        failures=report.failures,
    )


def sweep_summary(document: ReportDocument) -> ReportDocument:
    """扫描摘要: 点数、失稳数、各情形计数、边界点"""
    verdicts = [r for r in document.results if r["kind"] == "verdict"]
    boundary = boundary_points(verdicts)
    return ReportDocument(
        command=document.command,
        parameters=document.parameters,
        results=[{
            "points": len(verdicts),
            "destabilized": sum(1 for r in verdicts if r["destabilized"]),
            "conservation_checks": len(document.results) - len(verdicts),
            "cases": case_counts(verdicts),
            "boundary_points": len(boundary),
            "boundary_gaps": sorted({r["gap"] for r in boundary}),
            "failures": len(document.failures),
        }],
        failures=document.failures,
    )


def cmd_cohom_cert(p: int, g: int, n: int) -> ReportDocument:
    """上同调证书"""
    _require_prime(p)
    if g < 2:
        raise PreconditionError(f"g 必须 >= 2: {g}")
    if n < 2:
        raise PreconditionError(f"构造要求 n > 1（F_*^n L 且 n >= 2）: n={n}")
    cert = cohom_certificate(CurveContext.of(p, g), n)
    failures = [] if cert.valid else [{"check": "certificate", "message": "certificate invalid"}]
    return ReportDocument(
        command="cohom-cert",
        parameters={"p": p, "g": g, "n": n},
        results=[cert.to_dict()],
        failures=failures,
    )


def cmd_lemma25(p_max: int) -> ReportDocument:
    """所有 p <= p_max 的同余检查"""
    if p_max < 2:
        raise PreconditionError(f"pmax 必须 >= 2: {p_max}")
    rows = [{"p": q, "holds": check_lemma25(q)} for q in range(2, p_max + 1) if is_prime(q)]
    return ReportDocument(
        command="lemma25",
        parameters={"pmax": p_max},
        results=rows,
        failures=[{"check": "lemma25", "p": r["p"]} for r in rows if not r["holds"]],
    )


def cmd_corollary(p_max: int, n_max: int, g_max: int, d_max: int) -> ReportDocument:
    """E = F_*^n L（n >= 2）时 ∧²E 失稳"""
    if p_max < 2 or n_max < 2 or g_max < 2 or d_max < 0:
        raise PreconditionError("要求 pmax >= 2, nmax >= 2, gmax >= 2, dmax >= 0")
    rows = []
    failures = []
    for q in (x for x in range(2, p_max + 1) if is_prime(x)):
        for n in range(2, n_max + 1):
            for g in range(2, g_max + 1):
                ctx = CurveContext.of(q, g)
                for d in range(-d_max, d_max + 1):
                    v = corollary_check(ctx, n, d)
                    rows.append({
                        "p": q, "n": n, "g": g, "d": d,
                        "case_tag": v.case_tag.value,
                        "gap": format_fraction(v.gap),
                        "destabilized": v.destabilized,
                    })
                    if not v.destabilized:
                        failures.append({"check": "corollary", "point": rows[-1]})
    return ReportDocument(
        command="corollary",
        parameters={"pmax": p_max, "nmax": n_max, "gmax": g_max, "dmax": d_max},
        results=rows,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# 输出
# ---------------------------------------------------------------------------

def render(document: ReportDocument, fmt: str) -> str:
    if fmt == "rows":
        rows = [{"kind": "result", **r} if "kind" not in r else r for r in document.results]
        rows += [{"kind": "failure", **f} for f in document.failures]
        return TableRenderer().render_from_dict(rows)
    if fmt == "summary":
        if document.command == "sweep":
            return sweep_summary(document).to_json()
        return document.summary().to_json()
    return document.to_json()


def write_output(text: str, path: Path) -> None:
    try:
        write_text(text, path)
    except OSError as exc:
        raise OutputWriteError(f"无法写入 {path}: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    settings = get_settings()
    parser = argparse.ArgumentParser(
        prog="frobwedge",
        description="Frobenius 推出的楔积失稳：精确校验",
    )
    parser.add_argument("--log-level", default=None, help="日志级别（默认取配置）")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="输出格式")
    common.add_argument("--out", type=Path, default=None, help="输出文件路径")

    sub = parser.add_subparsers(dest="command", required=True)

    local = sub.add_parser("verify-local", parents=[common], help="局部模型检查")
    local.add_argument("--p", type=int, required=True)
    local.add_argument("--rank", "--r", dest="rank", type=int, default=1)
    local.add_argument("--trunc", type=int, default=settings.default_trunc)
    local.add_argument("--seed", type=int, default=settings.default_seed)
    local.add_argument("--max-prime", type=int, default=settings.max_prime)

    slopes = sub.add_parser("slopes", parents=[common], help="斜率表")
    slopes.add_argument("--p", type=int, required=True)
    slopes.add_argument("--g", type=int, required=True)
    slopes.add_argument("--n", type=int, required=True)
    slopes.add_argument("--rank", "--r", dest="rank", type=int, required=True)
    slopes.add_argument("--d", type=int, required=True)

    sweep = sub.add_parser("sweep", parents=[common], help="网格扫描")
    sweep.add_argument("--pmax", type=int, default=13)
    sweep.add_argument("--nmax", type=int, default=4)
    sweep.add_argument("--rmax", type=int, default=5)
    sweep.add_argument("--gmax", type=int, default=6)
    sweep.add_argument("--dmax", type=int, default=20)
    sweep.add_argument("--workers", type=int, default=settings.sweep_workers)

    cert = sub.add_parser("cohom-cert", parents=[common], help="上同调稳定性反例证书")
    cert.add_argument("--p", type=int, required=True)
    cert.add_argument("--g", type=int, required=True)
    cert.add_argument("--n", type=int, required=True)

    lemma = sub.add_parser("lemma25", parents=[common], help="模 p 组合数同余")
    lemma.add_argument("--pmax", type=int, default=97)

    cor = sub.add_parser("corollary", parents=[common], help="F_*^n L 的楔积失稳")
    cor.add_argument("--pmax", type=int, default=7)
    cor.add_argument("--nmax", type=int, default=3)
    cor.add_argument("--gmax", type=int, default=4)
    cor.add_argument("--dmax", type=int, default=5)

    return parser


def dispatch(args: argparse.Namespace) -> ReportDocument:
    settings = get_settings()
    if args.command == "verify-local":
        return cmd_verify_local(args.p, args.rank, args.trunc, args.seed, args.max_prime,
                                settings.random_pairs)
    if args.command == "slopes":
        return cmd_slopes(args.p, args.g, args.n, args.rank, args.d)
    if args.command == "sweep":
        bounds = SweepBounds.from_pmax(args.pmax, args.nmax, args.rmax, args.gmax, args.dmax)
        return cmd_sweep(bounds, max(1, args.workers))
    if args.command == "cohom-cert":
        return cmd_cohom_cert(args.p, args.g, args.n)
    if args.command == "lemma25":
        return cmd_lemma25(args.pmax)
    return cmd_corollary(args.pmax, args.nmax, args.gmax, args.dmax)


def main(argv: Optional[List[str]] = None) -> int:
    """命令行入口，返回退出码"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_ARGUMENT

    setup_logging(get_settings(), args.log_level)

    try:
        document = dispatch(args)
    except PreconditionError as exc:
        logger.error(f"参数错误: {exc}")
        return EXIT_ARGUMENT
    except ContractViolation as exc:
        logger.exception(f"内部错误: {exc}")
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001
        logger.exception(f"未预期的错误: {exc}")
        return EXIT_INTERNAL

    default_format = "summary" if args.command == "sweep" else "document"
    fmt = args.format or default_format
    try:
        if args.out is not None:
            write_output(render(document, fmt), args.out)
            stdout_text = render(document, "summary")
        else:
            stdout_text = render(document, fmt)
    except OutputWriteError as exc:
        logger.error(str(exc))
        return EXIT_IO

    sys.stdout.write(stdout_text)
    if not document.ok:
        logger.warning(f"{len(document.failures)} 项检查失败")
        return EXIT_CHECK_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
