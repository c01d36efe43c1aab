"""
参数网格扫描

对 (p, n, r, g, d) 网格逐点计算判定并核对:
闭式一致、destabilized ⇔ (r > 1 ∨ p^n > 3)、斜率差与 d 无关、关于 g−1 线性、子丛秩不超过 ∧² 的秩；
另对 (p, r, g, d) 网格核对两条滤过的度数守恒。
失败作为数据返回，不抛异常。网格可按 p 分片交给进程池，结果按字典序排序。
"""

import concurrent.futures
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from loguru import logger

from src.utils.helpers import format_fraction

from .data_models import BundleClass, CaseTag, CurveContext
from .destabilization import composed_subbundle_class, expected_destabilized, verdict
from .modp import is_prime
from .slope_calculus import canonical_filtration_profile, pushforward_tensor_profile

DEFAULT_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class SweepBounds:
    """扫描范围；g 从 2 开始"""
    primes: Tuple[int, ...] = DEFAULT_PRIMES
    n_max: int = 4
    r_max: int = 5
    g_max: int = 6
    d_max: int = 20

    @classmethod
    def from_pmax(cls, p_max: int, n_max: int, r_max: int, g_max: int, d_max: int) -> "SweepBounds":
        return cls(
            primes=tuple(q for q in range(2, p_max + 1) if is_prime(q)),
            n_max=n_max,
            r_max=r_max,
            g_max=g_max,
            d_max=d_max,
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "primes": list(self.primes),
            "n_max": self.n_max,
            "r_max": self.r_max,
            "g_max": self.g_max,
            "d_max": self.d_max,
        }


@dataclass
class SweepReport:
    """扫描结果"""
    bounds: SweepBounds
    points: List[Dict[str, Any]] = field(default_factory=list)
    conservation: List[Dict[str, Any]] = field(default_factory=list)
    failures: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def destabilized_count(self) -> int:
        return sum(1 for pt in self.points if pt["destabilized"])

    def summary(self) -> Dict[str, Any]:
        return {
            "bounds": self.bounds.to_dict(),
            "points": len(self.points),
            "destabilized": self.destabilized_count,
            "conservation_checks": len(self.conservation),
            "failures": len(self.failures),
        }


def _failure(point: Dict[str, Any], check: str, message: str) -> Dict[str, Any]:
    return {"point": point, "check": check, "message": message}


def _sweep_prime(p: int, bounds: SweepBounds) -> Tuple[List[dict], List[dict], List[dict]]:
    """单个素数上的全部网格点"""
    points: List[dict] = []
    conservation: List[dict] = []
    failures: List[dict] = []
    reference_gap: Dict[Tuple[int, int], Fraction] = {}

    for n in range(1, bounds.n_max + 1):
        for r in range(1, bounds.r_max + 1):
            for g in range(2, bounds.g_max + 1):
                ctx = CurveContext.of(p, g)
                block = {"p": p, "n": n, "r": r, "g": g}
                try:
                    base = verdict(BundleClass(r, 0), n, ctx)
                except Exception as exc:  # noqa: BLE001 - 失败记录为数据
                    failures.append(_failure({**block, "d": 0}, "verdict", str(exc)))
                    continue
                if g == 2:
                    reference_gap[(n, r)] = base.gap
                try:
                    composed_subbundle_class(BundleClass(r, 0), n, ctx)
                except Exception as exc:  # noqa: BLE001 - 失败记录为数据
                    failures.append(_failure(block, "composition", str(exc)))
                for d in range(-bounds.d_max, bounds.d_max + 1):
                    key = {**block, "d": d}
                    try:
                        v = verdict(BundleClass(r, d), n, ctx)
                    except Exception as exc:  # noqa: BLE001 - 失败记录为数据
                        failures.append(_failure(key, "verdict", str(exc)))
                        continue
                    points.append({
                        **key,
                        "case_tag": v.case_tag.value,
                        "sub_rank": v.sub.rank,
                        "sub_degree": v.sub.degree,
                        "ambient_rank": v.ambient.rank,
                        "ambient_degree": v.ambient.degree,
                        "gap": format_fraction(v.gap),
                        "expected_gap": format_fraction(v.expected_gap),
                        "destabilized": v.destabilized,
                    })
                    if not v.closed_form_ok:
                        failures.append(_failure(key, "closed_form", f"{v.gap} != {v.expected_gap}"))
                    if v.destabilized != expected_destabilized(r, p, n):
                        failures.append(_failure(key, "predicate", f"destabilized={v.destabilized}"))
                    if v.gap != base.gap:
                        failures.append(_failure(key, "degree_independence", f"{v.gap} != {base.gap}"))
                    reference = reference_gap.get((n, r))
                    if reference is not None and v.gap != (g - 1) * reference:
                        failures.append(_failure(key, "genus_linearity", f"{v.gap}"))
                    boundary = r == 1 and p ** n <= 3
                    if v.sub.rank > v.ambient.rank or (not boundary and v.sub.rank == v.ambient.rank):
                        failures.append(_failure(
                            key, "proper_subbundle", f"{v.sub.rank} vs {v.ambient.rank}"
                        ))
                    if boundary and v.gap != 0:
                        failures.append(_failure(key, "boundary_gap", f"{v.gap}"))

    for r in range(1, bounds.r_max + 1):
        for g in range(2, bounds.g_max + 1):
            ctx = CurveContext.of(p, g)
            for d in range(-bounds.d_max, bounds.d_max + 1):
                key = {"p": p, "r": r, "g": g, "d": d}
                bundle = BundleClass(r, d)
                canonical = canonical_filtration_profile(bundle, ctx)
                pushed = pushforward_tensor_profile(bundle, ctx)
                # 闭式: 2rp·d + 2pr²(p−1)(g−1)
                closed = 2 * r * p * d + 2 * p * r * r * (p - 1) * (g - 1)
                row = {
                    **key,
                    "canonical_conserved": canonical.conserved,
                    "pushforward_conserved": pushed.conserved,
                    "pushforward_closed_form": pushed.total.degree == closed
                    and sum(q.degree for q in pushed.quotients) == closed,
                }
                conservation.append(row)
                for check in ("canonical_conserved", "pushforward_conserved", "pushforward_closed_form"):
                    if not row[check]:
                        failures.append(_failure(key, check, "degree/rank bookkeeping mismatch"))

    logger.debug(f"p={p}: {len(points)} 个点, {len(failures)} 个失败")
    return points, conservation, failures


def _sort_key(row: Dict[str, Any]) -> Tuple:
    return tuple(row.get(k, 0) for k in ("p", "n", "r", "g", "d"))


def theorem_sweep(bounds: SweepBounds, workers: int = 1) -> SweepReport:
    """
    Args:
        bounds: 扫描范围
        workers: 进程数；> 1 时按素数分片
    """
    report = SweepReport(bounds=bounds)
    if workers > 1 and len(bounds.primes) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            tasks = [executor.submit(_sweep_prime, p, bounds) for p in bounds.primes]
            parts = [task.result() for task in concurrent.futures.as_completed(tasks)]
    else:
        parts = [_sweep_prime(p, bounds) for p in bounds.primes]

    for points, conservation, failures in parts:
        report.points.extend(points)
        report.conservation.extend(conservation)
        report.failures.extend(failures)
    report.points.sort(key=_sort_key)
    report.conservation.sort(key=_sort_key)
    report.failures.sort(key=lambda f: (_sort_key(f["point"]), f["check"]))

    summary = report.summary()
    logger.info(
        f"扫描完成: {summary['points']} 个点, 失稳 {summary['destabilized']}, "
        f"守恒检查 {summary['conservation_checks']}, 失败 {summary['failures']}"
    )
    return report


def boundary_points(points: Iterable[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """r = 1 且 p^n <= 3 的点"""
    return [pt for pt in points if pt["r"] == 1 and pt["p"] ** pt["n"] <= 3]


def case_counts(points: Sequence[Dict[str, Any]]) -> Dict[str, int]:
    counts = {tag.value: 0 for tag in CaseTag}
    for pt in points:
        counts[pt["case_tag"]] += 1
    return counts
