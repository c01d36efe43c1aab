"""
核心数据模型

- BundleClass / CurveContext: 向量丛的数值类 (rank, degree) 与曲线参数 (p, g)
- FiltrationReport: 滤过各分次商的数值类与守恒标志
- DestabilizationVerdict / CohomCertificate: 失稳判定与上同调稳定性反例证书
- SymmetryReport / WedgeKernelReport / CheckResult: 局部模型检查的结构化结果

所有斜率都是 fractions.Fraction，不引入浮点。
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

from src.utils.helpers import format_fraction

from .errors import PreconditionError
from .modp import PrimeChar


class CaseTag(Enum):
    """子丛的三种构造"""
    HIGH_RANK = "HIGH_RANK"      # r > 1
    LINE_ODD = "LINE_ODD"        # r = 1, p > 2
    LINE_CHAR2 = "LINE_CHAR2"    # r = 1, p = 2

    @classmethod
    def for_rank(cls, rank: int, p: int) -> "CaseTag":
        if rank > 1:
            return cls.HIGH_RANK
        return cls.LINE_CHAR2 if p == 2 else cls.LINE_ODD


@dataclass(frozen=True)
class CurveContext:
    """曲线只以 (p, g) 出现"""
    char: PrimeChar
    g: int

    def __post_init__(self):
        if self.g < 1:
            raise PreconditionError(f"亏格必须 >= 1: g={self.g}")

    @classmethod
    def of(cls, p: int, g: int) -> "CurveContext":
        return cls(PrimeChar(p), g)

    @property
    def p(self) -> int:
        return self.char.p

    def require_hyperbolic(self) -> None:
        """失稳判定要求 g >= 2"""
        if self.g < 2:
            raise PreconditionError(f"判定要求 g >= 2: g={self.g}")

    def to_dict(self) -> Dict[str, Any]:
        return {"p": self.p, "g": self.g}


@dataclass(frozen=True)
class BundleClass:
    """向量丛的数值类"""
    rank: int
    degree: int

    def __post_init__(self):
        if self.rank < 1:
            raise PreconditionError(f"秩必须 >= 1: rank={self.rank}")

    @property
    def slope(self) -> Fraction:
        return Fraction(self.degree, self.rank)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rank": self.rank,
            "degree": self.degree,
            "slope": format_fraction(self.slope),
        }


@dataclass
class FiltrationReport:
    """滤过的数值剖面（第 0 层在前）"""
    quotients: List[BundleClass]
    total: BundleClass
    name: str = ""

    @property
    def slopes(self) -> List[Fraction]:
        return [q.slope for q in self.quotients]

    @property
    def conserved(self) -> bool:
        return (
            sum(q.rank for q in self.quotients) == self.total.rank
            and sum(q.degree for q in self.quotients) == self.total.degree
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "quotients": [q.to_dict() for q in self.quotients],
            "slopes": [format_fraction(s) for s in self.slopes],
            "total": self.total.to_dict(),
            "conserved": self.conserved,
        }


@dataclass
class DestabilizationVerdict:
    """失稳判定"""
    case_tag: CaseTag
    sub: BundleClass
    ambient: BundleClass
    gap: Fraction
    n: int
    expected_gap: Fraction
    # 仅 LINE_CHAR2 且 n >= 2 时给出: 与 ∧²(F_*^{n−1}E) 的比较
    secondary_ambient: Optional[BundleClass] = None
    secondary_gap: Optional[Fraction] = None

    @property
    def destabilized(self) -> bool:
        return self.gap > 0

    @property
    def closed_form_ok(self) -> bool:
        return self.gap == self.expected_gap

    def to_dict(self) -> Dict[str, Any]:
        return {
            "case_tag": self.case_tag.value,
            "n": self.n,
            "sub": self.sub.to_dict(),
            "ambient": self.ambient.to_dict(),
            "gap": format_fraction(self.gap),
            "expected_gap": format_fraction(self.expected_gap),
            "closed_form_ok": self.closed_form_ok,
            "destabilized": self.destabilized,
            "secondary_ambient": self.secondary_ambient.to_dict() if self.secondary_ambient else None,
            "secondary_gap": (
                format_fraction(self.secondary_gap) if self.secondary_gap is not None else None
            ),
        }


@dataclass
class CohomCertificate:
    """F_*^n L 不是上同调稳定的度数证书"""
    p: int
    g: int
    n: int
    chosen_degree: int
    deg_a: int
    threshold: Fraction
    divisibility_ok: bool
    witness_twist_degree: int
    t: int = 2

    @property
    def degree_ok(self) -> bool:
        return self.deg_a >= self.threshold

    @property
    def witness_ok(self) -> bool:
        return self.witness_twist_degree == 0

    @property
    def valid(self) -> bool:
        return self.divisibility_ok and self.degree_ok and self.witness_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "g": self.g,
            "n": self.n,
            "d": self.chosen_degree,
            "deg_a": self.deg_a,
            "t": self.t,
            "threshold": format_fraction(self.threshold),
            "divisibility_ok": self.divisibility_ok,
            "degree_ok": self.degree_ok,
            "witness_twist_degree": self.witness_twist_degree,
            "witness_ok": self.witness_ok,
            "valid": self.valid,
        }


@dataclass
class SymmetryRow:
    """t^k α^exponent 的对称性"""
    k: int
    exponent: int
    symmetric: bool
    expected: bool
    identity_ok: bool
    terms: Dict[str, List[int]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.symmetric == self.expected and self.identity_ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "exponent": self.exponent,
            "symmetric": self.symmetric,
            "expected": self.expected,
            "identity_ok": self.identity_ok,
            "terms": self.terms,
        }


@dataclass
class SymmetryReport:
    """对称性分类结果"""
    p: int
    rows: List[SymmetryRow]

    @property
    def matches(self) -> bool:
        return all(row.ok for row in self.rows)

    def symmetric_rows(self, exponent: int) -> List[SymmetryRow]:
        return [row for row in self.rows if row.exponent == exponent and row.symmetric]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "matches": self.matches,
            "rows": [row.to_dict() for row in self.rows],
        }


@dataclass
class WedgeKernelReport:
    """E⊗E → E∧E 核的局部检查"""
    p: int
    r: int
    symmetric_count: int
    antisymmetric_count: int
    expected_symmetric: int
    expected_antisymmetric: int
    generators_symmetric: bool
    independent: bool
    complement_independent: bool
    fixed_dimension: int
    # p = 2 时为 None
    antisymmetrized_independent: Optional[bool] = None

    @property
    def passed(self) -> bool:
        return (
            self.generators_symmetric
            and self.independent
            and self.complement_independent
            and self.antisymmetrized_independent is not False
            and self.symmetric_count == self.expected_symmetric
            and self.antisymmetric_count == self.expected_antisymmetric
            and self.fixed_dimension == self.expected_symmetric
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "r": self.r,
            "symmetric_count": self.symmetric_count,
            "antisymmetric_count": self.antisymmetric_count,
            "expected_symmetric": self.expected_symmetric,
            "expected_antisymmetric": self.expected_antisymmetric,
            "generators_symmetric": self.generators_symmetric,
            "independent": self.independent,
            "complement_independent": self.complement_independent,
            "antisymmetrized_independent": self.antisymmetrized_independent,
            "fixed_dimension": self.fixed_dimension,
            "passed": self.passed,
        }


@dataclass
class CheckResult:
    """单项检查结果，对应报告中的一行"""
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)
    message: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.name,
            "passed": self.passed,
            "details": self.details,
            "message": self.message,
        }
