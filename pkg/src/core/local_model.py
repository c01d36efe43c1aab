"""
局部模型: k[t] ⊗_{k[s]} k[t]（s = t^p）

元素存成 (p, p, M) 的整数数组: coeffs[i, j, e] 为 s^e · t^i⊗t^j 的系数（模 p），
s 的次数截断在 M（默认 2）。两侧的 t^p 都约化为 s。

提供 α = 1⊗t − t⊗1、乘法、典范联络（对左因子求导）、交换对合、
基 {t^k α^m} 下的坐标与滤过层级、对称性分类以及秩 r 的楔积核检查。
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List

import numpy as np
from loguru import logger

from .data_models import SymmetryReport, SymmetryRow, WedgeKernelReport
from .errors import ContractViolation, PreconditionError
from .modp import PrimeChar, alpha_power_expansion
from .truncated_poly import certified_rank, invert, matvec, reduce

DEFAULT_TRUNC = 2


def _char(p: "PrimeChar | int") -> PrimeChar:
    return p if isinstance(p, PrimeChar) else PrimeChar(int(p))


def _fold(full: np.ndarray, p: int, trunc: int) -> np.ndarray:
    """
    把 t 指数在 [0, 2p-2] 的两侧展开折回 [0, p-1]，每次越界带出一个 s
    """
    out = np.zeros((p, p, trunc), dtype=np.int64)
    for qa in (0, 1):
        for qb in (0, 1):
            block = full[qa * p:(qa + 1) * p, qb * p:(qb + 1) * p, :]
            shift = qa + qb
            a_len, b_len = block.shape[0], block.shape[1]
            width = min(block.shape[2], trunc - shift)
            if width <= 0:
                continue
            out[:a_len, :b_len, shift:shift + width] += block[:, :, :width]
    return reduce(out, p)


@dataclass(frozen=True, eq=False)
class BiTensorElement:
    """k[t]⊗_{k[s]}k[t] 中的元素"""
    char: PrimeChar
    coeffs: np.ndarray

    def __post_init__(self):
        p = self.char.p
        arr = np.asarray(self.coeffs, dtype=np.int64)
        if arr.ndim != 3 or arr.shape[:2] != (p, p) or arr.shape[2] < 1:
            raise ContractViolation(f"系数表形状错误: {arr.shape}, p={p}")
        arr = reduce(arr, p)
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @property
    def p(self) -> int:
        return self.char.p

    @property
    def trunc(self) -> int:
        return int(self.coeffs.shape[2])

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _check_compatible(self, other: "BiTensorElement") -> None:
        if self.p != other.p or self.trunc != other.trunc:
            raise ContractViolation(
                f"参数不一致: (p={self.p}, M={self.trunc}) vs (p={other.p}, M={other.trunc})"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BiTensorElement):
            return NotImplemented
        return (
            self.p == other.p
            and self.trunc == other.trunc
            and bool(np.array_equal(self.coeffs, other.coeffs))
        )

    def __hash__(self) -> int:
        return hash((self.p, self.trunc, self.coeffs.tobytes()))

    def __add__(self, other: "BiTensorElement") -> "BiTensorElement":
        self._check_compatible(other)
        return BiTensorElement(self.char, self.coeffs + other.coeffs)

    def __sub__(self, other: "BiTensorElement") -> "BiTensorElement":
        self._check_compatible(other)
        return BiTensorElement(self.char, self.coeffs - other.coeffs)

    def __neg__(self) -> "BiTensorElement":
        return BiTensorElement(self.char, -self.coeffs)

    def __mul__(self, other: "BiTensorElement | int") -> "BiTensorElement":
        if isinstance(other, BiTensorElement):
            return multiply(self, other)
        return BiTensorElement(self.char, self.coeffs * int(other))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        """非零项 {"i,j": [s^0 系数, s^1 系数, ...]}"""
        out = {}
        for i, j in zip(*np.nonzero(np.any(self.coeffs, axis=2))):
            out[f"{i},{j}"] = [int(c) for c in self.coeffs[i, j]]
        return out


@dataclass(frozen=True, eq=False)
class FiltrationCoordinates:
    """在基 {t^k α^m} 下的坐标，coeffs[k, m, e]"""
    char: PrimeChar
    coeffs: np.ndarray

    @property
    def p(self) -> int:
        return self.char.p

    @property
    def trunc(self) -> int:
        return int(self.coeffs.shape[2])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiltrationCoordinates):
            return NotImplemented
        return self.p == other.p and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.p, self.coeffs.tobytes()))

    def level(self) -> int:
        """有非零坐标的最小 m；零元返回 p"""
        nonzero_m = np.nonzero(np.any(self.coeffs, axis=(0, 2)))[0]
        return int(nonzero_m[0]) if nonzero_m.size else self.p


# ---------------------------------------------------------------------------
# 构造
# ---------------------------------------------------------------------------

def zero(p: "PrimeChar | int", trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    ch = _char(p)
    return BiTensorElement(ch, np.zeros((ch.p, ch.p, trunc), dtype=np.int64))


def monomial(
    p: "PrimeChar | int",
    i: int,
    j: int,
    s_power: int = 0,
    coeff: int = 1,
    trunc: int = DEFAULT_TRUNC,
) -> BiTensorElement:
    """coeff · s^{s_power} · t^i⊗t^j，要求 0 <= i, j <= p-1"""
    ch = _char(p)
    if not (0 <= i < ch.p and 0 <= j < ch.p):
        raise PreconditionError(f"指标越界: ({i}, {j}), p={ch.p}")
    arr = np.zeros((ch.p, ch.p, trunc), dtype=np.int64)
    if s_power < trunc:
        arr[i, j, s_power] = coeff
    return BiTensorElement(ch, arr)


def unit(p: "PrimeChar | int", trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    return monomial(p, 0, 0, trunc=trunc)


def alpha(p: "PrimeChar | int", trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    """α := 1⊗t − t⊗1"""
    ch = _char(p)
    return monomial(ch, 0, 1, trunc=trunc) + monomial(ch, 1, 0, coeff=ch.p - 1, trunc=trunc)


def basis_element(p: "PrimeChar | int", k: int, m: int, trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    """
    t^k α^m 的直接展开（不经过 multiply）

    α^m = Σ_h C(m,h)(−1)^h t^h⊗t^{m−h}，再乘 t^k⊗1 后折回。
    """
    ch = _char(p)
    q = ch.p
    if not (0 <= k < q and 0 <= m < q):
        raise PreconditionError(f"基指标越界: (k={k}, m={m}), p={q}")
    full = np.zeros((2 * q, 2 * q, trunc), dtype=np.int64)
    for h, c in enumerate(alpha_power_expansion(m, q)):
        full[k + h, m - h, 0] += c
    return BiTensorElement(ch, _fold(full, q, trunc))


def random_element(
    p: "PrimeChar | int",
    rng: np.random.Generator,
    trunc: int = DEFAULT_TRUNC,
) -> BiTensorElement:
    """种子化随机元素，供属性检查使用"""
    ch = _char(p)
    return BiTensorElement(ch, rng.integers(0, ch.p, size=(ch.p, ch.p, trunc)))


# ---------------------------------------------------------------------------
# 环运算
# ---------------------------------------------------------------------------

def multiply(x: BiTensorElement, y: BiTensorElement) -> BiTensorElement:
    """
    (t^i⊗t^j)(t^k⊗t^l) = t^{i+k}⊗t^{j+l}，两侧分别按 t^p → s 约化，s 次数截断于 M
    """
    x._check_compatible(y)
    p, trunc = x.p, x.trunc
    full = np.zeros((2 * p, 2 * p, 2 * trunc), dtype=np.int64)
    for k, l in zip(*np.nonzero(np.any(y.coeffs, axis=2))):
        for e in range(trunc):
            c = int(y.coeffs[k, l, e])
            if c:
                full[k:k + p, l:l + p, e:e + trunc] += c * x.coeffs
        full %= p
    return BiTensorElement(x.char, _fold(full, p, trunc))


def power(x: BiTensorElement, n: int) -> BiTensorElement:
    result = unit(x.char, x.trunc)
    for _ in range(n):
        result = multiply(result, x)
    return result


def connection(x: BiTensorElement) -> BiTensorElement:
    """
    典范联络的 dt 系数: 对左因子求导 t^i⊗t^j ↦ i·t^{i−1}⊗t^j，s 水平
    """
    out = np.zeros_like(x.coeffs)
    idx = np.arange(1, x.p).reshape(-1, 1, 1)
    out[:-1] = x.coeffs[1:] * idx
    return BiTensorElement(x.char, out)


def swap(x: BiTensorElement) -> BiTensorElement:
    """交换两个张量因子"""
    return BiTensorElement(x.char, np.transpose(x.coeffs, (1, 0, 2)))


def multiplication_map(x: BiTensorElement) -> np.ndarray:
    """
    乘法映射 t^i⊗t^j ↦ t^{i+j}，返回 k[t] 在 F_p[s]-基 {1, t, ..., t^{p-1}} 下的系数 (p, M)
    """
    p, trunc = x.p, x.trunc
    out = np.zeros((p, trunc), dtype=np.int64)
    for i in range(p):
        for j in range(p):
            u = i + j
            shift = 1 if u >= p else 0
            if shift < trunc:
                out[u - shift * p, shift:] += x.coeffs[i, j, : trunc - shift]
    return reduce(out, p)


# ---------------------------------------------------------------------------
# 坐标与滤过
# ---------------------------------------------------------------------------

def _column(k: int, m: int, p: int) -> int:
    # 列按 m 分块排序，块内按 k
    return m * p + k


@lru_cache(maxsize=32)
def _change_of_basis(p: int, trunc: int) -> np.ndarray:
    """列为 t^kα^m 在 {t^i⊗t^j} 下的展开，形状 (p*p, p*p, M)"""
    mat = np.zeros((p * p, p * p, trunc), dtype=np.int64)
    for m in range(p):
        for k in range(p):
            mat[:, _column(k, m, p), :] = basis_element(p, k, m, trunc).coeffs.reshape(p * p, trunc)
    mat.setflags(write=False)
    return mat


@lru_cache(maxsize=32)
def _inverse_change_of_basis(p: int, trunc: int) -> np.ndarray:
    logger.debug(f"求基变换逆矩阵: p={p}, M={trunc}")
    inv = invert(_change_of_basis(p, trunc), p)
    inv.setflags(write=False)
    return inv


def coordinates(x: BiTensorElement) -> FiltrationCoordinates:
    """x 在 {t^k α^m : 0 <= k, m <= p-1} 下的坐标"""
    p, trunc = x.p, x.trunc
    flat = matvec(_inverse_change_of_basis(p, trunc), x.coeffs.reshape(p * p, trunc), p)
    coords = np.zeros((p, p, trunc), dtype=np.int64)
    for m in range(p):
        coords[:, m, :] = flat[m * p:(m + 1) * p, :]
    result = FiltrationCoordinates(x.char, coords)
    if expand(result) != x:
        raise ContractViolation(f"坐标回代失败: p={p}, M={trunc}")
    return result


def expand(c: FiltrationCoordinates) -> BiTensorElement:
    """Σ c_{k,m}(s) · t^k α^m"""
    p, trunc = c.p, c.trunc
    flat = np.zeros((p * p, trunc), dtype=np.int64)
    for m in range(p):
        flat[m * p:(m + 1) * p, :] = c.coeffs[:, m, :]
    out = matvec(_change_of_basis(p, trunc), flat, p)
    return BiTensorElement(c.char, out.reshape(p, p, trunc))


def filtration_level(x: BiTensorElement) -> int:
    """满足 x ∈ I_l 的最大 l；零元返回 p"""
    if x.is_zero():
        return x.p
    return coordinates(x).level()


# ---------------------------------------------------------------------------
# 对称性
# ---------------------------------------------------------------------------

def is_symmetric(x: BiTensorElement) -> bool:
    return swap(x) == x


def alpha_top_reduction(p: "PrimeChar | int", k: int, trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    """
    Σ_{i=k}^{p−1} t^i⊗t^{p−1+k−i} + s·Σ_{j=0}^{k−1} t^j⊗t^{k−1−j}
    """
    ch = _char(p)
    q = ch.p
    out = zero(ch, trunc)
    for i in range(k, q):
        out = out + monomial(ch, i, q - 1 + k - i, trunc=trunc)
    for j in range(k):
        out = out + monomial(ch, j, k - 1 - j, s_power=1, trunc=trunc)
    return out


def alpha_subtop_reduction(p: "PrimeChar | int", k: int, trunc: int = DEFAULT_TRUNC) -> BiTensorElement:
    """
    Σ_{i=k}^{p−2}(i−k+1) t^i⊗t^{p−2+k−i} + (p−k) t^{p−1}⊗t^{k−1} + s·Σ_{j=0}^{k−2}(j−k+1) t^j⊗t^{k−2−j}

    空和为 0，右因子指数为负的项为 0。
    """
    ch = _char(p)
    q = ch.p
    out = zero(ch, trunc)
    for i in range(k, q - 1):
        out = out + monomial(ch, i, q - 2 + k - i, coeff=i - k + 1, trunc=trunc)
    if k - 1 >= 0:
        out = out + monomial(ch, q - 1, k - 1, coeff=q - k, trunc=trunc)
    for j in range(k - 1):
        out = out + monomial(ch, j, k - 2 - j, s_power=1, coeff=j - k + 1, trunc=trunc)
    return out


def classify_symmetry(p: "PrimeChar | int", trunc: int = DEFAULT_TRUNC) -> SymmetryReport:
    """
    对每个 k 判断 t^kα^{p−1} 与 t^kα^{p−2} 是否对称，并逐项核对两条约化恒等式
    """
    ch = _char(p)
    q = ch.p
    rows: List[SymmetryRow] = []
    for exponent in (q - 1, q - 2):
        for k in range(q):
            if exponent == 0:
                # p = 2 时 α^{p−2} = α^0 = 1⊗1，t^k α^0 = t^k⊗1
                element = monomial(ch, k, 0, trunc=trunc)
            else:
                element = multiply(monomial(ch, k, 0, trunc=trunc), power(alpha(ch, trunc), exponent))
            if exponent == q - 1:
                identity = alpha_top_reduction(ch, k, trunc)
                expected = True
            else:
                identity = alpha_subtop_reduction(ch, k, trunc)
                expected = k == 0 and q == 2
            symmetric = is_symmetric(element)
            rows.append(SymmetryRow(
                k=k,
                exponent=exponent,
                symmetric=symmetric,
                expected=expected,
                identity_ok=(element == identity and element == basis_element(ch, k, exponent, trunc)),
                terms=element.to_dict(),
            ))
    report = SymmetryReport(p=q, rows=rows)
    logger.debug(f"对称性分类 p={q}: matches={report.matches}")
    return report


# ---------------------------------------------------------------------------
# 秩 r 的成对模型 E⊗E
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PairedModuleElement:
    """E⊗E 的局部元素，coeffs[a, b, i, j, e] 对应 s^e·(e_a⊗e_b)·t^i⊗t^j（a, b 从 0 计）"""
    char: PrimeChar
    rank: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.rank < 1:
            raise PreconditionError(f"秩必须 >= 1: {self.rank}")
        p = self.char.p
        arr = reduce(np.asarray(self.coeffs, dtype=np.int64), p)
        if arr.shape[:4] != (self.rank, self.rank, p, p):
            raise ContractViolation(f"系数表形状错误: {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def from_symbols(cls, a: int, b: int, rank: int, x: BiTensorElement) -> "PairedModuleElement":
        """(e_a⊗e_b)·x"""
        if not (0 <= a < rank and 0 <= b < rank):
            raise PreconditionError(f"符号越界: ({a}, {b}), r={rank}")
        p, trunc = x.p, x.trunc
        arr = np.zeros((rank, rank, p, p, trunc), dtype=np.int64)
        arr[a, b] = x.coeffs
        return cls(x.char, rank, arr)

    @property
    def trunc(self) -> int:
        return int(self.coeffs.shape[-1])

    def _check_compatible(self, other: "PairedModuleElement") -> None:
        if (self.char.p, self.rank, self.trunc) != (other.char.p, other.rank, other.trunc):
            raise ContractViolation(
                f"参数不一致: (p={self.char.p}, r={self.rank}, M={self.trunc}) "
                f"vs (p={other.char.p}, r={other.rank}, M={other.trunc})"
            )

    def __add__(self, other: "PairedModuleElement") -> "PairedModuleElement":
        self._check_compatible(other)
        return PairedModuleElement(self.char, self.rank, self.coeffs + other.coeffs)

    def __sub__(self, other: "PairedModuleElement") -> "PairedModuleElement":
        self._check_compatible(other)
        return PairedModuleElement(self.char, self.rank, self.coeffs - other.coeffs)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PairedModuleElement):
            return NotImplemented
        return self.rank == other.rank and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash((self.rank, self.coeffs.tobytes()))

    def swap(self) -> "PairedModuleElement":
        """同时交换符号对与张量指标"""
        return PairedModuleElement(self.char, self.rank, np.transpose(self.coeffs, (1, 0, 3, 2, 4)))

    def is_symmetric(self) -> bool:
        return self.swap() == self

    def coordinate_vector(self) -> np.ndarray:
        """每个符号对分量取滤过坐标后拼成 (r*r*p*p, M) 的向量"""
        p, r = self.char.p, self.rank
        trunc = self.trunc
        parts = []
        for a in range(r):
            for b in range(r):
                c = coordinates(BiTensorElement(self.char, self.coeffs[a, b]))
                parts.append(c.coeffs.reshape(p * p, trunc))
        return np.concatenate(parts, axis=0)


def _stack(elements: List[PairedModuleElement]) -> np.ndarray:
    return np.stack([e.coordinate_vector() for e in elements], axis=0)


def wedge_kernel_report(
    p: "PrimeChar | int",
    r: int,
    trunc: int = DEFAULT_TRUNC,
) -> WedgeKernelReport:
    """
    在 (e_a⊗e_b)·t^kα^{p−1} 张成的子模上验证:
    列出的生成元恰为对称元，线性无关，个数 p·r(r+1)/2；
    代表元 (e_i⊗e_j)·t^kα^{p−1}（i < j）在对称部分之外线性无关，个数 p·r(r−1)/2。
    p 为奇数时反对称化像 (e_i⊗e_j − e_j⊗e_i)·t^kα^{p−1} 另做同样检查；
    p = 2 时它们与对称生成元重合，不参与判定。
    """
    if r < 2:
        raise PreconditionError(f"楔积核检查要求 r >= 2: r={r}")
    ch = _char(p)
    q = ch.p
    tops = [basis_element(ch, k, q - 1, trunc) for k in range(q)]

    def prod(a: int, b: int, k: int) -> PairedModuleElement:
        return PairedModuleElement.from_symbols(a, b, r, tops[k])

    generators: List[PairedModuleElement] = []
    antisymmetric: List[PairedModuleElement] = []
    representatives: List[PairedModuleElement] = []
    off_diagonal: List[PairedModuleElement] = []
    for k in range(q):
        for a in range(r):
            generators.append(prod(a, a, k))
            for b in range(a + 1, r):
                generators.append(prod(a, b, k) + prod(b, a, k))
                antisymmetric.append(prod(a, b, k) - prod(b, a, k))
                representatives.append(prod(a, b, k))
                off_diagonal.extend([prod(a, b, k), prod(b, a, k)])

    generators_symmetric = all(g.is_symmetric() for g in generators)
    # 非对角的单个乘积不对称
    off_diagonal_asymmetric = all(not e.is_symmetric() for e in off_diagonal)

    gen_matrix = _stack(generators)
    independent = certified_rank(gen_matrix, q) == len(generators)

    def spans_complement(extra: List[PairedModuleElement]) -> bool:
        full = np.concatenate([gen_matrix, _stack(extra)], axis=0)
        return certified_rank(full, q) == len(generators) + len(extra)

    complement_independent = spans_complement(representatives)
    antisymmetrized_independent = spans_complement(antisymmetric) if q > 2 else None

    # 对称部分的维数 = 总维数 − rank(swap − id)
    all_products = [prod(a, b, k) for k in range(q) for a in range(r) for b in range(r)]
    deviations = [e.swap() - e for e in all_products]
    deviation_rank = certified_rank(_stack(deviations), q)
    fixed_dimension = len(all_products) - deviation_rank

    report = WedgeKernelReport(
        p=q,
        r=r,
        symmetric_count=len(generators),
        antisymmetric_count=len(antisymmetric),
        expected_symmetric=q * r * (r + 1) // 2,
        expected_antisymmetric=q * r * (r - 1) // 2,
        generators_symmetric=generators_symmetric and off_diagonal_asymmetric,
        independent=independent,
        complement_independent=complement_independent,
        antisymmetrized_independent=antisymmetrized_independent,
        fixed_dimension=fixed_dimension,
    )
    logger.debug(f"楔积核 p={q}, r={r}: passed={report.passed}")
    return report


def wedge_kernel_check(p: "PrimeChar | int", r: int, trunc: int = DEFAULT_TRUNC) -> bool:
    return wedge_kernel_report(p, r, trunc).passed
