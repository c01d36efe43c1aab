"""
模 p 组合数

- PrimeChar: 特征 p（构造时试除判素）
- binom_mod: Lucas 分解计算 C(n, k) mod p
- check_lemma25: 校验 C(p-1, h) ≡ (-1)^h 与 C(p-2, h) ≡ (-1)^h (h+1)
"""

from dataclasses import dataclass
from typing import List

from loguru import logger

from .errors import PreconditionError


def is_prime(n: int) -> bool:
    """试除判素"""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeChar:
    """域的特征 p"""
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise PreconditionError(f"特征必须为整数: {self.p!r}")
        if not is_prime(self.p):
            raise PreconditionError(f"特征必须为素数: {self.p}")

    def __int__(self) -> int:
        return self.p


def _as_int(p: "PrimeChar | int") -> int:
    return p.p if isinstance(p, PrimeChar) else int(p)


def _small_binom(n: int, k: int, p: int) -> int:
    """0 <= k <= n < p 时按乘法公式计算 C(n, k) mod p"""
    num = 1
    den = 1
    for i in range(k):
        num = num * (n - i) % p
        den = den * (i + 1) % p
    return num * pow(den, -1, p) % p


def binom_mod(n: int, k: int, p: "PrimeChar | int") -> int:
    """
    C(n, k) mod p

    Args:
        n: 非负整数
        k: 非负整数（允许 k > n，此时返回 0）
        p: 素数特征
    Returns:
        [0, p) 中的剩余
    """
    q = _as_int(p)
    if n < 0 or k < 0:
        raise PreconditionError(f"参数必须非负: n={n}, k={k}")
    if k > n:
        return 0
    result = 1
    while n or k:
        n_digit, k_digit = n % q, k % q
        if k_digit > n_digit:
            return 0
        result = result * _small_binom(n_digit, k_digit, q) % q
        n //= q
        k //= q
    return result


def alpha_power_expansion(m: int, p: "PrimeChar | int") -> List[int]:
    """
    α^m = Σ_h C(m, h)(-1)^h t^h ⊗ t^{m-h} 的系数表 [c_0, ..., c_m]（模 p）
    """
    q = _as_int(p)
    return [binom_mod(m, h, q) * (-1) ** h % q for h in range(m + 1)]


def check_lemma25(p: "PrimeChar | int") -> bool:
    """
    校验两组同余式，左边走 Lucas，右边直接做模运算

    - 0 <= h <= p-1: C(p-1, h) ≡ (-1)^h
    - 0 <= h <= p-2: C(p-2, h) ≡ (-1)^h (h+1)
    """
    q = _as_int(p)
    for h in range(q):
        if binom_mod(q - 1, h, q) != (-1) ** h % q:
            logger.warning(f"C({q - 1},{h}) mod {q} 不满足 (-1)^h")
            return False
    for h in range(q - 1):
        if binom_mod(q - 2, h, q) != ((-1) ** h * (h + 1)) % q:
            logger.warning(f"C({q - 2},{h}) mod {q} 不满足 (-1)^h(h+1)")
            return False
    return True
