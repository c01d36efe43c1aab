"""
斜率演算

对 (rank, degree) 数值类做精确的度数记账: Frobenius 推出与拉回、张量、二次外幂、
典范丛的幂、B_1，以及两条滤过的度数剖面。
"""

from fractions import Fraction
from typing import List

from .data_models import BundleClass, CurveContext, FiltrationReport
from .errors import ContractViolation, PreconditionError


def slope(bundle: BundleClass) -> Fraction:
    """μ = deg / rk"""
    return Fraction(bundle.degree, bundle.rank)


def frob_push(bundle: BundleClass, n: int, ctx: CurveContext) -> BundleClass:
    """
    F_*^n 的数值类

    rank = r·p^n，degree = d + r·(p^n − 1)(g − 1)；n = 0 为恒等。
    """
    if n < 0:
        raise PreconditionError(f"n 必须 >= 0: n={n}")
    q = ctx.p ** n
    return BundleClass(bundle.rank * q, bundle.degree + bundle.rank * (q - 1) * (ctx.g - 1))


def pullback(bundle: BundleClass, ctx: CurveContext) -> BundleClass:
    """F^* 保持秩，度数乘 p"""
    return BundleClass(bundle.rank, ctx.p * bundle.degree)


def tensor(first: BundleClass, second: BundleClass) -> BundleClass:
    return BundleClass(
        first.rank * second.rank,
        second.rank * first.degree + first.rank * second.degree,
    )


def wedge2(bundle: BundleClass) -> BundleClass:
    """∧²: rank r(r−1)/2，degree (r−1)·d"""
    if bundle.rank < 2:
        raise PreconditionError(f"∧² 要求秩 >= 2: rank={bundle.rank}")
    return BundleClass(bundle.rank * (bundle.rank - 1) // 2, (bundle.rank - 1) * bundle.degree)


def omega_power(ctx: CurveContext, m: int) -> BundleClass:
    """Ω_C^m"""
    if m < 0:
        raise PreconditionError(f"Ω 的幂必须 >= 0: m={m}")
    return BundleClass(1, m * (2 * ctx.g - 2))


def b1_class(ctx: CurveContext) -> BundleClass:
    """B_1: rank p−1，degree (p−1)(g−1)"""
    return BundleClass(ctx.p - 1, (ctx.p - 1) * (ctx.g - 1))


def projection_push(inner: BundleClass, twist: BundleClass, ctx: CurveContext) -> BundleClass:
    """
    投影公式 F_*(X ⊗ F^*M) ≅ F_*(X) ⊗ M，两边分别计算后比对
    """
    direct = frob_push(tensor(inner, pullback(twist, ctx)), 1, ctx)
    via = tensor(frob_push(inner, 1, ctx), twist)
    if direct != via:
        raise ContractViolation(f"投影公式不成立: {direct} vs {via}")
    return direct


def destabilizes(sub: BundleClass, ambient: BundleClass) -> bool:
    """μ(sub) > μ(ambient)，交叉相乘比较"""
    return sub.degree * ambient.rank > ambient.degree * sub.rank


def canonical_filtration_profile(bundle: BundleClass, ctx: CurveContext) -> FiltrationReport:
    """
    F^*F_*E 的典范滤过: V_i/V_{i+1} ≅ E ⊗ Ω^i，i = 0..p−1
    """
    quotients: List[BundleClass] = [tensor(bundle, omega_power(ctx, i)) for i in range(ctx.p)]
    total = pullback(frob_push(bundle, 1, ctx), ctx)
    return FiltrationReport(quotients=quotients, total=total, name="canonical")


def pushforward_tensor_profile(bundle: BundleClass, ctx: CurveContext) -> FiltrationReport:
    """
    F_*E ⊗ F_*E 的滤过: 分次商 F_*(E ⊗ E ⊗ Ω^i)
    """
    square = tensor(bundle, bundle)
    quotients = [frob_push(tensor(square, omega_power(ctx, i)), 1, ctx) for i in range(ctx.p)]
    pushed = frob_push(bundle, 1, ctx)
    # F_*(E ⊗ F^*F_*E) ≅ F_*E ⊗ F_*E
    total = projection_push(bundle, pushed, ctx)
    return FiltrationReport(quotients=quotients, total=total, name="pushforward_tensor")
