"""
失稳判定引擎

- subbundle_class: 三种情形下 F_*^n E ∧ F_*^n E 的典范子丛数值类
- verdict: 子丛与 ∧² 的斜率差（精确），与闭式核对
- composed_subbundle_class: 由一层单射逐层复合得到的子丛类（投影公式）
- cohom_certificate: F_*^n L 不是上同调稳定的度数证书
"""

from fractions import Fraction
from typing import Tuple

from loguru import logger

from .data_models import BundleClass, CaseTag, CohomCertificate, CurveContext, DestabilizationVerdict
from .errors import ContractViolation, PreconditionError
from .slope_calculus import (
    b1_class,
    destabilizes,
    frob_push,
    omega_power,
    slope,
    tensor,
    wedge2,
)


def twist_exponent(case_tag: CaseTag, p: int, n: int) -> int:
    """各情形中 Ω_C 的幂次"""
    if case_tag is CaseTag.HIGH_RANK:
        return p ** n - 1
    if case_tag is CaseTag.LINE_ODD:
        return p ** n - 2
    return p ** (n - 1) - 1


def subbundle_class(bundle: BundleClass, n: int, ctx: CurveContext) -> Tuple[CaseTag, BundleClass]:
    """
    F_*^n E ∧ F_*^n E 的典范子丛

    Returns:
        (情形, 子丛数值类)
    """
    if n < 1:
        raise PreconditionError(f"子丛构造要求 n >= 1: n={n}")
    tag = CaseTag.for_rank(bundle.rank, ctx.p)
    twist = omega_power(ctx, twist_exponent(tag, ctx.p, n))
    if tag is CaseTag.HIGH_RANK:
        sub = frob_push(tensor(wedge2(bundle), twist), n, ctx)
    elif tag is CaseTag.LINE_ODD:
        sub = frob_push(tensor(tensor(bundle, bundle), twist), n, ctx)
    else:
        # n = 1 时退化为 F_*^0(B_1 ⊗ E) = B_1 ⊗ E
        sub = frob_push(tensor(tensor(b1_class(ctx), bundle), twist), n - 1, ctx)
    return tag, sub


def closed_form_gap(case_tag: CaseTag, p: int, n: int, g: int) -> Fraction:
    """斜率差的闭式，只用于核对直接计算的结果"""
    q = p ** n
    if case_tag is CaseTag.HIGH_RANK:
        return Fraction((q - 1) * (g - 1), q)
    if case_tag is CaseTag.LINE_ODD:
        return Fraction((q - 3) * (g - 1), q)
    half = 2 ** (n - 1)
    return Fraction((half - 1) * (g - 1), half)


def verdict(bundle: BundleClass, n: int, ctx: CurveContext) -> DestabilizationVerdict:
    """
    子丛斜率减去 μ(F_*^n E ∧ F_*^n E)
    """
    ctx.require_hyperbolic()
    tag, sub = subbundle_class(bundle, n, ctx)
    ambient = wedge2(frob_push(bundle, n, ctx))
    gap = slope(sub) - slope(ambient)
    # 分数差与交叉相乘两条路径必须一致
    if destabilizes(sub, ambient) != (gap > 0):
        raise ContractViolation(f"斜率比较不一致: {sub} vs {ambient}, gap={gap}")

    secondary_ambient = None
    secondary_gap = None
    if tag is CaseTag.LINE_CHAR2 and n >= 2:
        secondary_ambient = wedge2(frob_push(bundle, n - 1, ctx))
        secondary_gap = slope(sub) - slope(secondary_ambient)

    result = DestabilizationVerdict(
        case_tag=tag,
        sub=sub,
        ambient=ambient,
        gap=gap,
        n=n,
        expected_gap=closed_form_gap(tag, ctx.p, n, ctx.g),
        secondary_ambient=secondary_ambient,
        secondary_gap=secondary_gap,
    )
    if not result.closed_form_ok:
        logger.warning(
            f"斜率差与闭式不一致: {tag.value} p={ctx.p} g={ctx.g} n={n} "
            f"{bundle} gap={gap} expected={result.expected_gap}"
        )
    return result


def expected_destabilized(rank: int, p: int, n: int) -> bool:
    """r > 1 或 p^n > 3"""
    return rank > 1 or p ** n > 3


def _compose_step(sub: BundleClass, ctx: CurveContext) -> BundleClass:
    """
    把 S ⊂ ∧²F_*^j E 沿一层高秩单射推到 F_*(S ⊗ Ω^{p−1}) ⊂ ∧²F_*^{j+1} E
    """
    return frob_push(tensor(sub, omega_power(ctx, ctx.p - 1)), 1, ctx)


def char2_wedge_identity(bundle: BundleClass, ctx: CurveContext) -> bool:
    """p = 2 时 ∧²(F_*L) 与 B_1 ⊗ L 的数值类相同"""
    if ctx.p != 2 or bundle.rank != 1:
        raise PreconditionError(f"只适用于 p = 2 的线丛: p={ctx.p}, rank={bundle.rank}")
    return wedge2(frob_push(bundle, 1, ctx)) == tensor(b1_class(ctx), bundle)


def composed_subbundle_class(bundle: BundleClass, n: int, ctx: CurveContext) -> BundleClass:
    """
    由第一层的单射逐层复合得到第 n 层子丛，并与 subbundle_class 比对

    Raises:
        ContractViolation: 复合结果与直接构造不一致
    """
    if n < 1:
        raise PreconditionError(f"子丛构造要求 n >= 1: n={n}")
    tag = CaseTag.for_rank(bundle.rank, ctx.p)
    if tag is CaseTag.HIGH_RANK:
        first = frob_push(tensor(wedge2(bundle), omega_power(ctx, ctx.p - 1)), 1, ctx)
    elif tag is CaseTag.LINE_ODD:
        first = frob_push(tensor(tensor(bundle, bundle), omega_power(ctx, ctx.p - 2)), 1, ctx)
    else:
        if not char2_wedge_identity(bundle, ctx):
            raise ContractViolation(f"∧²F_*L ≠ B_1⊗L: {bundle}")
        first = tensor(b1_class(ctx), bundle)

    current = first
    for _ in range(n - 1):
        current = _compose_step(current, ctx)

    _, direct = subbundle_class(bundle, n, ctx)
    if current != direct:
        raise ContractViolation(
            f"复合单射与直接构造不一致: {tag.value} n={n} {current} vs {direct}"
        )
    return current


def corollary_check(ctx: CurveContext, n: int, degree: int) -> DestabilizationVerdict:
    """
    E = F_*^n L（稳定性取自引用结论）; n > 1 时 ∧²E 必须失稳
    """
    result = verdict(BundleClass(1, degree), n, ctx)
    if n > 1 and not result.destabilized:
        logger.warning(f"推论不成立: p={ctx.p} g={ctx.g} n={n} d={degree}")
    return result


def cohom_certificate(ctx: CurveContext, n: int) -> CohomCertificate:
    """
    取满足整除条件的最小非负 d，构造 deg A 并检查 deg A >= 2μ(F_*^n L)
    以及见证扭曲的度数为 0
    """
    ctx.require_hyperbolic()
    if n < 2:
        raise PreconditionError(f"上同调证书要求 n > 1: n={n}")
    p, g = ctx.p, ctx.g
    base = (p ** n - 1) * (g - 1)

    if p == 2:
        modulus = p ** (n - 1)

        def quantity(d: int) -> int:
            return d + base
    else:
        modulus = p ** n

        def quantity(d: int) -> int:
            return 2 * d + 2 * base

    d = next(x for x in range(modulus) if quantity(x) % modulus == 0)
    divisible = quantity(d) % modulus == 0
    deg_a = quantity(d) // modulus
    line = BundleClass(1, d)
    threshold = 2 * slope(frob_push(line, n, ctx))

    if p == 2:
        twisted = tensor(tensor(b1_class(ctx), line), omega_power(ctx, p ** (n - 1) - 1))
    else:
        twisted = tensor(tensor(line, line), omega_power(ctx, p ** n - 1))
    witness = twisted.degree - modulus * deg_a

    cert = CohomCertificate(
        p=p,
        g=g,
        n=n,
        chosen_degree=d,
        deg_a=deg_a,
        threshold=threshold,
        divisibility_ok=divisible,
        witness_twist_degree=witness,
    )
    logger.debug(f"上同调证书 p={p} g={g} n={n}: d={d}, deg A={deg_a}, valid={cert.valid}")
    return cert
