"""
LocalModelVerifier - 局部模型检查套件

输入：特征 p、秩 r、截断阶 M、随机种子
输出：CheckResult 列表（每项检查一行）

检查项包括：
1. α^p = 0
2. 联络公式 ∇(α^l) = −lα^{l−1}
3. Leibniz 法则
4. 滤过平移 ∇(I_{l+1}) ⊂ I_l
5. 分次映射为乘 −l
6. I_1 为乘法映射的核
7. 交换对合
8. 坐标往返
9. 对称性分类
10. 楔积核（r >= 2）
11. 模 p 组合数同余
"""

from typing import Callable, List

import numpy as np
from loguru import logger

from .data_models import CheckResult
from .local_model import (
    alpha,
    basis_element,
    classify_symmetry,
    connection,
    coordinates,
    expand,
    filtration_level,
    multiplication_map,
    multiply,
    power,
    random_element,
    swap,
    unit,
    wedge_kernel_report,
)
from .modp import PrimeChar, check_lemma25


class LocalModelVerifier:
    """
    局部模型验证器

    每个检查都是独立方法，按固定顺序执行，任何一项失败都不会中断后续检查。
    """

    def __init__(self, p: int, rank: int = 1, trunc: int = 2, seed: int = 0, random_pairs: int = 100):
        self.char = PrimeChar(p)
        self.p = p
        self.rank = rank
        self.trunc = trunc
        self.seed = seed
        self.random_pairs = random_pairs
        self.checks: List[Callable[[], CheckResult]] = [
            self._check_lemma25,
            self._check_alpha_nilpotent,
            self._check_connection_formula,
            self._check_leibniz,
            self._check_filtration_shift,
            self._check_graded_isomorphism,
            self._check_multiplication_kernel,
            self._check_swap,
            self._check_coordinates_roundtrip,
            self._check_symmetry,
        ]
        if rank >= 2:
            self.checks.append(self._check_wedge_kernel)

    def _rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, self.p, salt])

    def run(self) -> List[CheckResult]:
        """执行全部检查"""
        logger.info(f"局部模型检查: p={self.p}, r={self.rank}, M={self.trunc}, seed={self.seed}")
        results = []
        for check in self.checks:
            result = check()
            if result.passed:
                logger.debug(f"通过: {result.name}")
            else:
                logger.warning(f"失败: {result.name} {result.message or ''}")
            results.append(result)
        if all(r.passed for r in results):
            logger.success(f"p={self.p} 全部 {len(results)} 项检查通过")
        return results

    # ------------------------------------------------------------------

    def _check_lemma25(self) -> CheckResult:
        return CheckResult("lemma25_congruences", check_lemma25(self.char), {"p": self.p})

    def _check_alpha_nilpotent(self) -> CheckResult:
        a = alpha(self.char, self.trunc)
        top = power(a, self.p - 1)
        vanishes = power(a, self.p).is_zero()
        return CheckResult(
            "alpha_nilpotent",
            vanishes and not top.is_zero(),
            {"alpha_p_zero": vanishes, "alpha_top_nonzero": not top.is_zero()},
        )

    def _check_connection_formula(self) -> CheckResult:
        a = alpha(self.char, self.trunc)
        bad = []
        for l in range(1, self.p):
            lhs = connection(power(a, l))
            rhs = power(a, l - 1) * (-l)
            if lhs != rhs:
                bad.append(l)
        constants_flat = connection(unit(self.char, self.trunc)).is_zero()
        return CheckResult(
            "connection_formula",
            not bad and constants_flat,
            {"levels": self.p - 1, "constants_horizontal": constants_flat},
            message=f"l={bad}" if bad else None,
        )

    def _check_leibniz(self) -> CheckResult:
        rng = self._rng(1)
        failures = 0
        for _ in range(self.random_pairs):
            x = random_element(self.char, rng, self.trunc)
            y = random_element(self.char, rng, self.trunc)
            lhs = connection(multiply(x, y))
            rhs = multiply(connection(x), y) + multiply(x, connection(y))
            if lhs != rhs:
                failures += 1
        return CheckResult(
            "leibniz_rule",
            failures == 0,
            {"pairs": self.random_pairs, "failures": failures},
        )

    def _check_filtration_shift(self) -> CheckResult:
        bad = []
        for m in range(self.p):
            for k in range(self.p):
                x = basis_element(self.char, k, m, self.trunc)
                if filtration_level(connection(x)) < m - 1:
                    bad.append((k, m))
        return CheckResult(
            "filtration_shift",
            not bad,
            {"basis_elements": self.p * self.p},
            message=f"(k,m)={bad}" if bad else None,
        )

    def _check_graded_isomorphism(self) -> CheckResult:
        bad = []
        for l in range(1, self.p):
            if (-l) % self.p == 0:
                bad.append(("zero_multiplier", l))
            for k in range(self.p):
                image = connection(basis_element(self.char, k, l, self.trunc))
                expected = basis_element(self.char, k, l - 1, self.trunc) * (-l)
                if filtration_level(image - expected) < l:
                    bad.append((k, l))
        return CheckResult(
            "graded_isomorphism",
            not bad,
            {"multipliers": [(-l) % self.p for l in range(1, self.p)]},
            message=f"{bad}" if bad else None,
        )

    def _check_multiplication_kernel(self) -> CheckResult:
        bad = []
        for m in range(self.p):
            for k in range(self.p):
                image = multiplication_map(basis_element(self.char, k, m, self.trunc))
                if m >= 1:
                    ok = not np.any(image)
                else:
                    # V_0/V_1 ≅ E: t^k ↦ t^k
                    expected = np.zeros_like(image)
                    expected[k, 0] = 1
                    ok = bool(np.array_equal(image, expected))
                if not ok:
                    bad.append((k, m))
        return CheckResult("multiplication_kernel", not bad, {}, message=f"{bad}" if bad else None)

    def _check_swap(self) -> CheckResult:
        a = alpha(self.char, self.trunc)
        signs_ok = all(
            swap(power(a, l)) == power(a, l) * ((-1) ** l) for l in range(self.p)
        )
        rng = self._rng(2)
        ring_map_ok = True
        involution_ok = True
        for _ in range(min(self.random_pairs, 20)):
            x = random_element(self.char, rng, self.trunc)
            y = random_element(self.char, rng, self.trunc)
            involution_ok &= swap(swap(x)) == x
            ring_map_ok &= swap(multiply(x, y)) == multiply(swap(x), swap(y))
        return CheckResult(
            "swap_involution",
            signs_ok and ring_map_ok and involution_ok,
            {"alpha_signs": signs_ok, "ring_map": ring_map_ok, "involution": involution_ok},
        )

    def _check_coordinates_roundtrip(self) -> CheckResult:
        rng = self._rng(3)
        failures = 0
        for _ in range(self.random_pairs):
            x = random_element(self.char, rng, self.trunc)
            c = coordinates(x)
            if expand(c) != x or coordinates(expand(c)) != c:
                failures += 1
        return CheckResult(
            "coordinates_roundtrip",
            failures == 0,
            {"samples": self.random_pairs, "failures": failures},
        )

    def _check_symmetry(self) -> CheckResult:
        report = classify_symmetry(self.char, self.trunc)
        sub_top = [row.k for row in report.symmetric_rows(self.p - 2)]
        return CheckResult(
            "symmetry_classification",
            report.matches,
            {
                **report.to_dict(),
                "top_symmetric": len(report.symmetric_rows(self.p - 1)),
                "subtop_symmetric_k": sub_top,
            },
        )

    def _check_wedge_kernel(self) -> CheckResult:
        report = wedge_kernel_report(self.char, self.rank, self.trunc)
        return CheckResult("wedge_kernel", report.passed, report.to_dict())
