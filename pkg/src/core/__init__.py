"""
核心模块

Frobenius 推出楔积失稳的验证逻辑。

模块结构：
- modp.py: 素数特征与模 p 组合数
- truncated_poly.py: F_p[s]/(s^M) 上的矩阵运算
- local_model.py: 局部模型 k[t]⊗_{k[s]}k[t]
- slope_calculus.py: (秩, 度数) 类的斜率运算
- destabilization.py: 失稳判定与上同调凭证
- sweep.py: 参数网格扫描
- local_verifier.py: 局部模型检查套件
- main.py: 命令行入口
"""

from .data_models import (
    BundleClass,
    CaseTag,
    CheckResult,
    CohomCertificate,
    CurveContext,
    DestabilizationVerdict,
    FiltrationReport,
    SymmetryReport,
    WedgeKernelReport,
)
from .errors import ContractViolation, PreconditionError, VerificationError
from .modp import PrimeChar, binom_mod

__all__ = [
    # Enums
    "CaseTag",
    # Data classes
    "BundleClass",
    "CheckResult",
    "CohomCertificate",
    "CurveContext",
    "DestabilizationVerdict",
    "FiltrationReport",
    "PrimeChar",
    "SymmetryReport",
    "WedgeKernelReport",
    # Errors
    "ContractViolation",
    "PreconditionError",
    "VerificationError",
    "binom_mod",
]
