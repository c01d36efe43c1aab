"""校验库的异常类型"""


class VerificationError(Exception):
    """所有校验相关异常的基类"""


class PreconditionError(VerificationError, ValueError):
    """调用方违反了操作的前置条件（秩、层数、亏格、素数等）"""


class ContractViolation(VerificationError, RuntimeError):
    """内部不变量被破坏，例如 p 或截断阶不一致、基变换求解失败"""
