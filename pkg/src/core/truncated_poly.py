"""
截断多项式环 R = F_p[s]/(s^M) 上的线性代数

多项式用长度为 M 的 numpy 整数数组表示（下标即 s 的次数），
矩阵用形状为 (rows, cols, M) 的数组表示。
消元只用常数项非零（即 R 中可逆）的元素做主元；
由此得到的独立性结论在 F_p[s] 上同样成立。
"""

from typing import List, Tuple

import numpy as np

from .errors import ContractViolation


def reduce(arr: np.ndarray, p: int) -> np.ndarray:
    return np.mod(arr, p).astype(np.int64)


def is_unit(a: np.ndarray, p: int) -> bool:
    return int(a[0]) % p != 0


def poly_inv(a: np.ndarray, p: int) -> np.ndarray:
    """R 中可逆元的逆"""
    if not is_unit(a, p):
        raise ContractViolation(f"非可逆元: {a.tolist()}")
    m = a.shape[-1]
    inv0 = pow(int(a[0]), -1, p)
    b = np.zeros(m, dtype=np.int64)
    b[0] = inv0
    for k in range(1, m):
        acc = sum(int(a[i]) * int(b[k - i]) for i in range(1, k + 1))
        b[k] = (-inv0 * acc) % p
    return b


def _scale(block: np.ndarray, f: np.ndarray, p: int) -> np.ndarray:
    """block 的最后一维按多项式 f 做截断卷积"""
    m = block.shape[-1]
    out = np.zeros_like(block)
    for e in range(m):
        if f[e]:
            out[..., e:] += int(f[e]) * block[..., : m - e]
    return reduce(out, p)


def matvec(mat: np.ndarray, vec: np.ndarray, p: int) -> np.ndarray:
    """
    (rows, cols, M) 矩阵乘 (cols, M) 向量
    """
    m = mat.shape[-1]
    out = np.zeros((mat.shape[0], m), dtype=np.int64)
    for e in range(m):
        # 次数 e 的系数与向量的前 m-e 项相乘后平移
        out[:, e:] += mat[:, :, e] @ vec[:, : m - e]
    return reduce(out, p)


def unit_pivot_reduce(mat: np.ndarray, p: int) -> Tuple[np.ndarray, List[Tuple[int, int]]]:
    """
    行消元到约化阶梯形（只用可逆主元）

    Returns:
        (约化后的矩阵, 主元位置列表 [(row, col), ...])
    """
    work = reduce(mat.copy(), p)
    rows, cols, _ = work.shape
    pivots: List[Tuple[int, int]] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = [i for i in range(r, rows) if is_unit(work[i, c], p)]
        if not candidates:
            continue
        i = candidates[0]
        if i != r:
            work[[r, i]] = work[[i, r]]
        work[r] = _scale(work[r], poly_inv(work[r, c], p), p)
        factors = work[:, c, :].copy()
        factors[r] = 0
        m = work.shape[-1]
        for e in range(m):
            col_f = factors[:, e]
            if np.any(col_f):
                work[:, :, e:] -= col_f[:, None, None] * work[r][None, :, : m - e]
        work = reduce(work, p)
        pivots.append((r, c))
        r += 1
    return work, pivots


def certified_rank(mat: np.ndarray, p: int) -> int:
    """可逆主元个数：F_p[s] 上秩的下界，等于行数时行向量线性无关"""
    _, pivots = unit_pivot_reduce(mat, p)
    return len(pivots)


def invert(mat: np.ndarray, p: int) -> np.ndarray:
    """
    方阵求逆（增广 [A | I] 消元）

    Raises:
        ContractViolation: 主元不全可逆
    """
    n, n2, m = mat.shape
    if n != n2:
        raise ContractViolation(f"非方阵: {mat.shape}")
    ident = np.zeros((n, n, m), dtype=np.int64)
    ident[np.arange(n), np.arange(n), 0] = 1
    aug = np.concatenate([reduce(mat, p), ident], axis=1)
    reduced, pivots = unit_pivot_reduce(aug, p)
    if len(pivots) != n or any(c >= n for _, c in pivots):
        raise ContractViolation(f"基变换矩阵不可逆: 仅有 {len(pivots)}/{n} 个可逆主元")
    return reduced[:, n:, :]
