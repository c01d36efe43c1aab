"""工具函数"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Union

from loguru import logger


def format_fraction(value: Union[Fraction, int]) -> str:
    """
    精确分数的字符串形式

    整数输出 "n"，其余输出最简 "num/den"（分母为正）。
    """
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def dump_document(data: Dict[str, Any]) -> str:
    """文档序列化: 缩进 2、保留非 ASCII、末尾换行"""
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def write_text(text: str, file_path: Union[str, Path]) -> Path:
    """
    写文本文件，自动创建上级目录

    Args:
        text: 文件内容
        file_path: 文件路径
    Returns:
        写入的路径
    Raises:
        OSError: 目录不可创建或文件不可写
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info(f"已保存: {path}")
    return path
