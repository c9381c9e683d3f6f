"""辅助工具函数"""

from fractions import Fraction
from pathlib import Path
from typing import List, Union


def ensure_dir(path: Union[str, Path]) -> Path:
    """确保目录存在"""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def parse_int_list(text: str) -> List[int]:
    """
    解析逗号分隔的整数列表

    Args:
        text: 例如 "8,16,32"，空串返回空列表

    Returns:
        整数列表
    """
    return [int(part) for part in text.split(",") if part.strip()]


def parse_fraction(text: str) -> Fraction:
    """解析 "15/16"、"0.5" 这类指数写法"""
    return Fraction(text.strip()).limit_denominator(10**6)
