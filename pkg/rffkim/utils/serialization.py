"""序列化工具"""

import hashlib
import json
from pathlib import Path
from typing import Any, Union

import numpy as np


def _default(obj: Any) -> Any:
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if hasattr(obj, "model_dump"):
        return obj.model_dump()
    raise TypeError(f"无法序列化类型: {type(obj).__name__}")


def canonical_json(obj: Any) -> str:
    """键排序、无多余空白的规范 JSON，用于内容哈希"""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, default=_default)


def content_hash(obj: Any) -> str:
    """规范 JSON 的 sha256 十六进制摘要"""
    return hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()


def serialize_object(obj: Any) -> str:
    """
    序列化对象

    Args:
        obj: 要序列化的对象

    Returns:
        带缩进、键排序的 JSON 字符串
    """
    return json.dumps(obj, ensure_ascii=False, indent=2, sort_keys=True, default=_default)


def save_to_file(obj: Any, filepath: Union[str, Path]) -> None:
    """保存对象到 JSON 文件"""
    filepath = Path(filepath)
    with open(filepath, "w", encoding="utf-8", newline="\n") as f:
        f.write(serialize_object(obj))
        f.write("\n")


def load_from_file(filepath: Union[str, Path]) -> Any:
    """从 JSON 文件加载对象"""
    with open(Path(filepath), "r", encoding="utf-8") as f:
        return json.load(f)
