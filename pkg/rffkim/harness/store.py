"""只追加的结果存储，按 (配置, 版本) 的内容哈希索引"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, Optional, Union

from ..core.exceptions import RffkimException
from ..utils.helpers import ensure_dir
from ..utils.serialization import canonical_json, content_hash, load_from_file, save_to_file
from ..version import __version__

logger = logging.getLogger(__name__)

INDEX_NAME = "index.jsonl"
MANIFEST_NAME = "manifest.json"


def run_key(config: Dict[str, Any], version: str = __version__) -> str:
    """sha256(canonical_json({config, version}))"""
    return content_hash({"config": config, "version": version})


@dataclass
class StoreEntry:
    """一次运行的存储记录"""

    key: str
    path: Path
    manifest: Dict[str, Any] = field(default_factory=dict)
    cache_hit: bool = False

    def file(self, name: str) -> Path:
        return self.path / name


class ResultStore:
    """
    结果存储

    每个运行一个目录 <root>/<key>/，写入后不再修改；index.jsonl 逐行追加
    已完成运行的键。单写者使用。

    Args:
        root: 存储根目录
    """

    def __init__(self, root: Union[str, Path]):
        self.root = ensure_dir(root)
        self.index_path = self.root / INDEX_NAME

    def entry_path(self, key: str) -> Path:
        return self.root / key

    def has(self, key: str) -> bool:
        return (self.entry_path(key) / MANIFEST_NAME).exists()

    def get(self, key: str) -> Optional[StoreEntry]:
        if not self.has(key):
            return None
        path = self.entry_path(key)
        return StoreEntry(key=key, path=path, manifest=load_from_file(path / MANIFEST_NAME), cache_hit=True)

    def begin(self, key: str) -> Path:
        """创建运行目录（已完成的键不可重写）"""
        if self.has(key):
            raise RffkimException(f"运行 {key[:12]} 已存在，存储只追加")
        return ensure_dir(self.entry_path(key))

    def commit(self, key: str, manifest: Dict[str, Any]) -> StoreEntry:
        """写入清单并追加索引，标志运行完成"""
        path = self.entry_path(key)
        save_to_file(manifest, path / MANIFEST_NAME)
        with open(self.index_path, "a", encoding="utf-8", newline="\n") as f:
            f.write(canonical_json({"key": key, "name": manifest.get("name", "")}))
            f.write("\n")
        logger.info("💾 已保存运行 %s", key[:12])
        return StoreEntry(key=key, path=path, manifest=manifest)

    def keys(self) -> Iterator[str]:
        if not self.index_path.exists():
            return
        with open(self.index_path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    yield json.loads(line)["key"]
