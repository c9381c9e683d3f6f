"""配置管理"""

import os
import logging
from typing import Optional, Dict, Any

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

from .exceptions import GuardException, TooLargeError

logger = logging.getLogger(__name__)

load_dotenv()


class GuardLimits(BaseModel):
    """资源守卫配置"""

    max_total_sweeps: int = Field(default=10**9, description="单次运行允许的最大扫描次数")
    max_spin_bits: int = Field(default=24, description="自旋枚举的最大宽度")
    max_edge_bits: int = Field(default=26, description="边枚举的最大宽度")
    max_joint_bits: int = Field(default=26, description="联合枚举（自旋+边）的最大宽度")
    max_product_components: int = Field(default=20, description="乘积测度枚举的最大分量数")
    max_box_side: int = Field(default=512, description="盒子参数 N 的上限")

    @field_validator("*")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("守卫限制必须为正数")
        return value

    def check_sweeps(self, total: int) -> None:
        if total > self.max_total_sweeps:
            raise GuardException("max_total_sweeps", total, self.max_total_sweeps)

    def check_width(self, kind: str, width: int) -> None:
        """检查枚举宽度，kind 为 spin / edge / joint"""
        limit = {
            "spin": self.max_spin_bits,
            "edge": self.max_edge_bits,
            "joint": self.max_joint_bits,
        }[kind]
        if width > limit:
            raise TooLargeError(f"max_{kind}_bits", width, limit)

    def check_box(self, N: int) -> None:
        if N > self.max_box_side:
            raise GuardException("max_box_side", N, self.max_box_side)

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()


class RffkimConfig(BaseModel):
    """rffkim运行时配置"""

    threads: int = Field(default=os.cpu_count() or 1, description="并行线程数上限")
    log_level: str = Field(default="INFO", description="日志级别")
    cache_dir: str = Field(default="./rffkim_runs", description="结果存储目录")
    guards: GuardLimits = Field(default_factory=GuardLimits)

    @classmethod
    def from_env(cls) -> "RffkimConfig":
        """从环境变量创建配置"""
        threads = os.getenv("RFFKIM_THREADS")
        max_sweeps = os.getenv("RFFKIM_MAX_SWEEPS")
        guards = GuardLimits()
        if max_sweeps:
            guards = GuardLimits(max_total_sweeps=int(max_sweeps))
        return cls(
            threads=max(1, int(threads)) if threads else (os.cpu_count() or 1),
            log_level=os.getenv("RFFKIM_LOG_LEVEL", "INFO"),
            cache_dir=os.getenv("RFFKIM_CACHE_DIR", "./rffkim_runs"),
            guards=guards,
        )

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典"""
        return self.model_dump()


# 全局配置实例
_config: Optional[RffkimConfig] = None


def get_config() -> RffkimConfig:
    """获取全局配置（首次调用时从环境变量构建）"""
    global _config
    if _config is None:
        _config = RffkimConfig.from_env()
    return _config


def update_config(**kwargs) -> RffkimConfig:
    """更新全局配置"""
    global _config
    current = get_config().model_dump()
    current.update(kwargs)
    _config = RffkimConfig(**current)
    logger.info("✅ 配置已更新: %s", sorted(kwargs))
    return _config


def reset_config() -> None:
    """丢弃全局配置，下次访问时重新读取环境变量"""
    global _config
    _config = None
