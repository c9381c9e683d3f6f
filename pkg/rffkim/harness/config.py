"""
实验配置

配置文件为 INI 风格的 key = value 文本，分节 [experiment] [schedule] [chain]
[disorder] [output] [guards]，解析为 pydantic 的 ExperimentConfig。
to_ini() 输出规范文本，parse_ini(to_ini(c)) == c。
"""

import configparser
import io
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..core.config import GuardLimits
from ..core.constants import (
    REGIMES,
    alpha_of_temperature,
    regime_of_temperature,
    temperature_of_regime,
)
from ..core.exceptions import ConfigException
from ..mcmc.state import ChainPlan
from ..utils.helpers import parse_fraction, parse_int_list

logger = logging.getLogger(__name__)

SECTIONS = ("experiment", "schedule", "chain", "disorder", "output", "guards")


class ChainSettings(BaseModel):
    """链设置；burn_in = 0 表示按 N 与 T 取默认预热"""

    burn_in: int = Field(default=0, ge=0)
    thin: int = Field(default=1, ge=1)
    samples: int = Field(default=200, ge=1)
    replicas: int = Field(default=2, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)

    def plan_for(self, N: int, T: float, stream: int = 0) -> ChainPlan:
        common = dict(thin=self.thin, samples=self.samples, replicas=self.replicas, seed=self.seed, stream=stream)
        if self.burn_in == 0:
            return ChainPlan.with_default_burn_in(max(N, 1), T, **common)
        return ChainPlan(burn_in=self.burn_in, **common)


class ExperimentConfig(BaseModel):
    """
    一次扫描实验的完整描述

    Attributes:
        name: 实验名
        model: rfim / rffk
        temperature: 温度；为 None 时由 regime 给出代表温度
        regime: low / crit / high
        boundary: 边界名称，空串表示按模型取默认（rfim: plus，rffk: wired）
        n_list: 盒子参数网格
        theta: ε = θ·N^{−α} 中的 θ
        alphas: 指数列表，auto 表示按温度取 α(T)
        chain: 链设置
        disorder_seed_base, disorder_count: 外场种子 base, base+1, ...
        output_dir: 若给出，sweep CSV 与 SVG 另复制一份到该目录；不参与缓存键
        csv_name, plot: 输出设置
        guards: 资源守卫
    """

    name: str = "experiment"
    model: str = "rffk"
    temperature: Optional[float] = None
    regime: Optional[str] = None
    boundary: str = ""
    n_list: List[int] = Field(default_factory=list)
    theta: float = Field(default=1.0, gt=0)
    alphas: List[str] = Field(default_factory=lambda: ["auto"])
    chain: ChainSettings = Field(default_factory=ChainSettings)
    disorder_seed_base: int = Field(default=0, ge=0)
    disorder_count: int = Field(default=32, ge=1)
    output_dir: Optional[str] = None
    csv_name: str = "sweep.csv"
    plot: bool = False
    guards: GuardLimits = Field(default_factory=GuardLimits)

    @field_validator("model")
    @classmethod
    def _model(cls, v: str) -> str:
        if v not in ("rfim", "rffk"):
            raise ValueError(f"model 只能是 rfim 或 rffk: {v}")
        return v

    @field_validator("regime")
    @classmethod
    def _regime(cls, v: Optional[str]) -> Optional[str]:
        if v is not None and v not in REGIMES:
            raise ValueError(f"未知温区: {v}")
        return v

    @field_validator("n_list")
    @classmethod
    def _n_list(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("N 必须为正整数")
        return v

    @field_validator("alphas")
    @classmethod
    def _alphas(cls, v: List[str]) -> List[str]:
        if not v:
            raise ValueError("至少需要一个 α")
        for a in v:
            if a != "auto":
                parse_fraction(a)
        return v

    @model_validator(mode="after")
    def _temperature_or_regime(self) -> "ExperimentConfig":
        if self.temperature is None and self.regime is None:
            raise ValueError("temperature 与 regime 至少给出一个")
        if self.temperature is not None and self.temperature <= 0:
            raise ValueError("温度必须为正")
        return self

    # ------------------------------------------------------------------ 派生量

    @property
    def T(self) -> float:
        if self.temperature is not None:
            return float(self.temperature)
        return temperature_of_regime(self.regime)

    @property
    def resolved_regime(self) -> str:
        return regime_of_temperature(self.T)

    @property
    def boundary_name(self) -> str:
        if self.boundary:
            return self.boundary
        return "plus" if self.model == "rfim" else "wired"

    def alpha_value(self, alpha: str) -> Fraction:
        return alpha_of_temperature(self.T) if alpha == "auto" else parse_fraction(alpha)

    @property
    def disorder_seeds(self) -> List[int]:
        return list(range(self.disorder_seed_base, self.disorder_seed_base + self.disorder_count))

    def total_sweeps(self) -> int:
        """整个实验的扫描总数（每个外场两条链）"""
        total = 0
        for N in self.n_list:
            plan = self.chain.plan_for(N, self.T)
            total += 2 * plan.total_sweeps * self.disorder_count * len(self.alphas)
        return total

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump()

    def cache_dict(self) -> Dict[str, Any]:
        """决定计算结果的字段；输出目录不影响结果"""
        return self.model_dump(exclude={"output_dir"})

    # ------------------------------------------------------------------ INI

    def to_ini(self) -> str:
        """规范 INI 文本"""
        sections: Dict[str, Dict[str, str]] = {
            "experiment": {
                "name": self.name,
                "model": self.model,
                "temperature": "" if self.temperature is None else repr(float(self.temperature)),
                "regime": self.regime or "",
                "boundary": self.boundary,
            },
            "schedule": {
                "n_list": ",".join(str(n) for n in self.n_list),
                "theta": repr(float(self.theta)),
                "alphas": ",".join(self.alphas),
            },
            "chain": {k: str(v) for k, v in self.chain.model_dump().items()},
            "disorder": {"seed_base": str(self.disorder_seed_base), "count": str(self.disorder_count)},
            "output": {"directory": self.output_dir or "", "csv": self.csv_name, "plot": "true" if self.plot else "false"},
            "guards": {k: str(v) for k, v in self.guards.model_dump().items()},
        }
        parser = configparser.ConfigParser(interpolation=None)
        parser.read_dict(sections)
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue()

    @classmethod
    def parse_ini(cls, text: str) -> "ExperimentConfig":
        """
        解析 INI 文本

        Raises:
            ConfigException: 语法错误、未知分节/键或取值非法
        """
        parser = configparser.ConfigParser(interpolation=None)
        try:
            parser.read_string(text)
        except configparser.Error as e:
            raise ConfigException(f"配置文件语法错误: {e}") from e
        unknown = [s for s in parser.sections() if s not in SECTIONS]
        if unknown:
            raise ConfigException(f"未知配置分节: {unknown}")

        def get(section: str, key: str, default: str = "") -> str:
            return parser.get(section, key, fallback=default).strip()

        data: Dict[str, Any] = {}
        try:
            if parser.has_section("experiment"):
                data["name"] = get("experiment", "name", "experiment")
                data["model"] = get("experiment", "model", "rffk")
                temperature = get("experiment", "temperature")
                data["temperature"] = float(temperature) if temperature else None
                data["regime"] = get("experiment", "regime") or None
                data["boundary"] = get("experiment", "boundary")
            if parser.has_section("schedule"):
                data["n_list"] = parse_int_list(get("schedule", "n_list"))
                data["theta"] = float(get("schedule", "theta", "1.0"))
                data["alphas"] = [a.strip() for a in get("schedule", "alphas", "auto").split(",") if a.strip()]
            if parser.has_section("chain"):
                data["chain"] = {k: int(v) for k, v in parser.items("chain")}
            if parser.has_section("disorder"):
                data["disorder_seed_base"] = int(get("disorder", "seed_base", "0"))
                data["disorder_count"] = int(get("disorder", "count", "32"))
            if parser.has_section("output"):
                data["output_dir"] = get("output", "directory") or None
                data["csv_name"] = get("output", "csv", "sweep.csv")
                data["plot"] = parser.getboolean("output", "plot", fallback=False)
            if parser.has_section("guards"):
                data["guards"] = {k: int(v) for k, v in parser.items("guards")}
            return cls(**data)
        except (ValueError, ValidationError) as e:
            raise ConfigException(f"配置取值非法: {e}") from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        path = Path(path)
        if not path.exists():
            raise ConfigException(f"配置文件不存在: {path}")
        return cls.parse_ini(path.read_text(encoding="utf-8"))

    def save(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        path.write_text(self.to_ini(), encoding="utf-8")
        return path
