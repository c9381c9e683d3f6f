"""子命令：每个子命令是一个注册到 CommandRegistry 的 Command 对象"""

import logging
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import BaseModel

from ..core.constants import P_C, temperature_of_regime
from ..clusters.decomposition import cluster_stats, decompose
from ..core.exceptions import ConfigException, InvalidParameterError
from ..disorder.field import sample_field
from ..estimators.anticoncentration import lower_tail_frequency
from ..estimators.influence import boundary_influence, correlation_length
from ..estimators.ldp import ldp_tail, tail_frequencies
from ..estimators.partition import partition_ratio_from_samples, sample_pair
from ..estimators.pstats import p_statistics
from ..estimators.tv import log_density_terms
from ..exact.enumeration import code_to_edges, enumerate_model, exact_tv
from ..lattice.boundary import BoundaryCondition
from ..lattice.graph import build_box, build_rectangle
from ..mcmc.runner import collect_samples, samples_frame
from ..mcmc.state import ChainPlan, ModelSpec
from ..utils.helpers import ensure_dir, parse_int_list
from .config import ChainSettings, ExperimentConfig
from .experiment import run_experiment
from .plot import emit_plot
from .store import ResultStore

logger = logging.getLogger(__name__)


class CommandParameter(BaseModel):
    """子命令参数定义"""

    name: str
    type: str
    description: str
    required: bool = False
    default: Any = None
    choices: Optional[List[str]] = None


class Command(ABC):
    """子命令基类"""

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description

    @abstractmethod
    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        """执行子命令，返回可序列化的结果"""
        pass

    @abstractmethod
    def get_parameters(self) -> List[CommandParameter]:
        """获取参数定义"""
        pass

    def validate_parameters(self, parameters: Dict[str, Any]) -> bool:
        required = [p.name for p in self.get_parameters() if p.required]
        return all(parameters.get(name) is not None for name in required)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
            "parameters": [p.model_dump() for p in self.get_parameters()],
        }

    def __repr__(self) -> str:
        return f"Command(name={self.name})"


class CommandRegistry:
    """子命令注册表"""

    def __init__(self):
        self._commands: Dict[str, Command] = {}

    def register(self, command: Command) -> None:
        if command.name in self._commands:
            logger.warning("⚠️ 子命令 '%s' 已存在，将被覆盖", command.name)
        self._commands[command.name] = command

    def get(self, name: str) -> Optional[Command]:
        return self._commands.get(name)

    def list_commands(self) -> List[str]:
        return list(self._commands)

    def execute(self, name: str, parameters: Dict[str, Any]) -> Dict[str, Any]:
        command = self.get(name)
        if command is None:
            raise ConfigException(f"未知子命令: {name}")
        if not command.validate_parameters(parameters):
            missing = [p.name for p in command.get_parameters() if p.required and parameters.get(p.name) is None]
            raise ConfigException(f"子命令 {name} 缺少参数: {missing}")
        return command.run(parameters)


# ---------------------------------------------------------------------- 公共参数

def _temperature(parameters: Dict[str, Any]) -> float:
    if parameters.get("temp") is not None:
        return float(parameters["temp"])
    if parameters.get("temp_regime"):
        return temperature_of_regime(parameters["temp_regime"])
    raise ConfigException("需要 --temp 或 --temp-regime")


def _graph(parameters: Dict[str, Any]):
    if parameters.get("width") and parameters.get("height"):
        return build_rectangle(int(parameters["width"]), int(parameters["height"]))
    return build_box(int(parameters.get("n", 1)))


def _plan(parameters: Dict[str, Any], N: int, T: float) -> ChainPlan:
    settings = ChainSettings(
        burn_in=parameters.get("burn_in") or 0,
        thin=parameters.get("thin") or 1,
        samples=parameters.get("samples") or 200,
        replicas=parameters.get("replicas") or 2,
        seed=parameters.get("chain_seed") or 0,
    )
    return settings.plan_for(N, T)


TEMP_PARAMS = [
    CommandParameter(name="temp", type="number", description="温度 T"),
    CommandParameter(name="temp_regime", type="string", description="温区", choices=["low", "crit", "high"]),
]
FIELD_PARAMS = [
    CommandParameter(name="epsilon", type="number", description="外场强度 ε", default=0.0),
    CommandParameter(name="seed", type="integer", description="外场种子", default=0),
]
CHAIN_PARAMS = [
    CommandParameter(name="burn_in", type="integer", description="预热扫描数（0 为默认）", default=0),
    CommandParameter(name="thin", type="integer", description="样本间隔", default=1),
    CommandParameter(name="samples", type="integer", description="每副本样本数", default=200),
    CommandParameter(name="replicas", type="integer", description="副本数", default=2),
    CommandParameter(name="chain_seed", type="integer", description="链种子", default=0),
]


# ---------------------------------------------------------------------- 子命令

class ExactTvCommand(Command):
    """精确枚举有/无外场两个测度的全变差"""

    # free 对 Ising 即零边界
    BOUNDARIES = {"ising": ("zero", "free", "plus", "minus"), "fk": ("free", "wired")}

    def __init__(self):
        super().__init__("exact-tv", "小格点上的精确全变差")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="model", type="string", description="模型", default="ising", choices=["ising", "fk"]),
            CommandParameter(name="n", type="integer", description="盒子 Λ_N", default=1),
            CommandParameter(name="width", type="integer", description="矩形宽（顶点数）"),
            CommandParameter(name="height", type="integer", description="矩形高（顶点数）"),
            CommandParameter(
                name="boundary", type="string", description="边界条件（ising: zero/free/plus/minus，fk: free/wired）", default=""
            ),
            *TEMP_PARAMS,
            *FIELD_PARAMS,
        ]

    def boundary_name(self, model: str, name: str) -> str:
        allowed = self.BOUNDARIES[model]
        name = name or allowed[0]
        if name not in allowed:
            raise ConfigException(f"{model} 模型不支持边界 {name}，可选: {', '.join(allowed)}")
        return name

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        model = parameters.get("model") or "ising"
        name = self.boundary_name(model, parameters.get("boundary") or "")
        graph = _graph(parameters)
        T = _temperature(parameters)
        boundary = BoundaryCondition.from_name("zero" if model == "ising" and name == "free" else name, graph)
        field = sample_field(graph, int(parameters.get("seed") or 0), float(parameters.get("epsilon") or 0.0))
        with_field = enumerate_model(model, graph, T=T, boundary=boundary, field=field)
        without = enumerate_model(model, graph, T=T, boundary=boundary, field=field.with_epsilon(0.0))
        return {
            "model": model,
            "vertices": graph.num_vertices,
            "T": T,
            "epsilon": field.epsilon,
            "boundary": name,
            "tv": exact_tv(with_field, without),
            "z_ratio": float(np.exp(without.log_partition - with_field.log_partition)),
            "log_z0": float(without.log_partition),
            "log_zh": float(with_field.log_partition),
        }


class SampleCommand(Command):
    """运行链并输出每个样本的统计量"""

    def __init__(self):
        super().__init__("sample", "运行 RFIM 热浴或 FK Edwards–Sokal 链")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="model", type="string", description="模型", default="rffk", choices=["rfim", "rffk"]),
            CommandParameter(name="n", type="integer", description="盒子 Λ_N", default=4),
            CommandParameter(name="boundary", type="string", description="边界条件", default=""),
            CommandParameter(name="out", type="string", description="样本统计 CSV 路径"),
            *TEMP_PARAMS,
            CommandParameter(name="epsilon", type="number", description="外场强度 ε", default=0.0),
            CommandParameter(name="seed", type="integer", description="主种子：外场与链默认都取它", default=0),
            CommandParameter(name="field_seed", type="integer", description="单独指定外场种子"),
            CommandParameter(name="chain_seed", type="integer", description="单独指定链种子"),
            CommandParameter(name="sweeps", type="integer", description="每副本预热后的扫描数（给出时样本数取 sweeps // thin）"),
            CommandParameter(name="burn_in", type="integer", description="预热扫描数（0 为默认）", default=0),
            CommandParameter(name="thin", type="integer", description="样本间隔", default=1),
            CommandParameter(name="samples", type="integer", description="每副本样本数", default=200),
            CommandParameter(name="replicas", type="integer", description="副本数", default=2),
        ]

    def plan(self, parameters: Dict[str, Any], N: int, T: float) -> ChainPlan:
        settings = dict(parameters)
        seed = int(parameters.get("seed") or 0)
        settings["chain_seed"] = seed if parameters.get("chain_seed") is None else parameters["chain_seed"]
        if parameters.get("sweeps") is not None:
            thin = int(parameters.get("thin") or 1)
            sweeps = int(parameters["sweeps"])
            if sweeps < thin:
                raise ConfigException(f"--sweeps ({sweeps}) 小于 --thin ({thin})，得不到样本")
            settings["samples"] = sweeps // thin
        return _plan(settings, N, T)

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        N = int(parameters.get("n") or 4)
        graph = build_box(N)
        T = _temperature(parameters)
        model = parameters.get("model") or "rffk"
        name = parameters.get("boundary") or ("plus" if model == "rfim" else "wired")
        spec = ModelSpec(graph=graph, kind=model, T=T, boundary=BoundaryCondition.from_name(name, graph))
        seed = int(parameters.get("seed") or 0)
        field_seed = seed if parameters.get("field_seed") is None else int(parameters["field_seed"])
        field = sample_field(graph, field_seed, float(parameters.get("epsilon") or 0.0))
        plan = self.plan(parameters, N, T)
        frame = samples_frame(collect_samples(plan, spec, field))
        result: Dict[str, Any] = {
            "model": model, "N": N, "T": T, "field_seed": field_seed, "samples": len(frame), "plan": plan.to_dict(),
        }
        if len(frame):
            result["mean_magnetization"] = float(frame["magnetization"].mean())
            result["mean_max_cluster"] = float(frame["max_cluster"].mean())
        if parameters.get("out"):
            out = Path(parameters["out"])
            ensure_dir(out.parent)
            frame.to_csv(out, index=False, float_format="%.12g", lineterminator="\n")
            result["out"] = str(out)
        return result


def read_edge_config(path: str, graph) -> np.ndarray:
    """
    读取边构型文件

    文件内容为一个无符号整数（十进制，或带 0x / 0b 前缀），第 b 位为 1 表示第 b 条边打开；
    空文件表示全部关闭。

    Raises:
        ConfigException: 文件不存在、无法解析或超出边数
    """
    path = Path(path)
    if not path.exists():
        raise ConfigException(f"边构型文件不存在: {path}")
    text = "".join(path.read_text().split())
    try:
        code = int(text, 0) if text else 0
        return code_to_edges(code, graph.num_edges)
    except (ValueError, InvalidParameterError) as e:
        raise ConfigException(f"无法解析边构型 {path}: {e}") from e


class StatsCommand(Command):
    """单个边构型的簇统计"""

    def __init__(self):
        super().__init__("stats", "读取比特编码的边构型并输出 ClusterStats")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="in", type="string", description="边构型文件（整数编码，第 b 位 ↔ 第 b 条边打开）", required=True),
            CommandParameter(name="n", type="integer", description="盒子 Λ_N", default=1),
            CommandParameter(name="width", type="integer", description="矩形宽（顶点数）"),
            CommandParameter(name="height", type="integer", description="矩形高（顶点数）"),
            CommandParameter(name="boundary", type="string", description="FK 边界", default="wired", choices=["free", "wired"]),
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        graph = _graph(parameters)
        omega = read_edge_config(parameters["in"], graph)
        decomp = decompose(omega, graph, BoundaryCondition.from_name(parameters.get("boundary") or "wired", graph))
        return cluster_stats(decomp).to_dict()


class PStatsCommand(Command):
    """无外场 FK 链上的 Z(h) 与 (P0)–(P3) 统计"""

    def __init__(self):
        super().__init__("pstats", "Z(h)、(P0)–(P3) 与反集中频率")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="n", type="integer", description="盒子 Λ_N", default=4),
            CommandParameter(name="boundary", type="string", description="FK 边界", default="wired", choices=["free", "wired"]),
            *TEMP_PARAMS,
            *FIELD_PARAMS,
            *CHAIN_PARAMS,
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        N = int(parameters.get("n") or 4)
        graph = build_box(N)
        T = _temperature(parameters)
        spec = ModelSpec(
            graph=graph, kind="rffk", T=T,
            boundary=BoundaryCondition.from_name(parameters.get("boundary") or "wired", graph),
        )
        field = sample_field(graph, int(parameters.get("seed") or 0), float(parameters.get("epsilon") or 0.0))
        pair = sample_pair(field, spec, _plan(parameters, N, T))
        z = partition_ratio_from_samples(field, spec, pair)
        f_values = log_density_terms(pair.without_field, field, spec)
        stats = p_statistics(field, f_values, spec=spec, z_estimate=z)
        return {
            "z": z.to_dict(),
            "pstats": stats.to_dict(),
            "lower_tail": lower_tail_frequency(f_values, field.epsilon, graph.num_vertices, T),
        }


class SweepCommand(Command):
    """按配置文件或命令行参数运行扫描"""

    def __init__(self):
        super().__init__("sweep", "全变差随 N 的扫描")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="config", type="string", description="INI 配置文件"),
            CommandParameter(name="model", type="string", description="模型", default="rffk", choices=["rfim", "rffk"]),
            CommandParameter(name="temp_regime", type="string", description="温区", choices=["low", "crit", "high"]),
            CommandParameter(name="temp", type="number", description="温度 T"),
            CommandParameter(name="alpha", type="string", description="指数 α（auto 或分数，可逗号分隔多个）", default="auto"),
            CommandParameter(name="theta", type="number", description="ε = θ·N^{−α} 的 θ", default=1.0),
            CommandParameter(name="n_list", type="string", description="N 网格，例如 8,16,32", default=""),
            CommandParameter(name="disorder_seeds", type="integer", description="外场种子个数", default=32),
            CommandParameter(name="out", type="string", description="sweep CSV 输出路径"),
            CommandParameter(name="store", type="string", description="结果存储目录"),
            CommandParameter(name="output_dir", type="string", description="另将 sweep CSV 与 SVG 复制到该目录"),
            CommandParameter(name="plot", type="boolean", description="生成 SVG 图", default=False),
            *CHAIN_PARAMS,
        ]

    def build_config(self, parameters: Dict[str, Any]) -> ExperimentConfig:
        if parameters.get("config"):
            return ExperimentConfig.load(parameters["config"])
        try:
            return ExperimentConfig(
                model=parameters.get("model") or "rffk",
                temperature=parameters.get("temp"),
                regime=parameters.get("temp_regime"),
                n_list=parse_int_list(parameters.get("n_list") or ""),
                theta=parameters.get("theta") or 1.0,
                alphas=[a.strip() for a in (parameters.get("alpha") or "auto").split(",") if a.strip()],
                disorder_count=parameters.get("disorder_seeds") or 32,
                plot=bool(parameters.get("plot")),
                output_dir=parameters.get("output_dir"),
                chain=ChainSettings(
                    burn_in=parameters.get("burn_in") or 0,
                    thin=parameters.get("thin") or 1,
                    samples=parameters.get("samples") or 200,
                    replicas=parameters.get("replicas") or 2,
                    seed=parameters.get("chain_seed") or 0,
                ),
            )
        except ValueError as e:
            raise ConfigException(f"扫描参数非法: {e}") from e

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        config = self.build_config(parameters)
        store = ResultStore(parameters["store"]) if parameters.get("store") else None
        entry = run_experiment(config, store=store)
        csv_path = entry.file(config.csv_name)
        result = {"key": entry.key, "cache_hit": entry.cache_hit, "csv": str(csv_path), "rows": entry.manifest.get("rows", 0)}
        if parameters.get("out"):
            out = Path(parameters["out"])
            ensure_dir(out.parent)
            out.write_bytes(csv_path.read_bytes())
            result["out"] = str(out)
        return result


class LdpTailCommand(Command):
    """无外场 FK 最大簇尾部"""

    def __init__(self):
        super().__init__("ldp-tail", "最大簇与 Σ|C|² 的尾部测量")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="p", type="string", description="边参数（数值或 pc）", default="pc"),
            CommandParameter(name="n_list", type="string", description="N 列表", default="16,32"),
            CommandParameter(name="replicas", type="integer", description="每个 N 的副本数", default=20),
            CommandParameter(name="samples", type="integer", description="每副本样本数", default=10),
            CommandParameter(name="thin", type="integer", description="样本间隔", default=5),
            CommandParameter(name="boundary", type="string", description="FK 边界", default="wired", choices=["free", "wired"]),
            CommandParameter(name="chain_seed", type="integer", description="链种子", default=0),
            CommandParameter(name="thresholds", type="string", description="尾部阈值倍数", default="0.5,1,1.5,2"),
            CommandParameter(name="out", type="string", description="逐样本 CSV 路径"),
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        raw = str(parameters.get("p") or "pc")
        p = P_C if raw == "pc" else float(raw)
        table = ldp_tail(
            p,
            parse_int_list(parameters.get("n_list") or "16,32"),
            int(parameters.get("replicas") or 20),
            samples_per_replica=int(parameters.get("samples") or 10),
            thin=int(parameters.get("thin") or 5),
            boundary=parameters.get("boundary") or "wired",
            seed=int(parameters.get("chain_seed") or 0),
        )
        thresholds = [float(t) for t in str(parameters.get("thresholds") or "0.5,1,1.5,2").split(",")]
        tails = {}
        for N in table.summary["N"] if len(table.summary) else []:
            values = table.column(int(N), "max_scaled")
            tails[int(N)] = tail_frequencies(values / np.median(values), thresholds).tolist()
        if parameters.get("out"):
            out = Path(parameters["out"])
            ensure_dir(out.parent)
            table.rows.to_csv(out, index=False, float_format="%.12g", lineterminator="\n")
        return {
            "p": p,
            "regime": table.regime,
            "summary": table.summary.to_dict(orient="records"),
            "thresholds": thresholds,
            "tail_frequencies": tails,
        }


class BoundaryInfluenceCommand(Command):
    def __init__(self):
        super().__init__("boundary-influence", "边界影响 m(T, N, ε)")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="n", type="integer", description="盒子 Λ_N", default=1),
            CommandParameter(name="epsilon", type="number", description="外场强度 ε", default=0.0),
            CommandParameter(name="replicas", type="integer", description="无序样本数", default=32),
            CommandParameter(name="seed", type="integer", description="外场种子基数", default=0),
            CommandParameter(name="method", type="string", description="计算方式", default="auto", choices=["auto", "exact", "mcmc"]),
            *TEMP_PARAMS,
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        estimate = boundary_influence(
            _temperature(parameters),
            int(parameters.get("n") or 1),
            float(parameters.get("epsilon") or 0.0),
            int(parameters.get("replicas") or 32),
            seed=int(parameters.get("seed") or 0),
            method=parameters.get("method") or "auto",
        )
        return estimate.to_dict()


class CorrLengthCommand(Command):
    def __init__(self):
        super().__init__("corr-length", "关联长度 ψ⋆")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="epsilon", type="number", description="外场强度 ε", required=True),
            CommandParameter(name="n_list", type="string", description="严格递增的 N 网格", default="1,2"),
            CommandParameter(name="replicas", type="integer", description="无序样本数", default=32),
            CommandParameter(name="seed", type="integer", description="外场种子基数", default=0),
            CommandParameter(name="method", type="string", description="计算方式", default="auto", choices=["auto", "exact", "mcmc"]),
            *TEMP_PARAMS,
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        result = correlation_length(
            _temperature(parameters),
            float(parameters["epsilon"]),
            parse_int_list(parameters.get("n_list") or "1,2"),
            int(parameters.get("replicas") or 32),
            seed=int(parameters.get("seed") or 0),
            method=parameters.get("method") or "auto",
        )
        return {"psi": result.value, "beyond_grid": result.beyond_grid, "rows": result.rows}


class PlotCommand(Command):
    def __init__(self):
        super().__init__("plot", "由扫描 CSV 生成 SVG")

    def get_parameters(self) -> List[CommandParameter]:
        return [
            CommandParameter(name="csv", type="string", description="扫描 CSV", required=True),
            CommandParameter(name="out", type="string", description="SVG 输出路径", required=True),
            CommandParameter(name="title", type="string", description="图标题"),
        ]

    def run(self, parameters: Dict[str, Any]) -> Dict[str, Any]:
        path = emit_plot(parameters["csv"], parameters["out"], title=parameters.get("title"))
        return {"svg": str(path)}


def build_registry() -> CommandRegistry:
    """注册全部子命令"""
    registry = CommandRegistry()
    for command in (
        ExactTvCommand(),
        SampleCommand(),
        StatsCommand(),
        PStatsCommand(),
        SweepCommand(),
        LdpTailCommand(),
        BoundaryInfluenceCommand(),
        CorrLengthCommand(),
        PlotCommand(),
    ):
        registry.register(command)
    return registry
