"""实验编排、结果存储、作图与命令行"""

from .commands import Command, CommandParameter, CommandRegistry, build_registry
from .config import ChainSettings, ExperimentConfig
from .experiment import SWEEP_COLUMNS, check_guards, run_experiment
from .plot import emit_plot
from .store import ResultStore, StoreEntry, run_key

__all__ = [
    "Command",
    "CommandParameter",
    "CommandRegistry",
    "build_registry",
    "ChainSettings",
    "ExperimentConfig",
    "SWEEP_COLUMNS",
    "check_guards",
    "run_experiment",
    "emit_plot",
    "ResultStore",
    "StoreEntry",
    "run_key",
]
