"""核心组件"""

from .config import GuardLimits, RffkimConfig, get_config, update_config, reset_config
from .constants import (
    P_C,
    T_C,
    alpha_of_temperature,
    beta_of_temperature,
    p_from_temperature,
    regime_of_temperature,
    temperature_from_p,
)
from .exceptions import (
    RffkimException,
    ConfigException,
    GuardException,
    TooLargeError,
    InvalidGeometryError,
    InvalidParameterError,
    IncompatibleDistributionsError,
    CorruptedStateError,
    PreconditionError,
    SchemaError,
)

__all__ = [
    "GuardLimits",
    "RffkimConfig",
    "get_config",
    "update_config",
    "reset_config",
    "P_C",
    "T_C",
    "alpha_of_temperature",
    "beta_of_temperature",
    "p_from_temperature",
    "regime_of_temperature",
    "temperature_from_p",
    "RffkimException",
    "ConfigException",
    "GuardException",
    "TooLargeError",
    "InvalidGeometryError",
    "InvalidParameterError",
    "IncompatibleDistributionsError",
    "CorruptedStateError",
    "PreconditionError",
    "SchemaError",
]
