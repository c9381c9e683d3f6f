"""随机外场"""

from ..core.constants import (
    P_C,
    T_C,
    alpha_of_temperature,
    beta_of_temperature,
    p_from_temperature,
    regime_of_temperature,
    temperature_from_p,
)
from .field import DisorderField, sample_field, field_sum, epsilon_schedule
from .prng import GENERATOR_ID, philox4x32, site_normals

__all__ = [
    "P_C",
    "T_C",
    "alpha_of_temperature",
    "beta_of_temperature",
    "p_from_temperature",
    "regime_of_temperature",
    "temperature_from_p",
    "DisorderField",
    "sample_field",
    "field_sum",
    "epsilon_schedule",
    "GENERATOR_ID",
    "philox4x32",
    "site_normals",
]
