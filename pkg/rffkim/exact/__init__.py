"""精确枚举"""

from .weights import (
    ising_log_weight,
    ising_log_weights,
    fk_log_weight,
    fk_log_weights,
    es_joint_log_weight,
    es_joint_log_weights,
    resolve_p_T,
)
from .enumeration import (
    ExactDistribution,
    decode_bits,
    encode_bits,
    edges_to_code,
    code_to_edges,
    spins_to_code,
    enumerate_model,
    exact_tv,
    partition_ratio_exact,
)
from .product import (
    SublatticeTV,
    check_product_tv_bound,
    product_tv,
    single_site_tv,
    single_site_tv_lower_bound,
    sublattice_conditional_tv,
)

__all__ = [
    "ising_log_weight",
    "ising_log_weights",
    "fk_log_weight",
    "fk_log_weights",
    "es_joint_log_weight",
    "es_joint_log_weights",
    "resolve_p_T",
    "ExactDistribution",
    "decode_bits",
    "encode_bits",
    "edges_to_code",
    "code_to_edges",
    "spins_to_code",
    "enumerate_model",
    "exact_tv",
    "partition_ratio_exact",
    "SublatticeTV",
    "check_product_tv_bound",
    "product_tv",
    "single_site_tv",
    "single_site_tv_lower_bound",
    "sublattice_conditional_tv",
]
