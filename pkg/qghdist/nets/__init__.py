from .core import (
    CoveringEstimate,
    Net,
    build_net,
    entry_net,
    estimate_covering,
    grid_net,
    is_member,
    load_net,
    mandatory_points,
    map_net,
    net_to_dict,
    operator_pairwise,
    sample_contraction,
    sample_positive_contraction,
    sample_target,
    sample_unit_sphere,
    save_net,
    with_covering,
)

__all__ = [
    "Net",
    "CoveringEstimate",
    "sample_positive_contraction",
    "sample_contraction",
    "sample_unit_sphere",
    "sample_target",
    "is_member",
    "mandatory_points",
    "build_net",
    "estimate_covering",
    "with_covering",
    "operator_pairwise",
    "grid_net",
    "entry_net",
    "map_net",
    "net_to_dict",
    "save_net",
    "load_net",
]
