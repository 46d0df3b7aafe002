from .bridges import (
    Bridge,
    ComposedBridge,
    CouplerBridge,
    IsoBridge,
    KernelBridge,
    SumBridge,
    check_bridge,
    compose_bridges,
    coupler_bridge,
    iso_bridge,
    kernel_bridge,
    optimize_coupler,
    sum_bridge,
    uniqueness_gap,
)
from .estimate import (
    DistanceEstimate,
    bridge_diameter_bound,
    directed_hausdorff,
    distance_report,
    em_plus_distance,
    estimate_distance,
    hausdorff,
    hausdorff_matrix,
    kernel_gap_certified,
    net_slack,
)

__all__ = [
    "Bridge",
    "SumBridge",
    "KernelBridge",
    "IsoBridge",
    "CouplerBridge",
    "ComposedBridge",
    "sum_bridge",
    "kernel_bridge",
    "iso_bridge",
    "coupler_bridge",
    "compose_bridges",
    "check_bridge",
    "uniqueness_gap",
    "optimize_coupler",
    "hausdorff",
    "hausdorff_matrix",
    "directed_hausdorff",
    "DistanceEstimate",
    "distance_report",
    "net_slack",
    "estimate_distance",
    "bridge_diameter_bound",
    "kernel_gap_certified",
    "em_plus_distance",
]
