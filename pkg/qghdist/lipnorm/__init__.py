from .core import (
    DualLipNorm,
    RadiusEstimate,
    closed_form_radius,
    condition_number,
    dual_norm,
    em_norm,
    evaluate,
    evaluate_many,
    features,
    kernel_norm,
    lift2,
    lipschitz_bound,
    pairwise,
    predual_norm,
    radius,
    sphere_points,
    tabulated_norm,
    weighted_entry_norm,
)

__all__ = [
    "DualLipNorm",
    "RadiusEstimate",
    "kernel_norm",
    "em_norm",
    "weighted_entry_norm",
    "tabulated_norm",
    "lift2",
    "evaluate",
    "evaluate_many",
    "features",
    "pairwise",
    "lipschitz_bound",
    "closed_form_radius",
    "condition_number",
    "radius",
    "predual_norm",
    "dual_norm",
    "sphere_points",
]
