from .config import CoefficientMap, LipNormMode
from .core import (
    FreeFieldConfig,
    TruncatedFock,
    contraction_profile,
    creation,
    dispersion,
    energies,
    field_operator,
    free_lip_norm,
    linear_envelope,
    local_algebra,
    mass_gap_bound,
    mode_coefficients,
    semigroup,
    weyl,
)
from .sweep import mass_sweep, sweep_nets

__all__ = [
    "TruncatedFock",
    "FreeFieldConfig",
    "CoefficientMap",
    "LipNormMode",
    "dispersion",
    "energies",
    "semigroup",
    "creation",
    "field_operator",
    "weyl",
    "mode_coefficients",
    "local_algebra",
    "free_lip_norm",
    "mass_gap_bound",
    "linear_envelope",
    "contraction_profile",
    "mass_sweep",
    "sweep_nets",
]
