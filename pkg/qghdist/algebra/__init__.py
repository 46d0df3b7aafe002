from .core import (
    AlgebraElement,
    ElementBatch,
    FiniteVNAlgebra,
    amplify2,
    as_batch,
    canonical_decomposition,
    diagonal_embed,
    direct_sum,
    entry,
    from_entries,
    inject_left,
    inject_right,
    is_positive_contraction,
    op_norm,
    project_left,
    project_right,
    trace_pairing,
)
from .generated import commutant_basis, generated_algebra, separating_reduction
from .morphism import AlgebraIsomorphism

__all__ = [
    "AlgebraElement",
    "ElementBatch",
    "FiniteVNAlgebra",
    "AlgebraIsomorphism",
    "as_batch",
    "op_norm",
    "amplify2",
    "entry",
    "from_entries",
    "diagonal_embed",
    "direct_sum",
    "inject_left",
    "inject_right",
    "project_left",
    "project_right",
    "canonical_decomposition",
    "is_positive_contraction",
    "trace_pairing",
    "generated_algebra",
    "commutant_basis",
    "separating_reduction",
]
