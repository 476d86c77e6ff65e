"""Exact computations for real structures on affine varieties with torus actions.

The package turns an equivariant embedding of a torus into an affine toric
variety into a polyhedral divisor on a toric base, tracks the real structure
through the construction, and verifies the result against brute-force
enumeration of the ambient coordinate ring.
"""

from .convex import (
    QuasiFan,
    RationalCone,
    TailedPolyhedron,
    dual_cone,
    fiber_coefficient,
    hilbert_basis,
    image_fan,
    minkowski_sum,
    normal_quasifan,
    support_eval,
    tail_decompose,
)
from .descent import CharacterCocycle, cone_stable, split_cocycle, twist_divisor
from .divisors import (
    PolyhedralDivisor,
    ToricBase,
    WeilQDivisor,
    evaluate,
    pp_check,
    principal_divisor,
    pullback_involution,
    sections_polyhedron,
    superadditivity_check,
)
from .downgrade import AHDatum, TorusEmbedding, check_real_compatibility, downgrade, validate_embedding
from .errors import TvarError
from .graded import bijection_check, graded_piece, piece_involution, weight_fiber_oracle
from .lattice import (
    InvolutionType,
    LatticeInvolution,
    LatticeMap,
    classify_involution,
    cokernel_projection,
    cosection,
    equivariant_cosection,
    smith_normal_form,
)

__version__ = "0.1.0"

__all__ = [
    "AHDatum",
    "CharacterCocycle",
    "InvolutionType",
    "LatticeInvolution",
    "LatticeMap",
    "PolyhedralDivisor",
    "QuasiFan",
    "RationalCone",
    "TailedPolyhedron",
    "ToricBase",
    "TorusEmbedding",
    "TvarError",
    "WeilQDivisor",
    "bijection_check",
    "check_real_compatibility",
    "classify_involution",
    "cokernel_projection",
    "cone_stable",
    "cosection",
    "downgrade",
    "dual_cone",
    "equivariant_cosection",
    "evaluate",
    "fiber_coefficient",
    "graded_piece",
    "hilbert_basis",
    "image_fan",
    "minkowski_sum",
    "normal_quasifan",
    "piece_involution",
    "pp_check",
    "principal_divisor",
    "pullback_involution",
    "sections_polyhedron",
    "smith_normal_form",
    "split_cocycle",
    "superadditivity_check",
    "support_eval",
    "tail_decompose",
    "twist_divisor",
    "validate_embedding",
    "weight_fiber_oracle",
]
