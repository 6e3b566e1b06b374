"""Exact cohomology of finite-dimensional Lie superalgebras via graded
canonical-commutation ("ghost") complexes over mixed Fock modules, with the
classical multilinear-cochain differential kept alongside as an independent
oracle.  All arithmetic is exact rational."""

__version__ = "0.1.0"

from .supercore import (
    EVEN,
    ODD,
    BasisIndex,
    LieSuperalgebra,
    Representation,
    adjoint_module,
    dual_module,
    parity_reverse_module,
    restrict_representation,
    trivial_module,
    validate_representation,
    validate_superjacobi,
)
from .weylrep import (
    FockMonomial,
    MixingSet,
    VACUUM,
    WeylElement,
    fock_apply,
    g_action_on_weyl,
    gamma,
    graded_commutator,
    normal_order,
)
from .homology import (
    BettiReport,
    BettiRow,
    ConsistencyError,
    ROWRED_BACKEND,
    SparseRationalMatrix,
    betti,
    euler_identity_holds,
    quotient_basis,
    rank,
    rank_kernel,
    span_dimension,
    weight_character,
)
from .ce import ce_differential_matrix
from .brst import (
    CochainBlock,
    ComplexResult,
    DifferentialMatrix,
    GradingError,
    GradingScheme,
    SymmetryGenerator,
    build_complex,
    delta1_matrix,
    delta2_matrix,
    delta_matrix,
    enumerate_block,
    equivariance_check,
    iota_compare,
    positive_functional,
)
from . import catalog

__all__ = [name for name in dir() if not name.startswith("_")]
