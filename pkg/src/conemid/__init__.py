"""Thompson-metric geometry on symmetric cones.

Distances, geodesics and midpoints for the cone of squares of a
Euclidean Jordan algebra (real symmetric and complex Hermitian
matrices, spin factors, direct sums) and for the nonnegative orthant,
plus the affine span of the Thompson midpoint set of an interior pair,
its closed-form dimension, and independent numerical oracles that keep
the predictions honest.
"""

__version__ = "0.1.0"

from .jacobi import JacobiConvergenceError, jacobi_eigenvalues, jacobi_eigh
from .ejalg import (
    AlgebraDescriptor,
    ConeLocation,
    Element,
    JordanFrame,
    SpectralDecomposition,
    direct_sum,
    eigenvalues_of,
    from_diag,
    from_frame,
    from_matrix,
    from_spin_parts,
    herm_complex,
    in_cone,
    inner,
    jordan_frame,
    jordan_product,
    orthonormal_span,
    peirce_zero_basis,
    power,
    quad_apply,
    quad_matrix,
    spectral_decompose,
    spin_factor,
    spin_parts,
    sym_real,
    to_matrix,
    trace,
    unit,
)
from .conegeom import (
    DegeneratePairError,
    FaceDescriptor,
    JordanCone,
    NotInteriorError,
    StandardCone,
    TwoDimChart,
    boundary_point,
    chart_coords,
    face_contains,
    face_of,
    face_span_standard,
    gauge_pair,
    m_ratio,
    order_unit_norm,
    proportional_factor,
    two_dim_chart,
)
from .thompson import (
    MidpointTester,
    canonical_geodesic,
    canonical_midpoint,
    delta2,
    distance,
    geometric_mean,
    is_midpoint,
    midpoint_tolerance,
    power_geodesic,
)
from .midspan import (
    TIE_TOL,
    AttainmentReport,
    Congruence,
    InternalInvariantError,
    MidspanReport,
    attaining_set,
    closed_form_dimension,
    is_singleton,
    midpoint_span,
    midspan_dimension,
    reduce_pair,
)
from .oracle import (
    BruteForceResult,
    EpsilonFloorError,
    SampleDetail,
    VerificationReport,
    affine_rank,
    brute_force_standard,
    philox_stream,
    run_verification,
    sample_detail,
    sample_midpoints,
    suggested_epsilon,
    verify_span_negative,
    verify_span_positive,
)
from .selftest import SuiteResult, run_selftest

__all__ = [name for name in dir() if not name.startswith("_")]
