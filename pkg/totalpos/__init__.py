"""
totalpos: exterior powers, total positivity and sign-variation tools for real matrices.
"""

from totalpos.classify import (
    JPartition,
    PositivityClass,
    classify,
    detect_js,
    principal_minors,
    principal_submatrix,
)
from totalpos.cones import (
    BasicCone,
    ExteriorBasicCone,
    IceCreamCone,
    SpannedCone,
    TMembershipResult,
    TVerdict,
    adjoint,
    cone_from_json,
    cone_to_json,
    contains,
    max_angle,
    same_cone,
    sample_cone,
    t_chain_membership,
    t_membership,
)
from totalpos.config import Settings, get_settings, load_settings
from totalpos.errors import (
    ClassificationError,
    ConfigError,
    InputError,
    NumericError,
    ResourceError,
    TotalPosError,
)
from totalpos.exterior import (
    CompoundMatrix,
    MultiVector,
    SubsetIndex,
    apply_compound,
    compound,
    grassmann_line,
    hodge,
    kronecker_eigs,
    match_spectra,
    minor,
    subset_rank,
    subset_unrank,
    subsets,
    wedge,
)
from totalpos.generators import (
    GeneratorSpec,
    build,
    permutation_similar,
    random_matrix,
    random_stp,
    rotation3,
    signature_conjugate,
    vandermonde,
)
from totalpos.signs import Membership, SignVariation, m_membership, s_minus, s_plus, sign_variation
from totalpos.spectral import (
    SpectralReport,
    VdpReport,
    eigen,
    gk_verify,
    m_invariance_violations,
    perron_root,
    spectral_radius,
    variation_margin,
    vdp_check,
)

__version__ = "1.0.0"
