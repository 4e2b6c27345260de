"""Isoperimetric profiles under curvature-dimension bounds.

Exact profiles of model spaces, cones and spherical suspensions; certifiers
for the sharp second-order inequality of I^(N/(N-1)) in pointwise, viscosity
and distributional senses; the AVR and Levy-Gromov bounds; and
Heintze-Karcher tube estimates.
"""

from .comparison import ComparisonVerdict, bayle_domination_check, bayle_family, compare, solve_model_psi
from .errors import (
    DomainError,
    DomainExceeded,
    InfiniteVolume,
    IsoprofileError,
    NoConvergence,
    NonpositiveBarrier,
    NotDifferentiable,
    OutOfRange,
    PreconditionUnverified,
    ProfileParseError,
    Singular,
    UnsupportedKind,
    WindowTooSmall,
)
from .grid import GridFunction
from .inequalities import (
    AvrContext,
    avr_gap_existence_threshold,
    avr_lower_bound,
    bishop_gromov_check,
    bonnet_myers_check,
    certify_avr,
    certify_levy_gromov,
    cone_avr_from_cross_section,
    cone_profile,
    levy_gromov_bound,
)
from .model_geometry import (
    CurvatureDimension,
    ModelBallGeometry,
    ball,
    ball_volume,
    cos_k,
    distance_sphere_mean_curvature,
    invert_ball_volume,
    model_profile,
    s_k_lambda,
    sin_k,
    sphere_area,
)
from .profile import (
    PsiProfile,
    SampledProfile,
    barrier_from_profile,
    normalize,
    one_sided_derivative,
    psi_transform,
    strict_subadditivity_check,
    symmetry_check,
)
from .tube_bounds import TubeBound, barrier_rhs, inradius_bound, tube_perimeter_bound, tube_volume_bound
from .warped import WarpedProduct, cap_perimeter, cap_volume, symmetric_profile
from .weak_d2 import (
    WeakIneqReport,
    check_concavity,
    check_distributional,
    check_pointwise,
    check_viscosity,
    inf_convolution,
    lower_D2,
    mollify,
    second_difference,
    upper_D2,
)

__version__ = "0.1.0"

__all__ = [
    "avr_gap_existence_threshold",
    "avr_lower_bound",
    "AvrContext",
    "ball",
    "ball_volume",
    "barrier_from_profile",
    "barrier_rhs",
    "bayle_domination_check",
    "bayle_family",
    "bishop_gromov_check",
    "bonnet_myers_check",
    "cap_perimeter",
    "cap_volume",
    "certify_avr",
    "certify_levy_gromov",
    "check_concavity",
    "check_distributional",
    "check_pointwise",
    "check_viscosity",
    "compare",
    "ComparisonVerdict",
    "cone_avr_from_cross_section",
    "cone_profile",
    "cos_k",
    "CurvatureDimension",
    "distance_sphere_mean_curvature",
    "DomainError",
    "DomainExceeded",
    "GridFunction",
    "inf_convolution",
    "InfiniteVolume",
    "inradius_bound",
    "invert_ball_volume",
    "IsoprofileError",
    "levy_gromov_bound",
    "lower_D2",
    "model_profile",
    "ModelBallGeometry",
    "mollify",
    "NoConvergence",
    "NonpositiveBarrier",
    "normalize",
    "NotDifferentiable",
    "one_sided_derivative",
    "OutOfRange",
    "PreconditionUnverified",
    "ProfileParseError",
    "psi_transform",
    "PsiProfile",
    "s_k_lambda",
    "SampledProfile",
    "second_difference",
    "sin_k",
    "Singular",
    "solve_model_psi",
    "sphere_area",
    "strict_subadditivity_check",
    "symmetric_profile",
    "symmetry_check",
    "tube_perimeter_bound",
    "tube_volume_bound",
    "TubeBound",
    "UnsupportedKind",
    "upper_D2",
    "WarpedProduct",
    "WeakIneqReport",
    "WindowTooSmall",
]
