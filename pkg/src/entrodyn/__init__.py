"""entrodyn: exact-arithmetic entropy and dynamical-degree computations
for model smooth projective varieties.

The package is pure standard-library Python: all lattice computations run
over ``fractions.Fraction`` and every spectral radius comes with a
certified rational interval.
"""

from .endomorphisms import (
    ActionValidationError,
    DegreeRoutes,
    EndoAction,
    abelian_action_from_matrix,
    builtin_actions,
    compose,
    dynamical_degree,
    identity_action,
    intersection_sequence,
    multiplicity,
    power_map_action,
    product_powers_action,
    validate,
)
from .entropy import (
    AmplenessFlagError,
    AutoeqReport,
    ChiVanishedError,
    EntropyReport,
    EntropySequence,
    UnsupportedFunctorError,
    Verdict,
    chi_sequence,
    entropy_function,
    extract_limit,
    find_anti_ample_level,
    generator_sum,
    standard_autoeq_entropy,
    verify_endo_entropy,
)
from .linalg import CharPoly, RationalMatrix, char_poly, det, inverse, mat_mul, mat_pow
from .rational import as_rational, format_rational
from .riemann_roch import (
    KClassSum,
    KTerm,
    NumericalAction,
    autoeq_action,
    bott_h_dim,
    chern_character,
    endo_K_action,
    euler_form,
    line_bundle_sum,
    log_weighted_hom_sum,
    twist_action,
    weighted_hom_sum,
)
from .roots import (
    DEFAULT_TOL,
    AmbiguousGrowthError,
    DegenerateGrowthError,
    GrowthOrder,
    SpectralInterval,
    growth_order,
    root_radius,
    spectral_radius,
)
from .varieties import (
    BUILTIN_MODEL_NAMES,
    GradedClass,
    ModelValidationError,
    VarietyModel,
    abelian_surface_rank3,
    builtin_model,
    load_model,
    product_projective_model,
    projective_space,
)

__version__ = "0.1.0"
