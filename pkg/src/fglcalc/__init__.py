"""Exact symbolic calculus of formal group laws and their loop-space
genera: truncated polynomial/Laurent coefficient rings, group law
transport and quotients, Weierstrass sigma expansions, the Tate
extension group, equivariant Euler classes, renormalized loop genera,
and staged Thom modules.
"""

from .coefficients import (
    GaussianRationals,
    Integers,
    IntegersMod,
    LaurentPolynomials,
    LaurentSeries,
    PowerSeries,
    QI,
    QQ,
    Rationals,
    Ring,
    RingElement,
    ZZ,
    parse_ring,
    quotient_ring,
)
from .equivariant import (
    EqBundle,
    EquivariantContext,
    additive_context,
    bundle,
    euler_class,
    loop_normal_bundle,
    make_context,
    multiplicative_context,
    unit_check,
)
from .errors import (
    ConstantTermError,
    EngineError,
    LawAxiomError,
    NonConvergentError,
    NotAUnitError,
    PoleError,
    RationalsRequiredError,
    RingMismatchError,
    TailOverflowError,
    TruncationError,
    UnrepresentableError,
)
from .fgl import (
    FormalGroupLaw,
    Isomorphism,
    additive_law,
    check_law_axioms,
    fgl_exp,
    fgl_log,
    from_log,
    from_series,
    inverse_element,
    inverse_series,
    is_homomorphism,
    law_apply,
    multiplicative_law,
    n_series,
    n_series_element,
    transport,
)
from .genus import (
    ChernBlock,
    ChernData,
    ahat_series,
    c1_trivial_block,
    chi_residue,
    cp,
    euler_characteristic,
    genus_eval,
    loop_genus,
    loop_genus_sigma,
    loop_genus_sine,
    loop_genus_unrenormalized,
    loop_vs_quotient_check,
    point,
    product_data,
    rr_transform,
    todd_series_of,
)
from .polyseries import MultiSeries, series
from .prospectrum import (
    ThomTower,
    TowerClass,
    omega,
    push_class,
    relative_omega,
    stabilize,
    tower,
    tower_class_eq,
    transition,
    transition_bundle,
    unit_u,
)
from .quotient import (
    QuotientLaw,
    SubgroupPoints,
    lubin_coordinate,
    lubin_isogeny,
    quotient_law,
    subgroup_check,
)
from .tate import (
    TateGroup,
    TatePoint,
    TateSequenceReport,
    ThetaSeries,
    division_points,
    exact_sequence_check,
    sigma_home,
    sigma_in_x,
    sigma_modified,
    sigma_series,
    sigma_substitute_L,
    sincos_pi,
    sine_modified,
    sine_series,
    theta_multiplicative_L,
    theta_series,
    theta_vanishes_at,
)
