"""Exact toolkit for A-hypergeometric series, their lattice geometry and factorial ratios."""
from .geometry import (
    DegenerateError,
    HCone,
    HPolytope,
    LatticeConfig,
    cone_hrep,
    cone_sections,
    config_alpha_beta,
    convex_hull_hrep,
    delta_alpha_beta,
    dilate,
    interior_lattice_points,
    lattice_points,
    lift_config,
    on_common_face,
)
from .relations import (
    RelationLattice,
    has_minimal_negative_support,
    lattice_slice_Lv,
    nsupp,
    relation_lattice,
)
from .series import (
    BracketError,
    FormalSeries,
    VerificationReport,
    Window,
    a_family,
    bracket,
    bracket_vec,
    construct_v,
    phi_series,
    pochhammer,
    psi_mns_series,
    specialize,
    thm66_shift,
    verify_box_euler,
    verify_K_family,
    verify_polynomial_relation,
)
from .logseries import (
    LogPolynomial,
    SequenceP,
    base_point,
    closed_form_816,
    combine_solution,
    decomposition,
    f_poly,
    lemma87_filter,
    m_coeff,
    phiQ_series,
    quasisolution,
    ray_window,
)
from .factorial import (
    PIntegralityReport,
    RatioSpec,
    classify_integrality,
    conjecture_816_report,
    direct_integrality,
    dwork_map,
    dwork_orbit_check,
    landau_check,
    p_integrality_report,
    ratio_term,
    series_83,
)

__version__ = "0.1.0"
