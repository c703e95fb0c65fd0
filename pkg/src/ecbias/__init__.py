"""Chebyshev-bias and Euler-product numerics for elliptic curves over
rational function fields F_q(T), with a companion module for the classical
rational-prime races."""

from .algebra import (
    FieldElement,
    FieldSpec,
    Poly,
    enumerate_monic_irreducibles,
    is_irreducible,
    make_extension_field,
    monic_irreducible_count,
    parse_poly,
    poly_str,
    reduce_mod,
    residue_field,
)
from .bias import (
    BiasSeries,
    bias_series,
    classify_bias,
    fit_loglog,
    predicted_slope,
    t_e_series,
)
from .config import RunConfig
from .counting import count_points
from .curve import (
    CurveSpec,
    LocalData,
    check_nonconstant,
    conductor_degree,
    curve_from_text,
    derive_invariants,
    infinite_place_model,
    load_curve,
    local_data,
    minimalize_at,
    satake_angle,
)
from .drh import BSDReport, DRHReport, bsd_series, drh_check, partial_euler_product
from .lseries import (
    CenterReport,
    LPolynomial,
    analytic_rank,
    center_derivative,
    center_report,
    delta_invariant,
    functional_equation_check,
    l_polynomial,
    local_factor,
)
from .places import Place, finite_places, place_count
from .scan import LocalScan, Stratum, scan_curve

__version__ = "0.1.0"
