"""Upper bounds on ``h_m``: the largest value of ``f(1) + sum f(-cos theta_i)``
over ``m`` code points inside the cap of radius ``theta0`` around the antipode."""

from .extension import AssumptionViolated, ExtensionPolynomial
from .gamma5 import (
    H5Result,
    H6Result,
    dual_multipliers,
    gram_gamma5,
    h5_bound_n4,
    h5_cells,
    h6_bound_n4,
    h6_cases,
    lambda_angle,
    psi_lower_bound,
)
from .planar import (
    REFERENCE_RHOMB_SPLIT,
    REFERENCE_TRIANGLE_GRID,
    F1,
    F2,
    F1_argmax,
    F_arc,
    arc_max,
    circumradius,
    h01,
    h2,
    h3_triangle_n3,
    h4_rhomb_n3,
    rho,
    rhomb_cells,
    triangle_cells,
    triangle_vertex_angle,
)
from .report import MIN_SLACK, HEntry, HOptions, HReport, UnsupportedMu, h_report
from .simplex import (
    LemmaHypothesisError,
    SimplexResult,
    chamber,
    check_powersum_hypotheses,
    h_simplex_powersum,
    h_simplex_triangulation,
    powersum_range,
    regular_simplex,
    sigma,
)

__all__ = [name for name in dir() if not name.startswith("_")]
