"""Lie algebroids over polynomial charts and their infinitesimal ideal systems."""

from .algebroid import (
    ChartAlgebroid,
    abelian_algebroid,
    apply_vector_field,
    bracket_sections,
    lie_algebra_algebroid,
    poly_matrix,
    tangent_algebroid,
    validate_chart_algebroid,
    vector_field_bracket,
)
from .basic import (
    PairForm,
    a_curvature,
    basic_connection,
    bott_restriction_report,
    d_pair,
    j_preservation_report,
    pair_cocycle,
    pair_cocycle_from_tables,
    rho_star,
    zero_pair_form,
)
from .cocycles import (
    FullConnection,
    IISForm,
    PrimitiveResult,
    assemble_connection,
    atiyah_cocycle_iis,
    construct_extension_chart,
    d_iis,
    default_degree_bound,
    extension_difference_form,
    iis_form,
    is_chart_extension,
    primitive_search,
    zero_iis_form,
)
from .fibration import FibrationResult, make_coordinate_fibration
from .iis import (
    FAIL,
    PASS,
    TRUNCATED,
    IISCheck,
    IISData,
    anchor_spans_leaves,
    check_iis,
    flat_frame_report,
    iis1_direct_report,
    iis1_prime_report,
    iis2_report,
    iis3_report,
    power_series_frame,
    validate_iis_data,
)

