"""Slice functional calculus for Clifford-coefficient operator tuples.

Numerics for the S-spectrum, the noncommutative Cauchy kernel and
S-resolvent, contour evaluation of f(T), and the resolvent-chart route,
over the real Clifford algebras R_1 .. R_8.
"""

from .clifford import (
    CliffordAlgebra,
    ImagUnit,
    Multivector,
    Paravector,
    PlanePoint,
    algebra,
    blade_product,
    format_multivector,
    parse_multivector,
    parse_paravector,
    plane_embed,
    plane_of,
)
from .errors import (
    ContourError,
    ConvergenceError,
    OperatorSchemaError,
    SingularElementError,
    SingularOperatorError,
    SliceCalcError,
    SpectrumHitError,
)
from .operators import (
    CliffordMatrix,
    ModuleVector,
    ParavectorOperator,
    load_operator,
    operator_from_dict,
    operator_to_dict,
    save_operator,
)
from .series import (
    SliceSeriesFunction,
    cauchy_eval,
    cauchy_kernel,
    cauchy_product,
    constant_series,
    cos_series,
    eval_series,
    exp_series,
    geometric_series,
    kernel_directional_gap,
    kernel_obstruction_gap,
    kernel_series_partial,
    monomial,
    rational_pole,
    s_derivative,
    sin_series,
)
from .spectrum import (
    SpectrumComponent,
    SpectrumReport,
    commuting_joint_spectrum,
    containment_check,
    hausdorff_distance,
    left_resolvent_expansion,
    pencil,
    pencil_null_vectors,
    resolvent_equation_residual,
    s_resolvent,
    s_resolvent_series,
    s_spectrum_exact,
    s_spectrum_scan,
)
from .calculus import (
    CalculusResult,
    Circle,
    Contour,
    build_contour,
    f_of_T,
    moment_check,
    plane_independence_gap,
    product_residual,
)
from .chart import (
    ExtendedFunction,
    ResolventChart,
    companion_operator,
    f_of_T_direct,
    f_of_T_via_chart,
    moebius_spectrum,
    spectrum_correspondence_gap,
    transfer_series,
    transform_residual,
)

__version__ = "0.1.0"
