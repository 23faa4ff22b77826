"""Measurement-symbol algebra.

Exact symbolic calculus of measurement filters (normal forms over symbol
words with polynomial scalar coefficients), linear functionals and the
statistical layer on top of it, and a numeric matrix realization used as an
independent oracle for every reduction rule.  A small script DSL and the
``mqsym`` CLI sit on top.
"""

from .algebra import (
    AlgebraExpr,
    Identity,
    MSymbol,
    TAdd,
    TAdjoint,
    TMul,
    TScale,
    Tree,
    add,
    adjoint,
    combine,
    complete_measurement,
    conjugate,
    expand_identity,
    filter_of,
    identity,
    leaf,
    mul,
    normalize,
    render_expr,
    render_scalar,
    scalar_expr,
    scale,
    symbol,
    transpose,
    zero,
)
from .errors import MeasurementAlgebraError
from .functional import (
    GaugeAssignment,
    expectation_symbolic,
    gauge_transform,
    gauge_transform_scalar,
    probability_symbolic,
    trace,
)
from .realization import (
    Realization,
    Report,
    WaveFunction,
    apply_gauge,
    basis_wave,
    born_probability,
    change_basis,
    char_poly_check,
    conjugate_realization,
    eval_scalar,
    eval_tf,
    expectation_value,
    load_realization,
    make_realization,
    matrix_element,
    matrix_of,
    operator_from_spectrum,
    random_realization,
    spectral_function,
    transformation_matrix,
    verify_normal_form,
)
from .registry import ObservableDef, Registry, StateRef
from .scalar import ComplexRational, Monomial, ScalarExpr, TFIndeterminate, tf

__version__ = "0.1.0"

__all__ = [
    "AlgebraExpr", "ComplexRational", "GaugeAssignment", "Identity",
    "MSymbol", "MeasurementAlgebraError", "Monomial", "ObservableDef",
    "Realization", "Registry", "Report", "ScalarExpr", "StateRef",
    "TFIndeterminate", "TAdd", "TAdjoint", "TMul", "TScale", "Tree", "WaveFunction", "add", "adjoint", "apply_gauge",
    "basis_wave", "born_probability", "change_basis", "char_poly_check",
    "combine", "complete_measurement", "conjugate", "conjugate_realization",
    "eval_scalar", "eval_tf", "expand_identity", "expectation_symbolic",
    "expectation_value", "filter_of", "gauge_transform",
    "gauge_transform_scalar", "identity", "leaf", "load_realization",
    "make_realization", "matrix_element", "matrix_of", "mul", "normalize",
    "operator_from_spectrum", "probability_symbolic", "random_realization",
    "render_expr", "render_scalar", "scalar_expr", "scale",
    "spectral_function", "symbol", "tf", "trace", "transformation_matrix",
    "transpose", "verify_normal_form", "zero",
]
