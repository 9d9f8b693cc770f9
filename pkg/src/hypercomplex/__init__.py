"""
Numerical library for quaternionic slice functions

Quaternion arithmetic, stems and the *-product, the intrinsic calculus, the
*-exponential with its sum rule, and square roots of slice-preserving
polynomials.
"""

from .expressions import ExpressionParser, load_json, parse_function
from .intrinsic import (
    LinearDependence,
    commutes,
    conjugate_fn,
    decompose,
    detect_slice_unit,
    is_CJ_preserving,
    is_slice_preserving,
    scalar_part,
    star_product_sv,
    star_scalar,
    star_wedge,
    symmetrized,
    vector_part,
)
from .quaternion import I, ImaginaryUnit, J, K, ONE, Quaternion, ZERO, orthonormal_basis, sphere_coords
from .slicefn import (
    DomainKind,
    PlanarDomain,
    QuaternionPolynomial,
    SliceFunction,
    StemValue,
    builtin,
    constant,
    evaluate,
    identity,
    poly_star_power,
    polynomial,
    representation_check,
    slice_preserving,
    star_product,
    stem_mul,
    tau,
)
from .sqrt import (
    RealPolynomial,
    SqrtDecision,
    ZeroStructure,
    find_roots,
    has_sqrt,
    sqrt,
    symmetrized_has_sqrt,
    zero_structure,
)
from .starexp import (
    ExpClass,
    ExpClassification,
    IdentityReport,
    SumRuleCase,
    SumRuleReport,
    classify_exp,
    cos_star,
    exp_star_closed,
    exp_star_series,
    exp_star_sqrtform,
    mu_nu,
    sin_star,
    sum_rule,
    verify_exp_identities,
)

__all__ = [
    "Quaternion",
    "ImaginaryUnit",
    "ONE",
    "ZERO",
    "I",
    "J",
    "K",
    "sphere_coords",
    "orthonormal_basis",
    "DomainKind",
    "PlanarDomain",
    "StemValue",
    "QuaternionPolynomial",
    "SliceFunction",
    "stem_mul",
    "polynomial",
    "constant",
    "identity",
    "slice_preserving",
    "builtin",
    "tau",
    "evaluate",
    "star_product",
    "poly_star_power",
    "representation_check",
    "conjugate_fn",
    "scalar_part",
    "vector_part",
    "symmetrized",
    "star_scalar",
    "star_wedge",
    "decompose",
    "star_product_sv",
    "LinearDependence",
    "commutes",
    "is_slice_preserving",
    "is_CJ_preserving",
    "detect_slice_unit",
    "exp_star_series",
    "exp_star_closed",
    "exp_star_sqrtform",
    "cos_star",
    "sin_star",
    "mu_nu",
    "ExpClass",
    "ExpClassification",
    "classify_exp",
    "IdentityReport",
    "verify_exp_identities",
    "SumRuleCase",
    "SumRuleReport",
    "sum_rule",
    "RealPolynomial",
    "ZeroStructure",
    "SqrtDecision",
    "find_roots",
    "zero_structure",
    "has_sqrt",
    "sqrt",
    "symmetrized_has_sqrt",
    "ExpressionParser",
    "parse_function",
    "load_json",
]
