"""
Intrinsic calculus of slice functions

Conjugate, scalar and vector parts, the symmetrized function, the intrinsic
scalar product <f, g>_* = (f * g^c)_0 and wedge f ^_* g = (f * g - g * f)/2,
the four-component decomposition f = f0 + f1 I + f2 J + f3 K with respect to
an alternating basis, and the commutation criterion: f and g commute iff their
vector parts are linearly dependent over the slice-preserving functions.

Every operation works on stems; polynomial inputs give polynomial outputs.

Author: Slicexp Team
Version: 1.0.0
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import get_settings
from ..core.exceptions import DomainError
from .quaternion import I as UNIT_I
from .quaternion import J as UNIT_J
from .quaternion import K as UNIT_K
from .quaternion import ImaginaryUnit, Quaternion, conj_array, cross3, hamilton, mul
from .slicefn import (
    FunctionKind,
    QuaternionPolynomial,
    SliceFunction,
    grid_residual,
    is_identically_zero,
    polynomial,
    relative_tolerance,
    resolve_grid,
    star_product,
    stem_norm,
)

logger = logging.getLogger(__name__)

Basis = Tuple[ImaginaryUnit, ImaginaryUnit, ImaginaryUnit]


def _map_stem(f: SliceFunction, fn: Callable[[np.ndarray], np.ndarray], label: str) -> SliceFunction:
    return SliceFunction(f.domain, lambda z: fn(f.evaluator(z)), FunctionKind.COMPOSITE, label=label)


def _map_stems(
    f: SliceFunction,
    g: SliceFunction,
    fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    label: str,
) -> SliceFunction:
    return SliceFunction(
        f.domain.intersect(g.domain),
        lambda z: fn(f.evaluator(z), g.evaluator(z)),
        FunctionKind.COMPOSITE,
        label=label,
    )


def scalar_stem(values: np.ndarray) -> np.ndarray:
    """Embed complex scalars as stems (s, 0, 0, 0) of slice-preserving functions"""
    out = np.zeros(np.shape(values) + (4,), dtype=complex)
    out[..., 0] = values
    return out


# ---------------------------------------------------------------------------
# Conjugation and parts
# ---------------------------------------------------------------------------


def conjugate_fn(f: SliceFunction) -> SliceFunction:
    """f^c, the slice function of the stem F1^c + ıF2^c"""
    label = f"{f.label}^c"
    if f.polynomial is not None:
        return polynomial(f.polynomial.conj(), f.domain, label=label)
    return _map_stem(f, conj_array, label)


def scalar_part(f: SliceFunction) -> SliceFunction:
    """f0 = (f + f^c)/2, slice-preserving"""
    label = f"{f.label}_0"
    if f.polynomial is not None:
        return polynomial(f.polynomial.scalar_part(), f.domain, label=label)

    def keep_scalar(c: np.ndarray) -> np.ndarray:
        return scalar_stem(c[..., 0])

    return _map_stem(f, keep_scalar, label)


def vector_part(f: SliceFunction) -> SliceFunction:
    """f_v = (f - f^c)/2"""
    label = f"{f.label}_v"
    if f.polynomial is not None:
        return polynomial(f.polynomial.vector_part(), f.domain, label=label)

    def drop_scalar(c: np.ndarray) -> np.ndarray:
        out = np.array(c, dtype=complex, copy=True)
        out[..., 0] = 0.0
        return out

    return _map_stem(f, drop_scalar, label)


def symmetrized(f: SliceFunction) -> SliceFunction:
    """
    f^s = f * f^c = f0^2 + f1^2 + f2^2 + f3^2.

    The product is projected onto its scalar part.
    """
    return scalar_part(star_product(f, conjugate_fn(f))).with_label(f"{f.label}^s")


def star_scalar(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """<f, g>_* = (f * g^c)_0, symmetric and slice-preserving"""
    label = f"<{f.label}, {g.label}>_*"
    if f.polynomial is not None and g.polynomial is not None:
        product = f.polynomial.star(g.polynomial.conj())
        return polynomial(product.scalar_part(), f.domain.intersect(g.domain), label=label)

    def dot(c: np.ndarray, d: np.ndarray) -> np.ndarray:
        return scalar_stem(np.sum(c * d, axis=-1))

    return _map_stems(f, g, dot, label)


def star_wedge(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """f ^_* g = (f * g - g * f)/2"""
    label = f"{f.label} ^ {g.label}"
    if f.polynomial is not None and g.polynomial is not None:
        commutator = f.polynomial.star(g.polynomial) - g.polynomial.star(f.polynomial)
        return polynomial(commutator.scale(0.5), f.domain.intersect(g.domain), label=label)

    def wedge(c: np.ndarray, d: np.ndarray) -> np.ndarray:
        return 0.5 * (hamilton(c, d) - hamilton(d, c))

    return _map_stems(f, g, wedge, label)


# ---------------------------------------------------------------------------
# Decomposition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """
    Components of f = f0 + f1 I + f2 J + f3 K, all slice-preserving.
    """

    f0: SliceFunction
    f1: SliceFunction
    f2: SliceFunction
    f3: SliceFunction
    basis: Basis

    @property
    def components(self) -> Tuple[SliceFunction, SliceFunction, SliceFunction, SliceFunction]:
        return (self.f0, self.f1, self.f2, self.f3)

    def reconstruct(self) -> SliceFunction:
        unit_i, unit_j, unit_k = self.basis
        return self.f0 + self.f1 * unit_i + self.f2 * unit_j + self.f3 * unit_k

    def reconstruction_residual(self, f: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
        return grid_residual(self.reconstruct(), f, grid)


def _check_basis(basis: Basis) -> Basis:
    units = tuple(ImaginaryUnit.of(u) for u in basis)
    tol = get_settings().tolerances.alg
    unit_i, unit_j, unit_k = units
    gram = np.array([[float(np.dot(a.as_array(), b.as_array())) for b in units] for a in units])
    if np.max(np.abs(gram - np.eye(3))) > tol or not mul(unit_i, unit_j).isclose(unit_k, tol):
        raise DomainError(
            "Basis must be orthonormal with K = IJ",
            error_code="INVALID_BASIS",
            context={"basis": [u.to_list() for u in units]},
        )
    return units  # type: ignore[return-value]


def decompose(f: SliceFunction, basis: Optional[Basis] = None) -> Decomposition:
    """
    Unique slice-preserving components of f along (1, I, J, K).

    The l-th component is the bilinear dot product of the stem's vector part
    with the l-th basis vector.
    """
    basis = _check_basis(basis or (UNIT_I, UNIT_J, UNIT_K))
    directions = [u.as_array()[1:] for u in basis]
    names = ["I", "J", "K"]
    f0 = scalar_part(f)

    if f.polynomial is not None:
        vec = f.polynomial.coeffs[:, 1:]
        parts = [
            polynomial(vec @ e, f.domain, label=f"{f.label}_{name}") for e, name in zip(directions, names)
        ]
    else:
        parts = [
            _map_stem(f, lambda c, e=e: scalar_stem(c[..., 1:] @ e), f"{f.label}_{name}")
            for e, name in zip(directions, names)
        ]
    return Decomposition(f0, parts[0], parts[1], parts[2], basis)


# ---------------------------------------------------------------------------
# Scalar-vector product formula
# ---------------------------------------------------------------------------


def star_product_sv(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """
    f * g = f0 g0 - <f_v, g_v>_* + f0 g_v + g0 f_v + f_v ^_* g_v.

    Evaluated from dot and cross products of the stem vector parts, so it is
    independent of the Hamilton product used by ``star_product``.
    """
    label = f"({f.label} *sv {g.label})"
    if f.polynomial is not None and g.polynomial is not None:
        f0, fv = scalar_part(f), vector_part(f)
        g0, gv = scalar_part(g), vector_part(g)
        result = (
            star_product(f0, g0)
            - star_scalar(fv, gv)
            + star_product(f0, gv)
            + star_product(g0, fv)
            + star_wedge(fv, gv)
        )
        return result.with_label(label)

    def formula(c: np.ndarray, d: np.ndarray) -> np.ndarray:
        c0, cv = c[..., 0], c[..., 1:]
        d0, dv = d[..., 0], d[..., 1:]
        out = np.empty(np.broadcast_shapes(c.shape, d.shape), dtype=complex)
        out[..., 0] = c0 * d0 - np.sum(cv * dv, axis=-1)
        out[..., 1:] = c0[..., None] * dv + d0[..., None] * cv + cross3(cv, dv)
        return out

    return _map_stems(f, g, formula, label)


# ---------------------------------------------------------------------------
# Commutation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearDependence:
    """
    Result of the commutation test.

    Attributes:
        dependent: Whether f ^_* g ≡ 0 (equivalently f * g = g * f)
        wedge_sup: Measured size of f ^_* g (coefficient or grid sup)
        alpha, beta: Real coefficient arrays of slice-preserving witnesses with
            alpha f_v + beta g_v ≡ 0, when extracted
        indeterminate: f_v^s ≡ 0 but f_v ≢ 0 on a domain without real points
    """

    dependent: bool
    wedge_sup: float
    alpha: Optional[np.ndarray] = None
    beta: Optional[np.ndarray] = None
    indeterminate: bool = False

    @property
    def witnesses(self) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        if self.alpha is None or self.beta is None:
            return None
        return self.alpha, self.beta

    def __bool__(self) -> bool:
        return self.dependent


def _trim(coeffs: np.ndarray, tol: float) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    keep = np.flatnonzero(np.abs(coeffs) > tol)
    return coeffs[: keep[-1] + 1] if keep.size else np.zeros(1)


def real_gcd(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """
    Monic greatest common divisor of two real polynomials (ascending coefficients)
    by the Euclidean algorithm with relative trimming.
    """
    scale = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))), 1.0)
    a = _trim(a, tol * scale)
    b = _trim(b, tol * scale)
    while np.any(b):
        _, remainder = P.polydiv(a, b)
        a, b = b, _trim(remainder, tol * scale)
    if not np.any(a):
        return np.ones(1)
    return a / a[-1]


def _real_times(coeffs: np.ndarray, f: QuaternionPolynomial) -> QuaternionPolynomial:
    return QuaternionPolynomial(np.asarray(coeffs, dtype=float)).star(f)


def witness_residual(
    alpha: np.ndarray, beta: np.ndarray, fv: QuaternionPolynomial, gv: QuaternionPolynomial
) -> float:
    """Largest coefficient of alpha f_v + beta g_v"""
    combination = _real_times(alpha, fv) + _real_times(beta, gv)
    return float(np.max(np.linalg.norm(combination.coeffs, axis=1)))


def _polynomial_witnesses(
    fv: QuaternionPolynomial, gv: QuaternionPolynomial, tol: float
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Solve alpha f_v + beta g_v ≡ 0 from the proportionality f_l g_v - g_l f_v ≡ 0.
    """
    if fv.is_zero:
        return np.ones(1), np.zeros(1)

    vec_f = fv.coeffs[:, 1:]
    vec_g = np.zeros((max(gv.coeffs.shape[0], 1), 3))
    vec_g[: gv.coeffs.shape[0]] = gv.coeffs[:, 1:]
    component = int(np.argmax(np.linalg.norm(vec_f, axis=0)))
    alpha = -vec_g[:, component]
    beta = vec_f[:, component].copy()

    divisor = real_gcd(alpha, beta, tol) if np.any(alpha) else np.ones(1)
    if divisor.shape[0] > 1:
        reduced_alpha = P.polydiv(alpha, divisor)[0]
        reduced_beta = P.polydiv(beta, divisor)[0]
        scale = 1.0 + float(np.max(np.abs(fv.coeffs))) * float(np.max(np.abs(gv.coeffs)))
        if witness_residual(reduced_alpha, reduced_beta, fv, gv) <= tol * scale:
            return _trim(reduced_alpha, 0.0), _trim(reduced_beta, 0.0)
        logger.warning("GCD reduction of dependence witnesses failed verification; keeping unreduced pair")
    return _trim(alpha, 0.0), _trim(beta, 0.0)


def commutes(
    f: SliceFunction,
    g: SliceFunction,
    tol: Optional[float] = None,
    grid: Optional[np.ndarray] = None,
) -> LinearDependence:
    """
    Decide whether f * g = g * f, i.e. f ^_* g ≡ 0.

    For two polynomials the test is coefficientwise and, when dependent, slice-
    preserving witnesses (alpha, beta) with alpha f_v + beta g_v ≡ 0 are
    returned (alpha = 1, beta = 0 when f_v ≡ 0). Otherwise the wedge is
    sampled on the grid and no witnesses are produced.
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    fv, gv = vector_part(f), vector_part(g)

    if fv.polynomial is not None and gv.polynomial is not None:
        wedge = star_wedge(fv, gv).polynomial
        assert wedge is not None
        wedge_sup = float(np.max(np.linalg.norm(wedge.coeffs, axis=1)))
        scale = float(np.max(np.abs(fv.polynomial.coeffs))) * float(np.max(np.abs(gv.polynomial.coeffs)))
        dependent = wedge_sup <= relative_tolerance(tol, scale)
        if not dependent:
            return LinearDependence(False, wedge_sup)
        if _null_symmetrized_regime(f, fv, tol, grid):
            return LinearDependence(True, wedge_sup, indeterminate=True)
        alpha, beta = _polynomial_witnesses(fv.polynomial, gv.polynomial, tol)
        return LinearDependence(True, wedge_sup, alpha, beta)

    points = resolve_grid(f.domain.intersect(g.domain), grid)
    c, d = f.stem(points), g.stem(points)
    wedge_sup = float(np.max(stem_norm(cross3(c[..., 1:], d[..., 1:])))) if points.size else 0.0
    scale = float(np.max(stem_norm(c[..., 1:]))) * float(np.max(stem_norm(d[..., 1:]))) if points.size else 0.0
    dependent = wedge_sup <= relative_tolerance(tol, scale)
    indeterminate = dependent and _null_symmetrized_regime(f, fv, tol, points)
    logger.debug("Commutation test", extra={"wedge_sup": wedge_sup, "dependent": dependent})
    return LinearDependence(dependent, wedge_sup, indeterminate=indeterminate)


def _null_symmetrized_regime(
    f: SliceFunction, fv: SliceFunction, tol: float, grid: Optional[np.ndarray]
) -> bool:
    """f_v^s ≡ 0 while f_v ≢ 0, only possible without real points"""
    if f.domain.contains_real:
        return False
    return is_identically_zero(symmetrized(fv), tol, grid) and not is_identically_zero(fv, tol, grid)


# ---------------------------------------------------------------------------
# Slice preservation
# ---------------------------------------------------------------------------


def _vector_samples(f: SliceFunction, grid: Optional[np.ndarray]) -> Tuple[np.ndarray, float]:
    """Real 3-vectors spanned by the vector part of f, and the overall scale"""
    if f.polynomial is not None:
        vectors = f.polynomial.coeffs[:, 1:]
        scale = float(np.max(np.linalg.norm(f.polynomial.coeffs, axis=1)))
        return vectors, scale
    values = f.stem(resolve_grid(f.domain, grid))
    vectors = np.concatenate([values[..., 1:].real, values[..., 1:].imag], axis=0)
    scale = float(np.max(stem_norm(values))) if values.size else 0.0
    return vectors, scale


def is_slice_preserving(f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None) -> bool:
    """Stem values real (vector parts vanish) within tolerance"""
    tol = get_settings().tolerances.eval if tol is None else tol
    vectors, scale = _vector_samples(f, grid)
    return float(np.max(np.linalg.norm(vectors, axis=-1), initial=0.0)) <= relative_tolerance(tol, scale)


def is_CJ_preserving(
    f: SliceFunction,
    unit: Quaternion,
    tol: Optional[float] = None,
    grid: Optional[np.ndarray] = None,
) -> bool:
    """Stem values in R + R J, i.e. vector parts parallel to J"""
    tol = get_settings().tolerances.eval if tol is None else tol
    direction = ImaginaryUnit.of(unit).as_array()[1:]
    vectors, scale = _vector_samples(f, grid)
    off_axis = vectors - np.outer(vectors @ direction, direction)
    return float(np.max(np.linalg.norm(off_axis, axis=-1), initial=0.0)) <= relative_tolerance(tol, scale)


def detect_slice_unit(
    f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None
) -> Optional[ImaginaryUnit]:
    """
    The unit J with f in SR_J, if the vector part spans a single direction.

    Returns None when f_v vanishes (every J works) or spans more than one
    direction. The sign of J is fixed by making its first nonzero coordinate
    positive.
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    vectors, scale = _vector_samples(f, grid)
    if vectors.size == 0:
        return None
    singular = np.linalg.svd(vectors, compute_uv=False)
    threshold = relative_tolerance(tol, scale)
    if singular[0] <= threshold or (singular.shape[0] > 1 and singular[1] > threshold):
        return None
    direction = np.linalg.svd(vectors)[2][0]
    leading = direction[np.flatnonzero(np.abs(direction) > 1e-12)[0]]
    if leading < 0:
        direction = -direction
    return ImaginaryUnit.from_vector(*direction)


# ---------------------------------------------------------------------------
# Residual helpers for algebraic identities
# ---------------------------------------------------------------------------


def vector_square_residual(f: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """Residual of (f_v)^{*2} = -f_v^s"""
    fv = vector_part(f)
    return grid_residual(star_product(fv, fv), -symmetrized(fv), grid)


def wedge_symmetrized_residual(f: SliceFunction, g: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """Residual of (f ^_* g)^s = f_v^s g_v^s - <f_v, g_v>_*^2"""
    fv, gv = vector_part(f), vector_part(g)
    inner = star_scalar(fv, gv)
    rhs = star_product(symmetrized(fv), symmetrized(gv)) - star_product(inner, inner)
    return grid_residual(symmetrized(star_wedge(f, g)), rhs, grid)


def scalar_product_residual(f: SliceFunction, g: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """Residual of <f, g>_* = f0 g0 - (f_v * g_v)_0"""
    lhs = star_scalar(f, g)
    rhs = star_product(scalar_part(f), scalar_part(g)) - scalar_part(star_product(vector_part(f), vector_part(g)))
    return grid_residual(lhs, rhs, grid)
