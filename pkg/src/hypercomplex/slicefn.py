"""
Slice functions and their stems

A slice function f on a circular set Omega_D is induced by a stem function
F = F1 + ıF2 defined on a conjugation-symmetric planar set D:

    f(alpha + beta I) = F1(alpha + i beta) + I F2(alpha + i beta)

Stem values live in H ⊗ C. They are stored as complex 4-vectors c = F1 + i F2
(componentwise), so the stem product (p + ıq)(p' + ıq') = pp' - qq' + ı(pq' + qp')
is the Hamilton product with complex coefficients, and the star product of two
slice functions is the pointwise product of their stems.

Stem evaluators are called on the closed upper half plane only; values below
the real axis come from the stem symmetry F(z̄) = conj(F(z)).

Author: Slicexp Team
Version: 1.0.0
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, Iterable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import get_settings
from ..core.exceptions import DomainError, PointOutsideDomainError, ValidationError
from ..core.validation import Validator
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    conj_array,
    hamilton,
    inv,
    mul,
    norm,
    sphere_coords,
)

logger = logging.getLogger(__name__)

StemEvaluator = Callable[[np.ndarray], np.ndarray]
Scalar = Union[int, float, Quaternion]

BUILTINS: Dict[str, Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "sinh": np.sinh,
    "cosh": np.cosh,
}


# ---------------------------------------------------------------------------
# Planar domains
# ---------------------------------------------------------------------------


class DomainKind(str, Enum):
    """Conjugation-symmetric planar domains with simply connected slices"""
    WHOLE_PLANE = "whole-plane"
    RECTANGLE = "rectangle"
    PLANE_MINUS_REAL = "plane-minus-real-axis"
    RECTANGLE_MINUS_REAL = "rectangle-minus-real-axis"


@dataclass(frozen=True)
class PlanarDomain:
    """
    Planar domain D, symmetric under complex conjugation.

    Rectangles are [alpha_min, alpha_max] x [-beta_max, beta_max]. The two
    ``*-minus-real`` kinds remove the real axis, so their circularizations
    contain no real point.
    """

    kind: DomainKind = DomainKind.WHOLE_PLANE
    alpha_min: Optional[float] = None
    alpha_max: Optional[float] = None
    beta_max: Optional[float] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", DomainKind(self.kind))
        if self.is_bounded:
            if self.alpha_min is None or self.alpha_max is None or self.beta_max is None:
                raise ValidationError(
                    "Rectangle domains need alpha_min, alpha_max and beta_max",
                    error_code="INVALID_DOMAIN",
                    context={"kind": self.kind.value},
                )
            if not self.alpha_min < self.alpha_max or self.beta_max <= 0.0:
                raise ValidationError(
                    "Rectangle bounds must satisfy alpha_min < alpha_max and beta_max > 0",
                    error_code="INVALID_DOMAIN",
                    context={
                        "alpha_min": self.alpha_min,
                        "alpha_max": self.alpha_max,
                        "beta_max": self.beta_max,
                    },
                )
        else:
            object.__setattr__(self, "alpha_min", None)
            object.__setattr__(self, "alpha_max", None)
            object.__setattr__(self, "beta_max", None)

    # Constructors

    @classmethod
    def whole_plane(cls) -> "PlanarDomain":
        return cls(DomainKind.WHOLE_PLANE)

    @classmethod
    def plane_minus_real(cls) -> "PlanarDomain":
        return cls(DomainKind.PLANE_MINUS_REAL)

    @classmethod
    def rectangle(
        cls, alpha_min: float, alpha_max: float, beta_max: float, minus_real: bool = False
    ) -> "PlanarDomain":
        kind = DomainKind.RECTANGLE_MINUS_REAL if minus_real else DomainKind.RECTANGLE
        return cls(kind, float(alpha_min), float(alpha_max), float(beta_max))

    # Properties

    @property
    def is_bounded(self) -> bool:
        return self.kind in (DomainKind.RECTANGLE, DomainKind.RECTANGLE_MINUS_REAL)

    @property
    def contains_real(self) -> bool:
        return self.kind in (DomainKind.WHOLE_PLANE, DomainKind.RECTANGLE)

    def bounding_box(self) -> Tuple[float, float, float]:
        """Box used for sampling; unbounded kinds use the configured default box"""
        if self.is_bounded:
            return self.alpha_min, self.alpha_max, self.beta_max  # type: ignore[return-value]
        grid = get_settings().grid
        return grid.alpha_min, grid.alpha_max, grid.beta_max

    def contains(self, alpha: Any, beta: Any, tol: Optional[float] = None) -> np.ndarray:
        """
        Vectorized membership test for points alpha + i beta.

        Rectangle edges are inclusive within ``tol``; removed real axes exclude
        |beta| < tol.
        """
        tol = get_settings().tolerances.alg if tol is None else tol
        alpha = np.asarray(alpha, dtype=float)
        beta = np.asarray(beta, dtype=float)
        inside = np.isfinite(alpha) & np.isfinite(beta)
        if self.is_bounded:
            inside &= (alpha >= self.alpha_min - tol) & (alpha <= self.alpha_max + tol)
            inside &= np.abs(beta) <= self.beta_max + tol
        if not self.contains_real:
            inside &= np.abs(beta) >= tol
        return inside

    def intersect(self, other: "PlanarDomain") -> "PlanarDomain":
        """Common domain of two functions"""
        if self == other:
            return self
        minus_real = not (self.contains_real and other.contains_real)
        boxes = [d for d in (self, other) if d.is_bounded]
        if not boxes:
            return PlanarDomain.plane_minus_real() if minus_real else PlanarDomain.whole_plane()

        alpha_min = max(d.alpha_min for d in boxes)  # type: ignore[type-var]
        alpha_max = min(d.alpha_max for d in boxes)  # type: ignore[type-var]
        beta_max = min(d.beta_max for d in boxes)  # type: ignore[type-var]
        if alpha_min >= alpha_max:
            raise DomainError(
                "Domains do not intersect",
                error_code="EMPTY_INTERSECTION",
                context={"left": self.to_dict(), "right": other.to_dict()},
            )
        return PlanarDomain.rectangle(alpha_min, alpha_max, beta_max, minus_real=minus_real)

    def sample_grid(
        self,
        n_alpha: Optional[int] = None,
        n_beta: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> np.ndarray:
        """
        Sample points alpha + i beta over the bounding box.

        The grid is regular; with a seed each node is jittered by up to half a
        cell inside the box. Nodes outside the domain (the real axis for
        ``*-minus-real`` kinds) are dropped.

        Returns:
            1-D complex array of sample points
        """
        settings = get_settings().grid
        n_alpha = settings.n_alpha if n_alpha is None else n_alpha
        n_beta = settings.n_beta if n_beta is None else n_beta
        Validator.validate_grid([n_alpha, n_beta])

        alpha_min, alpha_max, beta_max = self.bounding_box()
        alphas = np.linspace(alpha_min, alpha_max, n_alpha)
        betas = np.linspace(-beta_max, beta_max, n_beta)
        aa, bb = np.meshgrid(alphas, betas, indexing="ij")

        if seed is not None:
            rng = np.random.default_rng(seed)
            da = (alpha_max - alpha_min) / (n_alpha - 1)
            db = 2.0 * beta_max / (n_beta - 1)
            aa = np.clip(aa + rng.uniform(-0.5, 0.5, aa.shape) * da, alpha_min, alpha_max)
            bb = np.clip(bb + rng.uniform(-0.5, 0.5, bb.shape) * db, -beta_max, beta_max)

        points = (aa + 1j * bb).ravel()
        keep = self.contains(points.real, points.imag)
        return points[keep]

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind.value, "contains_real": self.contains_real}
        if self.is_bounded:
            data.update(alpha_min=self.alpha_min, alpha_max=self.alpha_max, beta_max=self.beta_max)
        return data


def resolve_grid(domain: PlanarDomain, grid: Optional[np.ndarray] = None) -> np.ndarray:
    """Return ``grid`` as a flat complex array, or the default grid of ``domain``"""
    if grid is None:
        return domain.sample_grid()
    return np.asarray(grid, dtype=complex).ravel()


# ---------------------------------------------------------------------------
# Stem values
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StemValue:
    """Element p + ıq of H ⊗ C"""

    p: Quaternion
    q: Quaternion

    @classmethod
    def from_complex(cls, c: np.ndarray) -> "StemValue":
        c = np.asarray(c, dtype=complex)
        return cls(Quaternion.from_array(c.real), Quaternion.from_array(c.imag))

    def to_complex(self) -> np.ndarray:
        return self.p.as_array() + 1j * self.q.as_array()

    def __mul__(self, other: "StemValue") -> "StemValue":
        return stem_mul(self, other)

    def __add__(self, other: "StemValue") -> "StemValue":
        return StemValue(self.p + other.p, self.q + other.q)

    def overline(self) -> "StemValue":
        """Complex conjugate p - ıq"""
        return StemValue(self.p, -self.q)

    def isclose(self, other: "StemValue", tol: float = 1e-12) -> bool:
        return self.p.isclose(other.p, tol) and self.q.isclose(other.q, tol)


def stem_mul(u: StemValue, v: StemValue) -> StemValue:
    """Stem product (pp' - qq', pq' + qp') with Hamilton products in this order"""
    return StemValue(mul(u.p, v.p) - mul(u.q, v.q), mul(u.p, v.q) + mul(u.q, v.p))


def stem_norm(c: np.ndarray) -> np.ndarray:
    """Euclidean norm of stacked stem values over their eight real components"""
    return np.sqrt(np.sum(np.abs(c) ** 2, axis=-1))


def stem_sum_norm(c: np.ndarray) -> np.ndarray:
    """|F1| + |F2|, a submultiplicative norm for the stem product"""
    return np.linalg.norm(c.real, axis=-1) + np.linalg.norm(c.imag, axis=-1)


# ---------------------------------------------------------------------------
# Quaternion polynomials
# ---------------------------------------------------------------------------


def _as_coefficient_array(coeffs: Any) -> np.ndarray:
    array = np.asarray(coeffs, dtype=float)
    if array.ndim == 1:
        # a list of reals: slice-preserving polynomial
        array = np.concatenate([array[:, None], np.zeros((array.shape[0], 3))], axis=1)
    if array.ndim != 2 or array.shape[1] != 4 or array.shape[0] == 0:
        raise ValidationError(
            "Polynomial coefficients must be a non-empty list of [w, x, y, z]",
            error_code="INVALID_COEFFICIENTS",
            context={"shape": list(array.shape)},
        )
    if not np.all(np.isfinite(array)):
        raise ValidationError("Polynomial coefficients must be finite", error_code="NON_FINITE_VALUE")
    nonzero = np.flatnonzero(np.any(array != 0.0, axis=1))
    length = int(nonzero[-1]) + 1 if nonzero.size else 1
    return array[:length].copy()


@dataclass(frozen=True, eq=False)
class QuaternionPolynomial:
    """
    Polynomial f(q) = sum q^n a_n with quaternion coefficients on the right.

    Coefficients are stored as an array of shape (d + 1, 4); trailing zero
    coefficients are stripped, the zero polynomial keeps one zero row.
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _as_coefficient_array(self.coeffs))
        self.coeffs.setflags(write=False)

    @classmethod
    def from_quaternions(cls, coeffs: Iterable[Quaternion]) -> "QuaternionPolynomial":
        return cls(np.array([q.to_list() for q in coeffs], dtype=float))

    @classmethod
    def from_json(cls, coeffs: Any, field_name: str = "coeffs") -> "QuaternionPolynomial":
        return cls(np.array(Validator.validate_coefficients(coeffs, field_name), dtype=float))

    @classmethod
    def one(cls) -> "QuaternionPolynomial":
        return cls(np.array([[1.0, 0.0, 0.0, 0.0]]))

    @classmethod
    def constant(cls, value: Quaternion) -> "QuaternionPolynomial":
        return cls(value.as_array()[None, :])

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    @property
    def is_real(self) -> bool:
        """True when every coefficient is real, i.e. f is slice-preserving"""
        return not np.any(self.coeffs[:, 1:])

    def coefficient(self, n: int) -> Quaternion:
        return Quaternion.from_array(self.coeffs[n])

    def real_coefficients(self) -> np.ndarray:
        return self.coeffs[:, 0].copy()

    def to_list(self) -> list:
        return self.coeffs.tolist()

    def stem(self, z: np.ndarray) -> np.ndarray:
        """F(z) = sum z^n a_n as complex 4-vectors, shape z.shape + (4,)"""
        z = np.asarray(z, dtype=complex)
        return np.moveaxis(P.polyval(z, self.coeffs.astype(complex)), 0, -1)

    # Ring operations

    def __add__(self, other: "QuaternionPolynomial") -> "QuaternionPolynomial":
        size = max(self.coeffs.shape[0], other.coeffs.shape[0])
        out = np.zeros((size, 4))
        out[: self.coeffs.shape[0]] += self.coeffs
        out[: other.coeffs.shape[0]] += other.coeffs
        return QuaternionPolynomial(out)

    def __neg__(self) -> "QuaternionPolynomial":
        return QuaternionPolynomial(-self.coeffs)

    def __sub__(self, other: "QuaternionPolynomial") -> "QuaternionPolynomial":
        return self + (-other)

    def scale(self, factor: Scalar, left: bool = False) -> "QuaternionPolynomial":
        """Multiply every coefficient by a real or a quaternion (on the right by default)"""
        if isinstance(factor, Quaternion):
            a = factor.as_array()
            coeffs = hamilton(a, self.coeffs) if left else hamilton(self.coeffs, a)
            return QuaternionPolynomial(coeffs)
        return QuaternionPolynomial(self.coeffs * float(factor))

    def star(self, other: "QuaternionPolynomial") -> "QuaternionPolynomial":
        """Convolution c_n = sum_{m <= n} a_m b_{n-m} with products in this order"""
        out = np.zeros((self.coeffs.shape[0] + other.coeffs.shape[0] - 1, 4))
        for m, a in enumerate(self.coeffs):
            if np.any(a):
                out[m : m + other.coeffs.shape[0]] += hamilton(a, other.coeffs)
        return QuaternionPolynomial(out)

    def conj(self) -> "QuaternionPolynomial":
        return QuaternionPolynomial(conj_array(self.coeffs))

    def scalar_part(self) -> "QuaternionPolynomial":
        out = np.zeros_like(self.coeffs)
        out[:, 0] = self.coeffs[:, 0]
        return QuaternionPolynomial(out)

    def vector_part(self) -> "QuaternionPolynomial":
        out = self.coeffs.copy()
        out[:, 0] = 0.0
        return QuaternionPolynomial(out)

    def allclose(self, other: "QuaternionPolynomial", tol: float = 1e-12) -> bool:
        return coefficient_distance(self, other) <= tol

    def __repr__(self) -> str:
        return f"QuaternionPolynomial({self.coeffs.tolist()!r})"


def coefficient_distance(a: QuaternionPolynomial, b: QuaternionPolynomial) -> float:
    """Largest coefficientwise quaternion distance between two polynomials"""
    return float(np.max(np.linalg.norm((a - b).coeffs, axis=1)))


# ---------------------------------------------------------------------------
# Slice functions
# ---------------------------------------------------------------------------


class FunctionKind(str, Enum):
    """How a slice function is represented"""
    POLYNOMIAL = "polynomial"
    ELEMENTARY = "elementary"
    COMPOSITE = "composite"


@dataclass(frozen=True, eq=False)
class SliceFunction:
    """
    Slice function given by its stem evaluator.

    Attributes:
        domain: Planar domain D of the stem
        evaluator: Maps complex points with Im z >= 0 to stem values (..., 4)
        kind: Representation tag
        polynomial: Coefficients when the function is a polynomial
        label: Human-readable name used in reports
        info: Free-form metadata (e.g. series truncation depth)
    """

    domain: PlanarDomain
    evaluator: StemEvaluator
    kind: FunctionKind = FunctionKind.COMPOSITE
    polynomial: Optional[QuaternionPolynomial] = None
    label: str = "f"
    info: Dict[str, Any] = field(default_factory=dict, compare=False)

    def stem(self, z: Any) -> np.ndarray:
        """
        Stem values at complex points, extended to Im z < 0 by F(z̄) = conj(F(z)).

        Returns:
            Complex array of shape z.shape + (4,)
        """
        z = np.asarray(z, dtype=complex)
        lower = z.imag < 0
        values = np.asarray(self.evaluator(np.where(lower, np.conj(z), z)), dtype=complex)
        values = np.broadcast_to(values, z.shape + (4,))
        return np.where(lower[..., None], np.conj(values), values)

    def __call__(self, a: Quaternion) -> Quaternion:
        return evaluate(self, a)

    @property
    def is_polynomial(self) -> bool:
        return self.polynomial is not None

    # Ring operations; constants multiply on the right unless written on the left

    def __add__(self, other: "SliceFunction") -> "SliceFunction":
        return add(self, other)

    def __sub__(self, other: "SliceFunction") -> "SliceFunction":
        return add(self, -other)

    def __neg__(self) -> "SliceFunction":
        return scale(self, -1.0)

    def __mul__(self, factor: Scalar) -> "SliceFunction":
        if isinstance(factor, (int, float, Quaternion)):
            return scale(self, factor)
        return NotImplemented

    def __rmul__(self, factor: Scalar) -> "SliceFunction":
        if isinstance(factor, (int, float, Quaternion)):
            return scale(self, factor, left=True)
        return NotImplemented

    def star(self, other: "SliceFunction") -> "SliceFunction":
        return star_product(self, other)

    def with_label(self, label: str) -> "SliceFunction":
        return SliceFunction(self.domain, self.evaluator, self.kind, self.polynomial, label, dict(self.info))

    def __repr__(self) -> str:
        return f"SliceFunction(label={self.label!r}, kind={self.kind.value}, domain={self.domain.kind.value})"


# Constructors


def polynomial(
    coeffs: Union[QuaternionPolynomial, Any],
    domain: Optional[PlanarDomain] = None,
    label: Optional[str] = None,
) -> SliceFunction:
    """Slice function q -> sum q^n a_n"""
    poly = coeffs if isinstance(coeffs, QuaternionPolynomial) else QuaternionPolynomial(coeffs)
    return SliceFunction(
        domain=domain or PlanarDomain.whole_plane(),
        evaluator=poly.stem,
        kind=FunctionKind.POLYNOMIAL,
        polynomial=poly,
        label=label or f"poly(deg {poly.degree})",
    )


def constant(value: Union[Quaternion, float], domain: Optional[PlanarDomain] = None) -> SliceFunction:
    value = value if isinstance(value, Quaternion) else Quaternion(float(value))
    return polynomial(QuaternionPolynomial.constant(value), domain, label=str(value))


def identity(domain: Optional[PlanarDomain] = None) -> SliceFunction:
    return polynomial(np.array([[0.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]), domain, label="q")


def slice_preserving(
    fn: Callable[[np.ndarray], np.ndarray],
    premul: Optional[Quaternion] = None,
    domain: Optional[PlanarDomain] = None,
    label: str = "h",
) -> SliceFunction:
    """
    Slice function h(q)·a from a holomorphic complex function h.

    ``fn`` must satisfy fn(z̄) = conj(fn(z)) (real Taylor coefficients); its
    stem is (fn(z), 0, 0, 0) and the constant ``premul`` multiplies it.
    """
    direction = np.array([1.0, 0.0, 0.0, 0.0]) if premul is None else premul.as_array()

    def evaluator(z: np.ndarray) -> np.ndarray:
        return np.asarray(fn(z), dtype=complex)[..., None] * direction

    return SliceFunction(
        domain=domain or PlanarDomain.whole_plane(),
        evaluator=evaluator,
        kind=FunctionKind.ELEMENTARY,
        label=label,
    )


def builtin(
    name: str,
    premul: Optional[Quaternion] = None,
    arg: Optional[SliceFunction] = None,
    domain: Optional[PlanarDomain] = None,
) -> SliceFunction:
    """
    Elementary slice-preserving function name(arg(q))·premul.

    ``arg`` defaults to the identity and must itself be slice-preserving;
    composition then happens on the complex stem values.
    """
    if name not in BUILTINS:
        raise ValidationError(
            f"Unknown builtin function '{name}'",
            error_code="UNKNOWN_BUILTIN",
            context={"name": name, "allowed": sorted(BUILTINS)},
        )
    fn = BUILTINS[name]
    if arg is None:
        return slice_preserving(fn, premul, domain, label=name)

    _require_slice_preserving(arg, f"argument of {name}")
    inner = arg

    def composed(z: np.ndarray) -> np.ndarray:
        return fn(inner.stem(z)[..., 0])

    target = inner.domain if domain is None else domain.intersect(inner.domain)
    return slice_preserving(composed, premul, target, label=f"{name}({inner.label})")


def tau(premul: Optional[Quaternion] = None) -> SliceFunction:
    """
    Locally constant unit tau(alpha + beta I) = sign(beta) I on H minus R.

    Its stem is ı·sign(beta), so tau is slice-preserving with tau^2 = -1.
    """
    direction = np.array([1.0, 0.0, 0.0, 0.0]) if premul is None else premul.as_array()

    def evaluator(z: np.ndarray) -> np.ndarray:
        unit = np.asarray(1j * np.sign(np.asarray(z).imag), dtype=complex)
        return unit[..., None] * direction

    return SliceFunction(
        domain=PlanarDomain.plane_minus_real(),
        evaluator=evaluator,
        kind=FunctionKind.ELEMENTARY,
        label="tau",
    )


def _require_slice_preserving(f: SliceFunction, what: str) -> None:
    if f.polynomial is not None:
        ok = f.polynomial.is_real
    else:
        grid = f.domain.sample_grid(7, 7)
        ok = bool(np.all(np.abs(f.stem(grid)[..., 1:]) <= get_settings().tolerances.eval))
    if not ok:
        raise ValidationError(
            f"The {what} must be slice-preserving",
            error_code="NOT_SLICE_PRESERVING",
            context={"function": f.label},
        )


# Ring operations


def add(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    domain = f.domain.intersect(g.domain)
    label = f"({f.label} + {g.label})"
    if f.polynomial is not None and g.polynomial is not None:
        return polynomial(f.polynomial + g.polynomial, domain, label=label)
    return SliceFunction(domain, lambda z: f.evaluator(z) + g.evaluator(z), FunctionKind.COMPOSITE, label=label)


def scale(f: SliceFunction, factor: Scalar, left: bool = False) -> SliceFunction:
    """Multiply by a real number, or by a quaternion constant on the right (or left)"""
    label = f"{factor}·{f.label}" if left else f"{f.label}·{factor}"
    if f.polynomial is not None:
        return polynomial(f.polynomial.scale(factor, left=left), f.domain, label=label)
    if isinstance(factor, Quaternion):
        a = factor.as_array()
        if left:
            return SliceFunction(f.domain, lambda z: hamilton(a, f.evaluator(z)), FunctionKind.COMPOSITE, label=label)
        return SliceFunction(f.domain, lambda z: hamilton(f.evaluator(z), a), FunctionKind.COMPOSITE, label=label)
    real = float(factor)
    return SliceFunction(f.domain, lambda z: real * f.evaluator(z), f.kind, label=label)


def star_product(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """
    f * g, the slice function of the pointwise stem product FG.

    Polynomial factors give the coefficient convolution.
    """
    domain = f.domain.intersect(g.domain)
    label = f"({f.label} * {g.label})"
    if f.polynomial is not None and g.polynomial is not None:
        return polynomial(f.polynomial.star(g.polynomial), domain, label=label)
    return SliceFunction(
        domain,
        lambda z: hamilton(f.evaluator(z), g.evaluator(z)),
        FunctionKind.COMPOSITE,
        label=label,
    )


def poly_star_power(f: QuaternionPolynomial, n: int) -> QuaternionPolynomial:
    """n-fold star product f^{*n}; f^{*0} = 1"""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValidationError("Star power exponent must be a non-negative integer", error_code="INVALID_EXPONENT")
    result = QuaternionPolynomial.one()
    base = f
    # square and multiply; powers of one element commute
    while n:
        if n & 1:
            result = result.star(base)
        n >>= 1
        if n:
            base = base.star(base)
    return result


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def evaluate(f: SliceFunction, a: Quaternion) -> Quaternion:
    """
    f(alpha + beta I) = F1(alpha + i beta) + I F2(alpha + i beta).

    Raises:
        PointOutsideDomainError: If alpha + i beta is not in f.domain
    """
    alpha, beta, unit = sphere_coords(a)
    if not bool(f.domain.contains(alpha, beta)):
        raise PointOutsideDomainError(
            "Point lies outside the domain of the function",
            error_code="POINT_OUTSIDE_DOMAIN",
            context={"point": a.to_list(), "domain": f.domain.to_dict(), "function": f.label},
        )
    c = f.stem(complex(alpha, beta))
    if unit is None:
        return Quaternion.from_array(c.real)
    return Quaternion.from_array(c.real) + mul(unit, Quaternion.from_array(c.imag))


def evaluate_many(f: SliceFunction, points: np.ndarray) -> np.ndarray:
    """
    Vectorized evaluation at stacked quaternions of shape (n, 4).

    Returns:
        Array of shape (n, 4) with the values f(points[k])
    """
    points = np.asarray(points, dtype=float).reshape(-1, 4)
    tol = get_settings().tolerances.alg
    alpha = points[:, 0]
    beta = np.linalg.norm(points[:, 1:], axis=1)
    if not np.all(f.domain.contains(alpha, beta)):
        raise PointOutsideDomainError(
            "Some points lie outside the domain of the function",
            error_code="POINT_OUTSIDE_DOMAIN",
            context={"domain": f.domain.to_dict(), "function": f.label},
        )
    real = beta < tol
    units = np.zeros_like(points)
    units[~real, 1:] = points[~real, 1:] / beta[~real, None]
    beta = np.where(real, 0.0, beta)
    c = f.stem(alpha + 1j * beta)
    return c.real + hamilton(units, c.imag)


def stem_values(f: SliceFunction, grid: Optional[np.ndarray] = None) -> np.ndarray:
    """Stem values on ``grid`` (default: the domain's sample grid)"""
    return f.stem(resolve_grid(f.domain, grid))


def sup_norm(f: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """Grid sup of the stem norm, a surrogate for the sup of |f| on the circularization"""
    values = stem_values(f, grid)
    return float(np.max(stem_norm(values))) if values.size else 0.0


def grid_residual(f: SliceFunction, g: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """Grid sup of |F - G| over the common domain"""
    points = resolve_grid(f.domain.intersect(g.domain), grid)
    if points.size == 0:
        return 0.0
    return float(np.max(stem_norm(f.stem(points) - g.stem(points))))


def is_identically_zero(f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None) -> bool:
    """
    Numeric test for f ≡ 0.

    Polynomials are tested coefficientwise; other functions by the grid sup,
    a surrogate justified by the identity principle for regular functions.
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    if f.polynomial is not None:
        return bool(np.all(np.linalg.norm(f.polynomial.coeffs, axis=1) < tol))
    return sup_norm(f, grid) <= tol


def stem_symmetry_residual(f: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """
    Grid sup of |F(z̄) - conj(F(z))| using the raw evaluator on both half planes.

    On domains containing real points, also includes the sup of |F2| on the
    real axis.
    """
    points = resolve_grid(f.domain, grid)
    upper = points[points.imag > 0]
    residual = 0.0
    if upper.size:
        raw_lower = np.asarray(f.evaluator(np.conj(upper)), dtype=complex)
        mirrored = np.conj(np.asarray(f.evaluator(upper), dtype=complex))
        residual = float(np.max(stem_norm(raw_lower - mirrored)))
    if f.domain.contains_real:
        real_points = np.unique(points.real).astype(complex)
        f2 = np.asarray(f.evaluator(real_points), dtype=complex).imag
        residual = max(residual, float(np.max(np.linalg.norm(f2, axis=-1))))
    return residual


def recover_stem(f: SliceFunction, alpha: float, beta: float, unit: ImaginaryUnit) -> StemValue:
    """
    Stem value rebuilt from two values of f on the slice C_I:

        F1 = (f(alpha + beta I) + f(alpha - beta I)) / 2
        F2 = -I (f(alpha + beta I) - f(alpha - beta I)) / 2
    """
    upper = evaluate(f, Quaternion(alpha) + unit * beta)
    lower = evaluate(f, Quaternion(alpha) - unit * beta)
    f1 = (upper + lower) * 0.5
    f2 = mul(-unit, (upper - lower) * 0.5)
    return StemValue(f1, f2)


def representation_check(
    f: SliceFunction,
    alpha: float,
    beta: float,
    unit_i: Quaternion,
    unit_j: Quaternion,
) -> float:
    """
    Residual of the representation formula

        f(alpha + beta J) = (1 - JI)/2 f(alpha + beta I) + (1 + JI)/2 f(alpha - beta I)
    """
    unit_i = ImaginaryUnit.of(unit_i)
    unit_j = ImaginaryUnit.of(unit_j)
    base = Quaternion(alpha)
    ji = mul(unit_j, unit_i)
    predicted = mul((1.0 - ji) * 0.5, evaluate(f, base + unit_i * beta)) + mul(
        (1.0 + ji) * 0.5, evaluate(f, base - unit_i * beta)
    )
    return norm(evaluate(f, base + unit_j * beta) - predicted)


def power_norm_identity_residual(f: QuaternionPolynomial, n: int, point: Quaternion) -> float:
    """
    Residual of |f^{*n}(q)| = |f(q)| |f^{*(n-1)}(f(q)^{-1} q f(q))| at q = point.

    Raises:
        DomainError: If f(point) = 0
    """
    if n < 1:
        raise ValidationError("Exponent must be at least 1", error_code="INVALID_EXPONENT")
    fn = polynomial(f)
    value = evaluate(fn, point)
    moved = mul(mul(inv(value), point), value)
    lhs = norm(evaluate(polynomial(poly_star_power(f, n)), point))
    rhs = norm(value) * norm(evaluate(polynomial(poly_star_power(f, n - 1)), moved))
    return abs(lhs - rhs)


def sample_units(count: int, seed: Optional[int] = None) -> Sequence[ImaginaryUnit]:
    """Random imaginary units, uniform on the sphere"""
    rng = np.random.default_rng(seed)
    units = []
    while len(units) < count:
        v = rng.normal(size=3)
        if np.linalg.norm(v) > 1e-8:
            units.append(ImaginaryUnit.from_vector(*v))
    return units


def relative_tolerance(tol: float, scale: float) -> float:
    """Absolute threshold tol·(1 + scale) for quantities of magnitude ``scale``"""
    return tol * (1.0 + (scale if math.isfinite(scale) else 0.0))
