"""
Star exponential, star cosine and star sine

exp_*(f) = sum f^{*n}/n! is computed two ways:

- by truncating the series, with the depth N chosen from the factorial
  remainder bound M^{N+1}/(N+1)! e^M, M the grid sup of |F1| + |F2|;
- in closed form exp_*(f) = exp(f0) (mu(f) + nu(f) f_v), where mu and nu are
  the cosine-type and sinc-type entire series evaluated at s = f_v^s.

On top of these live the classification of exponentials that preserve
slices, the product formula for exp_*(f) * exp_*(g), the identities relating
exp_*(f) to f0, mu and nu, and the decision procedure for
exp_*(f + g) = exp_*(f) * exp_*(g).

Author: Slicexp Team
Version: 1.0.0
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..config import get_settings
from ..core.exceptions import ConvergenceError, NoGlobalSquareRootError, PreconditionError
from ..core.logging import PerformanceLogger
from .intrinsic import (
    LinearDependence,
    commutes,
    conjugate_fn,
    detect_slice_unit,
    is_CJ_preserving,
    scalar_part,
    scalar_stem,
    star_scalar,
    symmetrized,
    vector_part,
)
from .quaternion import ImaginaryUnit, Quaternion, conj_array, cross3, exp_q, hamilton, mul, sphere_coords
from .slicefn import (
    FunctionKind,
    SliceFunction,
    evaluate,
    grid_residual,
    is_identically_zero,
    relative_tolerance,
    resolve_grid,
    star_product,
    stem_norm,
    stem_sum_norm,
)
from .sqrt import RealPolynomial, has_sqrt, sqrt

logger = logging.getLogger(__name__)
performance = PerformanceLogger(logging.getLogger("src.performance"))

PI_SQUARED = math.pi ** 2
UNIT_STEM = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)


# ---------------------------------------------------------------------------
# Truncated series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTruncation:
    """Truncation depth N, the bound M it was derived from and the remainder bound"""

    n_terms: int
    bound_m: float
    remainder_bound: float

    def to_dict(self) -> Dict[str, float]:
        return {"n_terms": self.n_terms, "bound_m": self.bound_m, "remainder_bound": self.remainder_bound}


def truncation_depth(bound_m: float, tol: float, max_terms: Optional[int] = None) -> SeriesTruncation:
    """
    Smallest N with M^{N+1}/(N+1)! e^M < tol.

    Raises:
        ConvergenceError: If N would exceed ``max_terms``
    """
    max_terms = get_settings().series.max_terms if max_terms is None else max_terms
    if bound_m <= 0.0:
        return SeriesTruncation(0, 0.0, 0.0)
    log_tol = math.log(tol)
    log_m = math.log(bound_m)
    for n in range(max_terms + 1):
        log_remainder = (n + 1) * log_m - math.lgamma(n + 2) + bound_m
        if log_remainder < log_tol:
            return SeriesTruncation(n, bound_m, math.exp(log_remainder))
    raise ConvergenceError(
        "Series remainder bound does not reach the tolerance within the term cap",
        error_code="SERIES_CAP_EXCEEDED",
        context={"bound_m": bound_m, "tolerance": tol, "max_terms": max_terms},
    )


def series_bound(f: SliceFunction, grid: Optional[np.ndarray] = None) -> float:
    """M = grid sup of |F1| + |F2|; the stem product is submultiplicative for it"""
    values = f.stem(resolve_grid(f.domain, grid))
    return float(np.max(stem_sum_norm(values))) if values.size else 0.0


def _star_series(
    f: SliceFunction,
    kind: str,
    tol: Optional[float],
    grid: Optional[np.ndarray],
) -> SliceFunction:
    tol = get_settings().tolerances.series if tol is None else tol
    truncation = truncation_depth(series_bound(f, grid), tol)
    depth = truncation.n_terms
    logger.debug(
        "Truncated star series",
        extra={"series": kind, "function": f.label, **truncation.to_dict()},
    )

    def evaluator(z: np.ndarray) -> np.ndarray:
        c = np.asarray(f.evaluator(z), dtype=complex)
        term = np.broadcast_to(UNIT_STEM, c.shape).copy()
        total = np.zeros_like(term)
        for n in range(depth + 1):
            if n:
                term = hamilton(term, c) / n
            if kind == "exp":
                total += term
            elif kind == "cos" and n % 2 == 0:
                total += term if n % 4 == 0 else -term
            elif kind == "sin" and n % 2 == 1:
                total += term if n % 4 == 1 else -term
        return total

    return SliceFunction(
        f.domain,
        evaluator,
        FunctionKind.COMPOSITE,
        label=f"{kind}*({f.label})",
        info={"method": "series", "truncation": truncation},
    )


def exp_star_series(f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None) -> SliceFunction:
    """
    exp_*(f) = sum_{n <= N} f^{*n}/n!.

    N is fixed from the sup of f on ``grid``, so the remainder bound holds
    on the circularization of the sampled region.
    """
    return _star_series(f, "exp", tol, grid)


def cos_star(f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None) -> SliceFunction:
    """cos_*(f) = sum (-1)^n f^{*2n}/(2n)!"""
    return _star_series(f, "cos", tol, grid)


def sin_star(f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None) -> SliceFunction:
    """sin_*(f) = sum (-1)^n f^{*(2n+1)}/(2n+1)!"""
    return _star_series(f, "sin", tol, grid)


# ---------------------------------------------------------------------------
# mu and nu
# ---------------------------------------------------------------------------


def _mu_nu_terms(s_max: float, tol: float, max_terms: int) -> int:
    """Smallest N with |s|^{N+1}/(2N+2)! cosh(sqrt|s|) < tol"""
    if s_max == 0.0:
        return 0
    log_tol = math.log(tol)
    log_cosh = math.log(math.cosh(math.sqrt(s_max)))
    for n in range(max_terms + 1):
        if (n + 1) * math.log(s_max) - math.lgamma(2 * n + 3) + log_cosh < log_tol:
            return n
    raise ConvergenceError(
        "mu/nu series do not converge within the term cap",
        error_code="SERIES_CAP_EXCEEDED",
        context={"s_max": s_max, "tolerance": tol},
    )


def mu_nu_values(s: np.ndarray, tol: Optional[float] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    mu(s) = sum (-s)^m/(2m)! and nu(s) = sum (-s)^m/(2m+1)! for complex s.

    Small |s| are summed term by term; beyond the configured radius the
    equivalent cos(sqrt s) and sin(sqrt s)/sqrt s are used (any branch).
    """
    settings = get_settings()
    tol = settings.tolerances.series if tol is None else tol
    s = np.asarray(s, dtype=complex)
    mu = np.empty_like(s)
    nu = np.empty_like(s)

    small = np.abs(s) <= settings.series.mu_nu_series_radius
    if np.any(small):
        x = -s[small]
        depth = _mu_nu_terms(float(np.max(np.abs(x))), tol, settings.series.max_terms)
        term_mu = np.ones_like(x)
        term_nu = np.ones_like(x)
        sum_mu = term_mu.copy()
        sum_nu = term_nu.copy()
        for m in range(1, depth + 1):
            term_mu = term_mu * x / ((2 * m - 1) * (2 * m))
            term_nu = term_nu * x / ((2 * m) * (2 * m + 1))
            sum_mu += term_mu
            sum_nu += term_nu
        mu[small] = sum_mu
        nu[small] = sum_nu
    if not np.all(small):
        root = np.sqrt(s[~small])
        mu[~small] = np.cos(root)
        nu[~small] = np.sin(root) / root
    return mu, nu


def _vector_square(c: np.ndarray) -> np.ndarray:
    """Stem of f_v^s: the bilinear square sum of the vector components"""
    return np.sum(c[..., 1:] * c[..., 1:], axis=-1)


@dataclass(frozen=True)
class MuNuValue:
    """
    Values of mu(f), nu(f) and s = f_v^s at one point, all in one slice C_I.
    """

    mu: Quaternion
    nu: Quaternion
    s: Quaternion

    @property
    def pythagorean_residual(self) -> float:
        """|mu^2 + nu^2 s - 1|"""
        return (mul(self.mu, self.mu) + mul(mul(self.nu, self.nu), self.s) - 1.0).norm()


def mu_function(f: SliceFunction, tol: Optional[float] = None) -> SliceFunction:
    def evaluator(z: np.ndarray) -> np.ndarray:
        return scalar_stem(mu_nu_values(_vector_square(f.evaluator(z)), tol)[0])

    return SliceFunction(f.domain, evaluator, FunctionKind.COMPOSITE, label=f"mu({f.label})")


def nu_function(f: SliceFunction, tol: Optional[float] = None) -> SliceFunction:
    def evaluator(z: np.ndarray) -> np.ndarray:
        return scalar_stem(mu_nu_values(_vector_square(f.evaluator(z)), tol)[1])

    return SliceFunction(f.domain, evaluator, FunctionKind.COMPOSITE, label=f"nu({f.label})")


def mu_nu(f: SliceFunction, point: Quaternion, tol: Optional[float] = None) -> MuNuValue:
    """
    mu(f), nu(f) at a point.

    Raises:
        PointOutsideDomainError: If the point is outside the domain of f
    """
    s = evaluate(symmetrized(vector_part(f)), point)
    return MuNuValue(
        mu=evaluate(mu_function(f, tol), point),
        nu=evaluate(nu_function(f, tol), point),
        s=s,
    )


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def _closed_stem(c: np.ndarray, tol: Optional[float]) -> np.ndarray:
    mu, nu = mu_nu_values(_vector_square(c), tol)
    out = np.array(c, dtype=complex, copy=True)
    out[..., 0] = mu
    out[..., 1:] *= nu[..., None]
    return np.exp(c[..., 0])[..., None] * out


def exp_star_closed(f: SliceFunction, tol: Optional[float] = None) -> SliceFunction:
    """exp_*(f) = exp(f0) (mu(f) + nu(f) f_v)"""
    return SliceFunction(
        f.domain,
        lambda z: _closed_stem(np.asarray(f.evaluator(z), dtype=complex), tol),
        FunctionKind.COMPOSITE,
        label=f"exp*({f.label})",
        info={"method": "closed"},
    )


def exp_star_factorized(
    f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None
) -> SliceFunction:
    """exp_*(f) = exp(f0) * exp_*(f_v), the vector factor summed as a series"""
    f0 = scalar_part(f)
    scalar_factor = SliceFunction(
        f.domain,
        lambda z: scalar_stem(np.exp(np.asarray(f0.evaluator(z))[..., 0])),
        FunctionKind.COMPOSITE,
        label=f"exp({f0.label})",
    )
    return star_product(scalar_factor, exp_star_series(vector_part(f), tol, grid)).with_label(
        f"exp({f.label}_0)*exp*({f.label}_v)"
    )


def exp_star_four_case(f: SliceFunction, point: Quaternion, tol: Optional[float] = None) -> Quaternion:
    """
    Pointwise exp_*(f)(q0) by cases on s = f_v^s(q0):

        s = 0:          exp(f0)(1 + f_v)
        s = x^2 > 0:    exp(f0)(cos x + sin x / x f_v)
        s = -x^2 < 0:   exp(f0)(cosh x + sinh x / x f_v)
        s in C_J \\ R:   exp(f0)(cos r + sin r / r f_v), r^2 = s in C_J
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    fv = vector_part(f)
    f0_value = evaluate(scalar_part(f), point)
    fv_value = evaluate(fv, point)
    s = evaluate(symmetrized(fv), point)

    a, b, unit = sphere_coords(s, tol)
    if unit is None and abs(a) <= tol:
        factor = 1.0 + fv_value
    elif unit is None and a > 0:
        x = math.sqrt(a)
        factor = math.cos(x) + fv_value * (math.sin(x) / x)
    elif unit is None:
        x = math.sqrt(-a)
        factor = math.cosh(x) + fv_value * (math.sinh(x) / x)
    else:
        r = np.sqrt(complex(a, b))
        cos_r, sinc_r = np.cos(r), np.sin(r) / r
        mu_q = Quaternion(cos_r.real) + unit * float(cos_r.imag)
        nu_q = Quaternion(sinc_r.real) + unit * float(sinc_r.imag)
        factor = mu_q + mul(nu_q, fv_value)
    return mul(exp_q(f0_value), factor)


def _require_polynomial(f: SliceFunction, operation: str) -> None:
    if f.polynomial is None:
        raise PreconditionError(
            f"{operation} requires a polynomial function",
            error_code="POLYNOMIAL_REQUIRED",
            context={"function": f.label},
        )


def _vector_root(f: SliceFunction):
    """Slice-preserving square root of f_v^s for a polynomial f"""
    _require_polynomial(f, "A square root of f_v^s")
    fvs = symmetrized(vector_part(f)).polynomial
    assert fvs is not None
    h = RealPolynomial(fvs.real_coefficients())
    if h.is_zero:
        raise PreconditionError(
            "f_v^s vanishes identically, so it has no invertible square root",
            error_code="NULL_SYMMETRIZED",
            context={"function": f.label},
        )
    decision = has_sqrt(h)
    if not decision.has_sqrt:
        raise NoGlobalSquareRootError(
            f"f_v^s has no slice-preserving square root: {decision.reason}",
            error_code="NO_GLOBAL_SQUARE_ROOT",
            context={"function": f.label, "fvs": h.to_list(), "reason": decision.reason},
        )
    return sqrt(h)


def exp_star_sqrtform(f: SliceFunction, tol: Optional[float] = None) -> SliceFunction:
    """
    exp(f0) (cos_*(sqrt(f_v^s)) + sin_*(sqrt(f_v^s))/sqrt(f_v^s) f_v).

    The root is slice-preserving, so cos_* and sin_* act pointwise on its
    stem; the quotient is continued by 1 at zeros of the root.

    Raises:
        PreconditionError: If f is not a polynomial or f_v^s ≡ 0
        NoGlobalSquareRootError: If f_v^s has no slice-preserving square root
    """
    root = _vector_root(f)
    root_coeffs = root.coeffs.astype(complex)

    def evaluator(z: np.ndarray) -> np.ndarray:
        c = np.asarray(f.evaluator(z), dtype=complex)
        rho = P.polyval(np.asarray(z, dtype=complex), root_coeffs)
        out = np.array(c, copy=True)
        out[..., 0] = np.cos(rho)
        out[..., 1:] *= np.sinc(rho / np.pi)[..., None]
        return np.exp(c[..., 0])[..., None] * out

    return SliceFunction(
        f.domain,
        evaluator,
        FunctionKind.COMPOSITE,
        label=f"exp*({f.label})",
        info={"method": "sqrt-form", "root": root.to_list()},
    )


def unit_vector_part(f: SliceFunction) -> SliceFunction:
    """f_v / sqrt(f_v^s); its symmetrized function is 1 away from the zeros of the root"""
    root = _vector_root(f)
    root_coeffs = root.coeffs.astype(complex)

    def evaluator(z: np.ndarray) -> np.ndarray:
        c = np.asarray(f.evaluator(z), dtype=complex)
        out = np.zeros_like(c)
        out[..., 1:] = c[..., 1:] / P.polyval(np.asarray(z, dtype=complex), root_coeffs)[..., None]
        return out

    return SliceFunction(f.domain, evaluator, FunctionKind.COMPOSITE, label=f"{f.label}_v/sqrt({f.label}_v^s)")


def exp_star_cj(f: SliceFunction, unit: Quaternion, tol: Optional[float] = None) -> SliceFunction:
    """
    exp(f0) (cos(f1) + sin(f1) J) for f = f0 + f1 J with f0, f1 slice-preserving.

    Raises:
        PreconditionError: If the vector part of f is not C_J-valued
    """
    unit = ImaginaryUnit.of(unit)
    if not is_CJ_preserving(vector_part(f), unit, tol):
        raise PreconditionError(
            "The vector part is not C_J-valued for the given unit",
            error_code="NOT_CJ_PRESERVING",
            context={"function": f.label, "unit": unit.to_list()},
        )
    direction = unit.as_array()[1:]

    def evaluator(z: np.ndarray) -> np.ndarray:
        c = np.asarray(f.evaluator(z), dtype=complex)
        f1 = c[..., 1:] @ direction
        out = np.zeros_like(c)
        out[..., 0] = np.cos(f1)
        out[..., 1:] = np.sin(f1)[..., None] * direction
        return np.exp(c[..., 0])[..., None] * out

    return SliceFunction(f.domain, evaluator, FunctionKind.COMPOSITE, label=f"exp*({f.label})")


def exp_product_closed(f: SliceFunction, g: SliceFunction, tol: Optional[float] = None) -> SliceFunction:
    """
    exp_*(f) * exp_*(g) = exp(f0 + g0) (mu(f)mu(g) - nu(f)nu(g)<f_v, g_v>_*
        + mu(f)nu(g) g_v + nu(f)mu(g) f_v + nu(f)nu(g) f_v ^_* g_v)
    """

    def evaluator(z: np.ndarray) -> np.ndarray:
        c = np.asarray(f.evaluator(z), dtype=complex)
        d = np.asarray(g.evaluator(z), dtype=complex)
        c, d = np.broadcast_arrays(c, d)
        mu_f, nu_f = mu_nu_values(_vector_square(c), tol)
        mu_g, nu_g = mu_nu_values(_vector_square(d), tol)
        cv, dv = c[..., 1:], d[..., 1:]
        out = np.empty(c.shape, dtype=complex)
        out[..., 0] = mu_f * mu_g - nu_f * nu_g * np.sum(cv * dv, axis=-1)
        out[..., 1:] = (
            (mu_f * nu_g)[..., None] * dv
            + (nu_f * mu_g)[..., None] * cv
            + (nu_f * nu_g)[..., None] * cross3(cv, dv)
        )
        return np.exp(c[..., 0] + d[..., 0])[..., None] * out

    return SliceFunction(
        f.domain.intersect(g.domain),
        evaluator,
        FunctionKind.COMPOSITE,
        label=f"exp*({f.label})*exp*({g.label})",
    )


# ---------------------------------------------------------------------------
# Constancy in Z = {n^2 pi^2}
# ---------------------------------------------------------------------------


def constant_value(
    f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None
) -> Optional[complex]:
    """
    The constant value of a slice-preserving f, or None if f is not constant.

    Polynomials are checked coefficientwise, other functions on the grid with
    tolerance tol (1 + grid sup |f|).
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    if f.polynomial is not None:
        coeffs = f.polynomial.coeffs
        scale = float(np.max(np.abs(coeffs)))
        if f.polynomial.degree == 0 or float(np.max(np.abs(coeffs[1:]))) <= relative_tolerance(tol, scale):
            return complex(coeffs[0, 0])
        return None
    values = f.stem(resolve_grid(f.domain, grid))[..., 0]
    if values.size == 0:
        return None
    scale = float(np.max(np.abs(values)))
    mean = complex(np.mean(values))
    if float(np.max(np.abs(values - mean))) > relative_tolerance(tol, scale):
        return None
    return mean


def zeta_index(value: Optional[complex], tol: Optional[float] = None) -> Optional[int]:
    """n >= 1 with value = n^2 pi^2, or None"""
    tol = get_settings().tolerances.eval if tol is None else tol
    if value is None or value.real <= 0.0:
        return None
    threshold = relative_tolerance(tol, abs(value))
    if abs(value.imag) > threshold:
        return None
    n = int(round(math.sqrt(value.real) / math.pi))
    if n == 0 or abs(value - n * n * PI_SQUARED) > threshold:
        return None
    return n


def symmetrized_vector_index(
    f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None
) -> Optional[int]:
    """n with f_v^s ≡ n^2 pi^2, or None"""
    return zeta_index(constant_value(symmetrized(vector_part(f)), tol, grid), tol)


def nu_zero_locus_mismatches(s: np.ndarray, tol: Optional[float] = None) -> int:
    """
    Number of sample values where [nu(s) = 0] and [s in Z] disagree.
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    _, nu = mu_nu_values(s)
    mismatches = 0
    for value, nu_value in zip(s, nu):
        in_zeta = zeta_index(complex(value), tol) is not None
        if in_zeta != (abs(nu_value) <= tol):
            mismatches += 1
    return mismatches


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


class ExpClass(str, Enum):
    """Which slices exp_*(f) preserves"""
    SLICE_PRESERVING = "slice-preserving"
    CJ_PRESERVING = "CJ-preserving"
    GENERIC = "generic"


@dataclass(frozen=True)
class ExpClassification:
    kind: ExpClass
    unit: Optional[ImaginaryUnit] = None
    n: Optional[int] = None

    def describe(self) -> str:
        if self.kind is ExpClass.CJ_PRESERVING and self.unit is not None:
            return f"CJ-preserving({self.unit})"
        return self.kind.value


def classify_exp(
    f: SliceFunction, tol: Optional[float] = None, grid: Optional[np.ndarray] = None
) -> ExpClassification:
    """
    exp_*(f) is slice-preserving iff f_v ≡ 0 or f_v^s is a constant in Z;
    otherwise it is C_J-preserving iff f_v is C_J-valued, and generic else.
    """
    fv = vector_part(f)
    if is_identically_zero(fv, tol, grid):
        return ExpClassification(ExpClass.SLICE_PRESERVING)
    n = symmetrized_vector_index(f, tol, grid)
    if n is not None:
        return ExpClassification(ExpClass.SLICE_PRESERVING, n=n)
    unit = detect_slice_unit(fv, tol, grid)
    if unit is not None:
        return ExpClassification(ExpClass.CJ_PRESERVING, unit=unit)
    return ExpClassification(ExpClass.GENERIC)


# ---------------------------------------------------------------------------
# Identities
# ---------------------------------------------------------------------------


def _exponential(f: SliceFunction, method: str, tol: Optional[float], grid: Optional[np.ndarray]) -> SliceFunction:
    if method == "series":
        return exp_star_series(f, tol, grid)
    return exp_star_closed(f, tol)


@dataclass(frozen=True)
class IdentityReport:
    """
    Grid residuals of the exponential identities.

    Attributes:
        residuals: Identity name to grid sup residual
        threshold: Acceptance threshold tol (1 + scale)
        min_norm: Grid minimum of |exp_*(f)| over the slices C_i, C_j, C_k
        norm_bound: Grid minimum of exp(2 Re f0) / (|Re E| + |Im E|) with E the
            stem of exp_*(f); |exp_*(f)| stays above it on every sphere
    """

    residuals: Dict[str, float]
    threshold: float
    min_norm: float
    norm_bound: float = 0.0
    method: str = "closed"

    @property
    def never_vanishing(self) -> bool:
        return self.min_norm > 0.0 and self.min_norm >= self.norm_bound - self.threshold

    @property
    def passed(self) -> bool:
        return self.never_vanishing and all(r <= self.threshold for r in self.residuals.values())

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def verify_exp_identities(
    f: SliceFunction,
    tol: Optional[float] = None,
    grid: Optional[np.ndarray] = None,
    method: str = "closed",
) -> IdentityReport:
    """
    Residuals on the grid of

        eq1  (exp_* f)^s = exp(2 f0)
        eq2  (exp_* f + exp_* f^c)/2 = exp(f0) mu(f)
        eq3  (exp_* f - exp_* f^c)/2 = exp(f0) nu(f) f_v
        eq4  exp_*(f) * exp_*(-f) = 1
        conjugation  exp_*(f^c) = (exp_* f)^c
        mu_nu  mu^2 + nu^2 f_v^s = 1

    ``method`` selects the closed form or the truncated series for exp_*.
    """
    settings = get_settings()
    tol = settings.tolerances.eval if tol is None else tol
    points = resolve_grid(f.domain, grid)
    with performance.timer("verify_exp_identities", logging.DEBUG):
        c = f.stem(points)
        e = _exponential(f, method, None, points).stem(points)
        e_conj = _exponential(conjugate_fn(f), method, None, points).stem(points)
        e_neg = _exponential(-f, method, None, points).stem(points)

        s = _vector_square(c)
        mu, nu = mu_nu_values(s)
        scalar_exp = np.exp(c[..., 0])
        unit = np.broadcast_to(UNIT_STEM, e.shape)

        def sup(values: np.ndarray) -> float:
            return float(np.max(stem_norm(values))) if values.size else 0.0

        residuals = {
            "eq1": sup(hamilton(e, conj_array(e)) - np.exp(2.0 * c[..., 0])[..., None] * unit),
            "eq2": sup(0.5 * (e + e_conj) - (scalar_exp * mu)[..., None] * unit),
            "eq3": sup(0.5 * (e - e_conj) - (scalar_exp * nu)[..., None] * _vector_only(c)),
            "eq4": sup(hamilton(e, e_neg) - unit),
            "conjugation": sup(e_conj - conj_array(e)),
            "mu_nu": float(np.max(np.abs(mu * mu + nu * nu * s - 1.0))) if s.size else 0.0,
        }

        min_norm = math.inf
        for axis in range(1, 4):
            units = np.zeros(e.shape[:-1] + (4,))
            units[..., axis] = 1.0
            values = e.real + hamilton(units, e.imag)
            if values.size:
                min_norm = min(min_norm, float(np.min(np.linalg.norm(values, axis=-1))))

        # h^s(x) = h(x) h^c(x') with x' on the sphere of x, and |h^c| <= |Re E| + |Im E| there
        spread = np.linalg.norm(e.real, axis=-1) + np.linalg.norm(e.imag, axis=-1)
        norm_bound = float(np.min(np.exp(2.0 * c[..., 0].real) / spread)) if e.size else 0.0

        scale = sup(e) ** 2
    return IdentityReport(residuals, relative_tolerance(tol, scale), min_norm, norm_bound, method)


def _vector_only(c: np.ndarray) -> np.ndarray:
    out = np.array(c, dtype=complex, copy=True)
    out[..., 0] = 0.0
    return out


# ---------------------------------------------------------------------------
# Sum rule
# ---------------------------------------------------------------------------


class SumRuleCase(str, Enum):
    LINEAR_DEPENDENT = "linear-dependent"
    PYTHAGOREAN = "pythagorean"
    FAILS = "fails"


@dataclass(frozen=True)
class SumRuleReport:
    """
    Certificate for exp_*(f + g) = exp_*(f) * exp_*(g).

    Attributes:
        case: Which sufficient condition holds, or ``fails``
        n, m, p: Indices with f_v^s ≡ n^2 pi^2, g_v^s ≡ m^2 pi^2,
            (f + g)_v^s ≡ p^2 pi^2 (None when not constant in Z)
        inner: Constant value of <f_v, g_v>_* when it is a real constant
        parity_ok: n + m ≡ p (mod 2) when n, m, p are all known
        numeric_residual: Grid sup of |exp_*(f + g) - exp_*(f) * exp_*(g)|
        predicted_equal: Prediction from the case analysis
        measured_equal: Whether the residual is within tolerance
        prediction_scope: ``necessary-and-sufficient`` when the domain has
            real points, ``sufficient-only`` otherwise
    """

    case: SumRuleCase
    n: Optional[int]
    m: Optional[int]
    p: Optional[int]
    inner: Optional[float]
    parity_ok: Optional[bool]
    numeric_residual: float
    predicted_equal: bool
    measured_equal: bool
    prediction_scope: str
    dependence: LinearDependence = field(repr=False, compare=False, default=LinearDependence(False, math.nan))
    threshold: float = 0.0

    @property
    def disagreement(self) -> bool:
        """Prediction and measurement differ where the prediction is binding"""
        if self.predicted_equal == self.measured_equal:
            return False
        return self.predicted_equal or self.prediction_scope == "necessary-and-sufficient"


def sum_rule(
    f: SliceFunction,
    g: SliceFunction,
    tol: Optional[float] = None,
    grid: Optional[np.ndarray] = None,
) -> SumRuleReport:
    """
    Decide exp_*(f + g) = exp_*(f) * exp_*(g).

    Equality holds iff (i) f_v and g_v are linearly dependent over the
    slice-preserving functions, or (ii) f_v^s, g_v^s and (f + g)_v^s are the
    constants n^2 pi^2, m^2 pi^2, p^2 pi^2 with n + m ≡ p (mod 2). Necessity
    needs a domain with real points. The two sides are also compared on the
    grid.
    """
    tol = get_settings().tolerances.eval if tol is None else tol
    domain = f.domain.intersect(g.domain)
    points = resolve_grid(domain, grid)
    with performance.timer("sum_rule", logging.DEBUG):
        dependence = commutes(f, g, tol, points)
        n = symmetrized_vector_index(f, tol, points)
        m = symmetrized_vector_index(g, tol, points)
        p = symmetrized_vector_index(f + g, tol, points)
        inner_value = constant_value(star_scalar(vector_part(f), vector_part(g)), tol, points)
        inner = None
        if inner_value is not None and abs(inner_value.imag) <= relative_tolerance(tol, abs(inner_value)):
            inner = float(inner_value.real)

        parity_ok = None
        if n is not None and m is not None and p is not None:
            parity_ok = (n + m - p) % 2 == 0

        if dependence.dependent:
            case = SumRuleCase.LINEAR_DEPENDENT
        elif parity_ok:
            case = SumRuleCase.PYTHAGOREAN
        else:
            case = SumRuleCase.FAILS
        predicted = case is not SumRuleCase.FAILS

        lhs = exp_star_closed(f + g)
        rhs = star_product(exp_star_closed(f), exp_star_closed(g))
        residual = grid_residual(lhs, rhs, points)
        scale = float(np.max(stem_norm(rhs.stem(points)))) if points.size else 0.0
        threshold = relative_tolerance(tol, scale)
        measured = residual <= threshold

        scope = "necessary-and-sufficient" if domain.contains_real else "sufficient-only"
        report = SumRuleReport(
            case=case,
            n=n,
            m=m,
            p=p,
            inner=inner,
            parity_ok=parity_ok,
            numeric_residual=residual,
            predicted_equal=predicted,
            measured_equal=measured,
            prediction_scope=scope,
            dependence=dependence,
            threshold=threshold,
        )
    if report.disagreement:
        logger.warning(
            "Sum rule prediction disagrees with the measured residual",
            extra={"case": case.value, "residual": residual, "threshold": threshold},
        )
    return report
