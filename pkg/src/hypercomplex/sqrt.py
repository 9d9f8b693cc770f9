"""
Square roots of slice-preserving polynomials

A nonzero slice-preserving polynomial h (real coefficients) factors as

    h(q) = c · prod (q - r)^k · prod (q^2 - 2aq + a^2 + b^2)^m

over its real zeros r and its spherical zeros S_{a+bJ}. It is the square of
a slice-preserving function iff every real zero has even multiplicity k,
every sphere has spherical multiplicity 2m divisible by 4 and h >= 0 on R.

Roots come from a simultaneous Aberth-Ehrlich iteration; multiple roots are
recovered by clustering and conjugate pairs are enforced explicitly.

Author: Slicexp Team
Version: 1.0.0
"""

import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..config import get_settings
from ..core.exceptions import ConvergenceError, PreconditionError, ValidationError
from ..core.logging import PerformanceLogger
from .intrinsic import symmetrized
from .slicefn import PlanarDomain, QuaternionPolynomial, SliceFunction, polynomial

logger = logging.getLogger(__name__)
performance = PerformanceLogger(logging.getLogger("src.performance"))

# relative size of rounding noise in a computed polynomial value
_NOISE = 1e-13


@dataclass(frozen=True, eq=False)
class RealPolynomial:
    """h(q) = sum q^n c_n with real c_n, stored in ascending order"""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        array = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if array.ndim != 1 or array.size == 0 or not np.all(np.isfinite(array)):
            raise ValidationError(
                "Real polynomial coefficients must be a non-empty list of finite reals",
                error_code="INVALID_COEFFICIENTS",
            )
        nonzero = np.flatnonzero(array)
        array = array[: int(nonzero[-1]) + 1] if nonzero.size else array[:1] * 0.0
        array.setflags(write=False)
        object.__setattr__(self, "coeffs", array)

    @classmethod
    def from_factors(
        cls,
        leading: float = 1.0,
        real_roots: Sequence[Tuple[float, int]] = (),
        spheres: Sequence[Tuple[float, float, int]] = (),
    ) -> "RealPolynomial":
        """Expand leading · prod (q - r)^k · prod (q^2 - 2aq + a^2 + b^2)^m"""
        coeffs = np.array([float(leading)])
        for root, k in real_roots:
            coeffs = P.polymul(coeffs, P.polypow([-root, 1.0], k))
        for a, b, m in spheres:
            coeffs = P.polymul(coeffs, P.polypow([a * a + b * b, -2.0 * a, 1.0], m))
        return cls(coeffs)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def leading(self) -> float:
        return float(self.coeffs[-1])

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, x):
        return P.polyval(x, self.coeffs)

    def __mul__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(P.polymul(self.coeffs, other.coeffs))

    def __add__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(P.polyadd(self.coeffs, other.coeffs))

    def __sub__(self, other: "RealPolynomial") -> "RealPolynomial":
        return RealPolynomial(P.polysub(self.coeffs, other.coeffs))

    def __neg__(self) -> "RealPolynomial":
        return RealPolynomial(-self.coeffs)

    def __pow__(self, n: int) -> "RealPolynomial":
        return RealPolynomial(P.polypow(self.coeffs, n))

    def distance(self, other: "RealPolynomial") -> float:
        """Largest coefficientwise difference"""
        return float(np.max(np.abs(P.polysub(self.coeffs, other.coeffs))))

    def allclose(self, other: "RealPolynomial", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol

    def to_list(self) -> List[float]:
        return self.coeffs.tolist()

    def as_quaternion_polynomial(self) -> QuaternionPolynomial:
        return QuaternionPolynomial(self.coeffs)

    def to_slice_function(self, domain: Optional[PlanarDomain] = None) -> SliceFunction:
        return polynomial(self.as_quaternion_polynomial(), domain, label=f"h(deg {self.degree})")

    def __repr__(self) -> str:
        return f"RealPolynomial({self.coeffs.tolist()!r})"


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RootCluster:
    """A complex root and its multiplicity"""

    value: complex
    multiplicity: int


def _cauchy_radius(monic: np.ndarray) -> float:
    return 1.0 + float(np.max(np.abs(monic[:-1])))


def _backward_scale(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """sum |a_i| |x|^i, the size of rounding noise in p(x)"""
    return P.polyval(np.abs(x), np.abs(coeffs))


def _aberth(monic: np.ndarray, phase: float, tol: float, max_iterations: int) -> np.ndarray:
    """
    Aberth-Ehrlich iteration for all roots of a monic polynomial.

    Starts from a circle of Cauchy radius rotated by ``phase``. Iterates until
    every approximation has relative backward error <= tol, then polishes a
    few more steps.

    Raises:
        ConvergenceError: If the backward error is not reached
    """
    degree = monic.shape[0] - 1
    derivative = P.polyder(monic)
    angles = 2.0 * math.pi * np.arange(degree) / degree + phase
    x = _cauchy_radius(monic) * np.exp(1j * angles)
    polish = 0

    for iteration in range(max_iterations):
        values = P.polyval(x, monic)
        slopes = P.polyval(x, derivative)
        diff = x[:, None] - x[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.sum(1.0 / diff, axis=1)
            ratio = values / slopes
            delta = ratio / (1.0 - ratio * repulsion)
        delta = np.where(np.isfinite(delta), delta, 0.0)
        x = x - delta

        backward = np.abs(P.polyval(x, monic)) <= tol * _backward_scale(monic, x)
        if np.all(backward):
            polish += 1
        if polish >= 8 or np.all(np.abs(delta) <= 1e-15 * (1.0 + np.abs(x))):
            logger.debug("Aberth iteration converged", extra={"iterations": iteration + 1, "degree": degree})
            return x

    raise ConvergenceError(
        "Aberth iteration did not converge",
        error_code="ROOT_FINDER_NO_CONVERGENCE",
        context={"degree": degree, "max_iterations": max_iterations, "phase": phase},
    )


def _cluster_radius(coeffs: np.ndarray, centre: complex, size: int, tol_cluster: float) -> float:
    """
    Merge radius for a cluster of ``size`` roots around ``centre``.

    A k-fold root moves by about eta^{1/k} under a coefficient perturbation of
    relative size eta, so the radius grows with the cluster size.
    """
    eta = _NOISE * float(_backward_scale(coeffs, np.array([centre]))[0]) / abs(coeffs[-1])
    return max(tol_cluster * (abs(centre) + 1.0), 4.0 * eta ** (1.0 / size))


def _cluster(roots: np.ndarray, coeffs: np.ndarray, tol_cluster: float) -> List[RootCluster]:
    """
    Group approximations that belong to one multiple root.

    Approximations of a k-fold root spread on a circle of radius ~eta^{1/k},
    so pairwise distances are no guide. For each unassigned approximation the
    largest k is taken whose k nearest neighbours all lie within the k-fold
    radius of their centroid.
    """
    remaining = [complex(r) for r in roots]
    clusters: List[RootCluster] = []
    while remaining:
        seed = remaining[0]
        nearest = sorted(remaining, key=lambda r: abs(r - seed))
        chosen = nearest[:1]
        for size in range(len(nearest), 1, -1):
            group = nearest[:size]
            centre = complex(np.mean(group))
            radius = _cluster_radius(coeffs, centre, size, tol_cluster)
            if all(abs(r - centre) <= radius for r in group):
                chosen = group
                break
        for r in chosen:
            remaining.remove(r)
        centre = complex(np.mean(chosen))
        clusters.append(RootCluster(_refine(coeffs, centre, len(chosen), tol_cluster), len(chosen)))
    return clusters


def _refine(coeffs: np.ndarray, centre: complex, multiplicity: int, tol_cluster: float) -> complex:
    """Newton steps on the (k-1)-th derivative, where a k-fold root is simple"""
    target = P.polyder(coeffs, multiplicity - 1) if multiplicity > 1 else coeffs
    slope = P.polyder(target)
    radius = _cluster_radius(coeffs, centre, multiplicity, tol_cluster)
    x = centre
    for _ in range(3):
        d = P.polyval(x, slope)
        if d == 0:
            break
        step = P.polyval(x, target) / d
        if not np.isfinite(step) or abs(x - step - centre) > radius:
            break
        x = complex(x - step)
    return x


def _pair_conjugates(clusters: List[RootCluster], coeffs: np.ndarray, tol_cluster: float) -> List[RootCluster]:
    """Snap near-real clusters to R and average each upper cluster with its mirror"""
    real, upper, lower = [], [], []
    for cluster in clusters:
        radius = _cluster_radius(coeffs, cluster.value, cluster.multiplicity, tol_cluster)
        if abs(cluster.value.imag) <= radius:
            real.append(RootCluster(complex(cluster.value.real, 0.0), cluster.multiplicity))
        elif cluster.value.imag > 0:
            upper.append(cluster)
        else:
            lower.append(cluster)

    paired: List[RootCluster] = []
    for cluster in upper:
        candidates = [c for c in lower if c.multiplicity == cluster.multiplicity]
        if not candidates:
            raise ConvergenceError(
                "Complex root without a conjugate partner",
                error_code="UNPAIRED_ROOT",
                context={"root": str(cluster.value), "multiplicity": cluster.multiplicity},
            )
        mirror = min(candidates, key=lambda c: abs(c.value - cluster.value.conjugate()))
        lower.remove(mirror)
        value = 0.5 * (cluster.value + mirror.value.conjugate())
        paired.append(RootCluster(value, cluster.multiplicity))
        paired.append(RootCluster(value.conjugate(), cluster.multiplicity))
    if lower:
        raise ConvergenceError(
            "Complex root without a conjugate partner",
            error_code="UNPAIRED_ROOT",
            context={"roots": [str(c.value) for c in lower]},
        )
    return real + paired


def find_roots(
    p: RealPolynomial,
    tol_root: Optional[float] = None,
    tol_cluster: Optional[float] = None,
) -> List[RootCluster]:
    """
    All complex roots of p with multiplicities.

    Exact zero roots are deflated first. The Aberth iteration is retried with
    a rotated starting circle when it fails to converge or pair.

    Raises:
        PreconditionError: If p has degree < 1
        ConvergenceError: If every attempt fails
    """
    settings = get_settings()
    tol_root = settings.tolerances.root if tol_root is None else tol_root
    tol_cluster = settings.tolerances.cluster if tol_cluster is None else tol_cluster
    if p.degree < 1:
        raise PreconditionError(
            "Root finding needs a polynomial of degree at least 1",
            error_code="DEGREE_TOO_LOW",
            context={"coeffs": p.to_list()},
        )

    zero_order = int(np.flatnonzero(p.coeffs)[0])
    clusters: List[RootCluster] = [RootCluster(0j, zero_order)] if zero_order else []
    reduced = p.coeffs[zero_order:]
    if reduced.shape[0] == 1:
        return clusters

    monic = reduced / reduced[-1]
    with performance.timer("find_roots", logging.DEBUG):
        for attempt in Retrying(
            stop=stop_after_attempt(settings.roots.attempts),
            retry=retry_if_exception_type(ConvergenceError),
            reraise=True,
        ):
            with attempt:
                phase = 0.4 + 0.7 * (attempt.retry_state.attempt_number - 1)
                roots = _aberth(monic, phase, tol_root, settings.roots.max_iterations)
                found = _pair_conjugates(_cluster(roots, monic, tol_cluster), monic, tol_cluster)
    return clusters + found


# ---------------------------------------------------------------------------
# Zero structure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroStructure:
    """
    Factored form of a real polynomial.

    Attributes:
        leading: Leading coefficient
        real_roots: (r, k) pairs, k the isolated multiplicity
        spheres: (a, b, m) triples with b > 0; the sphere S_{a+bJ} contributes
            (q^2 - 2aq + a^2 + b^2)^m and has spherical multiplicity 2m
    """

    leading: float
    real_roots: Tuple[Tuple[float, int], ...] = ()
    spheres: Tuple[Tuple[float, float, int], ...] = ()

    @property
    def spherical_multiplicities(self) -> List[int]:
        return [2 * m for _, _, m in self.spheres]

    def reconstruct(self) -> RealPolynomial:
        return RealPolynomial.from_factors(self.leading, self.real_roots, self.spheres)

    def reconstruction_residual(self, h: RealPolynomial) -> float:
        """Coefficientwise distance to h relative to the largest coefficient of h"""
        return self.reconstruct().distance(h) / max(1.0, float(np.max(np.abs(h.coeffs))))

    def to_dict(self) -> dict:
        return {
            "leading": self.leading,
            "real_roots": [{"root": r, "multiplicity": k} for r, k in self.real_roots],
            "spheres": [
                {"a": a, "b": b, "multiplicity": m, "spherical_multiplicity": 2 * m} for a, b, m in self.spheres
            ],
        }


def zero_structure(h: RealPolynomial, tol_root: Optional[float] = None) -> ZeroStructure:
    """
    Group the roots of h into real zeros and spheres.

    Raises:
        PreconditionError: If h ≡ 0
    """
    if h.is_zero:
        raise PreconditionError("The zero polynomial has no zero structure", error_code="ZERO_POLYNOMIAL")
    if h.degree == 0:
        return ZeroStructure(h.leading)

    clusters = find_roots(h, tol_root)
    real_roots = sorted((c.value.real, c.multiplicity) for c in clusters if c.value.imag == 0.0)
    spheres = sorted((c.value.real, c.value.imag, c.multiplicity) for c in clusters if c.value.imag > 0.0)
    structure = ZeroStructure(h.leading, tuple(real_roots), tuple(spheres))

    tol = get_settings().tolerances.root if tol_root is None else tol_root
    residual = structure.reconstruction_residual(h)
    if residual > math.sqrt(tol):
        logger.warning(
            "Zero structure does not reproduce the polynomial",
            extra={"residual": residual, "degree": h.degree},
        )
    return structure


# ---------------------------------------------------------------------------
# Existence and construction of square roots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SqrtDecision:
    """Whether h is the square of a slice-preserving function, and why"""

    has_sqrt: bool
    reason: str
    structure: ZeroStructure
    detail: str = ""

    def __bool__(self) -> bool:
        return self.has_sqrt


def _nonnegative_on_real_line(h: RealPolynomial, tol: float, samples: int = 100) -> bool:
    radius = _cauchy_radius(h.coeffs / h.leading) + 1.0 if h.degree else 1.0
    x = np.linspace(-radius, radius, samples)
    return bool(np.all(h(x) >= -tol * _backward_scale(h.coeffs, x)))


def has_sqrt(h: RealPolynomial, tol_root: Optional[float] = None) -> SqrtDecision:
    """
    Test whether h = f^2 for a slice-preserving f.

    Holds iff real zeros have even multiplicity, spherical multiplicities are
    multiples of 4, and h >= 0 on R (the sign is also sampled at 100 points).

    Raises:
        PreconditionError: If h ≡ 0
    """
    tol = get_settings().tolerances.root if tol_root is None else tol_root
    structure = zero_structure(h, tol_root)

    for root, k in structure.real_roots:
        if k % 2:
            return SqrtDecision(
                False, f"real zero of odd multiplicity {k}", structure, detail=f"zero at {root:.6g}"
            )
    for a, b, m in structure.spheres:
        if m % 2:
            return SqrtDecision(
                False, f"spherical multiplicity {2 * m}", structure, detail=f"sphere S_({a:.6g}+{b:.6g}J)"
            )
    if structure.leading < 0 or not _nonnegative_on_real_line(h, tol):
        return SqrtDecision(False, "negative on the real axis", structure)
    return SqrtDecision(True, "even multiplicities and nonnegative on the real axis", structure)


def sqrt(h: RealPolynomial, tol_root: Optional[float] = None) -> RealPolynomial:
    """
    The square root with positive leading coefficient,

        sqrt(c) · prod (q - r)^{k/2} · prod (q^2 - 2aq + a^2 + b^2)^{m/2}

    Raises:
        PreconditionError: If h has no slice-preserving square root
    """
    decision = has_sqrt(h, tol_root)
    if not decision.has_sqrt:
        raise PreconditionError(
            f"Polynomial has no slice-preserving square root: {decision.reason}",
            error_code="NO_SQUARE_ROOT",
            context={"coeffs": h.to_list(), "reason": decision.reason, "detail": decision.detail},
        )
    structure = decision.structure
    root = RealPolynomial.from_factors(
        math.sqrt(structure.leading),
        [(r, k // 2) for r, k in structure.real_roots],
        [(a, b, m // 2) for a, b, m in structure.spheres],
    )
    tol = get_settings().tolerances.root if tol_root is None else tol_root
    residual = (root * root).distance(h) / max(1.0, float(np.max(np.abs(h.coeffs))))
    if residual > math.sqrt(tol):
        logger.warning("Square root does not square back to the input", extra={"residual": residual})
    return root


def symmetrized_has_sqrt(g: SliceFunction, tol_root: Optional[float] = None) -> SqrtDecision:
    """
    has_sqrt(g^s) for a polynomial g.

    Equivalently, the zero set of g contains no non-real zero of odd isolated
    multiplicity.

    Raises:
        PreconditionError: If g is not a polynomial or g ≡ 0
    """
    if g.polynomial is None:
        raise PreconditionError(
            "The symmetrized square-root test needs a polynomial",
            error_code="POLYNOMIAL_REQUIRED",
            context={"function": g.label},
        )
    gs = symmetrized(g).polynomial
    assert gs is not None
    return has_sqrt(RealPolynomial(gs.real_coefficients()), tol_root)
