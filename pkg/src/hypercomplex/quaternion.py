"""
Quaternion algebra

Double-precision arithmetic in the real quaternion algebra H: the Hamilton
product, conjugation, norms and inverses, the sphere S of imaginary units,
the (alpha, beta, I) coordinates of a point and orthonormal completions of an
imaginary unit.

Besides the scalar ``Quaternion`` value type the module provides vectorized
helpers on arrays of shape (..., 4). They accept real or complex dtypes; a
complex 4-vector p + iq (p, q real 4-vectors) stores the element p + ıq of
H ⊗ C, on which the Hamilton formula is exactly the stem-level product.

Author: Slicexp Team
Version: 1.0.0
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

import numpy as np

from ..config import get_settings
from ..core.exceptions import DomainError
from ..core.validation import Validator

logger = logging.getLogger(__name__)

Real = Union[int, float]


def hamilton(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    Hamilton product of stacked quaternions (last axis = w, x, y, z).

    Works for complex arrays too, where it realizes the product of H ⊗ C.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def conj_array(a: np.ndarray) -> np.ndarray:
    """Quaternionic conjugation of stacked quaternions (negates the vector part)."""
    out = np.array(a, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def cross3(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Cross product on the last axis (length 3), complex-bilinear."""
    return np.stack(
        [
            u[..., 1] * v[..., 2] - u[..., 2] * v[..., 1],
            u[..., 2] * v[..., 0] - u[..., 0] * v[..., 2],
            u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0],
        ],
        axis=-1,
    )


@dataclass(frozen=True)
class Quaternion:
    """
    Element w + x i + y j + z k of H.

    Instances are immutable values; arithmetic returns new quaternions.
    """

    w: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("w", "x", "y", "z"):
            object.__setattr__(self, name, float(getattr(self, name)))

    # Construction / export

    @classmethod
    def from_array(cls, values: Iterable[float]) -> "Quaternion":
        w, x, y, z = (float(v) for v in values)
        return cls(w, x, y, z)

    @classmethod
    def from_list(cls, value: object, field_name: str = "quaternion") -> "Quaternion":
        """Build from a JSON literal ``[w, x, y, z]`` (or a bare real)."""
        return cls(*Validator.validate_quaternion(value, field_name))

    @classmethod
    def real(cls, value: Real) -> "Quaternion":
        return cls(float(value))

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z], dtype=float)

    def to_list(self) -> list:
        return [self.w, self.x, self.y, self.z]

    # Algebra

    def __add__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x, self.y + other.y, self.z + other.z)

    def __radd__(self, other: Real) -> "Quaternion":
        return self + other

    def __sub__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        return self + (-_coerce(other))

    def __rsub__(self, other: Real) -> "Quaternion":
        return _coerce(other) - self

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other, self.y * other, self.z * other)
        return NotImplemented

    def __rmul__(self, other: Real) -> "Quaternion":
        if isinstance(other, (int, float)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: Real) -> "Quaternion":
        if isinstance(other, (int, float)):
            if other == 0:
                raise DomainError("Division of a quaternion by zero", error_code="DIVISION_BY_ZERO")
            return self * (1.0 / other)
        return NotImplemented

    def conj(self) -> "Quaternion":
        return conj(self)

    def norm(self) -> float:
        return norm(self)

    def isclose(self, other: Union["Quaternion", Real], tol: float = 1e-12) -> bool:
        return norm(self - _coerce(other)) <= tol

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"

    def __str__(self) -> str:
        return f"{self.w:.6g}{self.x:+.6g}i{self.y:+.6g}j{self.z:+.6g}k"


def _coerce(value: Union[Quaternion, Real]) -> Quaternion:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float)):
        return Quaternion(float(value))
    raise TypeError(f"Cannot combine Quaternion with {type(value).__name__}")


@dataclass(frozen=True, repr=False)
class ImaginaryUnit(Quaternion):
    """
    A quaternion u with re(u) = 0 and |u| = 1, hence u^2 = -1.

    Membership is checked against the algebraic tolerance tau_alg.
    """

    def __post_init__(self) -> None:
        super().__post_init__()
        tol = get_settings().tolerances.alg
        length = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(self.w) > tol or abs(length - 1.0) > tol:
            raise DomainError(
                "Quaternion is not an imaginary unit",
                error_code="NOT_IMAGINARY_UNIT",
                context={"value": [self.w, self.x, self.y, self.z], "tolerance": tol},
            )

    @classmethod
    def from_vector(cls, x: float, y: float, z: float) -> "ImaginaryUnit":
        """Normalize a nonzero vector (x, y, z) to a unit of S."""
        length = math.sqrt(x * x + y * y + z * z)
        if length == 0.0:
            raise DomainError("Zero vector has no direction", error_code="ZERO_DIRECTION")
        return cls(0.0, x / length, y / length, z / length)

    @classmethod
    def of(cls, q: Quaternion) -> "ImaginaryUnit":
        return cls(q.w, q.x, q.y, q.z)


ONE = Quaternion(1.0)
ZERO = Quaternion(0.0)
I = ImaginaryUnit(0.0, 1.0, 0.0, 0.0)
J = ImaginaryUnit(0.0, 0.0, 1.0, 0.0)
K = ImaginaryUnit(0.0, 0.0, 0.0, 1.0)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product a·b."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def conj(a: Quaternion) -> Quaternion:
    return Quaternion(a.w, -a.x, -a.y, -a.z)


def re(a: Quaternion) -> float:
    return a.w


def vec(a: Quaternion) -> Quaternion:
    return Quaternion(0.0, a.x, a.y, a.z)


def norm(a: Quaternion) -> float:
    return math.sqrt(a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z)


def inv(a: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(a)/|a|^2."""
    n2 = a.w * a.w + a.x * a.x + a.y * a.y + a.z * a.z
    if n2 == 0.0:
        raise DomainError("Zero quaternion has no inverse", error_code="INVERSE_OF_ZERO")
    return conj(a) * (1.0 / n2)


def sphere_coords(
    a: Quaternion, tol: Optional[float] = None
) -> Tuple[float, float, Optional[ImaginaryUnit]]:
    """
    Write a = alpha + beta I with beta >= 0 and I in S.

    Returns ``(alpha, 0.0, None)`` when a is real within tau_alg.
    """
    tol = get_settings().tolerances.alg if tol is None else tol
    beta = math.sqrt(a.x * a.x + a.y * a.y + a.z * a.z)
    if beta < tol:
        return a.w, 0.0, None
    return a.w, beta, ImaginaryUnit(0.0, a.x / beta, a.y / beta, a.z / beta)


def orthonormal_basis(unit: Quaternion) -> Tuple[ImaginaryUnit, ImaginaryUnit, ImaginaryUnit]:
    """
    Complete I to an alternating orthonormal triple (I, J, K) with K = IJ.

    J is obtained by Gram-Schmidt from the canonical axis least aligned with I
    (ties resolved in the order i, j, k).
    """
    unit = ImaginaryUnit.of(unit)
    direction = unit.as_array()[1:]
    axis = int(np.argmin(np.abs(direction)))
    seed = np.zeros(3)
    seed[axis] = 1.0
    completion = seed - np.dot(seed, direction) * direction
    second = ImaginaryUnit.from_vector(*completion)
    third = ImaginaryUnit.of(mul(unit, second))
    return unit, second, third


def exp_q(a: Quaternion) -> Quaternion:
    """Quaternion exponential e^alpha (cos beta + I sin beta)."""
    alpha, beta, unit = sphere_coords(a)
    scale = math.exp(alpha)
    if unit is None:
        return Quaternion(scale)
    return Quaternion(scale * math.cos(beta)) + unit * (scale * math.sin(beta))


def quaternion_array(values: Iterable[Quaternion]) -> np.ndarray:
    """Stack quaternions into an (n, 4) float array."""
    return np.array([q.to_list() for q in values], dtype=float).reshape(-1, 4)
