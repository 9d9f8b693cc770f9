"""
Input Validation for slicexp

This module provides validation helpers for the numeric payloads that reach
the library from JSON jobs: quaternion literals, coefficient lists, tolerances
and grid shapes.

Author: Slicexp Team
Version: 1.0.0
"""

import math
from typing import Any, List, Sequence, Tuple

from .exceptions import ValidationError


class Validator:
    """
    Validator for numeric inputs.
    """

    @staticmethod
    def validate_real(value: Any, field_name: str = "value") -> float:
        """
        Validate a finite real number.

        Raises:
            ValidationError: If the value is not a finite real number
        """
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(
                message=f"{field_name} must be a real number",
                error_code="INVALID_TYPE",
                context={"field": field_name, "value": repr(value), "expected_type": "number"},
            )
        if not math.isfinite(value):
            raise ValidationError(
                message=f"{field_name} must be finite",
                error_code="NON_FINITE_VALUE",
                context={"field": field_name, "value": repr(value)},
            )
        return float(value)

    @staticmethod
    def validate_quaternion(value: Any, field_name: str = "quaternion") -> Tuple[float, float, float, float]:
        """
        Validate a quaternion literal ``[w, x, y, z]``; a bare number is read as ``[w, 0, 0, 0]``.

        Returns:
            The four components as floats
        """
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return (Validator.validate_real(value, field_name), 0.0, 0.0, 0.0)

        if not isinstance(value, (list, tuple)) or len(value) != 4:
            raise ValidationError(
                message=f"{field_name} must be a 4-array [w, x, y, z]",
                error_code="INVALID_QUATERNION",
                context={"field": field_name, "value": repr(value)},
            )
        w, x, y, z = (
            Validator.validate_real(component, f"{field_name}[{index}]")
            for index, component in enumerate(value)
        )
        return (w, x, y, z)

    @staticmethod
    def validate_coefficients(
        value: Any,
        field_name: str = "coeffs",
        quaternionic: bool = True,
    ) -> List[Any]:
        """
        Validate a non-empty coefficient list.

        Args:
            value: Raw coefficient list
            field_name: Name of the field for error messages
            quaternionic: Whether entries are quaternion literals (else reals)

        Returns:
            Validated coefficient list
        """
        if not isinstance(value, (list, tuple)) or len(value) == 0:
            raise ValidationError(
                message=f"{field_name} must be a non-empty list",
                error_code="EMPTY_COEFFICIENTS",
                context={"field": field_name, "value": repr(value)},
            )
        if quaternionic:
            return [
                Validator.validate_quaternion(c, f"{field_name}[{n}]")
                for n, c in enumerate(value)
            ]
        return [Validator.validate_real(c, f"{field_name}[{n}]") for n, c in enumerate(value)]

    @staticmethod
    def validate_positive(value: Any, field_name: str = "value") -> float:
        """Validate a strictly positive finite real"""
        number = Validator.validate_real(value, field_name)
        if number <= 0.0:
            raise ValidationError(
                message=f"{field_name} must be positive",
                error_code="NON_POSITIVE_VALUE",
                context={"field": field_name, "value": number},
            )
        return number

    @staticmethod
    def validate_grid(shape: Sequence[Any], field_name: str = "grid") -> Tuple[int, int]:
        """Validate a grid shape ``(n_alpha, n_beta)`` with both dimensions >= 2"""
        if not isinstance(shape, (list, tuple)) or len(shape) != 2:
            raise ValidationError(
                message=f"{field_name} must be a pair (n_alpha, n_beta)",
                error_code="INVALID_GRID",
                context={"field": field_name, "value": repr(shape)},
            )
        dims = []
        for n in shape:
            if isinstance(n, bool) or not isinstance(n, int) or n < 2:
                raise ValidationError(
                    message=f"{field_name} dimensions must be integers >= 2",
                    error_code="INVALID_GRID",
                    context={"field": field_name, "value": repr(shape)},
                )
            dims.append(n)
        return (dims[0], dims[1])
