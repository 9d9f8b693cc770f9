"""
JSON expression trees for slice functions

A function is described by a tree of JSON objects, each with an ``op`` key:

    {"op": "poly", "coeffs": [[w, x, y, z], ...]}
    {"op": "const", "value": [w, x, y, z]}
    {"op": "id"}
    {"op": "builtin", "name": "cos", "premul": [0, 1, 0, 0], "arg": {...}}
    {"op": "tau", "premul": [0, 1, 0, 0]}
    {"op": "add", "args": [...]}           {"op": "sub", "args": [a, b]}
    {"op": "neg", "arg": ...}              {"op": "scale", "arg": ..., "by": q, "left": false}
    {"op": "star", "args": [...]}          {"op": "pow", "arg": ..., "n": 3}
    {"op": "conj", "arg": ...}             {"op": "scalar", "arg": ...}
    {"op": "vector", "arg": ...}           {"op": "sym", "arg": ...}
    {"op": "exp", "arg": ..., "method": "closed"}
    {"op": "sin", "arg": ...}              {"op": "cos", "arg": ...}

Leaves take the job domain; ``tau`` always lives off the real axis. The full
grammar is documented in docs/EXPRESSION_GRAMMAR.md.

Author: Slicexp Team
Version: 1.0.0
"""

import dataclasses
import json
from typing import Any, Callable, Dict, List, Mapping, Optional

from ..core.exceptions import ExpressionError
from ..core.logging import LoggerMixin
from .intrinsic import conjugate_fn, scalar_part, symmetrized, vector_part
from .quaternion import Quaternion
from .slicefn import (
    PlanarDomain,
    QuaternionPolynomial,
    SliceFunction,
    builtin,
    constant,
    identity,
    poly_star_power,
    polynomial,
    star_product,
    tau,
)
from .starexp import cos_star, exp_star_closed, exp_star_factorized, exp_star_series, exp_star_sqrtform, sin_star

MAX_DEPTH = 64

EXP_METHODS = ("closed", "series", "factorized", "sqrt-form")


def restrict(f: SliceFunction, domain: Optional[PlanarDomain]) -> SliceFunction:
    """f with its domain intersected with ``domain``"""
    if domain is None or domain == f.domain:
        return f
    return dataclasses.replace(f, domain=f.domain.intersect(domain))


class ExpressionParser(LoggerMixin):
    """
    Builds SliceFunction values from expression trees.

    Args:
        domain: Domain given to every leaf (whole plane when omitted)
        series_tol: Remainder target for series nodes (settings default when None)
    """

    def __init__(self, domain: Optional[PlanarDomain] = None, series_tol: Optional[float] = None):
        self.domain = domain
        self.series_tol = series_tol
        self._handlers: Dict[str, Callable[[Mapping[str, Any], int], SliceFunction]] = {
            "poly": self._poly,
            "const": self._const,
            "id": self._identity,
            "builtin": self._builtin,
            "tau": self._tau,
            "add": self._add,
            "sub": self._sub,
            "neg": self._neg,
            "scale": self._scale,
            "star": self._star,
            "pow": self._pow,
            "conj": self._unary(conjugate_fn),
            "scalar": self._unary(scalar_part),
            "vector": self._unary(vector_part),
            "sym": self._unary(symmetrized),
            "exp": self._exp,
            "sin": self._trig(sin_star),
            "cos": self._trig(cos_star),
        }

    @property
    def ops(self) -> List[str]:
        return sorted(self._handlers)

    def parse(self, node: Any, depth: int = 0) -> SliceFunction:
        """
        Build the function described by ``node``.

        Raises:
            ExpressionError: If the tree is malformed or uses an unknown op
            ValidationError: If a literal (quaternion, coefficient list) is invalid
        """
        if depth > MAX_DEPTH:
            raise ExpressionError(
                "Expression tree is nested too deeply",
                error_code="EXPRESSION_TOO_DEEP",
                context={"max_depth": MAX_DEPTH},
            )
        if not isinstance(node, Mapping):
            raise ExpressionError(
                "Expression nodes must be JSON objects",
                error_code="INVALID_NODE",
                context={"node": repr(node)[:200]},
            )
        op = node.get("op")
        handler = self._handlers.get(op) if isinstance(op, str) else None
        if handler is None:
            raise ExpressionError(
                f"Unknown expression op '{op}'",
                error_code="UNKNOWN_OP",
                context={"op": repr(op), "allowed": self.ops},
            )
        return handler(node, depth)

    def parse_text(self, text: str) -> SliceFunction:
        """Parse a JSON document holding one expression tree"""
        return self.parse(load_json(text))

    # Field access

    @staticmethod
    def _field(node: Mapping[str, Any], name: str) -> Any:
        if name not in node:
            raise ExpressionError(
                f"'{node.get('op')}' node is missing the '{name}' field",
                error_code="MISSING_FIELD",
                context={"op": node.get("op"), "field": name},
            )
        return node[name]

    def _child(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        return self.parse(self._field(node, "arg"), depth + 1)

    def _children(self, node: Mapping[str, Any], depth: int, exactly: Optional[int] = None) -> List[SliceFunction]:
        args = self._field(node, "args")
        if not isinstance(args, list) or not args or (exactly is not None and len(args) != exactly):
            expected = f"exactly {exactly}" if exactly is not None else "at least one"
            raise ExpressionError(
                f"'{node.get('op')}' needs {expected} argument(s) in 'args'",
                error_code="INVALID_ARGUMENTS",
                context={"op": node.get("op"), "args": repr(args)[:200]},
            )
        return [self.parse(arg, depth + 1) for arg in args]

    @staticmethod
    def _quaternion(node: Mapping[str, Any], name: str) -> Optional[Quaternion]:
        if node.get(name) is None:
            return None
        return Quaternion.from_list(node[name], field_name=name)

    # Leaves

    def _poly(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        coeffs = QuaternionPolynomial.from_json(self._field(node, "coeffs"))
        return polynomial(coeffs, self.domain, label=node.get("label"))

    def _const(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        value = Quaternion.from_list(self._field(node, "value"), field_name="value")
        return constant(value, self.domain)

    def _identity(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        return identity(self.domain)

    def _builtin(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        name = self._field(node, "name")
        arg = self._child(node, depth) if node.get("arg") is not None else None
        return builtin(name, self._quaternion(node, "premul"), arg, self.domain)

    def _tau(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        return restrict(tau(self._quaternion(node, "premul")), self.domain)

    # Ring operations

    def _add(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        terms = self._children(node, depth)
        total = terms[0]
        for term in terms[1:]:
            total = total + term
        return total

    def _sub(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        left, right = self._children(node, depth, exactly=2)
        return left - right

    def _neg(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        return -self._child(node, depth)

    def _scale(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        f = self._child(node, depth)
        factor = Quaternion.from_list(self._field(node, "by"), field_name="by")
        return factor * f if node.get("left", False) else f * factor

    def _star(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        factors = self._children(node, depth)
        product = factors[0]
        for factor in factors[1:]:
            product = star_product(product, factor)
        return product

    def _pow(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        f = self._child(node, depth)
        n = self._field(node, "n")
        if isinstance(n, float) and n.is_integer():
            n = int(n)
        if f.polynomial is None:
            raise ExpressionError(
                "'pow' is only available for polynomial arguments",
                error_code="POLYNOMIAL_REQUIRED",
                context={"function": f.label},
            )
        power = poly_star_power(f.polynomial, n)
        return polynomial(power, f.domain, label=f"{f.label}^*{n}")

    def _unary(self, operation: Callable[[SliceFunction], SliceFunction]):
        def handler(node: Mapping[str, Any], depth: int) -> SliceFunction:
            return operation(self._child(node, depth))

        return handler

    # Exponential and trigonometric series

    def _exp(self, node: Mapping[str, Any], depth: int) -> SliceFunction:
        f = self._child(node, depth)
        method = node.get("method", "closed")
        if method == "closed":
            return exp_star_closed(f, self.series_tol)
        if method == "series":
            return exp_star_series(f, self.series_tol)
        if method == "factorized":
            return exp_star_factorized(f, self.series_tol)
        if method == "sqrt-form":
            return exp_star_sqrtform(f, self.series_tol)
        raise ExpressionError(
            f"Unknown exponential method '{method}'",
            error_code="UNKNOWN_METHOD",
            context={"method": repr(method), "allowed": list(EXP_METHODS)},
        )

    def _trig(self, series: Callable[..., SliceFunction]):
        def handler(node: Mapping[str, Any], depth: int) -> SliceFunction:
            return series(self._child(node, depth), self.series_tol)

        return handler


def load_json(text: str) -> Any:
    """
    Decode a JSON document.

    Raises:
        ExpressionError: If the text is not valid JSON
    """
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ExpressionError(
            f"Malformed JSON: {e.msg}",
            error_code="MALFORMED_JSON",
            context={"line": e.lineno, "column": e.colno},
            original_error=e,
        ) from e


def parse_function(
    node: Any, domain: Optional[PlanarDomain] = None, series_tol: Optional[float] = None
) -> SliceFunction:
    """Build a slice function from an expression tree"""
    return ExpressionParser(domain, series_tol).parse(node)
