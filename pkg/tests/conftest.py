"""
Pytest configuration and fixtures for slicexp testing

This module provides shared fixtures: seeded random generators, sample
domains and grids, random quaternion polynomials and the exponential sum
rule examples used across the unit, integration and acceptance suites.
"""

import logging
import math
import os
import sys
from pathlib import Path
from typing import Callable, Dict, Tuple

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from src.config import reload_settings
from src.hypercomplex.quaternion import I, J, K, ImaginaryUnit, Quaternion
from src.hypercomplex.slicefn import (
    PlanarDomain,
    QuaternionPolynomial,
    SliceFunction,
    builtin,
    constant,
    polynomial,
    slice_preserving,
    tau,
)

PI = math.pi
PROJECT_ROOT = Path(__file__).resolve().parent.parent
JOBS_DIR = PROJECT_ROOT / "data" / "jobs"

# Euclidean <I, J> of the non-orthogonal example, so that IJ + JI = 13/10
NON_ORTHOGONAL_COSINE = -13.0 / 20.0

FunctionPair = Tuple[SliceFunction, SliceFunction]


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Run every test against default settings, including those that set SLICEXP_* themselves"""
    _drop_slicexp_env(monkeypatch)
    reload_settings()
    yield
    _drop_slicexp_env(monkeypatch)
    reload_settings()


def _drop_slicexp_env(monkeypatch) -> None:
    for name in list(os.environ):
        if name.startswith("SLICEXP_"):
            monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def reset_src_logger():
    """Undo CLI logging setup so caplog sees src.* records"""
    yield
    logger = logging.getLogger("src")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator"""
    return np.random.default_rng(20240917)


@pytest.fixture
def default_domain() -> PlanarDomain:
    """The rectangle [-2, 2] x [-2, 2]"""
    return PlanarDomain.rectangle(-2.0, 2.0, 2.0)


@pytest.fixture
def small_domain() -> PlanarDomain:
    """The rectangle [-0.5, 0.5] x [-0.5, 0.5] used for random polynomial families"""
    return PlanarDomain.rectangle(-0.5, 0.5, 0.5)


@pytest.fixture
def small_grid(small_domain) -> np.ndarray:
    return small_domain.sample_grid(11, 11)


@pytest.fixture
def default_grid(default_domain) -> np.ndarray:
    return default_domain.sample_grid(21, 21)


def _random_quaternion(rng: np.random.Generator, max_norm: float) -> np.ndarray:
    direction = rng.normal(size=4)
    direction /= np.linalg.norm(direction)
    return direction * rng.uniform(0.0, max_norm)


@pytest.fixture
def polynomial_factory(rng) -> Callable[..., QuaternionPolynomial]:
    """Random quaternion polynomials with coefficient norm <= max_norm"""

    def make(max_degree: int = 5, max_norm: float = 2.0, degree: int = None) -> QuaternionPolynomial:
        d = int(rng.integers(0, max_degree + 1)) if degree is None else degree
        coeffs = np.array([_random_quaternion(rng, max_norm) for _ in range(d + 1)])
        return QuaternionPolynomial(coeffs)

    return make


@pytest.fixture
def unit_factory(rng) -> Callable[[], ImaginaryUnit]:
    def make() -> ImaginaryUnit:
        return ImaginaryUnit.from_vector(*rng.normal(size=3))

    return make


# ---------------------------------------------------------------------------
# Exponential examples
# ---------------------------------------------------------------------------


@pytest.fixture
def cos_sin_function() -> SliceFunction:
    """f(q) = pi cos(q) i + pi sin(q) j, whose f_v^s is pi^2"""
    return builtin("cos", premul=I * PI) + builtin("sin", premul=J * PI)


@pytest.fixture
def constant_orthogonal_pair() -> FunctionPair:
    """f = 1/2 + 3 pi i, g = -1/4 + 4 pi j: n = 3, m = 4, p = 5"""
    f = constant(Quaternion(0.5, 3.0 * PI, 0.0, 0.0))
    g = constant(Quaternion(-0.25, 0.0, 4.0 * PI, 0.0))
    return f, g


def non_orthogonal_unit() -> ImaginaryUnit:
    c = NON_ORTHOGONAL_COSINE
    return ImaginaryUnit(0.0, c, math.sqrt(1.0 - c * c), 0.0)


@pytest.fixture
def constant_non_orthogonal_pair() -> FunctionPair:
    """f = 2 pi i, g = 5 pi J with <i, J> = -13/20: n = 2, m = 5, p = 4"""
    f = constant(I * (2.0 * PI))
    g = constant(non_orthogonal_unit() * (5.0 * PI))
    return f, g


@pytest.fixture
def constant_non_real_pair() -> FunctionPair:
    """
    f = 2 pi i - 2 pi j - 2 pi tau k and g = tau i + pi j + k on H minus R:
    n = 2, m = 1, p = 1 and both sides of the sum rule are -1.
    """
    f = constant(Quaternion(0.0, 2.0 * PI, -2.0 * PI, 0.0)) + tau(K * (-2.0 * PI))
    g = tau(I) + constant(Quaternion(0.0, 0.0, PI, 1.0))
    return f, g


def rotating_frame_pair(n: int, p: int, alpha, beta, domain: PlanarDomain) -> FunctionPair:
    """
    f_v = -n pi u and g_v = pi (n u + p w) for the orthonormal frame

        u = (cos a cos b, cos a sin b, sin a),  w = (sin a cos b, sin a sin b, -cos a)

    with a = alpha(q), b = beta(q); then f_v^s = n^2 pi^2, (f + g)_v^s = p^2 pi^2
    and g_v^s = (n^2 + p^2) pi^2.
    """

    def u(index):
        def component(z):
            a, b = alpha(z), beta(z)
            return (np.cos(a) * np.cos(b), np.cos(a) * np.sin(b), np.sin(a))[index]

        return component

    def w(index):
        def component(z):
            a, b = alpha(z), beta(z)
            return (np.sin(a) * np.cos(b), np.sin(a) * np.sin(b), -np.cos(a))[index]

        return component

    units = (I, J, K)
    f = None
    g = None
    for index, unit in enumerate(units):
        f_part = slice_preserving(lambda z, c=u(index): -n * PI * c(z), unit, domain, label=f"f{index + 1}")
        g_part = slice_preserving(
            lambda z, cu=u(index), cw=w(index): PI * (n * cu(z) + p * cw(z)), unit, domain, label=f"g{index + 1}"
        )
        f = f_part if f is None else f + f_part
        g = g_part if g is None else g + g_part
    return f, g


@pytest.fixture
def non_constant_pair() -> FunctionPair:
    """(n, p, m) = (3, 4, 5) with alpha(q) = q and beta(q) = q^2 on [-1, 1]^2"""
    return rotating_frame_pair(3, 4, lambda z: z, lambda z: z * z, PlanarDomain.rectangle(-1.0, 1.0, 1.0))


@pytest.fixture
def sample_polynomials() -> Dict[str, SliceFunction]:
    return {
        "q_plus_i": polynomial([[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]),
        "q_minus_i": polynomial([[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]),
        "q_j": polynomial([[0.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]),
        "q_i_plus_j": polynomial([[0.0, 0.0, 1.0, 0.0], [0.0, 1.0, 0.0, 0.0]]),
        "generic": polynomial([[0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]),
    }


@pytest.fixture
def jobs_dir() -> Path:
    return JOBS_DIR
