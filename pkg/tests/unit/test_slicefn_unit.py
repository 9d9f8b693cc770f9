"""
Unit Tests for Slice Functions

Covers planar domains and sampling grids, quaternion polynomials and their
star product, stem evaluation, the elementary constructors and the
representation formula.
"""

import math

import numpy as np
import pytest

from src.core.exceptions import DomainError, PointOutsideDomainError, ValidationError
from src.hypercomplex.quaternion import I, J, K, Quaternion, mul
from src.hypercomplex.slicefn import (
    DomainKind,
    FunctionKind,
    PlanarDomain,
    QuaternionPolynomial,
    StemValue,
    builtin,
    coefficient_distance,
    constant,
    evaluate,
    evaluate_many,
    grid_residual,
    identity,
    is_identically_zero,
    poly_star_power,
    polynomial,
    power_norm_identity_residual,
    recover_stem,
    relative_tolerance,
    representation_check,
    sample_units,
    scale,
    stem_mul,
    stem_symmetry_residual,
    star_product,
    sup_norm,
    tau,
)


@pytest.mark.unit
class TestPlanarDomain:
    """Test planar domains, membership and sampling"""

    def test_rectangle_validation(self):
        """Test rectangle bounds are checked"""
        with pytest.raises(ValidationError) as exc_info:
            PlanarDomain.rectangle(1.0, -1.0, 1.0)
        assert exc_info.value.error_code == "INVALID_DOMAIN"
        with pytest.raises(ValidationError):
            PlanarDomain.rectangle(-1.0, 1.0, 0.0)

    def test_membership(self):
        """Test contains() for rectangles and the plane minus the real axis"""
        rect = PlanarDomain.rectangle(-1.0, 1.0, 1.0)
        assert bool(rect.contains(0.5, -0.5))
        assert not bool(rect.contains(1.5, 0.0))
        minus_real = PlanarDomain.plane_minus_real()
        assert not bool(minus_real.contains(3.0, 0.0))
        assert bool(minus_real.contains(3.0, 0.1))
        assert not minus_real.contains_real

    def test_intersection(self):
        """Test intersections keep the tightest box and drop R if either side does"""
        rect = PlanarDomain.rectangle(-2.0, 2.0, 2.0)
        other = PlanarDomain.rectangle(-1.0, 3.0, 1.0)
        common = rect.intersect(other)
        assert (common.alpha_min, common.alpha_max, common.beta_max) == (-1.0, 2.0, 1.0)
        assert rect.intersect(PlanarDomain.plane_minus_real()).kind is DomainKind.RECTANGLE_MINUS_REAL
        assert PlanarDomain.whole_plane().intersect(PlanarDomain.plane_minus_real()).kind is DomainKind.PLANE_MINUS_REAL

    def test_empty_intersection(self):
        """Test disjoint rectangles raise"""
        with pytest.raises(DomainError) as exc_info:
            PlanarDomain.rectangle(-2.0, -1.0, 1.0).intersect(PlanarDomain.rectangle(1.0, 2.0, 1.0))
        assert exc_info.value.error_code == "EMPTY_INTERSECTION"

    def test_sample_grid_shapes(self, default_domain):
        """Test regular grids and the removal of the real axis"""
        assert default_domain.sample_grid(21, 21).shape == (441,)
        minus_real = PlanarDomain.rectangle(-2.0, 2.0, 2.0, minus_real=True)
        points = minus_real.sample_grid(21, 21)
        assert points.shape == (420,)
        assert np.all(np.abs(points.imag) > 0)

    def test_sample_grid_seed(self, default_domain):
        """Test jittered grids are reproducible and stay in the box"""
        first = default_domain.sample_grid(11, 11, seed=7)
        second = default_domain.sample_grid(11, 11, seed=7)
        assert np.array_equal(first, second)
        assert not np.array_equal(first, default_domain.sample_grid(11, 11))
        assert np.all(np.abs(first.real) <= 2.0) and np.all(np.abs(first.imag) <= 2.0)

    def test_invalid_grid(self, default_domain):
        """Test grids need two points per axis"""
        with pytest.raises(ValidationError):
            default_domain.sample_grid(1, 5)

    def test_to_dict(self):
        """Test the report form of a domain"""
        data = PlanarDomain.rectangle(-1.0, 1.0, 0.5).to_dict()
        assert data["kind"] == "rectangle" and data["contains_real"]
        assert (data["alpha_min"], data["alpha_max"], data["beta_max"]) == (-1.0, 1.0, 0.5)


@pytest.mark.unit
class TestQuaternionPolynomial:
    """Test polynomial coefficients and the convolution product"""

    def test_trailing_zeros_stripped(self):
        """Test the degree ignores trailing zero coefficients"""
        poly = QuaternionPolynomial([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]])
        assert poly.degree == 1

    def test_real_coefficient_list(self):
        """Test a 1-D list of reals gives a slice-preserving polynomial"""
        poly = QuaternionPolynomial([1.0, 0.0, 1.0])
        assert poly.is_real
        assert np.array_equal(poly.real_coefficients(), [1.0, 0.0, 1.0])

    def test_invalid_coefficients(self):
        """Test malformed coefficient arrays"""
        with pytest.raises(ValidationError):
            QuaternionPolynomial([[1, 2, 3]])
        with pytest.raises(ValidationError):
            QuaternionPolynomial([[1, 2, 3, float("inf")]])

    def test_star_of_conjugate_linear_factors(self, sample_polynomials):
        """Test (q + i) * (q - i) = q^2 + 1"""
        product = sample_polynomials["q_plus_i"].polynomial.star(sample_polynomials["q_minus_i"].polynomial)
        assert product.allclose(QuaternionPolynomial([1.0, 0.0, 1.0]), tol=1e-12)

    def test_star_is_not_commutative(self):
        """Test (q i) * (q j) = q^2 k while (q j) * (q i) = -q^2 k"""
        qi = QuaternionPolynomial([[0, 0, 0, 0], [0, 1, 0, 0]])
        qj = QuaternionPolynomial([[0, 0, 0, 0], [0, 0, 1, 0]])
        assert qi.star(qj).allclose(QuaternionPolynomial([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1]]))
        assert qj.star(qi).allclose(QuaternionPolynomial([[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1]]))

    def test_star_power(self, sample_polynomials):
        """Test (q + i)^{*2} = q^2 + 2q i - 1 and f^{*0} = 1"""
        f = sample_polynomials["q_plus_i"].polynomial
        assert poly_star_power(f, 2).allclose(QuaternionPolynomial([[-1, 0, 0, 0], [0, 2, 0, 0], [1, 0, 0, 0]]))
        assert poly_star_power(f, 0).allclose(QuaternionPolynomial.one())
        assert poly_star_power(f, 5).allclose(f.star(f).star(f).star(f).star(f), tol=1e-12)

    def test_star_power_validation(self, sample_polynomials):
        """Test negative or non-integer exponents"""
        with pytest.raises(ValidationError):
            poly_star_power(sample_polynomials["q_j"].polynomial, -1)
        with pytest.raises(ValidationError):
            poly_star_power(sample_polynomials["q_j"].polynomial, 1.5)

    def test_parts_and_conjugate(self):
        """Test scalar part, vector part and conjugation of coefficients"""
        poly = QuaternionPolynomial([[1, 2, 3, 4]])
        assert poly.scalar_part().allclose(QuaternionPolynomial([[1, 0, 0, 0]]))
        assert poly.vector_part().allclose(QuaternionPolynomial([[0, 2, 3, 4]]))
        assert poly.conj().allclose(QuaternionPolynomial([[1, -2, -3, -4]]))

    def test_coefficient_distance(self):
        """Test the coefficientwise distance"""
        a = QuaternionPolynomial([1.0, 2.0])
        b = QuaternionPolynomial([1.0, 2.0, 0.5])
        assert coefficient_distance(a, b) == 0.5


@pytest.mark.unit
class TestEvaluation:
    """Test evaluation through stems"""

    def test_coefficients_act_on_the_right(self):
        """Test f(q) = q i at q = j gives j i = -k"""
        f = polynomial([[0, 0, 0, 0], [0, 1, 0, 0]])
        assert evaluate(f, J).isclose(-K)

    def test_polynomial_matches_direct_evaluation(self, polynomial_factory, rng):
        """Test stem evaluation against sum q^n a_n computed with quaternion products"""
        for _ in range(10):
            poly = polynomial_factory()
            f = polynomial(poly)
            q = Quaternion.from_array(rng.normal(size=4) * 0.7)
            direct = Quaternion(0.0)
            power = Quaternion(1.0)
            for n in range(poly.degree + 1):
                direct = direct + mul(power, poly.coefficient(n))
                power = mul(power, q)
            assert evaluate(f, q).isclose(direct, tol=1e-10)

    def test_real_point(self):
        """Test values at real points"""
        f = polynomial([1.0, 0.0, 1.0])
        assert evaluate(f, Quaternion(2.0)).isclose(5.0)

    def test_point_outside_domain(self):
        """Test evaluation outside the domain raises"""
        f = identity(PlanarDomain.rectangle(-1.0, 1.0, 1.0))
        with pytest.raises(PointOutsideDomainError) as exc_info:
            evaluate(f, Quaternion(3.0, 0.0, 0.0, 0.0))
        assert exc_info.value.error_code == "POINT_OUTSIDE_DOMAIN"

    def test_evaluate_many(self, polynomial_factory, rng):
        """Test vectorized evaluation agrees with pointwise evaluation"""
        f = polynomial(polynomial_factory(degree=3))
        points = rng.normal(size=(8, 4))
        points[0, 1:] = 0.0
        values = evaluate_many(f, points)
        for point, value in zip(points, values):
            assert np.allclose(value, evaluate(f, Quaternion.from_array(point)).as_array(), atol=1e-12)

    def test_builtin_functions(self):
        """Test elementary slice-preserving functions"""
        assert evaluate(builtin("exp"), Quaternion(1.0)).isclose(math.e, tol=1e-12)
        value = evaluate(builtin("exp"), I * math.pi)
        assert value.isclose(-1.0, tol=1e-12)
        composed = builtin("cos", arg=polynomial([0.0, 0.0, 1.0]))
        assert evaluate(composed, Quaternion(0.5)).isclose(math.cos(0.25), tol=1e-12)

    def test_builtin_validation(self):
        """Test unknown names and non slice-preserving arguments"""
        with pytest.raises(ValidationError) as exc_info:
            builtin("tan")
        assert exc_info.value.error_code == "UNKNOWN_BUILTIN"
        with pytest.raises(ValidationError) as exc_info:
            builtin("cos", arg=polynomial([[0, 0, 0, 0], [0, 1, 0, 0]]))
        assert exc_info.value.error_code == "NOT_SLICE_PRESERVING"

    def test_tau(self):
        """Test tau(alpha + beta I) = sign(beta) I and tau * tau = -1"""
        t = tau()
        assert evaluate(t, Quaternion(1.0, 0.0, 2.0, 0.0)).isclose(J)
        assert evaluate(t, Quaternion(-1.0, 0.0, 0.0, -3.0)).isclose(-K)
        square = star_product(t, t)
        assert evaluate(square, Quaternion(0.3, 0.2, 0.1, 0.0)).isclose(-1.0, tol=1e-12)
        with pytest.raises(PointOutsideDomainError):
            evaluate(t, Quaternion(1.0))

    def test_tau_scalar_stem(self):
        """Test the tau stem at a single complex point and the representation formula"""
        value = tau(K).stem(np.complex128(0.5 - 2.0j))
        assert value.shape == (4,)
        assert np.allclose(value, [0.0, 0.0, 0.0, -1.0j])
        assert representation_check(tau(K), 0.5, 2.0, I, J) <= 1e-12

    def test_scaling_sides(self):
        """Test left and right multiplication by a quaternion constant"""
        f = constant(J)
        assert evaluate(scale(f, I, left=True), Quaternion(0.5)).isclose(K)
        assert evaluate(scale(f, I), Quaternion(0.5)).isclose(-K)
        g = builtin("exp", premul=J)
        assert evaluate(I * g, Quaternion(0.0)).isclose(K)
        assert evaluate(g * I, Quaternion(0.0)).isclose(-K)

    def test_kinds(self, cos_sin_function, sample_polynomials):
        """Test representation tags"""
        assert sample_polynomials["q_j"].kind is FunctionKind.POLYNOMIAL
        assert builtin("sin").kind is FunctionKind.ELEMENTARY
        assert cos_sin_function.kind is FunctionKind.COMPOSITE


@pytest.mark.unit
class TestStemProperties:
    """Test stem symmetry, recovery and the representation formula"""

    def test_stem_product(self):
        """Test the stem-level product formula"""
        u = StemValue(I, J)
        v = StemValue(J, Quaternion(1.0))
        w = stem_mul(u, v)
        assert w.p.isclose(mul(I, J) - J)
        assert w.q.isclose(I + mul(J, J))
        assert np.allclose((u * v).to_complex(), w.to_complex())

    def test_symmetry_of_constructed_functions(self, cos_sin_function, default_grid):
        """Test F(z̄) = conj(F(z)) for builtins and polynomials"""
        assert stem_symmetry_residual(cos_sin_function, default_grid) <= 1e-12
        assert stem_symmetry_residual(polynomial([[1, 2, 3, 4], [0, 1, 0, 0]]), default_grid) <= 1e-12

    def test_recover_stem(self, polynomial_factory, unit_factory):
        """Test the stem rebuilt from one slice agrees with the stem"""
        f = polynomial(polynomial_factory(degree=4))
        recovered = recover_stem(f, 0.3, 0.7, unit_factory())
        assert np.allclose(recovered.to_complex(), f.stem(complex(0.3, 0.7)), atol=1e-12)

    def test_representation_formula(self, polynomial_factory, unit_factory):
        """Test f(alpha + beta J) from the values on C_I"""
        for _ in range(10):
            f = polynomial(polynomial_factory())
            assert representation_check(f, 0.4, 0.6, unit_factory(), unit_factory()) <= 1e-9

    def test_representation_formula_for_elementary_functions(self, cos_sin_function, unit_factory):
        """Test the representation formula beyond polynomials"""
        assert representation_check(cos_sin_function, -1.0, 1.5, unit_factory(), unit_factory()) <= 1e-9

    def test_power_norm_identity(self, polynomial_factory, rng):
        """Test |f^{*n}(q)| = |f(q)| |f^{*(n-1)}(f(q)^{-1} q f(q))|"""
        poly = polynomial_factory(degree=2, max_norm=1.0)
        q = Quaternion.from_array(rng.normal(size=4) * 0.5)
        assert power_norm_identity_residual(poly, 3, q) <= 1e-10

    def test_sample_units(self):
        """Test seeded units are reproducible"""
        first = sample_units(3, seed=1)
        second = sample_units(3, seed=1)
        assert [u.to_list() for u in first] == [u.to_list() for u in second]


@pytest.mark.unit
class TestGridMeasures:
    """Test grid sup norms and residuals"""

    def test_identically_zero(self, cos_sin_function, sample_polynomials):
        """Test f - f vanishes and f does not"""
        f = sample_polynomials["generic"]
        assert is_identically_zero(f - f)
        assert not is_identically_zero(f)
        assert is_identically_zero(cos_sin_function - cos_sin_function)

    def test_sup_norm_and_residual(self, default_grid):
        """Test the sup of a constant and the distance of two constants"""
        assert math.isclose(sup_norm(constant(Quaternion(0.0, 3.0, 4.0, 0.0)), default_grid), 5.0)
        assert math.isclose(grid_residual(constant(1.0), constant(3.0), default_grid), 2.0)

    def test_relative_tolerance(self):
        """Test tol (1 + scale) and non-finite scales"""
        assert relative_tolerance(1e-9, 9.0) == pytest.approx(1e-8)
        assert relative_tolerance(1e-9, math.inf) == 1e-9
