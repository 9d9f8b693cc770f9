"""
Unit Tests for the Intrinsic Calculus

Covers conjugation, scalar and vector parts, the symmetrized function, the
intrinsic scalar and wedge products, decompositions, the scalar-vector product
formula and the commutation criterion.
"""

import numpy as np
import pytest

from src.core.exceptions import DomainError
from src.hypercomplex.intrinsic import (
    commutes,
    conjugate_fn,
    decompose,
    detect_slice_unit,
    is_CJ_preserving,
    is_slice_preserving,
    real_gcd,
    scalar_part,
    scalar_product_residual,
    star_product_sv,
    star_scalar,
    star_wedge,
    symmetrized,
    vector_part,
    vector_square_residual,
    wedge_symmetrized_residual,
    witness_residual,
)
from src.hypercomplex.quaternion import I, J, K, Quaternion, orthonormal_basis
from src.hypercomplex.slicefn import (
    QuaternionPolynomial,
    builtin,
    constant,
    grid_residual,
    polynomial,
    star_product,
    tau,
)


@pytest.mark.unit
class TestConjugationAndParts:
    """Test f^c, f0, f_v and f^s"""

    def test_polynomial_parts(self):
        """Test parts of a polynomial stay polynomial"""
        f = polynomial([[1, 2, 3, 4], [5, 6, 7, 8]])
        assert conjugate_fn(f).polynomial.allclose(QuaternionPolynomial([[1, -2, -3, -4], [5, -6, -7, -8]]))
        assert scalar_part(f).polynomial.allclose(QuaternionPolynomial([1.0, 5.0]))
        assert vector_part(f).polynomial.allclose(QuaternionPolynomial([[0, 2, 3, 4], [0, 6, 7, 8]]))

    def test_symmetrized_of_linear_factor(self, sample_polynomials):
        """Test (q + i)^s = q^2 + 1"""
        fs = symmetrized(sample_polynomials["q_plus_i"])
        assert fs.polynomial.allclose(QuaternionPolynomial([1.0, 0.0, 1.0]))

    def test_symmetrized_is_slice_preserving(self, polynomial_factory, cos_sin_function):
        """Test f^s has real coefficients and a real stem"""
        assert symmetrized(polynomial(polynomial_factory(degree=3))).polynomial.is_real
        assert is_slice_preserving(symmetrized(cos_sin_function))

    def test_symmetrized_feeds_builtins(self, polynomial_factory):
        """Test f^s of a random polynomial is accepted as a builtin argument"""
        for _ in range(10):
            fs = symmetrized(polynomial(polynomial_factory(degree=2)))
            assert not np.any(fs.polynomial.coeffs[:, 1:])
            composed = builtin("cos", arg=fs)
            z = np.array([0.3 + 0.4j])
            assert np.allclose(composed.stem(z)[..., 0], np.cos(fs.stem(z)[..., 0]))

    def test_composite_parts_add_up(self, cos_sin_function, default_grid):
        """Test f = f0 + f_v and f + f^c = 2 f0 for a non-polynomial function"""
        f = cos_sin_function + builtin("exp")
        assert grid_residual(scalar_part(f) + vector_part(f), f, default_grid) <= 1e-12
        assert grid_residual(f + conjugate_fn(f), scalar_part(f) * 2.0, default_grid) <= 1e-12

    def test_vector_part_of_cos_sin(self, cos_sin_function, default_grid):
        """Test f_v^s = pi^2 for pi cos(q) i + pi sin(q) j"""
        fvs = symmetrized(vector_part(cos_sin_function))
        assert grid_residual(fvs, constant(np.pi**2), default_grid) <= 1e-9


@pytest.mark.unit
class TestScalarAndWedge:
    """Test the intrinsic scalar product and the wedge"""

    def test_scalar_product_symmetric(self, polynomial_factory):
        """Test <f, g>_* = <g, f>_* and <f, f>_* = f^s"""
        f = polynomial(polynomial_factory(degree=2))
        g = polynomial(polynomial_factory(degree=3))
        assert star_scalar(f, g).polynomial.allclose(star_scalar(g, f).polynomial, tol=1e-12)
        assert star_scalar(f, f).polynomial.allclose(symmetrized(f).polynomial, tol=1e-12)

    def test_wedge_is_half_commutator(self, polynomial_factory):
        """Test 2 (f ^ g) = f * g - g * f and f ^ g = -(g ^ f)"""
        f = polynomial(polynomial_factory(degree=2))
        g = polynomial(polynomial_factory(degree=2))
        commutator = f.polynomial.star(g.polynomial) - g.polynomial.star(f.polynomial)
        assert star_wedge(f, g).polynomial.scale(2.0).allclose(commutator, tol=1e-12)
        assert star_wedge(f, g).polynomial.allclose(-star_wedge(g, f).polynomial, tol=1e-12)

    def test_composite_scalar_product(self, default_grid):
        """Test the stem formula matches the polynomial one on constants"""
        f = constant(Quaternion(1.0, 2.0, 0.0, 0.0)) + builtin("exp", premul=Quaternion(0.0))
        g = constant(Quaternion(3.0, 1.0, 1.0, 0.0))
        assert grid_residual(star_scalar(f, g), constant(5.0), default_grid) <= 1e-12

    def test_residual_helpers(self, polynomial_factory, cos_sin_function, default_grid):
        """Test vector square, wedge norm and scalar product identities"""
        f = polynomial(polynomial_factory(degree=2, max_norm=1.0))
        g = polynomial(polynomial_factory(degree=2, max_norm=1.0))
        assert vector_square_residual(f, default_grid) <= 1e-9
        assert wedge_symmetrized_residual(f, g, default_grid) <= 1e-9
        assert scalar_product_residual(f, g, default_grid) <= 1e-9
        h = cos_sin_function + builtin("sinh", premul=K)
        assert vector_square_residual(h, default_grid) <= 1e-9
        assert wedge_symmetrized_residual(h, f, default_grid) <= 1e-8
        assert scalar_product_residual(h, f, default_grid) <= 1e-9


@pytest.mark.unit
class TestDecomposition:
    """Test f = f0 + f1 I + f2 J + f3 K"""

    def test_reconstruction_in_random_basis(self, polynomial_factory, unit_factory, default_grid):
        """Test components reassemble f along an arbitrary alternating basis"""
        f = polynomial(polynomial_factory(degree=3))
        decomposition = decompose(f, orthonormal_basis(unit_factory()))
        assert decomposition.reconstruction_residual(f, default_grid) <= 1e-10
        assert all(component.polynomial.is_real for component in decomposition.components)

    def test_composite_decomposition(self, cos_sin_function, default_grid):
        """Test the components of pi cos(q) i + pi sin(q) j in the standard basis"""
        decomposition = decompose(cos_sin_function)
        assert grid_residual(decomposition.f1, builtin("cos") * np.pi, default_grid) <= 1e-12
        assert grid_residual(decomposition.f2, builtin("sin") * np.pi, default_grid) <= 1e-12
        assert grid_residual(decomposition.f3, constant(0.0), default_grid) <= 1e-12
        assert all(is_slice_preserving(component, grid=default_grid) for component in decomposition.components)

    def test_invalid_basis(self):
        """Test a left-handed basis is rejected"""
        with pytest.raises(DomainError) as exc_info:
            decompose(constant(1.0), (I, J, -K))
        assert exc_info.value.error_code == "INVALID_BASIS"


@pytest.mark.unit
class TestScalarVectorProduct:
    """Test f * g through dot and cross products"""

    def test_matches_star_product_on_polynomials(self, polynomial_factory):
        """Test the formula on random polynomial pairs"""
        for _ in range(10):
            f = polynomial(polynomial_factory(max_degree=4))
            g = polynomial(polynomial_factory(max_degree=4))
            assert star_product_sv(f, g).polynomial.allclose(star_product(f, g).polynomial, tol=1e-10)

    def test_matches_star_product_on_composites(self, cos_sin_function, default_grid):
        """Test the formula on elementary functions"""
        g = builtin("exp", premul=Quaternion(0.5, 0.0, 1.0, 1.0)) + builtin("cosh", premul=I)
        expected = star_product(cos_sin_function, g)
        assert grid_residual(star_product_sv(cos_sin_function, g), expected, default_grid) <= 1e-9


@pytest.mark.unit
class TestCommutation:
    """Test the linear dependence criterion"""

    def test_witnesses_for_parallel_polynomials(self):
        """Test f = q i and g = q^2 i commute with alpha = -q, beta = 1"""
        f = polynomial([[0, 0, 0, 0], [0, 1, 0, 0]])
        g = polynomial([[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 0]])
        result = commutes(f, g)
        assert result.dependent and bool(result)
        alpha, beta = result.witnesses
        assert np.allclose(alpha, [0.0, -1.0])
        assert np.allclose(beta, [1.0])
        assert witness_residual(alpha, beta, vector_part(f).polynomial, vector_part(g).polynomial) <= 1e-12

    def test_non_commuting_polynomials(self, sample_polynomials):
        """Test q i and q j do not commute"""
        f = polynomial([[0, 0, 0, 0], [0, 1, 0, 0]])
        result = commutes(f, sample_polynomials["q_j"])
        assert not result
        assert result.witnesses is None
        assert result.wedge_sup == pytest.approx(1.0)

    def test_slice_preserving_commutes_with_everything(self, sample_polynomials):
        """Test f_v = 0 gives the witness pair (1, 0)"""
        result = commutes(polynomial([1.0, 2.0, 3.0]), sample_polynomials["generic"])
        assert result.dependent
        assert np.allclose(result.alpha, [1.0]) and np.allclose(result.beta, [0.0])

    def test_composite_commutation(self, cos_sin_function, default_grid):
        """Test the grid criterion on elementary functions"""
        assert commutes(cos_sin_function, cos_sin_function * 2.0 + builtin("exp"), grid=default_grid)
        assert not commutes(cos_sin_function, builtin("exp", premul=K), grid=default_grid)

    def test_null_symmetrized_vector_part(self):
        """Test f_v = i + tau j has f_v^s = 0 without vanishing and is flagged indeterminate"""
        f = constant(I) + tau(J)
        result = commutes(f, f)
        assert result.dependent
        assert result.indeterminate
        assert result.witnesses is None

    def test_real_gcd(self):
        """Test gcd((q - 1)(q + 2), (q - 1)(q - 3)) = q - 1"""
        a = np.array([-2.0, 1.0, 1.0])
        b = np.array([3.0, -4.0, 1.0])
        assert np.allclose(real_gcd(a, b), [-1.0, 1.0])
        assert np.allclose(real_gcd(np.array([1.0, 1.0]), np.array([2.0])), [1.0])


@pytest.mark.unit
class TestSlicePreservation:
    """Test membership in SR_R and SR_J"""

    def test_slice_preserving(self, sample_polynomials):
        """Test real-coefficient and elementary functions"""
        assert is_slice_preserving(builtin("cos"))
        assert is_slice_preserving(polynomial([1.0, 0.0, -1.0]))
        assert not is_slice_preserving(sample_polynomials["q_j"])

    def test_cj_preserving(self):
        """Test functions with values in R + R J"""
        f = builtin("exp", premul=J) + constant(1.0)
        assert is_CJ_preserving(f, J)
        assert not is_CJ_preserving(f, I)

    def test_detect_slice_unit(self, sample_polynomials):
        """Test the unit is found up to sign and normalized"""
        assert detect_slice_unit(polynomial([[1, 0, 2, 0]])).isclose(J)
        assert detect_slice_unit(polynomial([[0, 0, 0, 0], [0, 0, -1, 0]])).isclose(J)
        assert detect_slice_unit(sample_polynomials["generic"]) is None
        assert detect_slice_unit(polynomial([1.0, 1.0])) is None
