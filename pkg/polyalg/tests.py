import cmath

import numpy as np
import pytest
from hypothesis import given, strategies as st

from .polynomials import BiPoly, UniPoly, diff_quotient, evaluate, partial
from .serializers import BiPolySerializer, UniPolySerializer

CUSP_F = BiPoly(((2, 0, 1), (0, 3, -1)))

small = st.floats(min_value=-2, max_value=2, allow_nan=False)
points = st.builds(complex, small, small).filter(lambda z: abs(z) <= 2)
coefficients = st.lists(st.builds(complex, small, small), min_size=1, max_size=8)


class TestEvaluate:
    def test_root_of_z_squared_plus_one(self):
        assert evaluate(UniPoly((1, 0, 1)), 1j) == 0

    def test_cusp_polynomial_on_and_off_the_curve(self):
        assert evaluate(CUSP_F, (1, 1)) == 0
        assert evaluate(CUSP_F, (2, 1)) == 3

    def test_arrays_evaluate_elementwise(self):
        z = np.array([0, 1, 2j])
        assert np.allclose(UniPoly((1, 0, 1)).eval(z), z ** 2 + 1)

    def test_trailing_zeros_are_trimmed(self):
        p = UniPoly((1, 2, 0, 0))
        assert p.coeffs == (1, 2)
        assert p.degree == 1
        assert UniPoly().degree == -1


class TestPartial:
    def test_power_rule(self):
        d1 = partial(CUSP_F, 1)
        assert d1 == BiPoly(((1, 0, 2),))
        assert evaluate(d1, (2, 1)) == 4
        assert evaluate(partial(CUSP_F, 2), (2, 1)) == -3

    def test_constant(self):
        assert partial(BiPoly(((0, 0, 5),)), 1).is_zero()


class TestDiffQuotient:
    def test_sixth_power(self):
        assert diff_quotient(UniPoly.monomial(6), 2, 1) == pytest.approx(63)

    def test_confluent_case_is_the_derivative(self):
        assert diff_quotient(UniPoly.monomial(3), 2, 2) == pytest.approx(12)

    def test_at_zero(self):
        p = UniPoly((3, 1, 4, 1))
        z = 0.7 - 0.2j
        assert diff_quotient(p, z, 0) == pytest.approx((p.eval(z) - p.eval(0)) / z)

    @given(coefficients, points, points)
    def test_symmetric(self, coeffs, z, w):
        p = UniPoly(coeffs)
        scale = sum(abs(c) * k * 2 ** k for k, c in enumerate(p.coeffs)) + 1
        assert abs(diff_quotient(p, z, w) - diff_quotient(p, w, z)) <= 1e-13 * scale

    @given(coefficients, points, points)
    def test_reconstructs_the_difference(self, coeffs, z, w):
        p = UniPoly(coeffs)
        scale = sum(abs(c) * 2 ** k for k, c in enumerate(p.coeffs)) or 1
        assert abs(diff_quotient(p, z, w) * (z - w) + p.eval(w) - p.eval(z)) <= 1e-13 * scale * 4


class TestArithmetic:
    @given(coefficients, coefficients, points)
    def test_product_evaluates_to_product(self, a, b, z):
        p, q = UniPoly(a), UniPoly(b)
        expected = p.eval(z) * q.eval(z)
        assert cmath.isclose((p * q).eval(z), expected, rel_tol=1e-10, abs_tol=1e-10 * 2 ** 16)

    def test_exact_products_and_cancelling_sums(self):
        assert UniPoly((1, 1)) * UniPoly((1, -1)) == UniPoly((1, 0, -1))
        assert UniPoly((1, 1)) + UniPoly((0, -1)) == UniPoly((1,))
        assert (UniPoly((0, 1)) - UniPoly((0, 1))).is_zero()
        assert UniPoly((2, 1j)) + 3 == UniPoly((5, 1j))

    def test_bivariate_product(self):
        f = BiPoly(((1, 0, 1), (0, 1, 1)))
        g = f * f
        assert evaluate(g, (0.5, 2j)) == pytest.approx((0.5 + 2j) ** 2)

    def test_compose_vanishes_along_the_cusp(self):
        assert CUSP_F.compose(UniPoly.monomial(3), UniPoly.monomial(2)).is_zero()

    def test_multiplicity_and_order(self):
        assert CUSP_F.multiplicity == 2
        assert UniPoly((0, 0, 1, 1)).order == 2

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            BiPoly(((-1, 0, 1),))


class TestDifferenceQuotients:
    def test_cusp_first_quotient(self):
        q1, _ = CUSP_F.difference_quotients(2, 1, 1, 1)
        assert q1 == pytest.approx(3)

    def test_telescoping_identity_off_the_curve(self):
        rng = np.random.default_rng(7)
        zeta = rng.normal(size=2) + 1j * rng.normal(size=2)
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        f = BiPoly(((3, 1, 2 - 1j), (0, 4, 1), (2, 2, -0.5), (1, 0, 3)))
        q1, q2 = f.difference_quotients(zeta[0], zeta[1], z[0], z[1])
        lhs = q1 * (zeta[0] - z[0]) + q2 * (zeta[1] - z[1])
        assert lhs == pytest.approx(f.eval(*zeta) - f.eval(*z), rel=1e-12)

    def test_confluent_quotients_are_partials(self):
        q1, q2 = CUSP_F.difference_quotients(1.5, 0.5j, 1.5, 0.5j)
        assert q1 == pytest.approx(partial(CUSP_F, 1).eval(1.5, 0.5j))
        assert q2 == pytest.approx(partial(CUSP_F, 2).eval(1.5, 0.5j))


class TestSerializers:
    def test_unipoly_schema(self):
        serializer = UniPolySerializer(data={"coeffs": [[0, 0], [1, -1]]})
        assert serializer.is_valid(), serializer.errors
        assert serializer.save() == UniPoly((0, 1 - 1j))
        assert UniPolySerializer(UniPoly((2, 1j))).data == {"coeffs": [[2.0, 0.0], [0.0, 1.0]]}

    def test_bipoly_schema(self):
        serializer = BiPolySerializer(data={"terms": [[2, 0, 1, 0], [0, 3, -1, 0]]})
        assert serializer.is_valid(), serializer.errors
        assert serializer.save() == CUSP_F

    @pytest.mark.parametrize(
        "terms",
        [
            [[2, 0, 1, 0], [2, 0, 1, 0]],
            [[-1, 0, 1, 0]],
            [[1.5, 0, 1, 0]],
            [[1, 0, 1]],
        ],
    )
    def test_bipoly_schema_rejects(self, terms):
        assert not BiPolySerializer(data={"terms": terms}).is_valid()

    @pytest.mark.parametrize("coeffs", [[[1, 0, 0]], [[1]], [3]])
    def test_unipoly_schema_rejects_malformed_coefficients(self, coeffs):
        serializer = UniPolySerializer(data={"coeffs": coeffs})
        assert not serializer.is_valid()
        assert "coeffs" in serializer.errors

    def test_unipoly_schema_parses_every_coefficient(self):
        serializer = UniPolySerializer(data={"coeffs": [[0, 0], [0, 0], [0, 0], [1, 0]]})
        assert serializer.is_valid(), serializer.errors
        assert serializer.save() == UniPoly.monomial(3)
