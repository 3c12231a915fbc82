import numpy as np
import pytest
from django.core.exceptions import ValidationError
from hypothesis import given, strategies as st

from core.factories import FormFactory, RadialBumpFactory
from operators.verification import dbar_fd
from .models import AmbientForm, MonomialFormSum, dbar, eval_form
from .parser import parse_ambient, parse_expr


class TestParseExpr:
    def test_intro_form(self):
        form = parse_expr("3*~tau^9 + 3*~tau^10, dbar")
        assert form.degree == 1
        assert form.terms == ((0, 9, 3), (0, 10, 3))

    def test_holomorphic_monomial(self):
        form = parse_expr("tau^5")
        assert form.degree == 0
        assert form.terms == ((5, 0, 1),)

    def test_bump(self):
        form = parse_expr("bump(0.04,0.36)*~tau, dbar")
        assert form == FormFactory()

    def test_whitespace_and_complex_coefficients(self):
        form = parse_expr(" (1-2i) * tau ^ 2 - 0.5i*~tau  +  i ")
        assert dict(((a, b), c) for a, b, c in form.terms) == {(2, 0): 1 - 2j, (0, 1): -0.5j, (0, 0): 1j}

    def test_hole_and_product_envelopes(self):
        form = parse_expr("hole(0.04,0.0625)*bump(0.09,0.36)*tau + ~tau, dbar")
        pieces = list(form.pieces())
        assert len(pieces) == 2
        assert form.support_radii() == (0.0, None)
        annular = parse_expr("hole(0.04,0.0625)*bump(0.09,0.36)*tau, dbar")
        assert annular.support_radii() == pytest.approx((0.2, 0.6))

    @pytest.mark.parametrize(
        "text, position",
        [("tau^", 4), ("3*", 2), ("tau + $", 6), ("sin(tau)", 0), ("tau, dbar2", 5), ("bump(0.1)", 8)],
    )
    def test_syntax_errors_carry_position(self, text, position):
        with pytest.raises(ValidationError) as excinfo:
            parse_expr(text)
        assert excinfo.value.code == "syntax"
        assert excinfo.value.params["position"] == position
        assert f"position {position}" in excinfo.value.messages[0]

    def test_negative_exponent(self):
        with pytest.raises(ValidationError) as excinfo:
            parse_expr("tau^-2")
        assert excinfo.value.code == "negative_exponent"

    def test_bad_bump_radii(self):
        with pytest.raises(ValidationError) as excinfo:
            parse_expr("bump(0.36,0.04)")
        assert excinfo.value.code == "bad_bump"


class TestParseAmbient:
    def test_terms_and_differential(self):
        ambient = parse_ambient("~z2*z1^2 - 3, dbar2")
        assert ambient == AmbientForm(((2, 0, 0, 1, 1), (0, 0, 0, 0, -3)), dzbar=2)

    def test_tau_is_not_ambient(self):
        with pytest.raises(ValidationError):
            parse_ambient("tau")

    def test_envelopes_are_not_ambient(self):
        with pytest.raises(ValidationError):
            parse_ambient("bump(0.1,0.2)*z1")


class TestEvalForm:
    def test_conjugation(self):
        assert eval_form(parse_expr("~tau"), 1j) == pytest.approx(-1j)

    def test_bump_plateau(self):
        assert eval_form(parse_expr("bump(0.04,0.36)"), 0.1) == pytest.approx(1)
        assert eval_form(parse_expr("bump(0.04,0.36)"), 0.7) == 0
        assert eval_form(parse_expr("hole(0.04,0.36)"), 0.1) == 0

    def test_intro_form_value(self):
        value = eval_form(parse_expr("3*~tau^9 + 3*~tau^10, dbar"), 0.5)
        assert value == pytest.approx(3 * (0.5 ** 9 + 0.5 ** 10))

    def test_arrays(self):
        tau = np.array([0.1, 0.2j, -0.3])
        assert np.allclose(eval_form(parse_expr("tau*~tau"), tau), np.abs(tau) ** 2)


class TestRadialBump:
    def test_knots(self):
        bump = RadialBumpFactory()
        x = np.array([0, 0.04, 0.36, 1.0])
        assert np.allclose(bump.value(x), [1, 1, 0, 0])

    def test_monotone_and_continuous(self):
        bump = RadialBumpFactory()
        x = np.linspace(0, 0.5, 2001)
        values = bump.value(x)
        assert np.all(np.diff(values) <= 1e-15)
        assert np.max(np.abs(np.diff(values))) < 5e-3

    def test_derivative_matches_difference_quotient(self):
        bump = RadialBumpFactory()
        derivative = bump.differentiated()
        x = np.linspace(0.05, 0.35, 31)
        h = 1e-6
        fd = (bump.value(x + h) - bump.value(x - h)) / (2 * h)
        assert np.allclose(derivative.value(x), fd, atol=1e-6)

    def test_derivative_vanishes_off_the_transition(self):
        derivative = RadialBumpFactory().differentiated()
        assert np.all(derivative.value(np.array([0, 0.02, 0.04, 0.36, 0.5])) == 0)


class TestDbar:
    def test_conjugate_variable(self):
        assert dbar(parse_expr("~tau")) == MonomialFormSum(((0, 0, 1),), degree=1)

    def test_holomorphic_is_zero(self):
        assert dbar(parse_expr("tau^4 + 2*tau")).is_zero()

    def test_bump_chain_rule(self):
        form = dbar(parse_expr("bump(0.04,0.36)"))
        tau = 0.3 + 0.2j
        expected = RadialBumpFactory().differentiated().value(abs(tau) ** 2) * tau
        assert eval_form(form, tau) == pytest.approx(expected)

    def test_rejects_forms(self):
        with pytest.raises(ValidationError):
            dbar(parse_expr("~tau, dbar"))

    @given(
        st.lists(
            st.tuples(
                st.integers(0, 3),
                st.integers(0, 3),
                st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
            ),
            min_size=1,
            max_size=4,
        ),
        st.floats(0.2, 0.8),
        st.floats(0, 2 * np.pi),
    )
    def test_matches_finite_difference(self, terms, radius, angle):
        u = MonomialFormSum(tuple(terms))
        tau = radius * np.exp(1j * angle)
        fd = dbar_fd(lambda z: eval_form(u, z), tau, 1e-4)
        assert abs(fd - eval_form(dbar(u), tau)) <= 1e-6

    @given(st.floats(0.2, 0.8), st.floats(0, 2 * np.pi))
    def test_bump_form_matches_finite_difference(self, radius, angle):
        u = parse_expr("bump(0.04,0.36)*(0.5-i)*tau^2*~tau + bump(0.04,0.36)*~tau^3")
        tau = radius * np.exp(1j * angle)
        fd = dbar_fd(lambda z: eval_form(u, z), tau, 1e-5)
        assert abs(fd - eval_form(dbar(u), tau)) <= 1e-6

    def test_product_rule_with_two_factors(self):
        u = parse_expr("hole(0.04,0.09)*bump(0.16,0.36)*~tau")
        tau = 0.27 + 0.05j
        fd = dbar_fd(lambda z: eval_form(u, z), tau, 1e-6)
        assert eval_form(dbar(u), tau) == pytest.approx(fd, abs=1e-6)
