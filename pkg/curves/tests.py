import numpy as np
import pytest
from django.core.exceptions import ValidationError
from hypothesis import given, strategies as st
from rest_framework import serializers

from core.factories import CuspCurveFactory, CuspParamViewFactory
from differentials.models import MonomialFormSum
from differentials.parser import parse_ambient
from polyalg.polynomials import BiPoly, UniPoly
from .models import CuspCurve, ParamCurve, canonical_weight, make_curve, smooth_model
from .pullback import pullback
from .semigroups import contains, semigroup
from .serializers import CurveSerializer, SemigroupInfoSerializer

CUSPS = [(2, 3), (2, 5), (3, 4), (3, 5)]


class TestMakeCurve:
    def test_cusp(self):
        curve = make_curve((2, 3))
        assert isinstance(curve, CuspCurve)
        view = curve.param_view()
        assert view.pi1 == UniPoly.monomial(3)
        assert view.pi2 == UniPoly.monomial(2)
        assert view.f == BiPoly(((2, 0, 1), (0, 3, -1)))

    @pytest.mark.parametrize(
        "spec, code",
        [((2, 4), "not_coprime"), ((3, 2), "bad_exponents"), ((1, 3), "bad_exponents")],
    )
    def test_invalid_cusps(self, spec, code):
        with pytest.raises(ValidationError) as excinfo:
            make_curve(spec)
        assert excinfo.value.code == code

    def test_smooth_model(self):
        line = UniPoly((0, 1))
        curve = make_curve((line, line, BiPoly(((1, 0, 1), (0, 1, -1)))))
        assert curve.pole_order == 0
        assert not curve.is_singular

    def test_parametrization_off_the_curve(self):
        with pytest.raises(ValidationError) as excinfo:
            make_curve((UniPoly.monomial(3), UniPoly.monomial(2), BiPoly(((3, 0, 1), (0, 2, -1)))))
        assert excinfo.value.code == "not_on_curve"

    def test_parametrization_must_start_at_origin(self):
        with pytest.raises(ValidationError) as excinfo:
            make_curve((UniPoly((1, 1)), UniPoly((0, 1)), BiPoly(((1, 0, 1), (0, 1, -1), (0, 0, -1)))))
        assert excinfo.value.code == "origin"

    def test_multibranch_germ_rejected(self):
        # τ ↦ (τ², τ²) covers the line z₁ = z₂ twice; f has multiplicity 1
        square = UniPoly.monomial(2)
        with pytest.raises(ValidationError) as excinfo:
            make_curve((square, square, BiPoly(((1, 0, 1), (0, 1, -1)))))
        assert excinfo.value.code == "multibranch"

    def test_intro_curve_fixture(self, intro_curve):
        assert isinstance(intro_curve, ParamCurve)
        assert intro_curve.pole_order == 12
        assert intro_curve.weight_order == 3

    def test_curve_json(self):
        curve = make_curve({"type": "cusp", "r": 3, "s": 5})
        assert curve == CuspCurve(3, 5)
        assert CurveSerializer(curve).data == {"type": "cusp", "r": 3, "s": 5}

    def test_curve_json_requires_type_keys(self):
        serializer = CurveSerializer(data={"type": "param", "pi1": {"coeffs": [[0, 0], [1, 0]]}})
        assert not serializer.is_valid()
        with pytest.raises(serializers.ValidationError):
            make_curve({"type": "cusp", "r": 2, "s": 4})

    def test_param_curve_json(self):
        curve = make_curve(
            {
                "type": "param",
                "pi1": {"coeffs": [[0, 0], [1, 0]]},
                "pi2": {"coeffs": [[0, 0], [2, 0]]},
                "f": {"terms": [[1, 0, 2, 0], [0, 1, -1, 0]]},
            }
        )
        assert isinstance(curve, ParamCurve)
        assert curve.pi2 == UniPoly((0, 2))
        assert not curve.is_singular

    def test_param_curve_json_off_the_curve(self):
        payload = {
            "type": "param",
            "pi1": {"coeffs": [[0, 0], [1, 0]]},
            "pi2": {"coeffs": [[0, 0], [1, 0]]},
            "f": {"terms": [[1, 0, 2, 0], [0, 1, -1, 0]]},
        }
        with pytest.raises(serializers.ValidationError):
            make_curve(payload)

    def test_param_curve_json_round_trip(self):
        payload = CurveSerializer(smooth_model()).data
        assert make_curve(payload) == smooth_model()


class TestSemigroup:
    def test_two_three(self):
        info = semigroup(2, 3)
        assert info.frobenius == 1
        assert info.gaps == (1,)
        assert SemigroupInfoSerializer(info).data == {"frobenius": 1, "gaps": [1]}

    def test_three_five(self):
        info = semigroup(3, 5)
        assert info.frobenius == 7
        assert info.gaps == (1, 2, 4, 7)

    def test_membership(self):
        assert not contains(2, 3, 1)
        assert contains(2, 3, 2)
        assert not contains(2, 3, -1)
        assert contains(2, 3, 100)

    @pytest.mark.parametrize("r, s", CUSPS + [(4, 7), (5, 9)])
    def test_symmetric(self, r, s):
        info = semigroup(r, s)
        assert info.frobenius == r * s - r - s
        for k in range(info.frobenius + 1):
            assert info.contains(k) != info.contains(info.frobenius - k)

    def test_invalid_pair(self):
        with pytest.raises(ValidationError):
            semigroup(2, 4)


class TestCanonicalWeight:
    def test_cusp_closed_form(self, cusp23):
        assert canonical_weight(cusp23, 0.5) == pytest.approx(4)
        assert canonical_weight(cusp23, 1) == pytest.approx(1)

    def test_singular_parameter_rejected(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            canonical_weight(cusp23, 0)
        assert excinfo.value.code == "singular_parameter"

    def test_smooth_model_is_one(self, smooth):
        tau = np.array([0, 0.3 + 0.1j, -2j])
        assert np.allclose(canonical_weight(smooth, tau), 1)

    @pytest.mark.acceptance
    @pytest.mark.parametrize("r, s", CUSPS)
    def test_general_formula_matches_closed_form(self, r, s):
        rng = np.random.default_rng(r * 10 + s)
        tau = rng.uniform(0.05, 2, 100) * np.exp(2j * np.pi * rng.uniform(size=100))
        general = CuspParamViewFactory(r=r, s=s).canonical_weight(tau)
        closed = CuspCurve(r, s).canonical_weight(tau)
        assert np.max(np.abs(general / closed - 1)) <= 1e-12

    @pytest.mark.parametrize("r, s", CUSPS)
    def test_log_modulus_is_affine(self, r, s):
        radii = np.geomspace(0.05, 2, 9)
        weight = CuspCurveFactory(r=r, s=s).canonical_weight(radii * np.exp(0.3j))
        slope = np.polyfit(np.log(radii), np.log(np.abs(weight)), 1)[0]
        assert slope == pytest.approx(-(r - 1) * (s - 1))

    @pytest.mark.parametrize("r, s", CUSPS)
    def test_param_view_pole_order(self, r, s):
        assert CuspParamViewFactory(r=r, s=s).pole_order == (r - 1) * (s - 1)


class TestPullback:
    def test_chain_rule_on_the_cusp(self, cusp23):
        form = pullback("~z2, dbar1", cusp23)
        assert form == MonomialFormSum(((0, 4, 3),), degree=1)

    def test_intro_example(self, intro_curve):
        form = pullback(parse_ambient("~z2, dbar1"), intro_curve)
        assert form.degree == 1
        assert form.terms == ((0, 9, 3), (0, 10, 3))

    @given(st.sampled_from(CUSPS))
    def test_coordinate_function(self, pair):
        r, s = pair
        assert pullback("z1", CuspCurve(r, s)).terms == ((s, 0, 1),)

    def test_mixed_expression(self, cusp23):
        form = pullback("2*z1*~z2 - i*z2^2", cusp23)
        assert dict(((a, b), c) for a, b, c in form.terms) == {(3, 2): 2, (4, 0): -1j}
