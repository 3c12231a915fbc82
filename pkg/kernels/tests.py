import numpy as np
import pytest
from django.core.exceptions import ValidationError
from hypothesis import given, strategies as st

from core.factories import CuspCurveFactory, CuspParamViewFactory, KernelContextFactory
from operators.verification import dbar_fd
from quadrature.integrate import integrate_circle
from quadrature.models import CircleRule
from .density import cauchy_C, hefer, kernel_density, weight_factor
from .models import KernelContext

TWO_PI_I = 2j * np.pi


def _random_pairs(seed, size=50, low=0.1, high=1.5):
    rng = np.random.default_rng(seed)
    t = rng.uniform(low, high, size) * np.exp(2j * np.pi * rng.uniform(size=size))
    tau = rng.uniform(low, high, size) * np.exp(2j * np.pi * rng.uniform(size=size))
    return t, tau


class TestKernelContext:
    def test_defaults_come_from_settings(self, cusp23, settings):
        settings.KOPPELMAN = {**settings.KOPPELMAN, "GUARD_REMOVABLE": 1e-4}
        ctx = KernelContext.create(cusp23, 1)
        assert ctx.guard_removable == 1e-4
        assert ctx.mu == 1

    @pytest.mark.parametrize("kwargs, code", [({"mu": -1}, "bad_mu"), ({"guard_diagonal": 0}, "bad_guard")])
    def test_invalid(self, cusp23, kwargs, code):
        with pytest.raises(ValidationError) as excinfo:
            KernelContext.create(cusp23, **kwargs)
        assert excinfo.value.code == code


class TestHefer:
    def test_cusp_example(self, cusp23):
        # π(2) = (8, 4), π(1) = (1, 1)
        q1, q2 = hefer(cusp23, 1, 2)
        assert q1 == pytest.approx(9)
        assert q2 == pytest.approx(-21)

    def test_annihilates_the_chord_on_the_curve(self, intro_curve):
        t, tau = _random_pairs(3, high=0.9)
        q1, q2 = hefer(intro_curve, t, tau)
        z1, z2 = intro_curve.point(t)
        zeta1, zeta2 = intro_curve.point(tau)
        chord = q1 * (zeta1 - z1) + q2 * (zeta2 - z2)
        scale = np.abs(q1 * (zeta1 - z1)) + np.abs(q2 * (zeta2 - z2))
        assert np.all(np.abs(chord) <= 1e-12 * scale)

    def test_both_branches_of_the_ratio_agree(self, intro_curve):
        t, tau = _random_pairs(41, high=0.9)
        q1, q2 = hefer(intro_curve, t, tau)
        eta1 = intro_curve.pi1.eval(tau) - intro_curve.pi1.eval(t)
        eta2 = intro_curve.pi2.eval(tau) - intro_curve.pi2.eval(t)
        usable = (np.abs(eta1) > 1e-6) & (np.abs(eta2) > 1e-6)
        assert usable.sum() > 40
        first, second = q1[usable] / eta2[usable], q2[usable] / eta1[usable]
        assert np.all(np.abs(first + second) <= 1e-9 * np.maximum(np.abs(first), 1))


class TestCauchyC:
    def test_closed_form_value(self, cusp23):
        assert TWO_PI_I * cauchy_C(cusp23, 1, 2) == pytest.approx(3)

    def test_removable_point_value(self, cusp23):
        # τ = -t: τ² = t², the quotient is finite
        assert cauchy_C(cusp23, 1, -1) == pytest.approx(3j / (4 * np.pi))

    @pytest.mark.parametrize("rotation", [-1, np.exp(2j * np.pi / 3), np.exp(-2j * np.pi / 3)])
    def test_near_removable_points(self, cusp23, rotation):
        t = 0.5 + 0.1j
        tau = rotation * t + 1e-3 * (1 + 1j) * abs(t)
        r, s = cusp23.r, cusp23.s
        naive = (tau ** (r * s) - t ** (r * s)) / ((tau ** r - t ** r) * (tau ** s - t ** s)) / TWO_PI_I
        assert cauchy_C(cusp23, t, tau) == pytest.approx(naive, rel=1e-8)

    def test_both_routes_agree_away_from_the_guards(self, cusp23):
        t, tau = _random_pairs(29)
        divided = cauchy_C(cusp23, t, tau, guard_removable=10.0)
        closed = cauchy_C(cusp23, t, tau, guard_removable=1e-14, guard_diagonal=1e-14)
        assert np.allclose(divided, closed, rtol=1e-10, atol=0)

    def test_residue_on_the_diagonal(self, cusp23):
        t = 0.5
        rule = CircleRule.create(0.01, 256, center=t)
        # C carries t^{(r-1)(s-1)} at the pole, ω cancels it
        value = integrate_circle(lambda tau: cauchy_C(cusp23, t, tau) * cusp23.canonical_weight(tau), rule)
        assert value == pytest.approx(1, abs=1e-8)

    @given(st.floats(0.1, 1.5), st.floats(0, 2 * np.pi))
    def test_simple_pole_normalisation(self, radius, angle):
        curve = KernelContextFactory().curve
        t = radius * np.exp(1j * angle)
        delta = 1e-6 * radius
        residue = TWO_PI_I * delta * cauchy_C(curve, t, t + delta)
        assert residue * curve.canonical_weight(t) == pytest.approx(1, rel=1e-5)

    def test_diagonal_is_rejected(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            cauchy_C(cusp23, np.array([0.1, 0.2]), np.array([0.3, 0.2]))
        assert excinfo.value.code == "diagonal"

    @pytest.mark.parametrize("r, s", [(2, 3), (3, 4), (3, 5)])
    def test_general_route_matches_cusp_form(self, r, s):
        t, tau = _random_pairs(r + s)
        general = cauchy_C(CuspParamViewFactory(r=r, s=s), t, tau)
        closed = cauchy_C(CuspCurveFactory(r=r, s=s), t, tau)
        assert np.allclose(general, closed, rtol=1e-9, atol=0)

    def test_smooth_model_is_the_cauchy_kernel(self, smooth):
        t, tau = _random_pairs(11)
        assert np.allclose(cauchy_C(smooth, t, tau), 1 / (TWO_PI_I * (tau - t)), rtol=1e-13)

    def test_broadcasts(self, cusp23):
        t = np.array([[0.2], [0.3j]])
        tau = np.array([0.5, -0.6, 0.4 + 0.4j])
        assert np.shape(cauchy_C(cusp23, t, tau)) == (2, 3)


class TestWeightFactor:
    def test_mu_zero_is_one(self, cusp23):
        assert np.all(weight_factor(cusp23, np.array([0, 0.4]), np.array([0.3, 0.1j]), 0) == 1)

    def test_one_on_the_diagonal(self, intro_curve):
        tau = np.array([0.3, 0.2 - 0.4j])
        assert np.allclose(weight_factor(intro_curve, tau, tau, 3), 1)

    def test_vanishes_at_the_origin(self, cusp23):
        assert weight_factor(cusp23, 0, 0.4 + 0.1j, 2) == 0

    def test_singular_parameter_rejected(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            weight_factor(cusp23, 0.5, 0, 1)
        assert excinfo.value.code == "singular_parameter"

    @pytest.mark.parametrize("mu", [1, 2])
    def test_holomorphic_in_t(self, cusp23, mu):
        tau = 0.6 - 0.3j
        for t in (0.3, 0.2 + 0.5j, -0.4j):
            assert abs(dbar_fd(lambda z: weight_factor(cusp23, z, tau, mu), t, 1e-4)) < 1e-7


class TestKernelDensity:
    def test_smooth_model_is_exact(self, smooth):
        ctx = KernelContext.create(smooth)
        t, tau = _random_pairs(5)
        assert np.allclose(kernel_density(ctx, t, tau), -1 / (np.pi * (tau - t)), rtol=1e-13)

    def test_is_the_product_of_its_factors(self, intro_curve):
        ctx = KernelContext.create(intro_curve, 2)
        t, tau = _random_pairs(17, high=0.55)
        expected = (
            -2j
            * cauchy_C(intro_curve, t, tau)
            * weight_factor(intro_curve, t, tau, 2)
            * intro_curve.canonical_weight(tau)
        )
        assert np.allclose(kernel_density(ctx, t, tau), expected, rtol=1e-13)

    def test_diagonal_behaviour(self):
        ctx = KernelContextFactory(mu=1)
        t = 0.4 + 0.2j
        tau = t + 1e-7
        assert kernel_density(ctx, t, tau) == pytest.approx(-1 / (np.pi * (tau - t)), rel=1e-5)
