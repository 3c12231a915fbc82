import numpy as np
import pytest
from django.core.exceptions import ValidationError

from core.exceptions import ConvergenceError
from .integrate import integrate_annulus, integrate_circle, pv_limit
from .models import AnnulusRule, CircleRule, PVConfig


class TestCircleRule:
    def test_nodes_and_weights(self):
        rule = CircleRule.create(2, 4, center=1j)
        assert np.allclose(rule.nodes, [2 + 1j, 3j, -2 + 1j, -1j])
        assert np.allclose(rule.weights, 1j * (rule.nodes - 1j) * np.pi / 2)

    def test_default_node_count(self, settings):
        settings.KOPPELMAN = {**settings.KOPPELMAN, "CIRCLE_NODES": 96}
        assert CircleRule.create(0.5).n == 96

    @pytest.mark.parametrize("radius, n", [(0, 8), (-1, 8), (1, 0)])
    def test_invalid(self, radius, n):
        with pytest.raises(ValidationError) as excinfo:
            CircleRule.create(radius, n)
        assert excinfo.value.code == "bad_rule"


class TestIntegrateCircle:
    def test_reciprocal(self):
        rule = CircleRule.create(1, 64)
        assert abs(integrate_circle(lambda tau: 1 / tau, rule) - 2j * np.pi) < 1e-14

    @pytest.mark.parametrize("m", [0, 1, 5, 62])
    def test_monomials_vanish(self, m):
        rule = CircleRule.create(0.7, 64)
        assert abs(integrate_circle(lambda tau: tau ** m, rule)) < 1e-13

    def test_exponential_over_tau(self):
        rule = CircleRule.create(1, 32)
        assert integrate_circle(lambda tau: np.exp(tau) / tau, rule) == pytest.approx(2j * np.pi, abs=1e-13)

    @pytest.mark.parametrize("n", [8, 16])
    def test_geometric_error_for_an_outside_pole(self, n):
        # the exact integral is 0; aliasing of τ^{kn-1} leaves this much
        rule = CircleRule.create(1, n)
        expected = -2j * np.pi * 2.0 ** -n / (1 - 2.0 ** -n)
        assert integrate_circle(lambda tau: 1 / (tau - 2), rule) == pytest.approx(expected, rel=1e-6)

    def test_samples_instead_of_a_callable(self):
        rule = CircleRule.create(0.3, 16, center=0.1)
        samples = 1 / (rule.nodes - 0.1)
        assert integrate_circle(samples, rule) == pytest.approx(2j * np.pi)

    def test_non_finite_integrand(self):
        rule = CircleRule.create(1, 4)
        with pytest.raises(ValidationError) as excinfo:
            integrate_circle(lambda tau: 1 / (tau - 1), rule)
        assert excinfo.value.code == "non_finite"
        assert excinfo.value.params["node"].startswith("+1")


class TestAnnulusRule:
    def test_weights_sum_to_the_area(self):
        rule = AnnulusRule.create(0.2, 0.9, 4, 8, 64)
        assert rule.weights.sum() == pytest.approx(rule.area, rel=1e-13)
        assert rule.nodes.shape == rule.weights.shape == (4 * 8 * 64,)

    def test_nodes_lie_inside(self):
        rule = AnnulusRule.create(0.2, 0.9, 3, 5, 16, center=0.5 - 0.5j)
        distance = np.abs(rule.nodes - (0.5 - 0.5j))
        assert distance.min() > 0.2
        assert distance.max() < 0.9

    @pytest.mark.parametrize("eps, rho", [(0.5, 0.5), (-0.1, 1), (0.6, 0.3)])
    def test_invalid_radii(self, eps, rho):
        with pytest.raises(ValidationError) as excinfo:
            AnnulusRule.create(eps, rho, 2, 2, 2)
        assert excinfo.value.code == "bad_rule"

    def test_invalid_resolution(self):
        with pytest.raises(ValidationError):
            AnnulusRule.create(0, 1, 0, 4, 4)


class TestIntegrateAnnulus:
    def test_second_moment_of_the_disc(self):
        rule = AnnulusRule.create(0, 1, 2, 8, 16)
        assert integrate_annulus(lambda tau: np.abs(tau) ** 2, rule) == pytest.approx(np.pi / 2, rel=1e-13)

    def test_odd_angular_terms_cancel(self):
        rule = AnnulusRule.create(0.1, 1, 2, 8, 16)
        assert abs(integrate_annulus(lambda tau: tau, rule)) < 1e-14

    @pytest.mark.parametrize("k", [0, 3, 7])
    def test_radial_polynomials_are_exact(self, k):
        eps, rho = 0.25, 0.8
        rule = AnnulusRule.create(eps, rho, 1, 16, 8)
        exact = 2 * np.pi * (rho ** (2 * k + 2) - eps ** (2 * k + 2)) / (2 * k + 2)
        assert integrate_annulus(lambda tau: np.abs(tau) ** (2 * k), rule) == pytest.approx(exact, rel=1e-13)

    @pytest.mark.parametrize("a, b", [(a, d - a) for d in range(8) for a in range(d + 1)])
    def test_polynomials_in_tau_and_its_conjugate_are_exact(self, a, b):
        # order 4 integrates total degree <= 7 exactly
        eps, rho = 0.2, 0.9
        rule = AnnulusRule.create(eps, rho, 1, 4, 16)
        exact = 2 * np.pi * (rho ** (2 * a + 2) - eps ** (2 * a + 2)) / (2 * a + 2) if a == b else 0
        value = integrate_annulus(lambda tau: tau ** a * np.conj(tau) ** b, rule)
        assert abs(value - exact) <= 1e-12

    def test_shifted_centre(self):
        centre = 0.3 + 0.4j
        rule = AnnulusRule.create(0, 0.2, 1, 8, 32, center=centre)
        value = integrate_annulus(lambda tau: np.abs(tau - centre) ** 2 + tau, rule)
        assert value == pytest.approx(np.pi * 0.2 ** 4 / 2 + centre * np.pi * 0.04, rel=1e-12)

    def test_non_finite_integrand(self):
        rule = AnnulusRule.create(0, 1, 2, 4, 8)
        with pytest.raises(ValidationError) as excinfo:
            integrate_annulus(lambda tau: np.where(np.abs(tau) > 0.5, np.nan, 1), rule)
        assert excinfo.value.code == "non_finite"


class TestPVLimit:
    def test_linear_approach_converges(self):
        cfg = PVConfig.create(eps0=1, shrink=0.5, max_steps=60, tol=1e-10)
        result = pv_limit(lambda eps: 1 + eps, cfg)
        assert result.value == pytest.approx(1, abs=1e-9)
        assert result.increment < 1e-10
        assert result.eps == pytest.approx(0.5 ** result.steps)

    def test_radii_are_visited_in_decreasing_order(self):
        seen = []

        def record(eps):
            seen.append(eps)
            return 2.0

        result = pv_limit(record, PVConfig.create(eps0=0.1, shrink=0.25, max_steps=5, tol=1e-12))
        assert seen == [0.1, 0.025]
        assert result.steps == 1
        assert result.increment == 0

    def test_logarithmic_divergence_raises(self):
        cfg = PVConfig.create(eps0=0.1, shrink=0.5, max_steps=20, tol=1e-8)
        with pytest.raises(ConvergenceError) as excinfo:
            pv_limit(lambda eps: np.log(1 / eps), cfg)
        assert excinfo.value.increment == pytest.approx(np.log(2))

    def test_defaults_come_from_settings(self, settings):
        settings.KOPPELMAN = {**settings.KOPPELMAN, "PV_SHRINK": 0.25, "PV_MAX_STEPS": 3}
        cfg = PVConfig.create()
        assert cfg.shrink == 0.25
        assert len(list(cfg.radii())) == 4

    @pytest.mark.parametrize(
        "kwargs",
        [{"shrink": 1.0}, {"shrink": 0.0}, {"eps0": 0.0}, {"max_steps": 0}, {"tol": -1.0}],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError) as excinfo:
            PVConfig.create(**kwargs)
        assert excinfo.value.code == "bad_pv"
