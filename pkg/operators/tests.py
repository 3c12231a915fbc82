import logging

import numpy as np
import pytest
from django.core.exceptions import ValidationError

from core.exceptions import ConvergenceError
from core.factories import FormFactory, KernelContextFactory
from curves.models import CuspCurve
from curves.pullback import pullback
from curves.semigroups import semigroup
from differentials.models import RadialBump
from differentials.parser import parse_expr
from kernels.models import KernelContext
from quadrature.models import CircleRule, PVConfig
from .integrals import moment_check, represent_boundary, represent_boundary_many, solve_area
from .models import SolveReport, SolveValue
from .serializers import MomentReportSerializer, SolveValueSerializer
from .verification import dbar_fd, growth_profile, koppelman_residuals, verify_koppelman

REPRODUCTION_TARGETS = [0.3, 0.2 + 0.2j, -0.4j]
CUSPS = [(2, 3), (2, 5), (3, 4), (3, 5)]
COARSE = {"panels": 8, "order": 8, "n_theta": 128}

ANNULUS = (RadialBump(0.04, 0.0625, inverted=True), RadialBump(0.09, 0.36))


def _annulus_targets(count, low=0.27, high=0.48):
    angles = 2.399963 * np.arange(count)
    return np.linspace(low, high, count) * np.exp(1j * angles)


class TestRepresentBoundary:
    @pytest.mark.acceptance
    @pytest.mark.parametrize("k", [0, 2, 3, 4, 5, 6, 7])
    def test_reproduces_semigroup_monomials(self, cusp23, k):
        phi = parse_expr(f"tau^{k}")
        for t in REPRODUCTION_TARGETS:
            value = represent_boundary(cusp23, phi, 1.0, t, 2048)
            assert abs(value - t ** k) <= 1e-10 * max(1, abs(t ** k))

    @pytest.mark.acceptance
    def test_annihilates_the_gap(self, cusp23):
        report = represent_boundary_many(cusp23, parse_expr("tau"), 1.0, REPRODUCTION_TARGETS, 2048)
        assert max(abs(value.u) for value in report.values) <= 1e-10

    @pytest.mark.acceptance
    @pytest.mark.parametrize("r, s", CUSPS)
    def test_reproduces_every_member_up_to_frobenius_plus_rs(self, r, s):
        curve = CuspCurve(r, s)
        info = semigroup(r, s)
        targets = [0.5, 0.3 - 0.2j, 0.1j, -0.45 + 0.1j]
        for k in range(info.frobenius + r * s + 1):
            if not info.contains(k):
                continue
            report = represent_boundary_many(curve, parse_expr(f"tau^{k}"), 1.0, targets, 2048)
            for value in report.values:
                assert abs(value.u - value.t ** k) <= 1e-10 * max(1, abs(value.t ** k))

    def test_smooth_model_is_cauchy(self, smooth):
        t = 0.25 + 0.1j
        assert represent_boundary(smooth, lambda tau: np.exp(tau), 1.0, t, 256) == pytest.approx(np.exp(t))

    def test_samples_and_callables_agree(self, cusp23):
        rule = CircleRule.create(0.8, 512)
        samples = rule.nodes ** 3 + 2 * rule.nodes ** 2
        from_samples = represent_boundary(cusp23, samples, 0.8, 0.3j, 512)
        from_callable = represent_boundary(cusp23, lambda tau: tau ** 3 + 2 * tau ** 2, 0.8, 0.3j, 512)
        assert from_samples == pytest.approx(from_callable, rel=1e-14)

    def test_linear(self, cusp23):
        rng = np.random.default_rng(1)
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        f, g = np.sin, lambda tau: tau ** 4 - tau
        t = 0.2 - 0.3j
        combined = represent_boundary(cusp23, lambda tau: a * f(tau) + b * g(tau), 1.0, t, 512)
        separate = a * represent_boundary(cusp23, f, 1.0, t, 512) + b * represent_boundary(cusp23, g, 1.0, t, 512)
        assert combined == pytest.approx(separate, rel=1e-12)

    def test_resolution_echo(self, cusp23):
        report = represent_boundary_many(cusp23, parse_expr("tau^2"), 0.9, [0.1, 0.2], 128)
        assert report.resolution == {"rho": 0.9, "nodes": 128}
        assert report.targets == [0.1, 0.2]

    @pytest.mark.parametrize(
        "phi, targets, code",
        [
            ("tau^2", [0.1, 0.95], "outside_disc"),
            ("tau^2", [0], "target_at_origin"),
            ("~tau, dbar", [0.1], "bad_degree"),
        ],
    )
    def test_errors(self, cusp23, phi, targets, code):
        with pytest.raises(ValidationError) as excinfo:
            represent_boundary_many(cusp23, parse_expr(phi), 0.9, targets, 64)
        assert excinfo.value.code == code

    def test_wrong_number_of_samples(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            represent_boundary(cusp23, np.ones(10), 1.0, 0.5, 64)
        assert excinfo.value.code == "bad_samples"


class TestSolveArea:
    @pytest.mark.acceptance
    def test_cauchy_transform_of_the_disc(self, smooth):
        targets = [0.1, 0.3 + 0.2j, -0.45j, 0.5, 0.05 - 0.05j]
        report = solve_area(KernelContext.create(smooth), parse_expr("1, dbar"), targets)
        for value in report.values:
            assert abs(value.u - np.conj(value.t)) <= 1e-8
        assert report.pv_increments == [None] * len(targets)

    def test_principal_value_reported_on_the_cusp(self):
        report = solve_area(KernelContextFactory(), FormFactory(), [0.3, -0.2j], **COARSE)
        assert all(increment is not None and increment < 1e-8 for increment in report.pv_increments)
        assert report.resolution["eps"] == pytest.approx(0.05)

    def test_linear(self):
        ctx = KernelContextFactory()
        a, b = 0.5 - 2j, 1.5j
        first = FormFactory(terms=((0, 1, 1),))
        second = FormFactory(terms=((2, 3, 1),))
        both = FormFactory(terms=((0, 1, a), (2, 3, b)))
        targets = [0.3, -0.25 + 0.1j]

        def u(phi):
            return np.array([v.u for v in solve_area(ctx, phi, targets, **COARSE).values])

        # each solve stops its principal value on its own step, so allow its tolerance
        assert np.allclose(u(both), a * u(first) + b * u(second), rtol=1e-10, atol=1e-11)

    @pytest.mark.slow
    @pytest.mark.parametrize("curve_fixture, envelope", [("smooth", None), ("cusp23", ANNULUS)])
    def test_doubling_the_resolution_is_self_consistent(self, request, curve_fixture, envelope):
        ctx = KernelContext.create(request.getfixturevalue(curve_fixture))
        phi = FormFactory() if envelope is None else FormFactory(envelope=envelope)
        targets = [0.35, -0.3 + 0.25j]

        def u(panels, n_theta):
            report = solve_area(ctx, phi, targets, panels=panels, order=16, n_theta=n_theta)
            return np.array([value.u for value in report.values])

        assert np.allclose(u(16, 512), u(32, 1024), rtol=0, atol=1e-6)

    def test_zero_form(self, cusp23):
        report = solve_area(KernelContext.create(cusp23), parse_expr("0, dbar"), [0.2])
        assert report.values == (SolveValue(0.2, 0j),)

    def test_empty_region(self, cusp23):
        phi = FormFactory(envelope=ANNULUS)
        report = solve_area(KernelContext.create(cusp23), phi, [0.3], rho=0.1)
        assert report.values[0].u == 0

    def test_non_integrable(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            solve_area(KernelContext.create(cusp23), parse_expr("bump(0.04,0.36), dbar"), [0.3])
        assert excinfo.value.code == "non_integrable"
        assert excinfo.value.params["exponent"] == -2

    def test_weight_counts_against_integrability(self, cusp23):
        # τ̄³ is integrable against ω = τ^{-2}, not once |w₀|² ~ |τ|^{-4} joins in
        phi = parse_expr("bump(0.04,0.36)*~tau^3, dbar")
        solve_area(KernelContext.create(cusp23, 0), phi, [0.3], **COARSE)
        with pytest.raises(ValidationError):
            solve_area(KernelContext.create(cusp23, 2), phi, [0.3], **COARSE)

    def test_rejects_functions(self, cusp23):
        with pytest.raises(ValidationError) as excinfo:
            solve_area(KernelContext.create(cusp23), parse_expr("tau"), [0.3])
        assert excinfo.value.code == "bad_degree"

    def test_principal_value_that_never_settles(self, cusp23):
        pv = PVConfig.create(tol=1e-30, max_steps=3)
        with pytest.raises(ConvergenceError):
            solve_area(KernelContext.create(cusp23), FormFactory(), [0.3], pv=pv, **COARSE)


class TestKoppelman:
    @pytest.mark.acceptance
    @pytest.mark.slow
    @pytest.mark.parametrize("curve_fixture", ["cusp23", "smooth"])
    def test_residual_on_bump_form(self, request, curve_fixture):
        curve = request.getfixturevalue(curve_fixture)
        report = koppelman_residuals(KernelContext.create(curve), FormFactory(), _annulus_targets(20), 1e-4)
        assert len(report.values) == 20
        assert report.max_residual <= 1e-4

    @pytest.mark.acceptance
    @pytest.mark.slow
    def test_weighted_residual(self, cusp23):
        phi = FormFactory(envelope=ANNULUS)
        residual = verify_koppelman(KernelContext.create(cusp23, 2), phi, _annulus_targets(6), 1e-4)
        assert residual <= 1e-4

    @pytest.mark.acceptance
    @pytest.mark.slow
    def test_intro_example(self, intro_curve):
        pulled = pullback("~z2, dbar1", intro_curve)
        assert pulled.terms == ((0, 9, 3), (0, 10, 3))
        localized = FormFactory(terms=pulled.terms, envelope=ANNULUS)
        residual = verify_koppelman(KernelContext.create(intro_curve), localized, _annulus_targets(6), 1e-4)
        assert residual <= 1e-4

    def test_zero_form_has_zero_residual(self, cusp23):
        assert verify_koppelman(KernelContext.create(cusp23), parse_expr("0, dbar"), [0.3]) == 0

    def test_resolution_records_the_step(self):
        report = koppelman_residuals(KernelContextFactory(), FormFactory(envelope=ANNULUS), [0.3], 1e-3, **COARSE)
        assert report.resolution["h"] == 1e-3
        assert report.values[0].residual is not None


class TestWeightedGrowth:
    @pytest.mark.acceptance
    @pytest.mark.slow
    def test_slopes_increase_with_the_weight(self, cusp23):
        terms = tuple((m, 0, 1) for m in (1, 3, 5, 7))
        phi = FormFactory(terms=terms, envelope=ANNULUS)
        radii = [0.1 * 2.0 ** -k for k in range(6)]
        slopes = []
        for mu in range(4):
            ctx = KernelContext.create(cusp23, mu)
            report = growth_profile(
                lambda points: np.array([v.u for v in solve_area(ctx, phi, points).values]),
                0.3,
                radii,
            )
            slopes.append(report.slope)
        for mu in range(3):
            assert slopes[mu + 1] >= slopes[mu] + 1.5
        assert slopes == pytest.approx([0, 2, 4, 6], abs=0.2)


class TestMomentCheck:
    @pytest.mark.acceptance
    @pytest.mark.parametrize("r, s", CUSPS)
    def test_verdict_is_semigroup_membership(self, r, s):
        curve = CuspCurve(r, s)
        info = semigroup(r, s)
        for k in range(info.frobenius + r * s + 1):
            report = moment_check(curve, parse_expr(f"tau^{k}"), 0.5)
            assert report.verdict == info.contains(k)
            for entry in report.entries:
                if entry.zero:
                    assert abs(entry.value) <= 1e-9
                else:
                    assert abs(entry.value) >= 1

    @pytest.mark.parametrize("r, s", CUSPS)
    @pytest.mark.parametrize("eps", [0.1, 0.01])
    def test_small_circles(self, r, s, eps):
        curve = CuspCurve(r, s)
        assert moment_check(curve, parse_expr("1"), eps).verdict is True
        report = moment_check(curve, parse_expr("tau"), eps)
        assert report.verdict is False
        # only j = F - 1 pairs τ with the simple pole of ω
        (flagged,) = [entry for entry in report.entries if not entry.zero]
        assert flagged.j == semigroup(r, s).frobenius - 1
        assert flagged.value == pytest.approx(2j * np.pi, rel=1e-9)

    def test_pairings_and_radii(self, cusp23):
        report = moment_check(cusp23, lambda tau: tau + 2, 0.25, 512)
        assert [entry.j for entry in report.entries] == [0]
        assert report.entries[0].value == pytest.approx(2j * np.pi)
        assert (report.eps_used, report.eps_check) == (0.25, 0.5)
        assert MomentReportSerializer(report).data["verdict"] is False

    def test_non_holomorphic_input_disagrees_across_radii(self, cusp23):
        # τ²τ̄ restricted to |τ| = ε is ε²τ, so m_0 scales with ε²
        with pytest.raises(ConvergenceError) as excinfo:
            moment_check(cusp23, lambda tau: tau ** 2 * np.conj(tau), 0.5)
        assert excinfo.value.increment == pytest.approx(2 * np.pi * 0.75)

    def test_requires_a_cusp(self, intro_curve):
        with pytest.raises(ValidationError) as excinfo:
            moment_check(intro_curve, parse_expr("tau"))
        assert excinfo.value.code == "not_cusp"

    def test_marginal_agreement_is_logged(self, cusp23, caplog):
        with caplog.at_level(logging.WARNING, logger="operators.integrals"):
            moment_check(cusp23, lambda tau: tau ** 2 * np.conj(tau) * 1e-11, 0.5, agree_tol=1e-10)
        assert "agrees only" in caplog.text


class TestVerificationHelpers:
    def test_dbar_of_modulus_squared(self):
        assert dbar_fd(lambda t: t * np.conj(t), 0.3 + 0.4j, 1e-4) == pytest.approx(0.3 + 0.4j)

    @pytest.mark.parametrize("h", [0.0, -1e-4])
    def test_step_must_be_positive(self, h):
        with pytest.raises(ValidationError) as excinfo:
            dbar_fd(np.exp, 0.1, h)
        assert excinfo.value.code == "bad_step"

    def test_holomorphic_functions_are_annihilated(self):
        assert abs(dbar_fd(np.exp, 0.1 - 0.2j, 1e-4)) < 1e-8

    @pytest.mark.parametrize("power", [3, -2])
    def test_growth_of_powers(self, power):
        report = growth_profile(lambda t: np.abs(t) ** power, 0.7, [0.1, 0.05, 0.025, 0.0125])
        assert report.slope == pytest.approx(power)
        assert report.residual < 1e-12
        assert len(report.log_r) == 4

    @pytest.mark.parametrize(
        "u, radii, code",
        [
            (lambda t: 0 * t, [0.1, 0.2], "vanishing"),
            (lambda t: t, [0.1], "bad_radii"),
            (lambda t: t, [0.1, -0.2], "bad_radii"),
            (lambda t: 1 / (t - 0.1), [0.1, 0.2], "non_finite"),
        ],
    )
    def test_growth_errors(self, u, radii, code):
        with pytest.raises(ValidationError) as excinfo:
            growth_profile(u, 0.0, radii)
        assert excinfo.value.code == code


class TestSerializers:
    def test_solve_value(self):
        data = SolveValueSerializer(SolveValue(0.3 - 0.1j, 1 + 2j, 1e-6)).data
        assert data["t_re"] == 0.3 and data["t_im"] == -0.1
        assert data["u_re"] == 1 and data["u_im"] == 2
        assert data["residual"] == 1e-6
        assert data["pv_increment"] is None

    def test_report_properties(self):
        report = SolveReport((SolveValue(0.1, 0j, 1e-5), SolveValue(0.2, 0j, 3e-5, 1e-13)))
        assert report.max_residual == 3e-5
        assert report.pv_increments == [None, 1e-13]
        assert SolveReport(()).max_residual is None
