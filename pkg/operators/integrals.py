"""The integral operators on the curve.

P is the boundary representation ∮ φ·C·ω dτ over |τ| = ρ, K the area
operator ∫∫ κ·φ̂ dA, and the moment pairings decide strong holomorphy on
cusps.
"""

import logging
from dataclasses import replace
from typing import Callable, Iterable, Optional, Union

import numpy as np
from django.core.exceptions import ValidationError

from core.defaults import numerics
from core.exceptions import ConvergenceError
from curves.models import Curve, CuspCurve, canonical_weight
from curves.semigroups import semigroup
from differentials.models import MonomialFormSum, RadialBump, eval_form
from kernels.density import cauchy_C, kernel_density, weight_factor
from kernels.models import KernelContext
from quadrature.integrate import integrate_annulus, integrate_circle, pv_limit
from quadrature.models import AnnulusRule, CircleRule, PVConfig
from .models import MomentEntry, MomentReport, SolveReport, SolveValue

logger = logging.getLogger(__name__)

BoundaryData = Union[MonomialFormSum, Callable, np.ndarray]


def _as_targets(targets: Union[complex, Iterable[complex]]) -> np.ndarray:
    targets = np.atleast_1d(np.asarray(targets, dtype=complex)).ravel()
    if np.any(targets == 0):
        raise ValidationError("Targets must avoid the singular parameter τ = 0.", code="target_at_origin")
    return targets


def _function_values(phi: BoundaryData, nodes: np.ndarray) -> np.ndarray:
    if isinstance(phi, MonomialFormSum):
        if phi.degree != 0:
            raise ValidationError("Expected a function, got a (0,1)-form.", code="bad_degree")
        return np.asarray(eval_form(phi, nodes))
    if callable(phi):
        return np.asarray(phi(nodes), dtype=complex)
    samples = np.asarray(phi, dtype=complex)
    if samples.shape != nodes.shape:
        raise ValidationError(
            f"Expected {nodes.size} boundary samples, got {samples.size}.", code="bad_samples"
        )
    return samples


def represent_boundary_many(
    curve: Curve,
    phi: BoundaryData,
    rho: float,
    targets: Iterable[complex],
    n: Optional[int] = None,
) -> SolveReport:
    """P_ρφ(t) = ∮_{|τ|=ρ} φ(τ)·C(t, τ)·ω(τ) dτ at each target.

    ``phi`` is a degree-0 form, a callable, or samples at the circle nodes.
    """
    targets = _as_targets(targets)
    if np.any(np.abs(targets) >= rho):
        raise ValidationError(
            "Targets must lie inside the circle |τ| = %(rho)s.", code="outside_disc", params={"rho": rho}
        )
    rule = CircleRule.create(rho, n)
    weighted = _function_values(phi, rule.nodes) * np.asarray(canonical_weight(curve, rule.nodes))
    values = tuple(
        SolveValue(t, integrate_circle(weighted * cauchy_C(curve, t, rule.nodes), rule))
        for t in targets
    )
    logger.debug("represent: %d target(s), rho=%g, n=%d", len(values), rho, rule.n)
    return SolveReport(values, {"rho": rule.radius, "nodes": rule.n})


def represent_boundary(
    curve: Curve,
    phi: BoundaryData,
    rho: float,
    t: complex,
    n: Optional[int] = None,
) -> complex:
    return represent_boundary_many(curve, phi, rho, [t], n).values[0].u


def _region(phi: MonomialFormSum, rho: Optional[float]):
    inner, outer = phi.support_radii()
    if rho is not None:
        outer = float(rho)
    elif outer is None:
        outer = 1.0
    return inner, outer


def solve_area(
    ctx: KernelContext,
    phi: MonomialFormSum,
    targets: Iterable[complex],
    pv: Optional[PVConfig] = None,
    rho: Optional[float] = None,
    panels: Optional[int] = None,
    order: Optional[int] = None,
    n_theta: Optional[int] = None,
    local_panels: Optional[int] = None,
    local_theta: Optional[int] = None,
) -> SolveReport:
    """Kφ(t) = ∫∫ κ(t, τ)·φ̂(τ) dA(τ) over {eps < |τ| < ρ}.

    ρ defaults to the outer edge of φ's envelope (1 if it has none), eps to
    its inner edge. Around a target inside the region a smooth cutoff
    χ_t(τ) = β(|τ - t|²) splits off a disc centred at t, where the bounded
    integrand κφ̂ + φ̂(t)/(π(τ - t)) is integrated in polar coordinates
    about t; the added term integrates to zero against the radial χ_t.
    When φ reaches the singular parameter the inner radius is sent to 0
    by ``pv_limit``.

    Raises:
        ValidationError: ``non_integrable`` if κφ̂ grows like |τ|^e, e <= -2,
            at τ = 0; ``target_at_origin``; ``bad_degree``.
        ConvergenceError: if the principal value does not settle.
    """
    if phi.degree != 1:
        raise ValidationError("solve_area expects a (0,1)-form.", code="bad_degree")
    targets = _as_targets(targets)
    curve = ctx.curve
    order = numerics("ANNULUS_ORDER", order)
    n_theta = numerics("ANNULUS_THETA", n_theta)
    local_panels = numerics("LOCAL_PANELS", local_panels)
    local_theta = numerics("LOCAL_THETA", local_theta)

    inner, outer = _region(phi, rho)
    if phi.is_zero() or inner >= outer:
        return SolveReport(tuple(SolveValue(t, 0j) for t in targets), {"rho": outer, "mu": ctx.mu})

    reaches_origin = (
        (curve.is_singular or ctx.mu > 0) and inner == 0 and phi.min_total_degree is not None
    )
    eps = inner
    if reaches_origin:
        exponent = phi.min_total_degree - curve.pole_order - curve.weight_order * ctx.mu
        if exponent <= -2:
            raise ValidationError(
                "κφ̂ is not integrable at τ = 0 (local exponent %(exponent)s <= -2).",
                code="non_integrable",
                params={"exponent": exponent},
            )
        pv = pv or PVConfig.create()
        eps = min(pv.eps0, 0.25 * float(np.min(np.abs(targets))), 0.5 * outer)
        pv = replace(pv, eps0=eps)

    region = AnnulusRule.create(eps, outer, panels, order, n_theta)
    density = np.asarray(eval_form(phi, region.nodes)) * np.asarray(canonical_weight(curve, region.nodes))
    resolution = {
        "rho": outer,
        "eps": eps,
        "panels": region.panels,
        "order": region.order,
        "n_theta": region.n_theta,
        "local_panels": local_panels,
        "local_theta": local_theta,
        "mu": ctx.mu,
    }
    logger.debug("solve_area: %d target(s), resolution %s", targets.size, resolution)

    values = []
    for t in targets:
        cutoff = None
        u = 0j
        if inner < abs(t) < outer:
            dist = outer - abs(t)
            if curve.is_singular or ctx.mu > 0:
                dist = min(dist, abs(t))
            radius = 0.5 * dist
            cutoff = RadialBump((0.5 * radius) ** 2, radius ** 2)
            local = AnnulusRule.create(0.0, radius, local_panels, order, local_theta, center=t)
            phi_t = eval_form(phi, t)
            offset = local.nodes - t
            integrand = cutoff.value(np.abs(offset) ** 2) * (
                np.asarray(kernel_density(ctx, t, local.nodes)) * np.asarray(eval_form(phi, local.nodes))
                + phi_t / (np.pi * offset)
            )
            u += integrate_annulus(integrand, local)

        far_field = _FarField(ctx, t, cutoff)
        u += integrate_annulus(far_field(region.nodes, density), region)
        increment = None
        if reaches_origin:
            result = pv_limit(_ShellSum(u, eps, far_field, ctx.curve, phi, order, n_theta), pv)
            u, increment = result.value, result.increment
        values.append(SolveValue(complex(t), complex(u), pv_increment=increment))
    return SolveReport(tuple(values), resolution)


class _FarField:
    """(1 - χ_t)·κ(t, ·)·φ̂ given samples of φ̂·ω; χ_t is absent for targets off the region."""

    def __init__(self, ctx: KernelContext, t: complex, cutoff: Optional[RadialBump]):
        self.ctx = ctx
        self.t = t
        self.cutoff = cutoff

    def __call__(self, nodes: np.ndarray, values: np.ndarray) -> np.ndarray:
        ctx, t = self.ctx, self.t
        kernel = -2j * np.asarray(cauchy_C(ctx.curve, t, nodes, ctx.guard_removable, ctx.guard_diagonal))
        kernel = kernel * np.asarray(weight_factor(ctx.curve, t, nodes, ctx.mu))
        if self.cutoff is not None:
            kernel = kernel * (1.0 - self.cutoff.value(np.abs(nodes - t) ** 2))
        return kernel * values


class _ShellSum:
    """F(eps) for pv_limit: the region integral extended inward shell by shell."""

    def __init__(self, value, eps, far_field, curve, phi, order, n_theta):
        self.value = value
        self.eps = eps
        self.far_field = far_field
        self.curve = curve
        self.phi = phi
        self.order = order
        self.n_theta = n_theta

    def __call__(self, eps: float) -> complex:
        if eps < self.eps:
            shell = AnnulusRule.create(eps, self.eps, 1, self.order, self.n_theta)
            density = np.asarray(eval_form(self.phi, shell.nodes)) * np.asarray(
                canonical_weight(self.curve, shell.nodes)
            )
            self.value += integrate_annulus(self.far_field(shell.nodes, density), shell)
            self.eps = eps
        return self.value


def moment_check(
    curve: CuspCurve,
    phi: Union[MonomialFormSum, Callable],
    eps: float = 0.5,
    n: Optional[int] = None,
    moment_tol: Optional[float] = None,
    agree_tol: Optional[float] = None,
) -> MomentReport:
    """m_j = ∮_{|τ|=ε} φ(τ)·τʲ·ω(τ) dτ for the semigroup elements j <= F.

    The pairings are recomputed on |τ| = 2ε and must agree there. Both
    tolerances are relative to the size of the pairing integral,
    max(1, 2πε·max|φ·τʲ·ω|), since ω grows like ε^{-(r-1)(s-1)} on small
    circles and so does the rounding floor of the sum.

    Raises:
        ValidationError: ``not_cusp`` for curves other than cusps.
        ConvergenceError: if the two radii disagree beyond ``agree_tol``.
    """
    if not isinstance(curve, CuspCurve):
        raise ValidationError("The moment criterion is implemented for cusps.", code="not_cusp")
    moment_tol = numerics("MOMENT_TOL", moment_tol)
    agree_tol = numerics("MOMENT_AGREE_TOL", agree_tol)
    info = semigroup(curve.r, curve.s)
    exponents = [j for j in range(info.frobenius + 1) if info.contains(j)]

    def pairings(radius):
        rule = CircleRule.create(radius, n)
        weighted = _function_values(phi, rule.nodes) * np.asarray(canonical_weight(curve, rule.nodes))
        values, scales = [], []
        for j in exponents:
            integrand = weighted * rule.nodes ** j
            values.append(integrate_circle(integrand, rule))
            scales.append(max(1.0, 2 * np.pi * radius * float(np.max(np.abs(integrand)))))
        return values, scales

    (used, used_scales), (check, check_scales) = pairings(eps), pairings(2 * eps)
    entries = []
    for j, m, m_check, scale, scale_check in zip(exponents, used, check, used_scales, check_scales):
        gap = abs(m - m_check)
        tol = agree_tol * max(scale, scale_check)
        if gap > tol:
            raise ConvergenceError(
                f"Pairing m_{j} differs by {gap:.3e} between radii {eps} and {2 * eps}; "
                "the function is not holomorphic on the annulus.",
                increment=gap,
            )
        if gap > 0.1 * tol:
            logger.warning("pairing m_%d agrees only to %.2e across radii", j, gap)
        entries.append(MomentEntry(j, m, abs(m) < moment_tol * scale))
    return MomentReport(tuple(entries), eps, 2 * eps)
