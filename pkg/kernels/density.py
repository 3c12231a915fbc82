"""The Cauchy-type kernel C(t, τ), its Hefer coefficients and the area density.

All routines broadcast over numpy arrays of t and τ.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from django.core.exceptions import ValidationError

from core.defaults import numerics
from curves.models import Curve, CuspCurve
from polyalg.polynomials import ArrayLike, UniPoly
from .models import KernelContext

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * np.pi


def _as_pair(t: ArrayLike, tau: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    return np.broadcast_arrays(np.asarray(t, dtype=complex), np.asarray(tau, dtype=complex))


def _unwrap(value: np.ndarray) -> ArrayLike:
    return value if value.ndim else complex(value)


def hefer(curve: Curve, t: ArrayLike, tau: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Difference quotients (q1, q2) of f between z = π(t) and ζ = π(τ).

    q1·(ζ₁ - z₁) + q2·(ζ₂ - z₂) = f(ζ) - f(z), with partial derivatives in
    the confluent case.
    """
    z1, z2 = curve.point(t)
    zeta1, zeta2 = curve.point(tau)
    return curve.f.difference_quotients(zeta1, zeta2, z1, z2)


def _check_diagonal(t: np.ndarray, tau: np.ndarray) -> None:
    if np.any(t == tau):
        raise ValidationError("C(t, τ) has a pole on the diagonal τ = t.", code="diagonal")


def _cusp_divided(curve: CuspCurve, t: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """2πi·C through exact divided differences, finite at the removable points.

    2πi·C = D_s(τʳ, tʳ) / ((τ - t)·D_s(τ, t)) = D_r(τˢ, tˢ) / ((τ - t)·D_r(τ, t))
    where D_k(a, b) = (aᵏ - bᵏ)/(a - b); the form whose D_k(τ, t) is larger
    is used.
    """
    r, s = curve.r, curve.s
    power_r, power_s = UniPoly.monomial(r), UniPoly.monomial(s)
    d_r = power_r.diff_quotient(tau, t)
    d_s = power_s.diff_quotient(tau, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        via_s = power_s.diff_quotient(tau ** r, t ** r) / d_s
        via_r = power_r.diff_quotient(tau ** s, t ** s) / d_r
        return np.where(np.abs(d_s) >= np.abs(d_r), via_s, via_r) / (tau - t)


def _cusp_C(curve: CuspCurve, t: np.ndarray, tau: np.ndarray, guard_removable: float, guard_diagonal: float) -> np.ndarray:
    r, s = curve.r, curve.s
    a = tau ** r - t ** r
    b = tau ** s - t ** s
    size = np.abs(t) + np.abs(tau)
    scale = size ** max(r, s)
    degenerate = (
        (np.abs(a) < guard_removable * scale)
        | (np.abs(b) < guard_removable * scale)
        | (np.abs(tau - t) < guard_diagonal * size)
    )
    with np.errstate(divide="ignore", invalid="ignore"):
        closed = (tau ** (r * s) - t ** (r * s)) / (a * b)
    if degenerate.any():
        logger.debug("cusp kernel: %d of %d pairs via divided differences", degenerate.sum(), degenerate.size)
        closed = np.where(degenerate, _cusp_divided(curve, t, tau), closed)
    return closed / TWO_PI_I


def _param_C(curve: Curve, t: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """C = q1/(2πi·η₂) or -q2/(2πi·η₁), ηᵢ = πᵢ(τ) - πᵢ(t), larger |ηᵢ| chosen.

    ηᵢ is carried as (τ - t)·D(πᵢ)(τ, t) so the common factor cancels exactly.
    """
    q1, q2 = hefer(curve, t, tau)
    d1 = curve.pi1.diff_quotient(tau, t)
    d2 = curve.pi2.diff_quotient(tau, t)
    use_first = np.abs(d2) >= np.abs(d1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(use_first, q1 / d2, -q2 / d1)
    if logger.isEnabledFor(logging.DEBUG):
        logger.debug("param kernel: q1/η₂ branch on %d of %d pairs", np.sum(use_first), np.size(use_first))
    return ratio / (TWO_PI_I * (tau - t))


def cauchy_C(
    curve: Curve,
    t: ArrayLike,
    tau: ArrayLike,
    guard_removable: Optional[float] = None,
    guard_diagonal: Optional[float] = None,
) -> ArrayLike:
    """The meromorphic kernel C(t, τ); simple pole on τ = t only.

    Raises:
        ValidationError: ``diagonal`` if τ == t anywhere.
    """
    t, tau = _as_pair(t, tau)
    _check_diagonal(t, tau)
    if isinstance(curve, CuspCurve):
        value = _cusp_C(
            curve,
            t,
            tau,
            numerics("GUARD_REMOVABLE", guard_removable),
            numerics("GUARD_DIAGONAL", guard_diagonal),
        )
    else:
        value = _param_C(curve, t, tau)
    return _unwrap(value)


def weight_factor(curve: Curve, t: ArrayLike, tau: ArrayLike, mu: int) -> ArrayLike:
    """w₀(t, τ)^μ with w₀ = ⟨π(t), π(τ)⟩ / |π(τ)|²; holomorphic in t, 1 on τ = t."""
    t, tau = _as_pair(t, tau)
    curve.check_parameter(tau)
    if mu == 0:
        return _unwrap(np.ones_like(tau))
    z1, z2 = curve.point(t)
    zeta1, zeta2 = curve.point(tau)
    norm = np.abs(zeta1) ** 2 + np.abs(zeta2) ** 2
    if np.any(norm == 0):
        raise ValidationError("The weight is undefined where π(τ) = 0.", code="singular_parameter")
    w0 = (z1 * np.conj(zeta1) + z2 * np.conj(zeta2)) / norm
    return _unwrap(w0 ** mu)


def kernel_density(ctx: KernelContext, t: ArrayLike, tau: ArrayLike) -> ArrayLike:
    """κ(t, τ) = -2i·C(t, τ)·w₀(t, τ)^μ·ω(τ), the density against dA(τ).

    Near the diagonal κ ≈ -1/(π(τ - t)).
    """
    t, tau = _as_pair(t, tau)
    omega = np.asarray(ctx.curve.canonical_weight(tau))
    c = np.asarray(cauchy_C(ctx.curve, t, tau, ctx.guard_removable, ctx.guard_diagonal))
    weight = np.asarray(weight_factor(ctx.curve, t, tau, ctx.mu))
    return _unwrap(-2j * c * weight * omega)
