import logging
from typing import Callable, Iterable, Optional

import numpy as np
from django.core.exceptions import ValidationError

from core.defaults import numerics
from differentials.models import MonomialFormSum, eval_form
from kernels.models import KernelContext
from .integrals import solve_area
from .models import GrowthReport, SolveReport, SolveValue

logger = logging.getLogger(__name__)

# t + h, t - h, t + ih, t - ih
STENCIL = np.array([1, -1, 1j, -1j])


def _step(h: Optional[float]) -> float:
    h = numerics("FD_STEP", h)
    if not h > 0:
        raise ValidationError(
            "The finite-difference step must be positive, got %(h)s.", code="bad_step", params={"h": h}
        )
    return h


def dbar_fd(u: Callable[[complex], complex], t: complex, h: Optional[float] = None) -> complex:
    """Centred ∂/∂t̄: ([u(t+h) - u(t-h)] + i[u(t+ih) - u(t-ih)]) / 4h."""
    h = _step(h)
    plus, minus, plus_i, minus_i = (u(t + h * step) for step in STENCIL)
    return ((plus - minus) + 1j * (plus_i - minus_i)) / (4 * h)


def koppelman_residuals(
    ctx: KernelContext,
    phi: MonomialFormSum,
    targets: Iterable[complex],
    h: Optional[float] = None,
    **solve_options,
) -> SolveReport:
    """Kφ(t) and |∂̄_FD(Kφ)(t) - φ̂(t)| at each target.

    All stencil points go through a single solve so the region samples are
    shared.
    """
    h = _step(h)
    targets = np.atleast_1d(np.asarray(targets, dtype=complex)).ravel()
    points = np.concatenate([targets, (targets[:, None] + h * STENCIL[None, :]).ravel()])
    solved = solve_area(ctx, phi, points, **solve_options)
    u = np.array([value.u for value in solved.values])
    centre, stencil = u[: targets.size], u[targets.size:].reshape(targets.size, 4)
    dbar = ((stencil[:, 0] - stencil[:, 1]) + 1j * (stencil[:, 2] - stencil[:, 3])) / (4 * h)
    residuals = np.abs(dbar - np.asarray(eval_form(phi, targets)))
    values = tuple(
        SolveValue(complex(t), complex(c), float(res), solved.values[k].pv_increment)
        for k, (t, c, res) in enumerate(zip(targets, centre, residuals))
    )
    logger.debug("koppelman residuals: max %.3e over %d target(s)", residuals.max(), targets.size)
    return SolveReport(values, {**solved.resolution, "h": h})


def verify_koppelman(
    ctx: KernelContext,
    phi: MonomialFormSum,
    targets: Iterable[complex],
    h: Optional[float] = None,
    **solve_options,
) -> float:
    """max_t |∂̄_FD(Kφ)(t) - φ̂(t)|; zero for φ = 0."""
    if phi.is_zero():
        return 0.0
    return koppelman_residuals(ctx, phi, targets, h, **solve_options).max_residual


def growth_profile(
    u: Callable[[np.ndarray], np.ndarray],
    theta: float,
    radii: Iterable[float],
) -> GrowthReport:
    """Least-squares slope of log|u(r·e^{iθ})| against log r.

    ``u`` is called once with the whole array of sample points.

    Raises:
        ValidationError: ``bad_radii`` for non-positive radii, ``vanishing``
            if u is zero at every sample.
    """
    radii = np.asarray(list(radii), dtype=float)
    if radii.size < 2 or np.any(radii <= 0):
        raise ValidationError("Growth profile needs at least two positive radii.", code="bad_radii")
    samples = np.abs(np.asarray(u(radii * np.exp(1j * theta)), dtype=complex))
    if not np.all(np.isfinite(samples)):
        raise ValidationError("u is not finite on the sample ray.", code="non_finite")
    nonzero = samples > 0
    if nonzero.sum() < 2:
        raise ValidationError("u vanishes on the sample ray; the slope is undefined.", code="vanishing")
    if not nonzero.all():
        logger.warning("dropping %d sample(s) where u vanishes", (~nonzero).sum())
    log_r, log_u = np.log(radii[nonzero]), np.log(samples[nonzero])
    design = np.vstack([log_r, np.ones_like(log_r)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, log_u, rcond=None)
    fitted = slope * log_r + intercept
    residual = float(np.sqrt(np.mean((log_u - fitted) ** 2)))
    return GrowthReport(float(slope), residual, tuple(log_r.tolist()), tuple(log_u.tolist()))
