"""Circle and annulus quadrature, and principal values at τ = 0.

Sums go through ``ndarray.sum`` on contiguous arrays, which numpy reduces
pairwise, so a given rule always adds its terms in the same order.
"""

import logging
from typing import Callable, Union

import numpy as np
from django.core.exceptions import ValidationError

from core.exceptions import ConvergenceError
from .models import AnnulusRule, CircleRule, PVConfig, PVResult

logger = logging.getLogger(__name__)

Integrand = Callable[[np.ndarray], np.ndarray]


def _sample(f: Union[Integrand, np.ndarray], nodes: np.ndarray) -> np.ndarray:
    values = f(nodes) if callable(f) else f
    values = np.broadcast_to(np.asarray(values, dtype=complex), nodes.shape)
    bad = ~np.isfinite(values)
    if bad.any():
        where = nodes[bad][0]
        raise ValidationError(
            "Integrand is not finite at node %(node)s.",
            code="non_finite",
            params={"node": f"{where.real:+.6g}{where.imag:+.6g}i"},
        )
    return values


def integrate_circle(f: Union[Integrand, np.ndarray], rule: CircleRule) -> complex:
    """∮ f dτ by the trapezoid rule; ``f`` may also be samples at ``rule.nodes``."""
    values = _sample(f, rule.nodes)
    return complex(np.ascontiguousarray(values * rule.weights).sum())


def integrate_annulus(f: Union[Integrand, np.ndarray], rule: AnnulusRule) -> complex:
    """∫∫ f dA by the polar tensor rule."""
    values = _sample(f, rule.nodes)
    return complex(np.ascontiguousarray(values * rule.weights).sum())


def pv_limit(F: Callable[[float], complex], cfg: PVConfig) -> PVResult:
    """Evaluate F on eps0·shrinkᵏ until successive values differ by less than tol.

    F is called on the radii in decreasing order, so it may accumulate.

    Raises:
        ConvergenceError: if max_steps is exhausted first.
    """
    previous = None
    increment = float("inf")
    for step, eps in enumerate(cfg.radii()):
        value = complex(F(eps))
        if previous is not None:
            increment = abs(value - previous)
            if increment < cfg.tol:
                logger.debug("pv converged at eps=%.3e after %d steps (increment %.2e)", eps, step, increment)
                return PVResult(value, increment, eps, step)
        previous = value
    raise ConvergenceError(
        f"Principal value did not settle within {cfg.max_steps} steps "
        f"(last increment {increment:.3e}).",
        increment=increment,
    )
