from dataclasses import dataclass
from functools import cached_property
from typing import Optional

import numpy as np
from django.core.exceptions import ValidationError

from core.defaults import numerics


@dataclass(frozen=True)
class CircleRule:
    """Trapezoid rule on |τ - center| = radius.

    Nodes τ_k = center + radius·e^{2πik/n}, weights i(τ_k - center)·2π/n,
    so that Σ f(τ_k)·w_k approximates the contour integral ∮ f dτ.
    """

    radius: float
    n: int
    center: complex = 0j

    def clean(self) -> None:
        if not self.radius > 0:
            raise ValidationError(f"Circle radius must be positive, got {self.radius}.", code="bad_rule")
        if self.n < 1:
            raise ValidationError(f"Circle rule needs at least one node, got {self.n}.", code="bad_rule")

    @classmethod
    def create(cls, radius: float, n: Optional[int] = None, center: complex = 0j) -> "CircleRule":
        rule = cls(float(radius), int(numerics("CIRCLE_NODES", n)), complex(center))
        rule.clean()
        return rule

    @cached_property
    def offsets(self) -> np.ndarray:
        theta = 2 * np.pi * np.arange(self.n) / self.n
        return self.radius * np.exp(1j * theta)

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.center + self.offsets

    @cached_property
    def weights(self) -> np.ndarray:
        return 1j * self.offsets * (2 * np.pi / self.n)


@dataclass(frozen=True)
class AnnulusRule:
    """Polar tensor rule on {eps < |τ - center| < rho}.

    The radial interval is split into ``panels`` equal panels, each carrying
    Gauss–Legendre nodes of the given ``order``; the angle uses ``n_theta``
    equispaced nodes. Weights are for the area measure dA.
    """

    eps: float
    rho: float
    panels: int
    order: int
    n_theta: int
    center: complex = 0j

    def clean(self) -> None:
        if not (0 <= self.eps < self.rho):
            raise ValidationError(
                f"Annulus radii must satisfy 0 <= eps < rho, got ({self.eps}, {self.rho}).",
                code="bad_rule",
            )
        if min(self.panels, self.order, self.n_theta) < 1:
            raise ValidationError("Annulus rule resolutions must be positive.", code="bad_rule")

    @classmethod
    def create(
        cls,
        eps: float,
        rho: float,
        panels: Optional[int] = None,
        order: Optional[int] = None,
        n_theta: Optional[int] = None,
        center: complex = 0j,
    ) -> "AnnulusRule":
        rule = cls(
            float(eps),
            float(rho),
            int(numerics("ANNULUS_PANELS", panels)),
            int(numerics("ANNULUS_ORDER", order)),
            int(numerics("ANNULUS_THETA", n_theta)),
            complex(center),
        )
        rule.clean()
        return rule

    @cached_property
    def _radial(self):
        x, w = np.polynomial.legendre.leggauss(self.order)
        edges = np.linspace(self.eps, self.rho, self.panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        radii = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return radii, weights

    @cached_property
    def nodes(self) -> np.ndarray:
        radii, _ = self._radial
        theta = 2 * np.pi * np.arange(self.n_theta) / self.n_theta
        return (self.center + radii[:, None] * np.exp(1j * theta)[None, :]).ravel()

    @cached_property
    def weights(self) -> np.ndarray:
        radii, weights = self._radial
        area = radii * weights * (2 * np.pi / self.n_theta)
        return np.repeat(area, self.n_theta)

    @property
    def area(self) -> float:
        return np.pi * (self.rho ** 2 - self.eps ** 2)


@dataclass(frozen=True)
class PVConfig:
    """Shrinking sequence eps0·shrinkᵏ for principal values at τ = 0."""

    eps0: float
    shrink: float
    max_steps: int
    tol: float

    def clean(self) -> None:
        if not (0 < self.shrink < 1):
            raise ValidationError(f"PV shrink factor must lie in (0, 1), got {self.shrink}.", code="bad_pv")
        if not self.eps0 > 0 or self.max_steps < 1 or not self.tol > 0:
            raise ValidationError("PV eps0, max_steps and tol must be positive.", code="bad_pv")

    @classmethod
    def create(
        cls,
        eps0: Optional[float] = None,
        shrink: Optional[float] = None,
        max_steps: Optional[int] = None,
        tol: Optional[float] = None,
    ) -> "PVConfig":
        cfg = cls(
            float(numerics("PV_EPS0", eps0)),
            float(numerics("PV_SHRINK", shrink)),
            int(numerics("PV_MAX_STEPS", max_steps)),
            float(numerics("PV_TOL", tol)),
        )
        cfg.clean()
        return cfg

    def radii(self):
        for k in range(self.max_steps + 1):
            yield self.eps0 * self.shrink ** k


@dataclass(frozen=True)
class PVResult:
    value: complex
    increment: float
    eps: float
    steps: int
