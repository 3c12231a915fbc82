from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Optional, Tuple, Union

import numpy as np
from django.core.exceptions import ValidationError

from core.defaults import numerics
from polyalg.polynomials import ArrayLike, BiPoly, UniPoly


class Curve:
    """Unibranch plane curve germ τ ↦ (π₁(τ), π₂(τ)) on {f = 0}.

    The only singular parameter, if any, is τ = 0.
    """

    pi1: UniPoly
    pi2: UniPoly
    f: BiPoly

    def param_view(self) -> "ParamCurve":
        raise NotImplementedError

    def point(self, tau: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
        return self.pi1.eval(tau), self.pi2.eval(tau)

    @property
    def pole_order(self) -> int:
        """Order of the pole of ω at τ = 0."""
        raise NotImplementedError

    @property
    def weight_order(self) -> int:
        """Vanishing order at τ = 0 of the tuple (π₁, π₂)."""
        return min(p.order for p in (self.pi1, self.pi2) if not p.is_zero())

    @property
    def is_singular(self) -> bool:
        return self.pole_order > 0

    def canonical_weight(self, tau: ArrayLike) -> ArrayLike:
        raise NotImplementedError

    def check_parameter(self, tau: ArrayLike) -> None:
        if self.is_singular and np.any(np.asarray(tau) == 0):
            raise ValidationError(
                "τ = 0 is the singular parameter of this curve.",
                code="singular_parameter",
            )


@dataclass(frozen=True)
class CuspCurve(Curve):
    """The cusp z₁ʳ = z₂ˢ parametrized by τ ↦ (τˢ, τʳ)."""

    r: int
    s: int

    def clean(self) -> None:
        if not (2 <= self.r < self.s):
            raise ValidationError(
                f"Cusp exponents must satisfy 2 <= r < s, got ({self.r}, {self.s}).",
                code="bad_exponents",
            )
        if gcd(self.r, self.s) != 1:
            raise ValidationError(
                f"Cusp exponents ({self.r}, {self.s}) are not coprime.",
                code="not_coprime",
            )

    @cached_property
    def pi1(self) -> UniPoly:
        return UniPoly.monomial(self.s)

    @cached_property
    def pi2(self) -> UniPoly:
        return UniPoly.monomial(self.r)

    @cached_property
    def f(self) -> BiPoly:
        return BiPoly(((self.r, 0, 1), (0, self.s, -1)))

    def param_view(self) -> "ParamCurve":
        return ParamCurve(self.pi1, self.pi2, self.f)

    @property
    def pole_order(self) -> int:
        return (self.r - 1) * (self.s - 1)

    @property
    def weight_order(self) -> int:
        return self.r

    def canonical_weight(self, tau: ArrayLike) -> ArrayLike:
        self.check_parameter(tau)
        weight = np.asarray(tau, dtype=complex) ** (-self.pole_order)
        return weight if weight.ndim else complex(weight)


@dataclass(frozen=True)
class ParamCurve(Curve):
    """Curve given by a polynomial parametrization and its defining polynomial."""

    pi1: UniPoly
    pi2: UniPoly
    f: BiPoly

    def clean(self, samples: Optional[int] = None, tol: Optional[float] = None) -> None:
        """Validate the parametrization against f.

        Raises:
            ValidationError: if π does not start at the origin, f∘π is not
                identically zero, π' vanishes away from τ = 0, or the germ at
                the origin has more than one branch.
        """
        samples = numerics("CURVE_CHECK_SAMPLES", samples)
        tol = numerics("CURVE_CHECK_TOL", tol)
        if self.pi1.is_zero() and self.pi2.is_zero():
            raise ValidationError("The parametrization is constant.", code="constant")
        if self.pi1.eval(0) != 0 or self.pi2.eval(0) != 0:
            raise ValidationError(
                "The parametrization must send τ = 0 to the origin.", code="origin"
            )
        if self.f.is_zero():
            raise ValidationError("The defining polynomial is zero.", code="zero_f")

        rng = np.random.default_rng(numerics("RANDOM_SEED"))
        radius = rng.uniform(0.1, 2.0, samples)
        tau = radius * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, samples))
        z1, z2 = self.point(tau)
        scale = sum(abs(c) * np.abs(z1) ** i * np.abs(z2) ** j for i, j, c in self.f.terms)
        residual = np.abs(self.f.eval(z1, z2))
        if np.any(residual > tol * np.maximum(scale, 1e-300)):
            raise ValidationError(
                "f does not vanish along the parametrization "
                f"(worst relative residual {np.max(residual / scale):.3e}).",
                code="not_on_curve",
            )
        speed = np.abs(self.pi1.derivative().eval(tau)) + np.abs(self.pi2.derivative().eval(tau))
        if np.any(speed == 0):
            raise ValidationError(
                "π' vanishes at a nonzero parameter.", code="critical_parameter"
            )
        if self.f.multiplicity != self.weight_order:
            raise ValidationError(
                "The germ at the origin is not covered by a single branch of the "
                f"parametrization (mult f = {self.f.multiplicity}, "
                f"ord π = {self.weight_order}).",
                code="multibranch",
            )

    def param_view(self) -> "ParamCurve":
        return self

    @cached_property
    def gradient(self) -> Tuple[BiPoly, BiPoly]:
        return self.f.partial(1), self.f.partial(2)

    @cached_property
    def velocity(self) -> Tuple[UniPoly, UniPoly]:
        return self.pi1.derivative(), self.pi2.derivative()

    @cached_property
    def pole_order(self) -> int:
        f1, f2 = self.gradient
        d1, d2 = self.velocity
        # ω = π₂'/f₁(π) = -π₁'/f₂(π)
        f1_pulled = f1.compose(self.pi1, self.pi2)
        if not f1_pulled.is_zero() and not d2.is_zero():
            return f1_pulled.order - d2.order
        f2_pulled = f2.compose(self.pi1, self.pi2)
        return f2_pulled.order - d1.order

    def canonical_weight(self, tau: ArrayLike) -> ArrayLike:
        self.check_parameter(tau)
        z1, z2 = self.point(tau)
        f1, f2 = self.gradient
        d1, d2 = self.velocity
        g1 = f1.eval(z1, z2)
        g2 = f2.eval(z1, z2)
        numerator = np.conj(g1) * d2.eval(tau) - np.conj(g2) * d1.eval(tau)
        return numerator / (np.abs(g1) ** 2 + np.abs(g2) ** 2)


def smooth_model() -> ParamCurve:
    """The line π(τ) = (τ, τ) on {z₁ = z₂}; its ω is identically 1."""
    line = UniPoly((0, 1))
    return ParamCurve(line, line, BiPoly(((1, 0, 1), (0, 1, -1))))


CurveSpec = Union[dict, Tuple[int, int], Tuple[UniPoly, UniPoly, BiPoly]]


def make_curve(spec: CurveSpec) -> Curve:
    """Build and validate a curve from a cusp pair, a (π₁, π₂, f) triple or curve JSON."""
    if isinstance(spec, dict):
        from .serializers import CurveSerializer

        serializer = CurveSerializer(data=spec)
        serializer.is_valid(raise_exception=True)
        return serializer.save()
    if len(spec) == 2:
        curve = CuspCurve(int(spec[0]), int(spec[1]))
    elif len(spec) == 3:
        curve = ParamCurve(*spec)
    else:
        raise ValidationError("Unrecognised curve specification.", code="bad_spec")
    curve.clean()
    return curve


def canonical_weight(curve: Curve, tau: ArrayLike) -> ArrayLike:
    return curve.canonical_weight(tau)


@dataclass(frozen=True)
class SemigroupInfo:
    """The numerical semigroup ⟨r, s⟩ generated by the cusp exponents."""

    r: int
    s: int
    frobenius: int
    gaps: Tuple[int, ...]

    def contains(self, k: int) -> bool:
        if k < 0:
            return False
        return k not in self.gaps
