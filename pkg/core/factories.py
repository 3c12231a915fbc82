import factory

from curves.models import CuspCurve, ParamCurve
from differentials.models import MonomialFormSum, RadialBump
from kernels.models import KernelContext
from polyalg.polynomials import BiPoly, UniPoly


class CuspCurveFactory(factory.Factory):
    class Meta:
        model = CuspCurve

    r = 2
    s = 3


class SmoothModelFactory(factory.Factory):
    """The line π(τ) = (τ, τ) on z₁ = z₂."""

    class Meta:
        model = ParamCurve

    pi1 = factory.LazyFunction(lambda: UniPoly((0, 1)))
    pi2 = factory.LazyFunction(lambda: UniPoly((0, 1)))
    f = factory.LazyFunction(lambda: BiPoly(((1, 0, 1), (0, 1, -1))))


class CuspParamViewFactory(factory.Factory):
    """A cusp given through its general parametrization instead of (r, s)."""

    class Meta:
        model = ParamCurve

    class Params:
        r = 2
        s = 3

    pi1 = factory.LazyAttribute(lambda o: UniPoly.monomial(o.s))
    pi2 = factory.LazyAttribute(lambda o: UniPoly.monomial(o.r))
    f = factory.LazyAttribute(lambda o: BiPoly(((o.r, 0, 1), (0, o.s, -1))))


class RadialBumpFactory(factory.Factory):
    class Meta:
        model = RadialBump

    rho0sq = 0.04
    rho1sq = 0.36


class FormFactory(factory.Factory):
    """bump(0.04, 0.36)·τ̄ dτ̄ unless overridden."""

    class Meta:
        model = MonomialFormSum

    terms = ((0, 1, 1),)
    envelope = factory.LazyFunction(lambda: (RadialBumpFactory(),))
    degree = 1


class KernelContextFactory(factory.Factory):
    class Meta:
        model = KernelContext

    curve = factory.SubFactory(CuspCurveFactory)
    mu = 0
    guard_removable = 1e-3
    guard_diagonal = 1e-3
