from dataclasses import dataclass
from typing import Optional

from django.core.exceptions import ValidationError

from core.defaults import numerics
from curves.models import Curve


@dataclass(frozen=True)
class KernelContext:
    """A curve together with the weight power μ and the kernel guards."""

    curve: Curve
    mu: int = 0
    guard_removable: float = 1e-3
    guard_diagonal: float = 1e-3

    def clean(self) -> None:
        if self.mu < 0 or self.mu != int(self.mu):
            raise ValidationError(f"Weight power must be a non-negative integer, got {self.mu}.", code="bad_mu")
        if not (self.guard_removable > 0 and self.guard_diagonal > 0):
            raise ValidationError("Kernel guards must be positive.", code="bad_guard")

    @classmethod
    def create(
        cls,
        curve: Curve,
        mu: int = 0,
        guard_removable: Optional[float] = None,
        guard_diagonal: Optional[float] = None,
    ) -> "KernelContext":
        ctx = cls(
            curve,
            int(mu),
            float(numerics("GUARD_REMOVABLE", guard_removable)),
            float(numerics("GUARD_DIAGONAL", guard_diagonal)),
        )
        ctx.clean()
        return ctx
