from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple


@dataclass(frozen=True)
class MomentEntry:
    j: int
    value: complex
    zero: bool


@dataclass(frozen=True)
class MomentReport:
    """Pairings m_j of a function against τʲ·ω on a small circle.

    ``verdict`` is True when every pairing vanishes, i.e. the function is
    strongly holomorphic.
    """

    entries: Tuple[MomentEntry, ...]
    eps_used: float
    eps_check: float

    @property
    def verdict(self) -> bool:
        return all(entry.zero for entry in self.entries)


@dataclass(frozen=True)
class SolveValue:
    t: complex
    u: complex
    residual: Optional[float] = None
    pv_increment: Optional[float] = None


@dataclass(frozen=True)
class SolveReport:
    """Values of an operator at a set of targets, with the resolution used."""

    values: Tuple[SolveValue, ...]
    resolution: Dict[str, float] = field(default_factory=dict)

    @property
    def targets(self) -> List[complex]:
        return [value.t for value in self.values]

    @property
    def max_residual(self) -> Optional[float]:
        residuals = [v.residual for v in self.values if v.residual is not None]
        return max(residuals) if residuals else None

    @property
    def pv_increments(self) -> List[Optional[float]]:
        return [value.pv_increment for value in self.values]


@dataclass(frozen=True)
class GrowthReport:
    """Least-squares fit of log|u| against log r along a ray."""

    slope: float
    residual: float
    log_r: Tuple[float, ...]
    log_abs_u: Tuple[float, ...]
