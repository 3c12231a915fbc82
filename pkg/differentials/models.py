"""Symbolic functions and (0,1)-forms in the curve parameter τ.

A form is a finite sum of c·τᵃτ̄ᵇ terms times a radial envelope, a product
of smooth cutoffs in x = |τ|². Sums of pieces with different envelopes are
kept as ``extra`` summands.
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from django.core.exceptions import ValidationError

from polyalg.polynomials import ArrayLike


def _sigma(u: np.ndarray) -> np.ndarray:
    positive = u > 0
    return np.where(positive, np.exp(-1.0 / np.where(positive, u, 1.0)), 0.0)


def _sigma_prime(u: np.ndarray) -> np.ndarray:
    positive = u > 0
    safe = np.where(positive, u, 1.0)
    return np.where(positive, np.exp(-1.0 / safe) / safe ** 2, 0.0)


@dataclass(frozen=True, order=True)
class RadialBump:
    """Smooth radial cutoff in x = |τ|².

    β(x) = 1 for x <= rho0sq and 0 for x >= rho1sq. ``inverted`` turns it
    into 1 - β (a hole around the origin), ``derivative`` into dβ/dx.
    """

    rho0sq: float
    rho1sq: float
    inverted: bool = False
    derivative: bool = False

    def clean(self) -> None:
        if not (0 <= self.rho0sq < self.rho1sq):
            raise ValidationError(
                f"Bump radii must satisfy 0 <= rho0sq < rho1sq, got ({self.rho0sq}, {self.rho1sq}).",
                code="bad_bump",
            )

    @property
    def width(self) -> float:
        return self.rho1sq - self.rho0sq

    def _u(self, x: np.ndarray) -> np.ndarray:
        return (self.rho1sq - x) / self.width

    def value(self, x: ArrayLike) -> ArrayLike:
        x = np.asarray(x, dtype=float)
        if self.derivative:
            out = self._dbeta(x)
            out = -out if self.inverted else out
        else:
            out = self._beta(x)
            out = 1.0 - out if self.inverted else out
        return out if out.ndim else float(out)

    def _beta(self, x: np.ndarray) -> np.ndarray:
        u = self._u(x)
        a = _sigma(u)
        b = _sigma(1.0 - u)
        return a / (a + b)

    def _dbeta(self, x: np.ndarray) -> np.ndarray:
        u = self._u(x)
        a, b = _sigma(u), _sigma(1.0 - u)
        da, db = _sigma_prime(u), _sigma_prime(1.0 - u)
        inside = (u > 0) & (u < 1)
        denom = np.where(inside, (a + b) ** 2, 1.0)
        dpsi = np.where(inside, (da * b + a * db) / denom, 0.0)
        return -dpsi / self.width

    def differentiated(self) -> "RadialBump":
        if self.derivative:
            raise ValidationError("Only first derivatives of envelopes are supported.")
        return replace(self, derivative=True)


Envelope = Tuple[RadialBump, ...]
Term = Tuple[int, int, complex]


def _normalize_terms(terms: Iterable[Tuple[int, int, complex]]) -> Tuple[Term, ...]:
    merged: Dict[Tuple[int, int], complex] = {}
    for a, b, c in terms:
        if a < 0 or b < 0 or a != int(a) or b != int(b):
            raise ValidationError(
                f"Exponents must be non-negative integers, got ({a}, {b}).",
                code="negative_exponent",
            )
        key = (int(a), int(b))
        merged[key] = merged.get(key, 0j) + complex(c)
    return tuple((a, b, c) for (a, b), c in sorted(merged.items()) if c != 0)


@dataclass(frozen=True)
class MonomialFormSum:
    """Σ c·τᵃτ̄ᵇ · Π envelope(|τ|²), times dτ̄ when ``degree`` is 1."""

    terms: Tuple[Term, ...] = ()
    envelope: Envelope = ()
    degree: int = 0
    extra: Tuple["MonomialFormSum", ...] = field(default=())

    def __post_init__(self):
        if self.degree not in (0, 1):
            raise ValidationError("Forms on a curve have degree 0 or 1.", code="bad_degree")
        for bump in self.envelope:
            bump.clean()
        object.__setattr__(self, "terms", _normalize_terms(self.terms))
        object.__setattr__(self, "envelope", tuple(sorted(self.envelope)))
        for piece in self.extra:
            if piece.degree != self.degree:
                raise ValidationError("Cannot add forms of different degree.", code="bad_degree")

    def pieces(self) -> Iterable["MonomialFormSum"]:
        """Flatten into summands that each carry a single envelope."""
        yield replace(self, extra=())
        for piece in self.extra:
            yield from piece.pieces()

    def is_zero(self) -> bool:
        return all(not piece.terms for piece in self.pieces())

    @property
    def min_total_degree(self) -> Optional[int]:
        """Lowest a + b over all terms whose envelope is nonzero at τ = 0."""
        degrees = [
            a + b
            for piece in self.pieces()
            if piece.envelope_at_origin() != 0
            for a, b, _ in piece.terms
        ]
        return min(degrees) if degrees else None

    def envelope_at_origin(self) -> float:
        value = 1.0
        for bump in self.envelope:
            value *= bump.value(0.0)
        return value

    def envelope_value(self, x: ArrayLike) -> ArrayLike:
        value = np.ones_like(np.asarray(x, dtype=float))
        for bump in self.envelope:
            value = value * bump.value(x)
        return value

    def support_radii(self) -> Tuple[float, Optional[float]]:
        """Inner and outer radius of the region where the form can be nonzero.

        The outer radius is None when some piece is not cut off by its envelope.
        """
        inners, outers = [], []
        for piece in self.pieces():
            if not piece.terms:
                continue
            inner, outer = 0.0, None
            for bump in piece.envelope:
                lo, hi = np.sqrt(bump.rho0sq), np.sqrt(bump.rho1sq)
                if bump.derivative or bump.inverted:
                    inner = max(inner, lo)
                if bump.derivative or not bump.inverted:
                    outer = hi if outer is None else min(outer, hi)
            inners.append(inner)
            outers.append(outer)
        if not inners:
            return 0.0, None
        if any(outer is None for outer in outers):
            return min(inners), None
        return min(inners), max(outers)

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        return eval_form(self, tau)

    def __add__(self, other: "MonomialFormSum") -> "MonomialFormSum":
        if other.degree != self.degree:
            raise ValidationError("Cannot add forms of different degree.", code="bad_degree")
        by_envelope: Dict[Envelope, list] = {}
        for piece in list(self.pieces()) + list(other.pieces()):
            by_envelope.setdefault(piece.envelope, []).extend(piece.terms)
        return assemble(by_envelope, self.degree)

    def __mul__(self, scalar: complex) -> "MonomialFormSum":
        return assemble(
            {p.envelope: [(a, b, c * scalar) for a, b, c in p.terms] for p in self.pieces()},
            self.degree,
        )

    __rmul__ = __mul__

    def __neg__(self) -> "MonomialFormSum":
        return self * -1


def assemble(by_envelope: Dict[Envelope, list], degree: int) -> MonomialFormSum:
    pieces = [
        MonomialFormSum(tuple(terms), envelope, degree)
        for envelope, terms in sorted(by_envelope.items())
    ]
    pieces = [p for p in pieces if p.terms] or [MonomialFormSum(degree=degree)]
    head, rest = pieces[0], tuple(pieces[1:])
    return replace(head, extra=rest)


def eval_form(form: MonomialFormSum, tau: ArrayLike) -> ArrayLike:
    """Coefficient of the function (degree 0) or of dτ̄ (degree 1) at τ."""
    tau_arr = np.asarray(tau, dtype=complex)
    total = np.zeros_like(tau_arr)
    tau_bar = np.conj(tau_arr)
    x = np.abs(tau_arr) ** 2
    for piece in form.pieces():
        if not piece.terms:
            continue
        poly = np.zeros_like(tau_arr)
        for a, b, c in piece.terms:
            poly = poly + c * tau_arr ** a * tau_bar ** b
        total = total + poly * piece.envelope_value(x)
    return total if total.ndim else complex(total)


def dbar(form: MonomialFormSum) -> MonomialFormSum:
    """Exact ∂/∂τ̄ of a function, returned as a (0,1)-form.

    τᵃτ̄ᵇ ↦ b·τᵃτ̄ᵇ⁻¹, and each envelope factor β(|τ|²) contributes
    β'(|τ|²)·τ times the rest.
    """
    if form.degree != 0:
        raise ValidationError("∂̄ of a (0,1)-form vanishes on a curve.", code="bad_degree")
    by_envelope: Dict[Envelope, list] = {}
    for piece in form.pieces():
        by_envelope.setdefault(piece.envelope, []).extend(
            (a, b - 1, b * c) for a, b, c in piece.terms if b > 0
        )
        for k, bump in enumerate(piece.envelope):
            envelope = piece.envelope[:k] + (bump.differentiated(),) + piece.envelope[k + 1:]
            by_envelope.setdefault(tuple(sorted(envelope)), []).extend(
                (a + 1, b, c) for a, b, c in piece.terms
            )
    return assemble(by_envelope, 1)


@dataclass(frozen=True)
class AmbientForm:
    """Polynomial in z₁, z₂, z̄₁, z̄₂, optionally times dz̄₁ or dz̄₂.

    Terms are (i, j, k, l, c) for c·z₁ⁱz₂ʲz̄₁ᵏz̄₂ˡ.
    """

    terms: Tuple[Tuple[int, int, int, int, complex], ...] = ()
    dzbar: Optional[int] = None

    def __post_init__(self):
        if self.dzbar not in (None, 1, 2):
            raise ValidationError("Only dz̄₁ or dz̄₂ may appear.", code="bad_degree")
        for term in self.terms:
            if any(e < 0 for e in term[:4]):
                raise ValidationError("Exponents must be non-negative.", code="negative_exponent")
