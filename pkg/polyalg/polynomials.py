"""Complex polynomials in one and two variables.

Values are immutable. Every evaluation routine accepts scalars or numpy
arrays (evaluated elementwise), so the same code serves single points and
whole quadrature grids.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

Number = Union[complex, float, int]
ArrayLike = Union[Number, np.ndarray]


def _trim(coeffs: Iterable[Number]) -> Tuple[complex, ...]:
    values = [complex(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


@dataclass(frozen=True)
class UniPoly:
    """Polynomial in one variable, coefficients in ascending degree."""

    coeffs: Tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def monomial(cls, degree: int, coeff: Number = 1) -> "UniPoly":
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def order(self) -> int:
        """Lowest exponent with a nonzero coefficient (-1 for zero)."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k
        return -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, z: ArrayLike) -> ArrayLike:
        return self.eval(z)

    def eval(self, z: ArrayLike) -> ArrayLike:
        """Horner evaluation."""
        acc = np.zeros_like(z, dtype=complex) if isinstance(z, np.ndarray) else 0j
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def derivative(self) -> "UniPoly":
        return UniPoly(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def conjugate(self) -> "UniPoly":
        """Polynomial with conjugated coefficients, so p̄(w̄) = conj(p(w))."""
        return UniPoly(c.conjugate() for c in self.coeffs)

    def diff_quotient(self, z: ArrayLike, w: ArrayLike) -> ArrayLike:
        """(p(z) - p(w)) / (z - w), equal to p'(z) when z == w.

        The quotient polynomial of p(X) - p(w) by (X - w) is built by
        synthetic division and evaluated at z in the same pass, so no
        difference of nearby values is ever divided.
        """
        n = self.degree
        if n <= 0:
            if isinstance(z, np.ndarray) or isinstance(w, np.ndarray):
                return np.zeros(np.broadcast(z, w).shape, dtype=complex)
            return 0j
        b = self.coeffs[n] + 0 * w
        acc = b + 0 * z
        for k in range(n - 1, 0, -1):
            b = self.coeffs[k] + w * b
            acc = acc * z + b
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        return UniPoly(npoly.polyadd(self.coeffs or (0j,), other.coeffs or (0j,)))

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly((other,))
        return self + (-other)

    def __mul__(self, other: Union["UniPoly", Number]) -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        return UniPoly(npoly.polymul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "UniPoly":
        result = UniPoly((1,))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in (z1, z2) stored as sorted (i, j, c) terms."""

    terms: Tuple[Tuple[int, int, complex], ...] = field(default=())

    def __post_init__(self):
        merged: Dict[Tuple[int, int], complex] = {}
        for i, j, c in self.terms:
            if i < 0 or j < 0:
                raise ValueError("exponents must be non-negative")
            merged[(int(i), int(j))] = merged.get((int(i), int(j)), 0j) + complex(c)
        normalized = tuple(
            (i, j, c) for (i, j), c in sorted(merged.items()) if c != 0
        )
        object.__setattr__(self, "terms", normalized)

    @property
    def multiplicity(self) -> int:
        """Lowest total degree of a term (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        return min(i + j for i, j, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient_polys(self, which: int) -> List[UniPoly]:
        """Write f = sum_k g_k * z_which^k; return [g_0, g_1, ...].

        Each g_k is a polynomial in the other variable.
        """
        grouped: Dict[int, Dict[int, complex]] = {}
        for i, j, c in self.terms:
            outer, inner = (i, j) if which == 1 else (j, i)
            grouped.setdefault(outer, {})[inner] = c
        if not grouped:
            return []
        polys = []
        for k in range(max(grouped) + 1):
            row = grouped.get(k, {})
            size = max(row) + 1 if row else 0
            polys.append(UniPoly(row.get(m, 0j) for m in range(size)))
        return polys

    def __call__(self, z1: ArrayLike, z2: ArrayLike) -> ArrayLike:
        return self.eval(z1, z2)

    def eval(self, z1: ArrayLike, z2: ArrayLike) -> ArrayLike:
        """Horner in z1 for each power of z2, then Horner in z2."""
        acc = 0j * z1 * z2
        for g in reversed(self.coefficient_polys(2)):
            acc = acc * z2 + g.eval(z1)
        return acc

    def partial(self, which: int) -> "BiPoly":
        if which == 1:
            return BiPoly(tuple((i - 1, j, i * c) for i, j, c in self.terms if i > 0))
        if which == 2:
            return BiPoly(tuple((i, j - 1, j * c) for i, j, c in self.terms if j > 0))
        raise ValueError("which must be 1 or 2")

    def difference_quotients(
        self,
        zeta1: ArrayLike,
        zeta2: ArrayLike,
        z1: ArrayLike,
        z2: ArrayLike,
    ) -> Tuple[ArrayLike, ArrayLike]:
        """Telescoped difference quotients of f between z and zeta.

        Returns (q1, q2) with
            q1 = (f(zeta1, zeta2) - f(z1, zeta2)) / (zeta1 - z1)
            q2 = (f(z1, zeta2) - f(z1, z2)) / (zeta2 - z2)
        so that q1*(zeta1 - z1) + q2*(zeta2 - z2) = f(zeta) - f(z).
        Confluent arguments give the partial derivatives.
        """
        # f = sum_j g_j(z1) z2^j
        q1 = 0j * zeta1 * z1 * zeta2
        for g in reversed(self.coefficient_polys(2)):
            q1 = q1 * zeta2 + g.diff_quotient(zeta1, z1)
        # f = sum_i k_i(z2) z1^i
        q2 = 0j * zeta2 * z2 * z1
        for k in reversed(self.coefficient_polys(1)):
            q2 = q2 * z1 + k.diff_quotient(zeta2, z2)
        return q1, q2

    def compose(self, p1: UniPoly, p2: UniPoly) -> UniPoly:
        """f(p1(τ), p2(τ)) as a polynomial in τ."""
        result = UniPoly()
        for j, g in enumerate(self.coefficient_polys(2)):
            inner = UniPoly()
            for i, c in enumerate(g.coeffs):
                if c != 0:
                    inner = inner + (p1 ** i) * c
            result = result + inner * (p2 ** j)
        return result

    def __add__(self, other: "BiPoly") -> "BiPoly":
        return BiPoly(self.terms + other.terms)

    def __neg__(self) -> "BiPoly":
        return BiPoly(tuple((i, j, -c) for i, j, c in self.terms))

    def __sub__(self, other: "BiPoly") -> "BiPoly":
        return self + (-other)

    def __mul__(self, other: Union["BiPoly", Number]) -> "BiPoly":
        if not isinstance(other, BiPoly):
            return BiPoly(tuple((i, j, c * other) for i, j, c in self.terms))
        return BiPoly(
            tuple(
                (i1 + i2, j1 + j2, c1 * c2)
                for i1, j1, c1 in self.terms
                for i2, j2, c2 in other.terms
            )
        )

    __rmul__ = __mul__


def evaluate(p: Union[UniPoly, BiPoly], point) -> ArrayLike:
    """Evaluate a univariate polynomial at z or a bivariate one at (z1, z2)."""
    if isinstance(p, BiPoly):
        z1, z2 = point
        return p.eval(z1, z2)
    return p.eval(point)


def partial(p: BiPoly, which: int) -> BiPoly:
    return p.partial(which)


def diff_quotient(p: UniPoly, z: ArrayLike, w: ArrayLike) -> ArrayLike:
    return p.diff_quotient(z, w)
