import logging
from typing import Dict, Tuple, Union

from differentials.models import AmbientForm, MonomialFormSum
from differentials.parser import parse_ambient
from polyalg.polynomials import UniPoly

from .models import Curve

logger = logging.getLogger(__name__)


def pullback(ambient: Union[AmbientForm, str], curve: Curve) -> MonomialFormSum:
    """Substitute zᵢ ↦ πᵢ(τ), z̄ᵢ ↦ conj(πᵢ)(τ̄) and dz̄ᵢ ↦ conj(πᵢ')(τ̄)dτ̄.

    Returns the expanded result as a form in τ, τ̄.
    """
    if isinstance(ambient, str):
        ambient = parse_ambient(ambient)
    pi = (curve.pi1, curve.pi2)
    pi_bar = tuple(p.conjugate() for p in pi)
    dz_bar = pi_bar[ambient.dzbar - 1].derivative() if ambient.dzbar else UniPoly((1,))

    merged: Dict[Tuple[int, int], complex] = {}
    for i, j, k, l, c in ambient.terms:
        holomorphic = (pi[0] ** i) * (pi[1] ** j) * c
        antiholomorphic = (pi_bar[0] ** k) * (pi_bar[1] ** l) * dz_bar
        for a, p in enumerate(holomorphic.coeffs):
            if p == 0:
                continue
            for b, q in enumerate(antiholomorphic.coeffs):
                if q != 0:
                    merged[(a, b)] = merged.get((a, b), 0j) + p * q

    form = MonomialFormSum(
        tuple((a, b, c) for (a, b), c in merged.items()),
        degree=1 if ambient.dzbar else 0,
    )
    logger.debug("pullback produced %d term(s)", len(form.terms))
    return form
