from .models import CuspCurve, SemigroupInfo


def semigroup(r: int, s: int) -> SemigroupInfo:
    """Frobenius number and gaps of ⟨r, s⟩ by brute-force enumeration.

    Every element up to the Frobenius number rs - r - s is a*r + b*s with
    a < s and b < r, so the window a <= s, b <= r is exhaustive.
    """
    CuspCurve(r, s).clean()
    members = {a * r + b * s for a in range(s + 1) for b in range(r + 1)}
    frobenius = max(k for k in range(r * s) if k not in members)
    gaps = tuple(k for k in range(frobenius + 1) if k not in members)
    return SemigroupInfo(r=r, s=s, frobenius=frobenius, gaps=gaps)


def contains(r: int, s: int, k: int) -> bool:
    return semigroup(r, s).contains(k)
