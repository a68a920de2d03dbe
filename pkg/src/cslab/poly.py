"""Exact rational polynomials of degree at most three and Sturm root counting.

Coefficients are :class:`fractions.Fraction` throughout; nothing here touches
floating point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

# Internal dense representation: coefficients low -> high, no trailing zeros.
Coeffs = Tuple[Fraction, ...]


def _trim(coeffs: Iterable) -> Coeffs:
    out = [Fraction(c) for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _eval(coeffs: Coeffs, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _derivative(coeffs: Coeffs) -> Coeffs:
    return _trim(i * c for i, c in enumerate(coeffs) if i > 0)


def _divmod(num: Coeffs, den: Coeffs) -> Tuple[Coeffs, Coeffs]:
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(num)
    quot = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
    lead = den[-1]
    while len(rem) >= len(den) and rem:
        shift = len(rem) - len(den)
        q = rem[-1] / lead
        quot[shift] = q
        for i, c in enumerate(den):
            rem[shift + i] -= q * c
        rem = list(_trim(rem))
    return _trim(quot), _trim(rem)


def _gcd(p: Coeffs, q: Coeffs) -> Coeffs:
    while q:
        p, q = q, _divmod(p, q)[1]
    if not p:
        return p
    return tuple(c / p[-1] for c in p)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class CubicPoly:
    """``c3*x**3 + c2*x**2 + c1*x + c0`` with exact rational coefficients.

    ``c3`` (and further leading coefficients) may vanish, so quadratics,
    lines and constants are represented too.
    """

    c3: Fraction
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        for name in ("c3", "c2", "c1", "c0"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "CubicPoly":
        """Build from coefficients listed low -> high (at most four)."""
        coeffs = list(coeffs)
        if len(coeffs) > 4:
            if any(c != 0 for c in coeffs[4:]):
                raise ValueError("degree exceeds 3")
            coeffs = coeffs[:4]
        coeffs += [0] * (4 - len(coeffs))
        return cls(coeffs[3], coeffs[2], coeffs[1], coeffs[0])

    @property
    def coeffs(self) -> Coeffs:
        """Trimmed coefficients, low -> high."""
        return _trim((self.c0, self.c1, self.c2, self.c3))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x) -> Fraction:
        return _eval(self.coeffs, Fraction(x))

    def derivative(self) -> "CubicPoly":
        return CubicPoly.from_coeffs(_derivative(self.coeffs))

    def as_list(self) -> list:
        """High -> low, as strings (exact; integers print without a slash)."""
        return [str(c) for c in (self.c3, self.c2, self.c1, self.c0)]

    def __str__(self) -> str:
        terms = []
        for power, c in ((3, self.c3), (2, self.c2), (1, self.c1), (0, self.c0)):
            if c == 0:
                continue
            mag = abs(c)
            body = "" if (mag == 1 and power) else str(mag)
            if power:
                body += "x" if power == 1 else f"x^{power}"
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


class SturmChain:
    """Sturm sequence of the square-free part of a polynomial."""

    def __init__(self, p: CubicPoly):
        coeffs = p.coeffs
        if not coeffs:
            raise ValueError("zero polynomial has no Sturm chain")
        g = _gcd(coeffs, _derivative(coeffs))
        squarefree = _divmod(coeffs, g)[0] if len(g) > 1 else coeffs
        chain = [squarefree, _derivative(squarefree)]
        while chain[-1]:
            rem = _divmod(chain[-2], chain[-1])[1]
            chain.append(tuple(-c for c in rem))
        self.polys: Tuple[Coeffs, ...] = tuple(q for q in chain if q)
        self.squarefree = squarefree

    def variations(self, x) -> int:
        signs = [_sign(_eval(q, Fraction(x))) for q in self.polys]
        signs = [s for s in signs if s]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def cauchy_bound(p: CubicPoly) -> Fraction:
    """Every real root of ``p`` has absolute value strictly below this."""
    coeffs = p.coeffs
    lead = coeffs[-1]
    return 1 + max((abs(c / lead) for c in coeffs[:-1]), default=Fraction(0))


def count_roots_in_interval(
    p: CubicPoly,
    lo: Optional[Fraction] = None,
    hi: Optional[Fraction] = None,
    *,
    lo_closed: bool = False,
    hi_closed: bool = False,
) -> int:
    """Number of distinct real roots of ``p`` between ``lo`` and ``hi``.

    ``None`` stands for an infinite endpoint, which is replaced by the Cauchy
    bound. Endpoints are excluded unless the matching ``*_closed`` flag is set,
    so the default ``(0, None)`` counts positive roots.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    if lo is None:
        lo = -cauchy_bound(p)
        lo_closed = False
    if hi is None:
        hi = cauchy_bound(p)
        hi_closed = False
    lo, hi = Fraction(lo), Fraction(hi)
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return 0
    if lo == hi:
        return int(p(lo) == 0)
    chain = SturmChain(p)
    # Sturm's theorem counts roots in the half-open interval (lo, hi].
    count = chain.variations(lo) - chain.variations(hi)
    if lo_closed and p(lo) == 0:
        count += 1
    if not hi_closed and p(hi) == 0:
        count -= 1
    return count


def interpolate(points: Sequence[Tuple[Fraction, Fraction]]) -> CubicPoly:
    """Lagrange interpolation through at most four points."""
    if len(points) > 4:
        raise ValueError("at most four points for a cubic")
    total = [Fraction(0)] * 4
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            # multiply basis by (x - xj)
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k, c in enumerate(basis):
            total[k] += yi * c / denom
    return CubicPoly.from_coeffs(total)


def positive_on_closed_interval(p: CubicPoly, lo, hi) -> bool:
    """True iff ``p > 0`` everywhere on ``[lo, hi]``."""
    if p.is_zero():
        return False
    return p(lo) > 0 and count_roots_in_interval(p, lo, hi, lo_closed=True, hi_closed=True) == 0
