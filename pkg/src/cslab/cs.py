"""Cappell-Shaneson matrices, sign normalization and the standard form.

A Cappell-Shaneson (CS) matrix is ``A`` in SL(3, Z) with ``det(A - I) = 1``.
Its standard form is ``[[0, a, b], [0, c, d], [1, e, f]]``, stored as the six
integers of :class:`StdForm`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import NotCappellShaneson, NotCompletable, NotStandardForm, SearchExhausted
from .linalg import (
    IntMat3,
    complete_basis,
    cross,
    det3,
    inverse_unimodular,
    is_primitive,
    mat_mul,
    vectors_by_norm,
)

IDENTITY = IntMat3.identity()
NEGATE_MIDDLE = IntMat3.diag(1, -1, 1)
DEFAULT_SEARCH_BOUND = 12


def cs_failures(m: IntMat3) -> List[str]:
    """Names of the CS conditions ``m`` violates (empty when it is CS)."""
    out = []
    d = det3(m)
    if d != 1:
        out.append(f"det(A) = {d}, expected 1")
    dm = det3(m - IDENTITY)
    if dm != 1:
        out.append(f"det(A - I) = {dm}, expected 1")
    return out


def is_cs_matrix(m: IntMat3) -> bool:
    return not cs_failures(m)


@dataclass(frozen=True)
class CsMatrix:
    matrix: IntMat3

    def __post_init__(self):
        failures = cs_failures(self.matrix)
        if failures:
            raise NotCappellShaneson("; ".join(failures))

    @property
    def trace(self) -> int:
        return self.matrix.trace


def normalize_sign(m: IntMat3) -> Tuple[CsMatrix, bool]:
    """Return ``(cs, inverted)``; inverts ``m`` when ``det(m - I) = -1``."""
    d = det3(m)
    dm = det3(m - IDENTITY)
    if d != 1 or dm not in (1, -1):
        raise NotCappellShaneson(f"need det(A)=1 and det(A-I)=+-1, got {d} and {dm}")
    if dm == 1:
        return CsMatrix(m), False
    return CsMatrix(inverse_unimodular(m)), True


@dataclass(frozen=True)
class StdForm:
    a: int
    b: int
    c: int
    d: int
    e: int
    f: int

    @classmethod
    def from_matrix(cls, m: IntMat3) -> "StdForm":
        if m.col(0) != (0, 0, 1):
            raise NotStandardForm(f"first column is {m.col(0)}, expected (0, 0, 1)")
        (_, a, b), (_, c, d), (_, e, f) = m.rows
        return cls(a, b, c, d, e, f)

    @classmethod
    def from_json(cls, obj: dict) -> "StdForm":
        return cls(*(int(obj[k]) for k in "abcdef"))

    def matrix(self) -> IntMat3:
        return IntMat3(((0, self.a, self.b), (0, self.c, self.d), (1, self.e, self.f)))

    @property
    def trace(self) -> int:
        return self.c + self.f

    def astuple(self) -> Tuple[int, ...]:
        return (self.a, self.b, self.c, self.d, self.e, self.f)

    def to_json(self) -> dict:
        return dict(zip("abcdef", self.astuple()))


def validate_std_form(s: StdForm) -> List[str]:
    """Every defining identity of the standard form that ``s`` violates."""
    a, b, c, d, e, f = s.astuple()
    bad = []
    if a * d - b * c != 1:
        bad.append("ad - bc = 1")
    if b != (c - 1) * (f - 1) - d * e:
        bad.append("b = (c-1)(f-1) - de")
    if d % 2 == 0:
        bad.append("d odd")
    if a % 2 == 0 and e % 2 == 0:
        bad.append("a or e odd")
    if (a + c * e) * d != c * (c - 1) * (f - 1) + 1:
        bad.append("(a+ce)d = c(c-1)(f-1)+1")
    return bad


def am_matrix(m: int) -> IntMat3:
    return IntMat3(((0, 1, 0), (0, 1, 1), (1, 0, m + 1)))


def am_std_form(m: int) -> StdForm:
    return StdForm(1, 0, 1, 1, 0, m + 1)


def recognize_am(s: StdForm) -> Optional[int]:
    """``m`` if ``s`` is ``A_m`` itself or ``A_m`` with its middle row and
    column negated; ``None`` otherwise."""
    a, b, c, d, e, f = s.astuple()
    if (a, b, c, d, e) == (1, 0, 1, 1, 0):
        return f - 1
    if (-a, b, c, -d, -e) == (1, 0, 1, 1, 0):
        return f - 1
    return None


def _std_conjugator(a: IntMat3, v) -> Optional[IntMat3]:
    av = a @ v
    if not is_primitive(cross(v, av)):
        return None
    try:
        w = complete_basis(v, av)
    except NotCompletable:
        return None
    return IntMat3.from_columns(v, w, av)


def to_standard_form(cs: CsMatrix, bound: int = DEFAULT_SEARCH_BOUND) -> Tuple[StdForm, IntMat3]:
    """Find ``P`` with columns ``(v, w, Av)`` so that ``P^-1 A P`` is standard.

    Primitive ``v`` are tried by increasing max-norm; the first ``v`` for which
    ``Z^3 / <v, Av>`` is infinite cyclic wins.
    """
    a = cs.matrix
    for v in vectors_by_norm(bound):
        if not is_primitive(v):
            continue
        p = _std_conjugator(a, v)
        if p is None:
            continue
        std = mat_mul(mat_mul(inverse_unimodular(p), a), p)
        return StdForm.from_matrix(std), p
    raise SearchExhausted(bound)
