"""Exact 3x3 integer linear algebra.

Matrices are immutable :class:`IntMat3` values backed by Python integers, so
nothing wraps. Setting ``CSLAB_MAX_INT`` (a bit width such as ``64`` or
``128``) switches to a checked policy in which any entry whose magnitude does
not fit a signed integer of that width raises :class:`IntegerOverflow`.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence, Tuple

from .errors import BadIntegerPolicy, IntegerOverflow, MatrixParseError, NotCompletable, NotUnimodular
from .poly import CubicPoly, interpolate

Row = Tuple[int, int, int]
IntVec3 = Tuple[int, int, int]


def _read_policy() -> int | None:
    raw = os.environ.get("CSLAB_MAX_INT", "").strip().lower()
    if raw in ("", "0", "none", "unbounded", "bigint"):
        return None
    try:
        bits = int(raw.removeprefix("int").removeprefix("i"))
    except ValueError:
        bits = 0
    if bits < 8:
        raise BadIntegerPolicy(f"CSLAB_MAX_INT must be a bit width >= 8, got {raw!r}")
    return (1 << (bits - 1)) - 1


_UNREAD = object()
# Read lazily, and only once some entry exceeds the smallest allowed width, so a
# bad environment value surfaces as an error rather than an import failure.
_MAX_ABS: object = _UNREAD
_ALWAYS_FITS = 127


def _max_abs() -> int | None:
    global _MAX_ABS
    if _MAX_ABS is _UNREAD:
        _MAX_ABS = _read_policy()
    return _MAX_ABS


def set_int_policy(bits: int | None) -> None:
    """Override the checked-integer policy at runtime (``None`` = unbounded)."""
    global _MAX_ABS
    _MAX_ABS = None if bits is None else (1 << (bits - 1)) - 1


@dataclass(frozen=True)
class IntMat3:
    rows: Tuple[Row, Row, Row]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError(f"expected a 3x3 matrix, got {self.rows!r}")
        big = max(abs(x) for r in rows for x in r)
        if big > _ALWAYS_FITS:
            limit = _max_abs()
            if limit is not None and big > limit:
                raise IntegerOverflow(f"entry of magnitude {big} exceeds the configured integer width")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "IntMat3":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls) -> "IntMat3":
        return cls(((1, 0, 0), (0, 1, 0), (0, 0, 1)))

    @classmethod
    def diag(cls, a: int, b: int, c: int) -> "IntMat3":
        return cls(((a, 0, 0), (0, b, 0), (0, 0, c)))

    @classmethod
    def from_columns(cls, u: IntVec3, v: IntVec3, w: IntVec3) -> "IntMat3":
        return cls(tuple(zip(u, v, w)))

    def __getitem__(self, ij: Tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def col(self, j: int) -> IntVec3:
        return tuple(r[j] for r in self.rows)

    def __matmul__(self, other):
        if isinstance(other, IntMat3):
            return mat_mul(self, other)
        return tuple(sum(a * b for a, b in zip(r, other)) for r in self.rows)

    def __add__(self, other: "IntMat3") -> "IntMat3":
        return IntMat3(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "IntMat3") -> "IntMat3":
        return IntMat3(tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __pow__(self, k: int) -> "IntMat3":
        base = self if k >= 0 else inverse_unimodular(self)
        result = IntMat3.identity()
        for _ in range(abs(k)):
            result = mat_mul(result, base)
        return result

    @property
    def trace(self) -> int:
        return self.rows[0][0] + self.rows[1][1] + self.rows[2][2]

    def transpose(self) -> "IntMat3":
        return IntMat3(tuple(zip(*self.rows)))

    def max_abs(self) -> int:
        return max(abs(x) for r in self.rows for x in r)

    def entries(self) -> Tuple[int, ...]:
        return tuple(x for r in self.rows for x in r)

    def to_list(self) -> list:
        return [list(r) for r in self.rows]

    def to_text(self) -> str:
        return ";".join(",".join(str(x) for x in r) for r in self.rows)

    def __str__(self) -> str:
        width = max(len(str(x)) for x in self.entries())
        return "\n".join("[" + " ".join(str(x).rjust(width) for x in r) + "]" for r in self.rows)


def parse_matrix(text: str) -> IntMat3:
    """Parse ``"0,1,0;0,1,1;1,0,1"`` or the JSON form ``[[0,1,0],...]``."""
    raw = "".join(text.split())
    if not raw:
        raise MatrixParseError("empty matrix text")
    try:
        if raw.startswith("["):
            rows = json.loads(raw)
        else:
            rows = [[int(x) for x in r.split(",")] for r in raw.split(";")]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise MatrixParseError(f"expected 3 rows of 3 entries: {text!r}")
        if any(isinstance(x, bool) or not isinstance(x, int) for r in rows for x in r):
            raise MatrixParseError(f"entries must be integers: {text!r}")
        return IntMat3.of(rows)
    except (ValueError, TypeError) as exc:
        if isinstance(exc, (MatrixParseError, BadIntegerPolicy)):
            raise
        raise MatrixParseError(f"cannot parse matrix {text!r}: {exc}") from exc


def _det(rows) -> int | Fraction:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def det3(m: IntMat3) -> int:
    """Determinant by cofactor expansion along the first row."""
    return _det(m.rows)


def mat_mul(m: IntMat3, n: IntMat3) -> IntMat3:
    cols = list(zip(*n.rows))
    return IntMat3(tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in m.rows))


def adjugate(m: IntMat3) -> IntMat3:
    r = m.rows

    def minor(i, j):
        rr = [row for k, row in enumerate(r) if k != i]
        (p, q), (s, t) = [[x for k, x in enumerate(row) if k != j] for row in rr]
        return p * t - q * s

    # adj[i][j] = cofactor[j][i]
    return IntMat3(tuple(tuple((-1) ** (i + j) * minor(j, i) for j in range(3)) for i in range(3)))


def inverse_unimodular(m: IntMat3) -> IntMat3:
    d = det3(m)
    if d not in (1, -1):
        raise NotUnimodular(f"determinant {d} is not +-1")
    adj = adjugate(m)
    return adj if d == 1 else IntMat3(tuple(tuple(-x for x in r) for r in adj.rows))


def _char_coeffs(rows):
    """Coefficients (tr, sum of principal 2x2 minors, det) of a 3x3 matrix."""
    (a, b, c), (d, e, f), (g, h, i) = rows
    tr = a + e + i
    e2 = (a * e - b * d) + (a * i - c * g) + (e * i - f * h)
    return tr, e2, _det(rows)


def char_poly(m: IntMat3) -> CubicPoly:
    """``det(x*I - m)``."""
    tr, e2, det = _char_coeffs(m.rows)
    return CubicPoly(1, -tr, e2, -det)


def shifted_det_poly(rows) -> CubicPoly:
    """``det(X + s*I)`` as a cubic in ``s``, for rational or integer rows."""
    tr, e2, det = _char_coeffs(rows)
    return CubicPoly(1, tr, e2, det)


def cross(u: IntVec3, v: IntVec3) -> IntVec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: IntVec3, v: IntVec3) -> int:
    return sum(a * b for a, b in zip(u, v))


def content(v: IntVec3) -> int:
    """gcd of the coordinates (0 for the zero vector)."""
    return math.gcd(*v)


def is_primitive(v: IntVec3) -> bool:
    return content(v) == 1


def vector_order_key(v: IntVec3):
    """Deterministic search order: max-norm, then L1 norm, then position
    (earlier coordinates heavier first), positive before negative."""
    return (
        max(abs(x) for x in v),
        sum(abs(x) for x in v),
        tuple(-abs(x) for x in v),
        tuple(x < 0 for x in v),
    )


def vectors_by_norm(bound: int) -> Iterator[IntVec3]:
    """Nonzero integer vectors with max-norm <= bound, in ``vector_order_key`` order."""
    for norm in range(1, bound + 1):
        shell = [
            v for v in product(range(-norm, norm + 1), repeat=3)
            if max(abs(x) for x in v) == norm
        ]
        shell.sort(key=vector_order_key)
        yield from shell


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _solve_dot_one(n: IntVec3) -> IntVec3:
    """Some integer w with n . w == 1, for primitive n (extended gcd)."""
    g01, x, y = _xgcd(n[0], n[1])
    g, s, t = _xgcd(g01, n[2])
    w = (s * x, s * y, t)
    if g < 0:
        w = tuple(-c for c in w)
    assert dot(n, w) == 1
    return w


_SMALL_SEARCH = 2


def complete_basis(v: IntVec3, u: IntVec3) -> IntVec3:
    """Return w with ``det[v w u] = +-1`` (columns), if one exists.

    ``det[v w u] = w . (u x v)``, so a completion exists exactly when the cross
    product is primitive. Small vectors are tried first in
    :func:`vector_order_key` order; otherwise an extended-gcd solution is used.
    """
    if not any(v) or not any(u):
        raise NotCompletable("v and u must be nonzero")
    n = cross(u, v)
    if content(n) != 1:
        raise NotCompletable(f"cross product {n} is not primitive (gcd {content(n)})")
    for w in vectors_by_norm(_SMALL_SEARCH):
        if dot(n, w) in (1, -1):
            return w
    return _solve_dot_one(n)


def segment_det_cubic(m: IntMat3, n: IntMat3) -> CubicPoly:
    """``t -> det((1-t) m + t n)``, interpolated from t = 0, 1, 2, 3."""
    return interpolate([(Fraction(t), _det(linear_family(m, n, t))) for t in range(4)])


def linear_family(m: IntMat3, n: IntMat3, t: Fraction):
    """Rows of ``(1-t) m + t n`` with rational entries."""
    t = Fraction(t)
    return [[(1 - t) * a + t * b for a, b in zip(r, s)] for r, s in zip(m.rows, n.rows)]
