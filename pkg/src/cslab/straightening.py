"""Linear straightenings, GL+ segments and the winding parity of matrix loops."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .cs import cs_failures
from .errors import (
    DegenerateProjection,
    LoopNotClosed,
    NotCappellShaneson,
    SegmentLeavesGLPlus,
)
from .linalg import IntMat3, det3, linear_family, segment_det_cubic, shifted_det_poly
from .moves import Derivation, conjugate, verify_derivation
from .poly import CubicPoly, count_roots_in_interval, interpolate, positive_on_closed_interval


def straightening_cubic(trace: int) -> CubicPoly:
    """``s^3 + T s^2 + (T-1) s + 1``: equals ``det(A + sI)`` for a CS matrix of trace T."""
    return CubicPoly(1, trace, trace - 1, 1)


def linearly_straightenable(m: IntMat3) -> bool:
    """Whether the segment from ``m`` to ``I`` stays in GL(3, R)."""
    bad = cs_failures(m)
    if bad:
        raise NotCappellShaneson("; ".join(bad))
    return count_roots_in_interval(straightening_cubic(m.trace), 0) == 0


def segment_in_glplus(m: IntMat3, n: IntMat3) -> bool:
    if m == n:
        return det3(m) > 0
    p = segment_det_cubic(m, n)
    return p(0) > 0 and count_roots_in_interval(p, 0, 1, lo_closed=True, hi_closed=True) == 0


@dataclass(frozen=True)
class HomotopyCheck:
    """``det(B_t + sI) = c3(t) s^3 + c2(t) s^2 + c1(t) s + c0(t)`` along
    ``B_t = t B + (1-t) A``."""

    c0: CubicPoly
    c1: CubicPoly
    c2: CubicPoly
    c3: CubicPoly
    positive: Tuple[bool, bool, bool, bool]

    @property
    def conclusive(self) -> bool:
        return all(self.positive)

    def to_json(self) -> dict:
        return {
            "coefficients_in_t": {
                name: getattr(self, name).as_list() for name in ("c3", "c2", "c1", "c0")
            },
            "positive_on_unit_interval": list(self.positive),
        }


def homotopy_check(a: IntMat3, b: IntMat3) -> HomotopyCheck:
    samples = [(Fraction(t), shifted_det_poly(linear_family(a, b, t))) for t in range(4)]
    coeffs = []
    for attr in ("c0", "c1", "c2", "c3"):
        coeffs.append(interpolate([(t, getattr(q, attr)) for t, q in samples]))
    positive = tuple(positive_on_closed_interval(c, 0, 1) for c in coeffs)
    return HomotopyCheck(*coeffs, positive)


def homotopy_straightenable(a: IntMat3, b: IntMat3) -> Tuple[bool, HomotopyCheck]:
    """Sufficient test that every ``B_t`` on the segment from ``a`` to ``b`` can be
    linearly straightened: all coefficients of ``det(B_t + sI)`` positive on
    ``[0, 1]``. A ``False`` answer is inconclusive; the evidence says why."""
    for name, m in (("A", a), ("B", b)):
        bad = cs_failures(m)
        if bad:
            raise NotCappellShaneson(f"{name}: " + "; ".join(bad))
    check = homotopy_check(a, b)
    return check.conclusive, check


def projection(m: IntMat3) -> Tuple[int, int]:
    """Top two entries ``(a, c)`` of the second column."""
    return m[0, 1], m[1, 1]


def winding_number(points: Sequence[Tuple[int, int]]) -> int:
    """Winding number about the origin of the closed polygon through ``points``.

    Counts signed crossings of the positive x-axis using the half-open rule
    (an edge counts when one end has y <= 0 and the other y > 0), which is the
    same as rotating the ray infinitesimally. Raises if the origin lies on the
    polygon.
    """
    n = len(points)
    total = 0
    for i in range(n):
        (x0, y0), (x1, y1) = points[i], points[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        if cross == 0 and x0 * x1 + y0 * y1 <= 0:
            # Origin is collinear with the edge and between its ends.
            raise DegenerateProjection(f"edge {points[i]} -> {points[(i + 1) % n]} meets the origin")
        if y0 <= 0 < y1 and cross > 0:
            total += 1
        elif y1 <= 0 < y0 and cross < 0:
            total -= 1
    return total


@dataclass(frozen=True)
class MatLoop:
    vertices: Tuple[IntMat3, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("empty loop")
        for v in self.vertices:
            if v.col(0) != (0, 0, 1):
                raise ValueError(f"loop vertex {v.to_text()} must have first column (0,0,1)")
            if det3(v) <= 0:
                raise ValueError(f"loop vertex {v.to_text()} must have positive determinant")

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]

    def projected(self) -> List[Tuple[int, int]]:
        return [projection(v) for v in self.vertices]


def loop_winding(loop: MatLoop) -> int:
    """Integer winding number of the (a, c) projection of ``loop``."""
    for i, (m, n) in enumerate(loop.edges()):
        if not segment_in_glplus(m, n):
            raise SegmentLeavesGLPlus(f"edge {i} leaves GL+(3, R)")
    return winding_number(loop.projected())


def loop_winding_mod2(loop: MatLoop) -> int:
    return loop_winding(loop) % 2


@dataclass
class FramingReport:
    chain_ok: bool
    conjugation_ok: bool
    homotopy_ok: bool
    winding_number: int
    projected_vertices: List[Tuple[int, int]]
    homotopy: Optional[HomotopyCheck] = None

    @property
    def winding_mod2(self) -> int:
        return self.winding_number % 2

    @property
    def verdict(self) -> str:
        if not (self.chain_ok and self.conjugation_ok and self.homotopy_ok):
            return "checks failed"
        if self.winding_mod2 == 1:
            return "framing swap certified"
        return "no swap detected"

    def to_json(self) -> dict:
        return {
            "chain_ok": self.chain_ok,
            "conjugation_ok": self.conjugation_ok,
            "homotopy_ok": self.homotopy_ok,
            "winding_mod2": self.winding_mod2,
            "winding_number": self.winding_number,
            "obstruction_parity": self.winding_mod2,
            "verdict": self.verdict,
            "projected_vertices": [list(p) for p in self.projected_vertices],
        }


def verify_framing_swap(chain: Derivation, c: IntMat3) -> FramingReport:
    """Check a move chain from A to B plus a conjugator with ``C A C^-1 = B``.

    The loop is the chain's matrices closed by the segment from B back to A;
    its winding parity is the obstruction parity reported as the verdict.
    """
    a, b = chain.initial, chain.final
    replay = verify_derivation(chain)
    if conjugate(a, c) != b:
        raise LoopNotClosed("C A C^-1 does not equal the chain's end matrix")
    for name, m in (("A", a), ("B", b)):
        if m.trace < 0:
            raise ValueError(f"{name} has negative trace; no linear straightening")
    homotopy_ok, evidence = homotopy_straightenable(a, b)
    loop = MatLoop(tuple(chain.matrices))
    winding = loop_winding(loop)
    return FramingReport(
        chain_ok=replay.ok,
        conjugation_ok=True,
        homotopy_ok=homotopy_ok,
        winding_number=winding,
        projected_vertices=loop.projected(),
        homotopy=evidence,
    )
