import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cslab.cs import am_matrix
from cslab.errors import DegenerateProjection, LoopNotClosed, NotCappellShaneson, SegmentLeavesGLPlus
from cslab.golden import SIG0_MOVES
from cslab.linalg import IntMat3, shifted_det_poly
from cslab.moves import Derivation
from cslab.poly import CubicPoly
from cslab.straightening import (
    MatLoop,
    homotopy_straightenable,
    linearly_straightenable,
    loop_winding,
    loop_winding_mod2,
    segment_in_glplus,
    straightening_cubic,
    verify_framing_swap,
    winding_number,
)

from conftest import A0, SIG0_A, SIG0_B, SIG0_C, M

I = IntMat3.identity()
SIG0_LOOP = MatLoop(tuple(Derivation(SIG0_A).then(*SIG0_MOVES).matrices))


def test_straightening_cubic_is_shifted_determinant():
    for m in range(-8, 9):
        assert shifted_det_poly(am_matrix(m).rows) == straightening_cubic(m + 2)


def test_linearly_straightenable_examples():
    assert linearly_straightenable(SIG0_A)
    assert not linearly_straightenable(am_matrix(-3))  # trace -1
    assert linearly_straightenable(A0)
    with pytest.raises(NotCappellShaneson):
        linearly_straightenable(I)


@pytest.mark.parametrize("m", range(-40, 41))
def test_straightenable_iff_trace_nonnegative(m):
    assert linearly_straightenable(am_matrix(m)) == (m + 2 >= 0)


def test_half_is_a_witness_for_negative_trace():
    for t in range(-30, 0):
        assert straightening_cubic(t)(Fraction(1, 2)) < 0


def test_segment_examples():
    assert segment_in_glplus(A0, A0)
    assert not segment_in_glplus(I, IntMat3.diag(-1, -1, 1))
    for m, n in SIG0_LOOP.edges():
        assert segment_in_glplus(m, n)


def test_homotopy_examples():
    ok, ev = homotopy_straightenable(SIG0_A, SIG0_B)
    assert ok
    assert (ev.c3, ev.c2, ev.c1, ev.c0) == (
        CubicPoly(0, 0, 0, 1), CubicPoly(0, 0, 0, 4), CubicPoly(0, -4, 4, 3), CubicPoly(0, 0, 0, 1)
    )
    ok, ev = homotopy_straightenable(A0, A0)
    assert ok and (ev.c2, ev.c1, ev.c0) == (CubicPoly(0, 0, 0, 2), CubicPoly(0, 0, 0, 1), CubicPoly(0, 0, 0, 1))
    neg = am_matrix(-3)
    ok, ev = homotopy_straightenable(neg, neg)
    assert not ok and ev.positive == (True, False, False, True)  # c0..c3


def test_winding_examples():
    assert SIG0_LOOP.projected() == [(-1, -1), (1, -1), (1, -1), (1, 1), (-1, 1)]
    assert loop_winding_mod2(SIG0_LOOP) == 1
    assert loop_winding_mod2(MatLoop((A0, A0, A0))) == 0
    assert winding_number([(1, 0), (0, 1), (-1, 0), (0, -1)]) == 1
    assert winding_number([(1, 0), (0, -1), (-1, 0), (0, 1)]) == -1


def test_winding_rejects_origin_on_polygon():
    with pytest.raises(DegenerateProjection):
        winding_number([(-1, 0), (1, 0), (0, 1)])
    with pytest.raises(DegenerateProjection):
        winding_number([(0, 0), (1, 0), (0, 1)])


def test_loop_rejects_bad_segment():
    with pytest.raises(SegmentLeavesGLPlus):
        loop_winding(MatLoop((M([[0, 1, 0], [0, 0, 1], [1, 0, 0]]), M([[0, -1, 0], [0, 0, -1], [1, 0, 0]]))))
    with pytest.raises(ValueError):
        MatLoop((I,))


polygons = st.lists(
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=3, max_size=9
)


def angle_oracle(points):
    """Winding number as the summed turning angle (float, rounded)."""
    total = 0.0
    n = len(points)
    for i in range(n):
        (x0, y0), (x1, y1) = points[i], points[(i + 1) % n]
        total += math.atan2(x0 * y1 - x1 * y0, x0 * x1 + y0 * y1)
    return round(total / (2 * math.pi))


@given(polygons, st.integers(0, 8), st.booleans())
def test_winding_invariant_under_rotation_and_reversal(points, shift, flip):
    try:
        w = winding_number(points)
    except DegenerateProjection:
        return
    assert w == angle_oracle(points)
    shift %= len(points)
    rotated = points[shift:] + points[:shift]
    assert winding_number(rotated) == w
    if flip:
        assert winding_number(rotated[::-1]) == -w


def test_framing_swap_examples():
    chain = Derivation(SIG0_A).then(*SIG0_MOVES)
    report = verify_framing_swap(chain, SIG0_C)
    assert report.verdict == "framing swap certified" and report.winding_number == 1
    body = report.to_json()
    assert body["obstruction_parity"] == 1 and body["chain_ok"] and body["homotopy_ok"]
    trivial = verify_framing_swap(Derivation(SIG0_A), I)
    assert trivial.verdict == "no swap detected" and trivial.winding_number == 0
    with pytest.raises(LoopNotClosed):
        verify_framing_swap(chain, I)
