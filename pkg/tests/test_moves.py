import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cslab.cs import StdForm, am_matrix, am_std_form, is_cs_matrix, validate_std_form
from cslab.errors import InvalidMoveShape, NotUnimodularConjugator, PreconditionE0, TraceUnreachable
from cslab.golden import SIG0_MOVES
from cslab.linalg import IntMat3, inverse_unimodular, mat_mul
from cslab.moves import (
    DELTA,
    DELTA0,
    Derivation,
    Move,
    adjust_trace,
    apply_move,
    conjugate,
    delta0_power,
    delta_power,
    move_i,
    move_ii,
    verify_derivation,
)

from conftest import A0, AMB, AMB_P, AMB_TRACE1, SIG0_A, SIG0_B, SIG0_C, M

I = IntMat3.identity()
STEP1 = M([[0, 1, 4], [0, -1, -3], [1, 0, -1]])
STEP2 = M([[0, 1, 0], [0, -1, 1], [1, 0, 1]])


def test_powers_match_repeated_products():
    for k in range(-4, 5):
        want_d, want_d0 = I, I
        for _ in range(abs(k)):
            want_d = mat_mul(want_d, DELTA if k > 0 else delta_power(-1))
            want_d0 = mat_mul(want_d0, DELTA0 if k > 0 else delta0_power(-1))
        assert delta_power(k) == want_d and delta0_power(k) == want_d0
    assert mat_mul(delta_power(1), delta_power(-1)) == I


def test_apply_move_examples():
    assert apply_move(SIG0_A, Move.left_delta(2)) == STEP1
    assert apply_move(STEP2, Move.right_delta(2)) == A0
    assert apply_move(SIG0_A, Move.left_delta(0)) == SIG0_A


def test_move_shape_preconditions():
    with pytest.raises(InvalidMoveShape):
        apply_move(I, Move.left_delta(1))
    with pytest.raises(InvalidMoveShape):
        apply_move(A0, Move.right_delta0(1))


def test_conjugate_examples():
    assert conjugate(AMB_TRACE1, AMB_P) == am_matrix(-1)
    assert conjugate(SIG0_A, I) == SIG0_A
    assert conjugate(SIG0_A, SIG0_C) == SIG0_B
    with pytest.raises(NotUnimodularConjugator):
        conjugate(SIG0_A, IntMat3.diag(2, 1, 1))


@given(st.integers(-30, 30), st.sampled_from(["LeftDelta", "RightDelta"]))
def test_inverse_moves_cancel(k, kind):
    m = am_matrix(3)
    there = apply_move(m, Move(kind, k=k))
    assert apply_move(there, Move(kind, k=-k)) == m
    assert is_cs_matrix(there)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(-5, 5))
def test_elem_conj_inverse(i, j, k):
    if i == j:
        return
    m = SIG0_A
    assert apply_move(apply_move(m, Move.elem(i, j, k)), Move.elem(i, j, -k)) == m


def test_adjust_trace_examples():
    d = adjust_trace(am_std_form(3), 2)
    assert d.moves == [Move.left_delta(-3)]
    assert d.final == M([[0, 4, 3], [0, 1, 1], [1, -3, 1]])
    d = adjust_trace(StdForm.from_matrix(AMB), 1)
    assert d.moves == [Move.left_delta(2)] and d.final == AMB_TRACE1
    d = adjust_trace(StdForm.from_matrix(AMB), -5)
    assert d.moves == []
    with pytest.raises(TraceUnreachable):
        adjust_trace(StdForm.from_matrix(AMB), 0)


def test_move_i_examples():
    d = move_i(StdForm.from_matrix(AMB), 1)
    s = StdForm.from_matrix(d.final)
    assert (s.a, s.c, s.e) == (-5, -3, 0)
    assert not validate_std_form(s) and verify_derivation(d).ok
    assert move_i(StdForm.from_matrix(AMB), 0).steps == ()
    s = StdForm.from_matrix(move_i(am_std_form(0), 3).final)
    assert (s.a, s.c) == (1, 4)


def test_move_ii_examples():
    d = move_ii(StdForm.from_matrix(AMB), 1)
    s = StdForm.from_matrix(d.final)
    assert (s.a, s.c, s.e) == (-3, 2, 0)
    assert verify_derivation(d).ok
    assert move_ii(StdForm.from_matrix(AMB), 0).steps == ()
    for m in (-3, 0, 4):
        for k in (-2, 5):
            s = StdForm.from_matrix(move_ii(am_std_form(m), k).final)
            assert s.a == 1 and s.c == 1


@given(st.integers(-6, 6))
def test_move_i_shifts_c_by_multiple_of_a(k):
    start = StdForm.from_matrix(AMB)
    s = StdForm.from_matrix(move_i(start, k).final)
    assert (s.a, s.c, s.e) == (start.a, start.c + k * start.a, 0)
    assert not validate_std_form(s)


def test_e0_precondition():
    with pytest.raises(PreconditionE0):
        move_i(StdForm.from_matrix(SIG0_B), 1)
    with pytest.raises(PreconditionE0):
        move_ii(StdForm.from_matrix(SIG0_B), 1)


def test_verify_derivation_examples():
    chain = Derivation(SIG0_A).then(*SIG0_MOVES)
    assert verify_derivation(chain).ok
    assert verify_derivation(Derivation(SIG0_A)).ok
    steps = list(chain.steps)
    mv, m = steps[2]
    rows = m.to_list()
    rows[1][2] += 1
    steps[2] = (mv, M(rows))
    res = verify_derivation(Derivation(SIG0_A, tuple(steps)))
    assert not res.ok and res.failed_step == 3


def test_verify_rejects_non_cs_start():
    res = verify_derivation(Derivation(I))
    assert not res.ok and res.failed_step == 0


def test_leading_invert_accepts_other_sign():
    # A0^2 has neither sign of det(A - I) = +-1; Invert must not excuse it.
    res = verify_derivation(Derivation(mat_mul(A0, A0)).then(Move("Invert")))
    assert not res.ok
    d = Derivation(inverse_unimodular(A0)).then(Move("Invert"))
    assert d.final == A0 and verify_derivation(d).ok


def test_derivation_json_round_trip():
    chain = Derivation(AMB).then(
        Move.left_delta(2), Move.conjugate(AMB_P), Move.elem(2, 1, 0), Move("NegateMiddle"),
        Move("NegateMiddle"),
    ).with_claim({"tag": "note", "text": "x"})
    text = json.dumps(chain.to_json(), sort_keys=True)
    back = Derivation.from_json(json.loads(text))
    assert back == chain
    assert json.dumps(back.to_json(), sort_keys=True) == text
    assert verify_derivation(back).ok


def test_move_json_shapes():
    assert Move.elem(2, 1, 5).to_json() == {"kind": "ElemConj", "i": 2, "j": 1, "k": 5}
    assert Move.conjugate(I).to_json() == {"kind": "Conjugate", "P": I.to_list()}
    assert Move.left_delta(-3).to_json() == {"kind": "LeftDelta", "k": -3}
    with pytest.raises(ValueError):
        Move("Twist")
    with pytest.raises(ValueError):
        Move.elem(1, 1, 2)
