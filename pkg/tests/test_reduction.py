import json
from itertools import product

import pytest

from cslab.cs import StdForm, am_matrix, am_std_form, validate_std_form
from cslab.errors import BadResidue
from cslab.linalg import IntMat3, det3, inverse_unimodular, mat_mul
from cslab.moves import conjugate
from cslab.reduction import (
    EnumBounds,
    TrivialityCertificate,
    admissible_residues,
    bounded_conjugacy_search,
    certify_trivial,
    enumerate_std_forms,
    reduce_mod_a,
    reduce_mod_d,
    survivor_filter,
    verify_certificate,
)

from conftest import A0, AMB, AMB_TRACE1, EVADING_SURVIVOR, M
from oracles import brute_force_forms

I = IntMat3.identity()


def test_enumeration_matches_brute_force_oracle():
    got = [s.astuple() for s in enumerate_std_forms(EnumBounds.box(2, 60))]
    assert len(got) == len(set(got))
    assert set(got) == brute_force_forms(2, 60)


def test_enumeration_examples():
    forms = list(enumerate_std_forms(EnumBounds((1, 1), (0, 0), (1, 1), 1)))
    assert StdForm(1, 0, 1, 1, 0, 1) in forms
    assert list(enumerate_std_forms(EnumBounds((1, 0), (0, 0), (0, 0), 5))) == []


def test_enumeration_order_independent_of_jobs():
    b = EnumBounds.box(3, 40)
    serial = list(enumerate_std_forms(b, jobs=1))
    assert list(enumerate_std_forms(b, jobs=3)) == serial
    keys = [(s.c, s.e, s.f, s.d) for s in serial]
    assert keys == sorted(keys)


def test_survivor_examples():
    assert not survivor_filter(am_std_form(0)).survivor
    assert not survivor_filter(StdForm.from_matrix(AMB)).survivor
    rep = survivor_filter(StdForm(*EVADING_SURVIVOR))
    assert rep.survivor
    assert rep.to_json()["inequalities"] == {
        "abs_d": 23,
        "abs_a_plus_ce": 17,
        "abs_c_minus_half": "15/2",
        "abs_trace_minus_three_halves": "29/2",
    }


def test_survivors_in_large_box_factor_as_claimed():
    survivors = [
        r for r in map(survivor_filter, enumerate_std_forms(EnumBounds.box(8, 400))) if r.survivor
    ]
    assert survivors
    for r in survivors:
        s = r.form
        assert abs(s.c * (s.c - 1) * (s.f - 1) + 1) == r.abs_a_plus_ce * r.abs_d
        assert r.abs_a_plus_ce >= 9 and r.abs_d >= 17


def test_reduce_mod_a_examples():
    for m in (-9, 0, 4):
        cert = reduce_mod_a(am_std_form(m))
        assert cert.target_m == m and cert.derivation.steps == ()
    cert = reduce_mod_a(StdForm.from_matrix(AMB))
    assert cert is not None and verify_certificate(cert).ok


def test_reduce_mod_a_on_c4_a5_instances():
    hits = [
        s for s in enumerate_std_forms(EnumBounds((4, 4), (-6, 6), (-6, 6), 200))
        if abs(s.a + s.c * s.e) == 5
    ]
    assert hits
    for s in hits:
        cert = reduce_mod_a(s)
        assert cert is not None and verify_certificate(cert).ok


def test_reduce_mod_d_examples():
    cert = reduce_mod_d(am_std_form(7), 2)
    assert verify_certificate(cert).ok and cert.target_m == 0
    assert cert.derivation.final == A0
    cert = reduce_mod_d(StdForm.from_matrix(AMB), 1)
    assert verify_certificate(cert).ok and cert.target_m == -1
    assert cert.derivation.matrices[1] == AMB_TRACE1
    with pytest.raises(BadResidue):
        reduce_mod_d(StdForm.from_matrix(AMB), 0)
    with pytest.raises(BadResidue):
        reduce_mod_d(am_std_form(10), 10)


def test_reduce_mod_d_trace_minus_five():
    # The second trace -5 class itself, and an A_m-type form with d = 3.
    for s in (StdForm.from_matrix(AMB), am_std_form(-7)):
        cert = reduce_mod_d(s, -5, allow_nt=False)
        assert cert is not None and verify_certificate(cert).ok
        assert not cert.nt_flags


@pytest.mark.parametrize("m", range(-20, 21))
def test_certify_every_am(m):
    cert = certify_trivial(am_std_form(m))
    assert cert.target_m == m and verify_certificate(cert).ok


def test_evading_survivor_is_unknown():
    s = StdForm(*EVADING_SURVIVOR)
    assert not validate_std_form(s)
    assert admissible_residues(s) == []
    assert certify_trivial(s) is None


def test_certificate_json_round_trip_and_tamper():
    cert = certify_trivial(StdForm.from_matrix(AMB))
    text = json.dumps(cert.to_json(), sort_keys=True)
    back = TrivialityCertificate.from_json(json.loads(text))
    assert back == cert and verify_certificate(back).ok
    obj = json.loads(text)
    obj["steps"][-1]["result"][2][2] ^= 1
    assert not verify_certificate(TrivialityCertificate.from_json(obj)).ok
    obj = json.loads(text)
    obj["target_m"] += 1
    assert not verify_certificate(TrivialityCertificate.from_json(obj)).ok


def test_nt_flag_fallback_and_its_check():
    # Trace-1 form that the alternation cannot move; with the search
    # disabled (bound 0) only the flag is left.
    s = StdForm(-23, -42, -6, -11, 0, 7)
    assert reduce_mod_a(s) is None
    assert reduce_mod_d(s, 1, search_bound=0, allow_nt=False) is None
    cert = reduce_mod_d(s, 1, search_bound=0, allow_nt=True)
    assert cert.nt_flags and cert.nt_flags[0]["r"] == 1
    check = verify_certificate(cert)
    assert check.ok and check.nt_flags == list(cert.nt_flags)
    obj = cert.to_json()
    obj["nt_flags"][0]["r"] = 3
    assert not verify_certificate(TrivialityCertificate.from_json(obj)).ok
    explicit = reduce_mod_d(s, 1, search_bound=12, allow_nt=False)
    assert explicit is not None and not explicit.nt_flags and verify_certificate(explicit).ok


def small_unimodular(limit):
    for entries in product(range(-limit, limit + 1), repeat=9):
        p = M([entries[0:3], entries[3:6], entries[6:9]])
        if det3(p) in (1, -1):
            yield p


def test_conjugacy_search_examples():
    assert bounded_conjugacy_search(A0, A0, 3) == I
    assert bounded_conjugacy_search(A0, am_matrix(1), 5) is None
    p = bounded_conjugacy_search(AMB_TRACE1, am_matrix(-1), 5)
    assert p is not None and p.max_abs() <= 5
    assert conjugate(AMB_TRACE1, p) == am_matrix(-1)
    with pytest.raises(ValueError):
        bounded_conjugacy_search(A0, A0, -1)


def test_conjugacy_search_matches_brute_force_at_bound_one():
    targets = [
        conjugate(A0, M([[1, 0, 0], [1, 1, 0], [0, 0, 1]])),
        conjugate(A0, M([[0, 1, 0], [1, 0, 0], [0, 0, -1]])),
        conjugate(am_matrix(2), M([[1, 1, 0], [0, 1, 1], [0, 0, 1]])),
    ]
    sources = [A0, A0, am_matrix(2)]
    pool = list(small_unimodular(1))
    for m, n in zip(sources, targets):
        hits = [p for p in pool if mat_mul(mat_mul(p, m), inverse_unimodular(p)) == n]
        best = min(hits, key=lambda p: (p.max_abs(), sum(map(abs, p.entries())), p.entries()))
        assert bounded_conjugacy_search(m, n, 1) == best
