"""Displayed matrix identities, re-run as named golden checks.

Each check reads its matrices from :data:`FIXTURES`, so a test can perturb a
single fixture (``broken=...``) and watch the corresponding check fail.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from .cs import CsMatrix, am_matrix, am_std_form, is_cs_matrix, to_standard_form
from .linalg import IntMat3, char_poly, inverse_unimodular, mat_mul
from .moves import Derivation, Move, adjust_trace, conjugate, verify_derivation
from .poly import CubicPoly
from .straightening import MatLoop, homotopy_straightenable, loop_winding, verify_framing_swap

M = IntMat3.of

FIXTURES: Dict[str, IntMat3] = {
    "sig0.A": M([[0, -1, -2], [0, -1, -3], [1, 2, 5]]),
    "sig0.step1": M([[0, 1, 4], [0, -1, -3], [1, 0, -1]]),
    "sig0.step2": M([[0, 1, 0], [0, -1, 1], [1, 0, 1]]),
    "sig0.step3": M([[0, 1, 0], [0, 1, 1], [1, 0, 1]]),
    "sig0.B": M([[0, -1, -2], [0, 1, 1], [1, 2, 3]]),
    "sig0.C": M([[2, 1, 2], [0, -1, -1], [-1, 0, -1]]),
    "sig0.C_inv": M([[1, 1, 1], [1, 0, 2], [-1, -1, -2]]),
    "am_b.X": M([[0, -5, -8], [0, 2, 3], [1, 0, -7]]),
    "am_b.trace1": M([[0, -9, -14], [0, 2, 3], [1, 4, -1]]),
    "am_b.left": M([[-1, -4, 1], [1, 5, 1], [0, 0, -1]]),
    "am_b.right": M([[-5, -4, -9], [1, 1, 2], [0, 0, -1]]),
}

SIG0_MOVES = (Move.left_delta(2), Move.right_delta0(2), Move.right_delta(2), Move.left_delta(2))
SIG0_HOMOTOPY = {
    "c3": CubicPoly(0, 0, 0, 1),
    "c2": CubicPoly(0, 0, 0, 4),
    "c1": CubicPoly(0, -4, 4, 3),
    "c0": CubicPoly(0, 0, 0, 1),
}
SIG0_PROJECTION = [(-1, -1), (1, -1), (1, -1), (1, 1), (-1, 1)]
GROUPS = ("am_a", "am_b", "sig0", "standard_form")


@dataclass
class CheckResult:
    name: str
    group: str
    ok: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"check": self.name, "group": self.group, "ok": self.ok, "detail": self.detail}


def sig0_chain(fx: Dict[str, IntMat3]) -> Derivation:
    return Derivation(fx["sig0.A"]).then(*SIG0_MOVES)


def am_a_trace2(m: int) -> IntMat3:
    return M([[0, m + 1, m], [0, 1, 1], [1, -m, 1]])


def _am_a(fx, rng) -> List[CheckResult]:
    out = []
    for m in range(-10, 11):
        d = adjust_trace(am_std_form(m), 2)
        ok = d.final == am_a_trace2(m) and d.moves == ([Move.left_delta(-m)] if m else [])
        d = d.then(Move.elem(2, 1, -m)) if m else d
        ok = ok and d.final == am_matrix(0) and verify_derivation(d).ok
        out.append(CheckResult(f"am_a.m={m}", "am_a", ok))
    return out


def _am_b(fx, rng) -> List[CheckResult]:
    x, t1 = fx["am_b.X"], fx["am_b.trace1"]
    left, right = fx["am_b.left"], fx["am_b.right"]
    d = Derivation(x).then(Move.left_delta(2))
    return [
        CheckResult("am_b.cs", "am_b", is_cs_matrix(x) and x.trace == -5),
        CheckResult("am_b.trace_to_1", "am_b", d.final == t1),
        CheckResult("am_b.triple_product", "am_b", mat_mul(mat_mul(left, t1), right) == am_matrix(-1)),
        CheckResult("am_b.inverse_pair", "am_b", mat_mul(left, right) == IntMat3.identity()),
    ]


def _sig0(fx, rng) -> List[CheckResult]:
    a, b, c, c_inv = fx["sig0.A"], fx["sig0.B"], fx["sig0.C"], fx["sig0.C_inv"]
    chain = sig0_chain(fx)
    shown = [fx[k] for k in ("sig0.A", "sig0.step1", "sig0.step2", "sig0.step3", "sig0.B")]
    out = [
        CheckResult("sig0.chain", "sig0", chain.matrices == shown and verify_derivation(chain).ok),
        CheckResult("sig0.step3_is_A0", "sig0", fx["sig0.step3"] == am_matrix(0)),
        CheckResult("sig0.traces", "sig0", a.trace == b.trace == 4),
        CheckResult(
            "sig0.conjugation",
            "sig0",
            mat_mul(c, c_inv) == IntMat3.identity() and conjugate(a, c) == b,
        ),
    ]
    try:
        ok, evidence = homotopy_straightenable(a, b)
        exact = all(getattr(evidence, k) == v for k, v in SIG0_HOMOTOPY.items())
        out.append(CheckResult("sig0.homotopy", "sig0", ok and exact))
    except Exception as exc:
        out.append(CheckResult("sig0.homotopy", "sig0", False, str(exc)))
    try:
        loop = MatLoop(tuple(shown))
        w = loop_winding(loop)
        out.append(CheckResult(
            "sig0.winding", "sig0", loop.projected() == SIG0_PROJECTION and w % 2 == 1, f"winding {w}"
        ))
    except Exception as exc:
        out.append(CheckResult("sig0.winding", "sig0", False, str(exc)))
    try:
        report = verify_framing_swap(chain, c)
        out.append(CheckResult("sig0.framing_swap", "sig0", report.verdict == "framing swap certified"))
    except Exception as exc:
        out.append(CheckResult("sig0.framing_swap", "sig0", False, str(exc)))
    return out


def random_unimodular(rng: random.Random, steps: int = 6) -> IntMat3:
    p = IntMat3.identity()
    for _ in range(steps):
        i, j = rng.sample(range(3), 2)
        rows = [[int(r == c) for c in range(3)] for r in range(3)]
        rows[j][i] = rng.choice([-1, 1])
        p = mat_mul(p, M(rows))
    return p


def _standard_form(fx, rng) -> List[CheckResult]:
    out = []
    a0 = am_matrix(0)
    out.append(CheckResult(
        "standard_form.char_poly_A0", "standard_form", char_poly(a0) == CubicPoly(1, -2, 1, -1)
    ))
    std, p = to_standard_form(CsMatrix(fx["am_b.X"]))
    out.append(CheckResult(
        "standard_form.am_b_fixed", "standard_form", std.matrix() == fx["am_b.X"] and p == IntMat3.identity()
    ))
    q = random_unimodular(rng)
    conj = conjugate(a0, q)
    std, p = to_standard_form(CsMatrix(conj))
    ok = std.trace == 2 and mat_mul(mat_mul(inverse_unimodular(p), conj), p) == std.matrix()
    out.append(CheckResult("standard_form.random_conjugate_A0", "standard_form", ok, conj.to_text()))
    return out


CHECKS: Dict[str, Callable] = {
    "am_a": _am_a,
    "am_b": _am_b,
    "sig0": _sig0,
    "standard_form": _standard_form,
}


def run_checks(
    only: Optional[List[str]] = None, broken: Optional[str] = None, seed: int = 0
) -> List[CheckResult]:
    """Run the golden checks; ``broken`` names a fixture to perturb by +1."""
    fx = dict(FIXTURES)
    if broken is not None:
        if broken not in fx:
            raise KeyError(f"unknown fixture {broken!r}")
        rows = fx[broken].to_list()
        rows[2][2] += 1
        fx[broken] = M(rows)
    rng = random.Random(seed)
    results = []
    for group in only or GROUPS:
        try:
            results.extend(CHECKS[group](fx, rng))
        except Exception as exc:
            results.append(CheckResult(f"{group}.error", group, False, f"{type(exc).__name__}: {exc}"))
    return results
