"""Twist moves, conjugations and replayable derivation certificates."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .cs import NEGATE_MIDDLE, StdForm, cs_failures
from .errors import (
    CslabError,
    InvalidMoveShape,
    NotUnimodular,
    NotUnimodularConjugator,
    PreconditionE0,
    TraceUnreachable,
)
from .linalg import IntMat3, det3, inverse_unimodular, mat_mul, parse_matrix

DELTA = IntMat3(((1, -1, 0), (0, 1, 0), (0, 1, 1)))
DELTA0 = IntMat3(((1, 0, 1), (0, 1, -2), (0, 0, 1)))

E3 = (0, 0, 1)
DELTA0_COLUMN = (1, -1, 0)

KINDS = (
    "LeftDelta",
    "RightDelta",
    "LeftDelta0",
    "RightDelta0",
    "Conjugate",
    "ElemConj",
    "NegateMiddle",
    "Invert",
)


def delta_power(k: int) -> IntMat3:
    # DELTA - I squares to zero, so the power is linear in k.
    return IntMat3(((1, -k, 0), (0, 1, 0), (0, k, 1)))


def delta0_power(k: int) -> IntMat3:
    return IntMat3(((1, 0, k), (0, 1, -2 * k), (0, 0, 1)))


def elementary(i: int, j: int, k: int) -> IntMat3:
    """``I + k E_{j,i}`` (1-based): left multiplication adds k * row i to row j."""
    rows = [[int(r == c) for c in range(3)] for r in range(3)]
    rows[j - 1][i - 1] += k
    return IntMat3.of(rows)


@dataclass(frozen=True)
class Move:
    """One symbolic step. ``i``/``j`` are 1-based row indices for ``ElemConj``."""

    kind: str
    k: int = 0
    i: int = 0
    j: int = 0
    p: Optional[IntMat3] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.kind == "Conjugate" and self.p is None:
            raise ValueError("Conjugate needs a matrix")
        if self.kind == "ElemConj" and (
            self.i not in (1, 2, 3) or self.j not in (1, 2, 3) or self.i == self.j
        ):
            raise ValueError(f"ElemConj needs distinct rows in 1..3, got {self.i}, {self.j}")

    @classmethod
    def left_delta(cls, k: int) -> "Move":
        return cls("LeftDelta", k=k)

    @classmethod
    def right_delta(cls, k: int) -> "Move":
        return cls("RightDelta", k=k)

    @classmethod
    def left_delta0(cls, k: int) -> "Move":
        return cls("LeftDelta0", k=k)

    @classmethod
    def right_delta0(cls, k: int) -> "Move":
        return cls("RightDelta0", k=k)

    @classmethod
    def conjugate(cls, p: IntMat3) -> "Move":
        return cls("Conjugate", p=p)

    @classmethod
    def elem(cls, i: int, j: int, k: int) -> "Move":
        return cls("ElemConj", k=k, i=i, j=j)

    def to_json(self) -> dict:
        if self.kind in ("LeftDelta", "RightDelta", "LeftDelta0", "RightDelta0"):
            return {"kind": self.kind, "k": self.k}
        if self.kind == "Conjugate":
            return {"kind": self.kind, "P": self.p.to_list()}
        if self.kind == "ElemConj":
            return {"kind": self.kind, "i": self.i, "j": self.j, "k": self.k}
        return {"kind": self.kind}

    @classmethod
    def from_json(cls, obj: dict) -> "Move":
        kind = obj["kind"]
        if kind == "Conjugate":
            return cls(kind, p=_matrix_from_json(obj["P"]))
        if kind == "ElemConj":
            return cls(kind, k=int(obj["k"]), i=int(obj["i"]), j=int(obj["j"]))
        return cls(kind, k=int(obj.get("k", 0)))

    def __str__(self) -> str:
        if self.kind == "Conjugate":
            return f"Conjugate({self.p.to_text()})"
        if self.kind == "ElemConj":
            return f"ElemConj(row{self.i} -> row{self.j}, k={self.k})"
        if self.kind in ("NegateMiddle", "Invert"):
            return self.kind
        return f"{self.kind}({self.k})"


def _matrix_from_json(obj) -> IntMat3:
    if isinstance(obj, str):
        return parse_matrix(obj)
    return IntMat3.of(obj)


def conjugate(m: IntMat3, p: IntMat3) -> IntMat3:
    """``P M P^-1``."""
    try:
        p_inv = inverse_unimodular(p)
    except NotUnimodular as exc:
        raise NotUnimodularConjugator(str(exc)) from None
    return mat_mul(mat_mul(p, m), p_inv)


def apply_move(m: IntMat3, mv: Move) -> IntMat3:
    kind = mv.kind
    if kind in ("LeftDelta", "RightDelta"):
        if m.col(0) != E3:
            raise InvalidMoveShape(f"{kind} needs first column (0,0,1), got {m.col(0)}")
        d = delta_power(mv.k)
        return mat_mul(d, m) if kind == "LeftDelta" else mat_mul(m, d)
    if kind in ("LeftDelta0", "RightDelta0"):
        if m.col(1) != DELTA0_COLUMN:
            raise InvalidMoveShape(f"{kind} needs second column (1,-1,0), got {m.col(1)}")
        d = delta0_power(mv.k)
        return mat_mul(d, m) if kind == "LeftDelta0" else mat_mul(m, d)
    if kind == "Conjugate":
        return conjugate(m, mv.p)
    if kind == "ElemConj":
        return conjugate(m, elementary(mv.i, mv.j, mv.k))
    if kind == "NegateMiddle":
        return conjugate(m, NEGATE_MIDDLE)
    if kind == "Invert":
        return inverse_unimodular(m)
    raise AssertionError(kind)


@dataclass(frozen=True)
class Derivation:
    initial: IntMat3
    steps: Tuple[Tuple[Move, IntMat3], ...] = ()
    claims: Tuple[dict, ...] = ()

    @property
    def final(self) -> IntMat3:
        return self.steps[-1][1] if self.steps else self.initial

    @property
    def matrices(self) -> List[IntMat3]:
        return [self.initial] + [m for _, m in self.steps]

    @property
    def moves(self) -> List[Move]:
        return [mv for mv, _ in self.steps]

    def then(self, *moves: Move) -> "Derivation":
        """A new derivation extended by ``moves``, each applied to the current end."""
        steps = list(self.steps)
        cur = self.final
        for mv in moves:
            cur = apply_move(cur, mv)
            steps.append((mv, cur))
        return Derivation(self.initial, tuple(steps), self.claims)

    def extend(self, other: "Derivation") -> "Derivation":
        if other.initial != self.final:
            raise ValueError("derivations do not chain")
        return Derivation(self.initial, self.steps + other.steps, self.claims + other.claims)

    def with_claim(self, claim: dict) -> "Derivation":
        return Derivation(self.initial, self.steps, self.claims + (claim,))

    def to_json(self) -> dict:
        return {
            "initial": self.initial.to_list(),
            "steps": [{"move": mv.to_json(), "result": m.to_list()} for mv, m in self.steps],
            "claims": [dict(c) for c in self.claims],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Derivation":
        steps = tuple(
            (Move.from_json(s["move"]), _matrix_from_json(s["result"])) for s in obj.get("steps", [])
        )
        return cls(_matrix_from_json(obj["initial"]), steps, tuple(obj.get("claims", [])))


@dataclass
class VerifyResult:
    ok: bool
    failed_step: Optional[int] = None
    reason: str = ""
    flags: List[dict] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _anti_cs(m: IntMat3) -> bool:
    return det3(m) == 1 and det3(m - IntMat3.identity()) == -1


def verify_derivation(d: Derivation) -> VerifyResult:
    """Replay every step; ``failed_step`` is 0 for the initial matrix, else 1-based."""
    flags = [c for c in d.claims if c.get("tag") == "number-theoretic"]
    bad = cs_failures(d.initial)
    # A leading Invert may start from the det(A - I) = -1 sign.
    if bad and not (d.steps and d.steps[0][0].kind == "Invert" and _anti_cs(d.initial)):
        return VerifyResult(False, 0, "initial matrix is not CS: " + "; ".join(bad), flags)
    cur = d.initial
    for n, (mv, recorded) in enumerate(d.steps, start=1):
        try:
            cur = apply_move(cur, mv)
        except CslabError as exc:
            return VerifyResult(False, n, f"{mv}: {exc}", flags)
        if cur != recorded:
            return VerifyResult(False, n, f"{mv}: recorded result differs from replay", flags)
        bad = cs_failures(cur)
        if bad:
            return VerifyResult(False, n, f"{mv}: result is not CS: " + "; ".join(bad), flags)
    return VerifyResult(True, None, "", flags)


def adjust_trace(s: StdForm, target: int) -> Derivation:
    """Change the trace to ``target`` by one ``LeftDelta`` (moves f by k*d)."""
    diff = target - s.trace
    if diff % s.d:
        raise TraceUnreachable(f"target {target} is not congruent to trace {s.trace} mod {s.d}")
    k = diff // s.d
    d = Derivation(s.matrix())
    if k:
        d = d.then(Move.left_delta(k))
    return d.with_claim({"tag": "trace-adjusted", "from": s.trace, "to": target})


def _reset_e(m: IntMat3) -> List[Move]:
    e = m[2, 1]
    return [Move.elem(2, 1, e)] if e else []


def move_i(s: StdForm, k: int) -> Derivation:
    """``(a, c) -> (a, c + k a)`` keeping standard form with e = 0."""
    if s.e != 0:
        raise PreconditionE0(f"move (i) needs e = 0, got e = {s.e}")
    d = Derivation(s.matrix())
    if k == 0:
        return d
    d = d.then(Move.elem(1, 2, k))
    # Clear the first column above the pivot using row 3; the paired column
    # operation only touches column 3.
    for row in (1, 2):
        x = d.final[row - 1, 0]
        if x:
            d = d.then(Move.elem(3, row, -x))
    return d.then(*_reset_e(d.final))


def move_ii(s: StdForm, k: int) -> Derivation:
    """``(a, c) -> (a + k c (c-1), c)`` keeping standard form with e = 0."""
    if s.e != 0:
        raise PreconditionE0(f"move (ii) needs e = 0, got e = {s.e}")
    d = Derivation(s.matrix())
    if k == 0:
        return d
    d = d.then(Move.left_delta(k))
    return d.then(*_reset_e(d.final))

