"""Triviality certification, bounded enumeration and conjugacy search."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, List, Optional, Tuple

import numpy as np
import sympy

from .cs import StdForm, am_matrix, recognize_am, validate_std_form
from .errors import BadResidue
from .linalg import IntMat3, char_poly, det3, inverse_unimodular, mat_mul
from .moves import Derivation, Move, adjust_trace, move_i, move_ii, verify_derivation

ADMISSIBLE_TRACES = tuple(range(-6, 10)) + (11,)
MOD_A_RESIDUES = tuple(range(-3, 5))
MAX_ITERATIONS = 10_000
DEFAULT_CONJ_BOUND = 5
# Second, wider pass before falling back to a number-theoretic flag.
WIDE_CONJ_BOUND = 24
# int64 products stay exact below this magnitude for the scan sizes used.
_NP_SAFE = 1 << 20

# The second trace -5 class, in standard form with d = 3.
TRACE_M5_SECOND_CLASS = IntMat3(((0, -5, -8), (0, 2, 3), (1, 0, -7)))
TRACE_M5_CONJUGATOR = IntMat3(((-1, -4, 1), (1, 5, 1), (0, 0, -1)))

CLASS_TABLE_SOURCE = "Aitchison-Rubenstein conjugacy class table"


def nt_unique_class_claim(r: int) -> dict:
    return {
        "tag": "number-theoretic",
        "text": f"unique conjugacy class of CS matrices with trace {r}",
        "r": r,
        "source": CLASS_TABLE_SOURCE,
    }


# -- enumeration --------------------------------------------------------------

@dataclass(frozen=True)
class EnumBounds:
    """Inclusive ranges for c, e, f and a bound on |d|."""

    c_range: Tuple[int, int]
    e_range: Tuple[int, int]
    f_range: Tuple[int, int]
    d_bound: int

    @classmethod
    def box(cls, cef: int, d_bound: int) -> "EnumBounds":
        return cls((-cef, cef), (-cef, cef), (-cef, cef), d_bound)

    def triples(self) -> Iterator[Tuple[int, int, int]]:
        return product(
            range(self.c_range[0], self.c_range[1] + 1),
            range(self.e_range[0], self.e_range[1] + 1),
            range(self.f_range[0], self.f_range[1] + 1),
        )


def signed_divisors(n: int, bound: int) -> List[int]:
    """Divisors of ``n`` (both signs) with absolute value <= bound, ascending."""
    pos = [q for q in sympy.divisors(abs(n)) if q <= bound]
    return sorted([-q for q in pos] + pos)


def forms_for_triple(c: int, e: int, f: int, d_bound: int) -> List[StdForm]:
    """All standard forms with the given ``(c, e, f)`` and ``|d| <= d_bound``."""
    k = c * (c - 1) * (f - 1) + 1
    # c(c-1) is even, so k is odd and never 0.
    assert k != 0
    out = []
    for d in signed_divisors(k, d_bound):
        a = k // d - c * e
        b = (c - 1) * (f - 1) - d * e
        s = StdForm(a, b, c, d, e, f)
        bad = validate_std_form(s)
        assert not bad, (s, bad)
        out.append(s)
    return out


def _shard(args) -> List[StdForm]:
    c, e_range, f_range, d_bound = args
    out = []
    for e in range(e_range[0], e_range[1] + 1):
        for f in range(f_range[0], f_range[1] + 1):
            out.extend(forms_for_triple(c, e, f, d_bound))
    return out


def enumerate_std_forms(bounds: EnumBounds, jobs: int = 1) -> Iterator[StdForm]:
    """Stream every standard form in ``bounds`` ordered by (c, e, f, d).

    Shards are the values of ``c``; output order does not depend on ``jobs``.
    """
    shards = [
        (c, bounds.e_range, bounds.f_range, bounds.d_bound)
        for c in range(bounds.c_range[0], bounds.c_range[1] + 1)
    ]
    if jobs <= 1 or len(shards) <= 1:
        for shard in shards:
            yield from _shard(shard)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for forms in pool.map(_shard, shards):
            yield from forms


# -- survivors ----------------------------------------------------------------

@dataclass(frozen=True)
class SurvivorReport:
    form: StdForm
    abs_d: int
    abs_a_plus_ce: int
    abs_c_minus_half: Fraction
    abs_trace_minus_three_halves: Fraction

    @property
    def survivor(self) -> bool:
        return (
            self.abs_d >= 17
            and self.abs_a_plus_ce >= 9
            and self.abs_c_minus_half > 4
            and self.abs_trace_minus_three_halves > 8
        )

    def to_json(self) -> dict:
        return {
            **self.form.to_json(),
            "survivor": self.survivor,
            "inequalities": {
                "abs_d": self.abs_d,
                "abs_a_plus_ce": self.abs_a_plus_ce,
                "abs_c_minus_half": str(self.abs_c_minus_half),
                "abs_trace_minus_three_halves": str(self.abs_trace_minus_three_halves),
            },
        }


def survivor_filter(s: StdForm) -> SurvivorReport:
    return SurvivorReport(
        form=s,
        abs_d=abs(s.d),
        abs_a_plus_ce=abs(s.a + s.c * s.e),
        abs_c_minus_half=abs(Fraction(2 * s.c - 1, 2)),
        abs_trace_minus_three_halves=abs(Fraction(2 * s.trace - 3, 2)),
    )


# -- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class TrivialityCertificate:
    derivation: Derivation
    method: str
    target_m: int
    nt_flags: Tuple[dict, ...] = ()

    def to_json(self) -> dict:
        return {
            **self.derivation.to_json(),
            "method": self.method,
            "target_m": self.target_m,
            "nt_flags": [dict(f) for f in self.nt_flags],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "TrivialityCertificate":
        return cls(
            Derivation.from_json(obj),
            obj["method"],
            int(obj["target_m"]),
            tuple(obj.get("nt_flags", [])),
        )


@dataclass
class CertificateCheck:
    ok: bool
    reason: str = ""
    failed_step: Optional[int] = None
    nt_flags: List[dict] = field(default_factory=list)


def verify_certificate(cert: TrivialityCertificate) -> CertificateCheck:
    """Replay the derivation and check where it lands.

    Without number-theoretic flags the end matrix must be recognized as
    ``A_target``. With a flag, the end must be a standard form of the flagged
    trace and the target must have that trace too.
    """
    res = verify_derivation(cert.derivation)
    flags = list(cert.nt_flags)
    if not res.ok:
        return CertificateCheck(False, res.reason, res.failed_step, flags)
    end = cert.derivation.final
    if end.col(0) != (0, 0, 1):
        return CertificateCheck(False, "end matrix is not in standard form", None, flags)
    m = recognize_am(StdForm.from_matrix(end))
    if not flags:
        if m != cert.target_m:
            return CertificateCheck(False, f"end matrix is not A_{cert.target_m}", None, flags)
        return CertificateCheck(True, "", None, flags)
    traces = {f.get("r") for f in flags}
    if traces != {end.trace} or cert.target_m + 2 != end.trace:
        return CertificateCheck(False, "number-theoretic flag does not match end trace", None, flags)
    return CertificateCheck(True, "relies on number-theoretic flag", None, flags)


def _finish_at_am(d: Derivation) -> Optional[Derivation]:
    s = StdForm.from_matrix(d.final)
    if recognize_am(s) is None:
        return None
    if s.a == -1:
        d = d.then(Move("NegateMiddle"))
    return d


def _nearest_k(x: int, y: int) -> int:
    """k minimizing |x + k y|; ties go to smaller |k|, then positive k."""
    if y == 0:
        return 0
    q = -x // y
    return min((q, q + 1), key=lambda k: (abs(x + k * y), abs(k), k < 0))


def reduce_mod_a(s: StdForm, max_iter: int = MAX_ITERATIONS) -> Optional[TrivialityCertificate]:
    """Alternate moves (i) and (ii) until ``c`` is 0 or 1, then finish at A_m.

    Returns ``None`` when the alternation stalls, cycles or hits ``max_iter``.
    """
    d = Derivation(s.matrix())
    if s.e:
        d = d.then(Move.elem(2, 1, s.e))
    seen = set()
    for _ in range(max_iter):
        cur = StdForm.from_matrix(d.final)
        if cur.c in (0, 1):
            break
        if cur.astuple() in seen:
            return None
        seen.add(cur.astuple())
        k1 = _nearest_k(cur.c, cur.a)
        if k1:
            d = d.extend(move_i(cur, k1))
            cur = StdForm.from_matrix(d.final)
            if cur.c in (0, 1):
                break
        k2 = _nearest_k(cur.a, cur.c * (cur.c - 1))
        if k2:
            d = d.extend(move_ii(cur, k2))
        if not (k1 or k2):
            return None
    else:
        return None
    cur = StdForm.from_matrix(d.final)
    if cur.c == 0:
        # Here ad = 1, so a = +-1 and move (i) with k = a lands on c = 1.
        d = d.extend(move_i(cur, cur.a))
    d = _finish_at_am(d)
    if d is None:
        return None
    return TrivialityCertificate(d, "mod-a-reduction", d.final.trace - 2)


def _mod_a_routes(s: StdForm) -> Iterator[Derivation]:
    """Prefixes arranging ``c`` into [-3, 4], modulo d or modulo a + ce."""
    for r in MOD_A_RESIDUES:
        if r != s.c and (r - s.c) % s.d == 0:
            yield Derivation(s.matrix()).then(Move.right_delta((r - s.c) // s.d))
    base = Derivation(s.matrix())
    if s.e:
        base = base.then(Move.elem(2, 1, s.e))
    a = s.a + s.c * s.e
    for r in MOD_A_RESIDUES:
        if r != s.c and (r - s.c) % a == 0:
            yield base.extend(move_i(StdForm.from_matrix(base.final), (r - s.c) // a))


def _chain(prefix: Derivation, cert: TrivialityCertificate, method: str) -> TrivialityCertificate:
    return TrivialityCertificate(prefix.extend(cert.derivation), method, cert.target_m, cert.nt_flags)


def reduce_mod_d(
    s: StdForm,
    r: int,
    *,
    search_bound: int = DEFAULT_CONJ_BOUND,
    allow_nt: bool = True,
) -> Optional[TrivialityCertificate]:
    """Move the trace to ``r`` and connect the result to ``A_{r-2}``.

    Tries, in order: the mod-a alternation, an explicit conjugator found by
    :func:`bounded_conjugacy_search`, and (unless ``allow_nt`` is false) a
    certificate flagged with the uniqueness of the trace-``r`` class.
    """
    if r not in ADMISSIBLE_TRACES:
        raise BadResidue(f"r = {r} is outside [-6, 9] and not 11")
    if (s.trace - r) % s.d:
        raise BadResidue(f"r = {r} is not congruent to trace {s.trace} mod {s.d}")
    adj = adjust_trace(s, r)
    adj_std = StdForm.from_matrix(adj.final)

    via_a = reduce_mod_a(adj_std)
    if via_a is not None:
        return _chain(adj, via_a, "mod-d-trace")

    p = bounded_conjugacy_search(adj.final, am_matrix(r - 2), search_bound)
    if p is not None:
        return TrivialityCertificate(adj.then(Move.conjugate(p)), "explicit-conjugation", r - 2)

    if r == -5:
        # Two classes here; try the non-A_m one and continue from its trace-1 form.
        p = bounded_conjugacy_search(adj.final, TRACE_M5_SECOND_CLASS, search_bound)
        if p is None:
            return None
        d = adj.then(Move.conjugate(p), Move.left_delta(2), Move.conjugate(TRACE_M5_CONJUGATOR))
        return TrivialityCertificate(d, "explicit-conjugation", -1)

    if not allow_nt:
        return None
    claim = nt_unique_class_claim(r)
    return TrivialityCertificate(adj.with_claim(claim), "mod-d-trace", r - 2, (claim,))


def admissible_residues(s: StdForm) -> List[int]:
    return [r for r in ADMISSIBLE_TRACES if (s.trace - r) % s.d == 0]


def certify_trivial(
    s: StdForm,
    *,
    search_bound: int = DEFAULT_CONJ_BOUND,
    wide_bound: int = WIDE_CONJ_BOUND,
) -> Optional[TrivialityCertificate]:
    """First certificate found by the strategies in increasing reliance on
    search and number theory; ``None`` means unknown.

    Conjugacy searches run at ``search_bound`` for every residue, then at
    ``wide_bound``; only then are number-theoretic flags allowed.
    """
    direct = _finish_at_am(Derivation(s.matrix()))
    if direct is not None:
        return TrivialityCertificate(direct, "explicit-conjugation", direct.final.trace - 2)

    cert = reduce_mod_a(s)
    if cert is not None:
        return cert
    for prefix in _mod_a_routes(s):
        cert = reduce_mod_a(StdForm.from_matrix(prefix.final))
        if cert is not None:
            return _chain(prefix, cert, "mod-a-reduction")

    residues = admissible_residues(s)
    passes = [(search_bound, False), (max(search_bound, wide_bound), False), (search_bound, True)]
    for bound, allow_nt in passes:
        for r in residues:
            cert = reduce_mod_d(s, r, search_bound=bound, allow_nt=allow_nt)
            if cert is not None:
                return cert
    return None


# -- conjugacy search -----------------------------------------------------------

def _intertwiner_basis(m: IntMat3, n: IntMat3) -> List[List[Fraction]]:
    """Rational basis (as 9-vectors, row-major P) of {P : N P = P M}."""
    rows = []
    for i, j in product(range(3), range(3)):
        coeff = [0] * 9
        for k in range(3):
            coeff[3 * k + j] += n[i, k]
            coeff[3 * i + k] -= m[k, j]
        rows.append(coeff)
    return [[Fraction(int(x.p), int(x.q)) for x in v] for v in sympy.Matrix(rows).nullspace()]


def _key(p: IntMat3):
    return (p.max_abs(), sum(abs(x) for x in p.entries()), p.entries())


def _scan(args) -> List[IntMat3]:
    """Every admissible P whose free entries take the given values."""
    numer, denom, heads, bound, m, n, rest = args
    axis = np.arange(-bound, bound + 1, dtype=object if bound > _NP_SAFE else np.int64)
    grids = np.meshgrid(np.asarray(heads, dtype=axis.dtype), *([axis] * rest), indexing="ij")
    ys = np.stack([g.ravel() for g in grids])
    dtype = object if max(abs(x) for row in numer for x in row) > _NP_SAFE else np.int64
    vals = np.asarray(numer, dtype=dtype) @ ys.astype(dtype)
    ok = np.all(vals % denom == 0, axis=0)
    vals = vals[:, ok] // denom
    vals = vals[:, np.all(np.abs(vals) <= bound, axis=0)]
    hits = []
    for col in vals.T:
        p = IntMat3.of(np.asarray(col, dtype=object).reshape(3, 3).tolist())
        if det3(p) in (1, -1) and mat_mul(mat_mul(p, m), inverse_unimodular(p)) == n:
            hits.append(p)
    return hits


def bounded_conjugacy_search(
    m: IntMat3, n: IntMat3, bound: int, jobs: int = 1
) -> Optional[IntMat3]:
    """Smallest unimodular ``P`` with entries in [-bound, bound] and
    ``P M P^-1 = N``, or ``None`` after a complete scan.

    Every solution satisfies ``N P = P M``; that solution space has a basis
    of dimension ``k`` and is parametrized by ``k`` of the nine entries, so
    scanning those entries over the box is exhaustive.
    """
    if bound < 0:
        raise ValueError("bound must be >= 0")
    if m.trace != n.trace or char_poly(m) != char_poly(n):
        return None
    if m == n:
        return IntMat3.identity()
    basis = _intertwiner_basis(m, n)
    k = len(basis)
    if k == 0:
        return None
    # 9 x k matrix; pick k rows (entries of P) that determine the rest.
    cols = sympy.Matrix([[basis[c][r] for c in range(k)] for r in range(9)])
    _, pivots = cols.T.rref()
    square = cols.extract(list(pivots), list(range(k)))
    t = cols * square.inv()
    denom = math.lcm(*(int(sympy.fraction(x)[1]) for x in t))
    numer = [[int(t[r, c] * denom) for c in range(k)] for r in range(9)]

    heads = list(range(-bound, bound + 1))
    if jobs > 1:
        chunks = [heads[i::jobs] for i in range(jobs)]
        work = [(numer, denom, ch, bound, m, n, k - 1) for ch in chunks if ch]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [p for part in pool.map(_scan, work) for p in part]
    else:
        hits = _scan((numer, denom, heads, bound, m, n, k - 1))
    return min(hits, key=_key) if hits else None

