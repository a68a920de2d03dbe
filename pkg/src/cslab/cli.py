"""``cslab`` command line: check, standardize, certify, verify, enumerate, verify-paper.

Exit codes: 0 success, 1 verified false, 2 usage or parse error, 3 unknown.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional, Tuple

from . import golden
from .cs import DEFAULT_SEARCH_BOUND, cs_failures, normalize_sign, to_standard_form
from .errors import BadIntegerPolicy, CslabError, IntegerOverflow, MatrixParseError, SearchExhausted
from .linalg import IntMat3, char_poly, inverse_unimodular, parse_matrix
from .moves import Derivation, Move, verify_derivation
from .reduction import (
    DEFAULT_CONJ_BOUND,
    EnumBounds,
    TrivialityCertificate,
    certify_trivial,
    enumerate_std_forms,
    survivor_filter,
    verify_certificate,
)

OK, FALSE, USAGE, UNKNOWN = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _emit(args, payload: dict, human: List[str]) -> None:
    if args.format == "json":
        print(_dumps(payload))
    else:
        print("\n".join(human))


def _read_arg(text: str) -> str:
    if text.startswith("@"):
        try:
            return Path(text[1:]).read_text()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return text


def _matrix(text: str) -> IntMat3:
    return parse_matrix(_read_arg(text))


def _range(text: str) -> Tuple[int, int]:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO:HI or N, got {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("a single bound N must be >= 0")
    return -n, n


# -- commands -------------------------------------------------------------------

def cmd_check(args) -> int:
    m = _matrix(args.matrix)
    bad = cs_failures(m)
    payload = {
        "matrix": m.to_list(),
        "cs": not bad,
        "failures": bad,
        "trace": m.trace,
        "char_poly": char_poly(m).as_list(),
    }
    human = [m.to_text(), f"trace {m.trace}, char poly {char_poly(m)}"]
    if bad:
        try:
            normalize_sign(m)
            payload["inverse_is_cs"] = True
            human.append("not CS (det(A - I) = -1); its inverse is CS")
        except CslabError:
            human.append("not CS: " + "; ".join(bad))
    else:
        human.append("CS matrix")
    _emit(args, payload, human)
    return FALSE if bad else OK


def cmd_standardize(args) -> int:
    m = _matrix(args.matrix)
    cs, inverted = normalize_sign(m)
    std, p = to_standard_form(cs, args.bound)
    payload = {"std_form": std.to_json(), "P": p.to_list(), "inverted": inverted}
    human = [
        f"standard form (a,b,c,d,e,f) = {std.astuple()}",
        std.matrix().to_text(),
        "conjugator P (columns v, w, Av), std = P^-1 A P:",
        p.to_text(),
    ]
    if inverted:
        human.insert(0, "input has det(A - I) = -1; standardized its inverse")
    _emit(args, payload, human)
    return OK


def certify_matrix(m: IntMat3, search_bound: int = DEFAULT_CONJ_BOUND) -> Optional[TrivialityCertificate]:
    """Certificate starting at ``m`` itself, or ``None`` if every strategy fails."""
    cs, inverted = normalize_sign(m)
    std, p = to_standard_form(cs)
    cert = certify_trivial(std, search_bound=search_bound)
    if cert is None:
        return None
    prefix = Derivation(m)
    if inverted:
        prefix = prefix.then(Move("Invert"))
    if p != IntMat3.identity():
        prefix = prefix.then(Move.conjugate(inverse_unimodular(p)))
    d = prefix.extend(cert.derivation)
    return TrivialityCertificate(d, cert.method, cert.target_m, cert.nt_flags)


def cmd_certify(args) -> int:
    m = _matrix(args.matrix)
    cert = certify_matrix(m, args.search_bound)
    if cert is None:
        _emit(args, {"result": "unknown", "matrix": m.to_list()}, ["unknown"])
        return UNKNOWN
    body = _dumps(cert.to_json())
    if args.out:
        Path(args.out).write_text(body + "\n")
    payload = {
        "result": "certified",
        "method": cert.method,
        "target_m": cert.target_m,
        "steps": len(cert.derivation.steps),
        "nt_flags": list(cert.nt_flags),
    }
    if not args.out:
        payload["certificate"] = cert.to_json()
    human = [
        f"certified: ends at A_{cert.target_m} via {cert.method} in {len(cert.derivation.steps)} steps"
    ]
    human += [f"  {n}. {mv}" for n, mv in enumerate(cert.derivation.moves, start=1)]
    for flag in cert.nt_flags:
        human.append(f"  relies on: {flag.get('claim', flag)}")
    if args.out:
        human.append(f"written to {args.out}")
    _emit(args, payload, human)
    return OK


def cmd_verify(args) -> int:
    try:
        obj = json.loads(_read_arg("@" + args.file))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.file}: not JSON ({exc.msg})") from None
    try:
        if "method" in obj:
            res = verify_certificate(TrivialityCertificate.from_json(obj))
            ok, step, reason, flags = res.ok, res.failed_step, res.reason, res.nt_flags
            kind = "certificate"
        else:
            res = verify_derivation(Derivation.from_json(obj))
            ok, step, reason, flags = res.ok, res.failed_step, res.reason, res.flags
            kind = "derivation"
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, CslabError):
            raise
        raise UsageError(f"{args.file}: malformed {type(exc).__name__}: {exc}") from None
    payload = {"kind": kind, "ok": ok, "failed_step": step, "reason": reason, "nt_flags": flags}
    human = [f"{kind} ok" if ok else f"{kind} FAILED at step {step}: {reason}"]
    human += [f"  relies on: {f.get('claim', f)}" for f in flags]
    _emit(args, payload, human)
    return OK if ok else FALSE


def cmd_enumerate(args) -> int:
    if args.box is not None:
        c_range = e_range = f_range = (-args.box, args.box)
    else:
        c_range, e_range, f_range = args.c, args.e, args.f
    bounds = EnumBounds(c_range, e_range, f_range, args.d_bound)
    reports = []
    n = 0
    for s in enumerate_std_forms(bounds, jobs=args.jobs):
        rep = survivor_filter(s)
        if args.figures:
            reports.append(rep)
        if args.survivors_only and not rep.survivor:
            continue
        n += 1
        if args.format == "json":
            print(_dumps(rep.to_json()))
        else:
            mark = "  survivor" if rep.survivor else ""
            print(f"{s.astuple()} trace {s.trace}{mark}")
    if args.figures:
        from .plotting import plot_enumeration

        path = plot_enumeration(reports, Path(args.figures) / "enumeration.png")
        print(f"figure: {path}", file=sys.stderr)
    if args.format == "human":
        print(f"{n} forms", file=sys.stderr)
    return OK


def cmd_verify_paper(args) -> int:
    try:
        results = golden.run_checks(args.only, broken=args.break_fixture, seed=args.seed)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        for r in results:
            print(_dumps(r.to_json()))
        print(_dumps({"summary": {"total": len(results), "failed": [r.name for r in failed]}}))
    else:
        for r in results:
            line = f"{'PASS' if r.ok else 'FAIL'} {r.name}"
            print(line + (f"  ({r.detail})" if r.detail and not r.ok else ""))
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    if args.figures and (args.only is None or "sig0" in args.only):
        _sig0_figures(Path(args.figures))
    return FALSE if failed else OK


def _sig0_figures(out: Path) -> None:
    from .plotting import plot_homotopy, plot_projected_loop
    from .straightening import MatLoop, homotopy_check, loop_winding

    fx = golden.FIXTURES
    chain = golden.sig0_chain(fx)
    loop = MatLoop(tuple(chain.matrices))
    paths = [
        plot_projected_loop(loop.projected(), out / "sig0_loop.png", loop_winding(loop)),
        plot_homotopy(homotopy_check(fx["sig0.A"], fx["sig0.B"]), out / "sig0_homotopy.png"),
    ]
    for p in paths:
        print(f"figure: {p}", file=sys.stderr)


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("human", "json"), default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="cslab", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("human", "json"), default="human")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[fmt], help="is the matrix Cappell-Shaneson?")
    p.add_argument("matrix", help='"r1;r2;r3" with comma-separated entries, JSON, or @file')
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("standardize", parents=[fmt], help="conjugate into standard form")
    p.add_argument("matrix")
    p.add_argument("--bound", type=int, default=DEFAULT_SEARCH_BOUND, help="max-norm bound for v")
    p.set_defaults(func=cmd_standardize)

    p = sub.add_parser("certify", parents=[fmt], help="find a triviality certificate")
    p.add_argument("matrix")
    p.add_argument("--out", help="write the certificate JSON here")
    p.add_argument("--search-bound", type=int, default=DEFAULT_CONJ_BOUND)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("verify", parents=[fmt], help="replay a certificate or derivation file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", parents=[fmt], help="stream standard forms as JSON lines")
    p.add_argument("--c", type=_range, default=(-2, 2), metavar="LO:HI")
    p.add_argument("--e", type=_range, default=(-2, 2), metavar="LO:HI")
    p.add_argument("--f", type=_range, default=(-2, 2), metavar="LO:HI")
    p.add_argument("--box", type=int, help="shorthand for --c=-N:N --e=-N:N --f=-N:N")
    p.add_argument("--d-bound", type=int, default=60)
    p.add_argument("--survivors-only", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify-paper", parents=[fmt], help="run the golden matrix identities")
    p.add_argument("--only", action="append", choices=golden.GROUPS)
    p.add_argument("--break", dest="break_fixture", metavar="FIXTURE", help="perturb one fixture")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MatrixParseError, BadIntegerPolicy) as exc:
        print(f"cslab: error: {exc}", file=sys.stderr)
        return USAGE
    except (SearchExhausted, IntegerOverflow) as exc:
        # The computation could not finish; that says nothing either way.
        print(f"cslab: unknown: {exc}", file=sys.stderr)
        return UNKNOWN
    except CslabError as exc:
        # Valid input that fails a precondition (not CS, search exhausted, ...).
        print(f"cslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return FALSE
    except BrokenPipeError:
        # Downstream closed early (e.g. ``| head``); not an error for a stream.
        sys.stderr.close()
        return OK


if __name__ == "__main__":
    sys.exit(main())
