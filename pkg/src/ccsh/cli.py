"""``ccsh``: command-line access to the workbench.

Exit status: 0 success / equivalent / proved, 1 inequivalent / refuted,
2 usage error (bad syntax, bounds, open terms), 3 internal error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .axioms import check_certificate
from .decompose import (BoundError, enumerate_universe, factorize, is_prime,
                        local_universe, uniqueness_audit)
from .equivalence import (MODES, SPLIT2, Equivalent, EquivalentStates, bisimulation,
                          distinguish, formula_to_json)
from .families import gen_en, gen_pn
from .normalform import normalize
from .prover import AbsorptionError, Proved, prove_equal
from .semantics import OpenTermError, build_lts, depth
from .syntax import ParseError, parse, parse_file, render
from .syntax import names as term_names
from .terms import size

EXIT_OK, EXIT_NO, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _out(args, data, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _alphabet(args):
    if not args.alphabet:
        return None
    return [n.strip() for n in args.alphabet.split(",") if n.strip()]


def _terms(args, count: int | None = None):
    alphabet = _alphabet(args)
    if args.file:
        terms = parse_file(args.file, alphabet)
        if args.terms:
            raise UsageError("give terms either positionally or with --file, not both")
    else:
        terms = [parse(t, alphabet) for t in args.terms]
    if count is not None and len(terms) != count:
        raise UsageError(f"expected {count} term(s), got {len(terms)}")
    if not terms:
        raise UsageError("no terms given")
    return terms


def _range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N..M, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise argparse.ArgumentTypeError(f"bad range {text!r}")
    return lo, hi


def _ast(t):
    kind = type(t).__name__
    if hasattr(t, "action"):
        return [kind, t.action, _ast(t.body)]
    if hasattr(t, "summands"):
        return [kind] + [_ast(s) for s in t.summands]
    if hasattr(t, "left"):
        return [kind, _ast(t.left), _ast(t.right)]
    return [kind]


# ---------------------------------------------------------------- commands

def cmd_parse(args) -> int:
    for t in _terms(args):
        info = {"term": render(t), "size": size(t), "process": t.process, "ast": _ast(t)}
        if t.closed:
            info["depth"] = depth(t)
        kind = "process" if t.process else "state"
        extra = f" depth={info['depth']}" if "depth" in info else ""
        _out(args, info, f"{render(t)}\t{kind} size={info['size']}{extra}")
    return EXIT_OK


def cmd_fmt(args) -> int:
    for t in _terms(args):
        _out(args, {"term": render(t)}, render(t))
    return EXIT_OK


def cmd_lts(args) -> int:
    from .equivalence import event_filter
    lts = build_lts(_terms(args), event_filter(args.mode))
    if args.json:
        print(lts.to_json())
        return EXIT_OK
    for i, s in enumerate(lts.states):
        mark = "*" if i in lts.roots else " "
        print(f"{mark}{i}: {render(s)}")
    for i, e, j in lts.transitions:
        print(f"  {i} --{e}--> {j}")
    return EXIT_OK


def cmd_bisim(args) -> int:
    p, q = _terms(args, 2)
    result = bisimulation(p, q, args.mode)
    same = isinstance(result, Equivalent)
    data = {"equivalent": same, "mode": args.mode, "evidence": result.to_json()}
    _out(args, data, f"{'bisimilar' if same else 'not bisimilar'} ({args.mode})")
    return EXIT_OK if same else EXIT_NO


def cmd_distinguish(args) -> int:
    p, q = _terms(args, 2)
    try:
        d = distinguish(p, q, args.mode)
    except EquivalentStates:
        _out(args, {"equivalent": True, "mode": args.mode, "evidence": None},
             f"equivalent ({args.mode})")
        return EXIT_OK
    data = {"equivalent": False, "mode": args.mode, "evidence": d.to_json()}
    side = render(p) if d.holds_for == "left" else render(q)
    _out(args, data, f"{json.dumps(formula_to_json(d.formula))} holds for {side}")
    return EXIT_NO


def cmd_normalize(args) -> int:
    for t in _terms(args):
        nf, cert = normalize(t)
        out = render(nf.to_process())
        data = {"term": render(t), "normal_form": out}
        if args.emit_proof:
            data["certificate"] = cert.to_json()
        text = out
        if args.emit_proof:
            text += "\n" + cert.dumps()
        _out(args, data, text)
    return EXIT_OK


def cmd_prove(args) -> int:
    p, q = _terms(args, 2)
    result = prove_equal(p, q)
    if isinstance(result, Proved):
        cert = result.cert
        if not check_certificate(cert):
            raise AbsorptionError("produced certificate does not replay")
        data = {"result": "proved", "steps": len(cert.steps), "certificate": cert.to_json()}
        text = f"proved in {len(cert.steps)} steps"
        if args.emit_proof:
            text += "\n" + cert.dumps()
        _out(args, data, text)
        return EXIT_OK
    ev = result.evidence
    data = {"result": "refuted", **ev.to_json()}
    _out(args, data, f"refuted: {json.dumps(formula_to_json(ev.formula))} "
                     f"holds for the {ev.holds_for} side")
    return EXIT_NO


def cmd_factor(args) -> int:
    for t in _terms(args):
        if args.max_depth is not None:
            names = _alphabet(args) or sorted(term_names(t))
            u = enumerate_universe(names, args.max_depth)
        else:
            u = local_universe(t)
        f = factorize(t, u)
        data = {"term": render(t), "prime": is_prime(t, u), **f.to_json()}
        shown = " | ".join(render(x) for x in f.terms()) or "0"
        _out(args, data, f"{render(t)} ~ {shown}" + ("  (prime)" if data["prime"] else ""))
    return EXIT_OK


def cmd_audit(args) -> int:
    if args.max_depth is None:
        raise UsageError("audit needs --max-depth")
    names = _alphabet(args) or ["a"]
    u = enumerate_universe(names, args.max_depth)
    report = uniqueness_audit(u)
    data = {"alphabet": list(u.alphabet), "max_depth": u.max_depth, **report.to_json()}
    lines = [f"{report.states} classes, {report.primes} primes, "
             f"{report.started_checked} started states checked, "
             f"{len(report.violations)} violations"]
    lines += [f"  {v}" for v in report.violations]
    _out(args, data, "\n".join(lines))
    return EXIT_OK if report.ok else EXIT_NO


def cmd_family(args) -> int:
    from .equivalence import check_en_family
    if args.pn is not None:
        lo, hi = args.pn
        for n in range(lo, hi + 1):
            p = gen_pn(n)
            _out(args, {"n": n, "p": render(p), "depth": depth(p)},
                 f"p_{n} = {render(p)}")
        return EXIT_OK
    lo, hi = args.en or (0, 4)
    ok = True
    for n in range(lo, hi + 1):
        row = check_en_family(n)
        ok &= row["ok"]
        lhs, rhs = gen_en(n)
        _out(args, row, f"e_{n}: {render(lhs)} = {render(rhs)}\n"
                        f"  strong: {row['strong']}  split2: {row['split2']}  "
                        f"as expected: {row['ok']}")
    return EXIT_OK if ok else EXIT_NO


def cmd_suite(args) -> int:
    from . import suite
    if args.paper_examples:
        rows = suite.worked_examples()
        for name, ok in rows:
            _out(args, {"example": name, "ok": ok}, f"{'PASS' if ok else 'FAIL'} {name}")
        return EXIT_OK if all(ok for _, ok in rows) else EXIT_NO
    if args.en is not None:
        lo, hi = args.en
        outcome = suite.c2_en(lo=lo, hi=hi)
        _out(args, outcome.to_json(), outcome.line())
        return EXIT_OK if outcome.ok else EXIT_NO
    overrides = suite.QUICK if args.quick else {}
    chosen = None
    if args.criteria:
        chosen = {int(x) for x in args.criteria.split(",")}
    outcomes = suite.run(chosen, overrides)
    for o in outcomes:
        _out(args, o.to_json(), o.line())
    return EXIT_OK if all(o.ok for o in outcomes) else EXIT_NO


COMMANDS = {
    "parse": (cmd_parse, "parse terms and report size and depth"),
    "fmt": (cmd_fmt, "print terms in canonical form"),
    "lts": (cmd_lts, "print the transition system of terms"),
    "bisim": (cmd_bisim, "decide bisimilarity of two terms"),
    "distinguish": (cmd_distinguish, "find a formula telling two terms apart"),
    "normalize": (cmd_normalize, "normalise closed processes"),
    "prove": (cmd_prove, "prove two processes equal or refute it"),
    "factor": (cmd_factor, "decompose a state into primes"),
    "audit": (cmd_audit, "check unique decomposition over a bounded universe"),
    "family": (cmd_family, "generate the e_n / p_n families"),
    "suite": (cmd_suite, "run the acceptance checks"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("terms", nargs="*", help="terms (or use --file)")
    common.add_argument("--file", help="read terms from a file, one per line")
    common.add_argument("--alphabet", help="comma-separated names, e.g. a,b")
    common.add_argument("--mode", choices=MODES, default=SPLIT2)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--emit-proof", action="store_true",
                        help="include certificates in the output")
    common.add_argument("--max-depth", type=int)
    common.add_argument("--en", type=_range, metavar="N..M")

    parser = argparse.ArgumentParser(prog="ccsh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (fn, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        if name == "family":
            p.add_argument("--pn", type=_range, metavar="N..M")
        if name == "suite":
            p.add_argument("--quick", action="store_true")
            p.add_argument("--paper-examples", action="store_true")
            p.add_argument("--criteria", help="comma-separated criterion numbers")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParseError, BoundError, OpenTermError, OSError) as exc:
        print(f"ccsh: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AbsorptionError, RuntimeError) as exc:
        print(f"ccsh: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
