"""The acceptance checks, runnable from the command line and from pytest.

Each check returns a :class:`Outcome`; a check passes when its property
holds with zero failures *and* it finishes within its time limit.
"""
from __future__ import annotations

import itertools
import random
import time
from collections import defaultdict
from dataclasses import dataclass

from . import axioms as ax
from .decompose import enumerate_universe, is_prime, uniqueness_audit
from .equivalence import (SPLIT2, STRONG, Quotient, bisim_class, bisimilar,
                          check_en_family, distinguish, formula_to_json)
from .generate import closed_terms, random_term
from .normalform import is_nf, normalize
from .prover import roundtrip_suite
from .semantics import build_lts, depth, traces, transitions
from .syntax import parse, render
from .terms import (NIL, HMerge, Nil, Par, Prefix, Started, Sum, Term, Var, complement,
                    variables)

__all__ = ["Outcome", "CRITERIA", "QUICK", "run", "worked_examples", "en_range",
           "exhaustive_soundness", "random_soundness", "sampled_pairs"]

SEED = 20240229


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: float
    detail: str

    @property
    def ok(self) -> bool:
        return self.passed and self.seconds < self.limit

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return (f"{verdict} [{self.number}] {self.name}: {self.detail} "
                f"({self.seconds:.2f}s, limit {self.limit:g}s)")

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "ok": self.ok,
                "seconds": round(self.seconds, 3), "limit": self.limit,
                "detail": self.detail}


def _timed(number: int, name: str, limit: float):
    def wrap(fn):
        def run(**kw) -> Outcome:
            t0 = time.perf_counter()
            passed, detail = fn(**kw)
            return Outcome(number, name, passed, time.perf_counter() - t0, limit, detail)
        run.number, run.name, run.limit = number, name, limit
        run.__doc__ = fn.__doc__
        return run
    return wrap


# -------------------------------------------------------------- criterion 1

@_timed(1, "worked-example regression", 1.0)
def c1_examples():
    """Three classic terms are pairwise split-2 apart; two are strongly equal."""
    terms = [parse(s) for s in ("a|b", "a|b + a.b", "a.b + b.a")]
    apart = all(not bisimilar(p, q, SPLIT2) for p, q in itertools.combinations(terms, 2))
    strong = bisimilar(terms[2], terms[0], STRONG)
    return apart and strong, f"pairwise split-2 apart={apart}, strong a.b+b.a ~ a|b={strong}"


# -------------------------------------------------------------- criterion 2

def en_range(lo: int, hi: int) -> list[dict]:
    return [check_en_family(n) for n in range(lo, hi + 1)]


@_timed(2, "e_n separation", 10.0)
def c2_en(lo: int = 0, hi: int = 4):
    """Each e_n is strongly sound and split-2 unsound, for the stated reason."""
    rows = en_range(lo, hi)
    bad = [r["n"] for r in rows if not r["ok"]]
    return not bad, f"n={lo}..{hi}, failing n: {bad or 'none'}"


# -------------------------------------------------------------- criterion 3

def _evaluate(q: Quotient, t: Term, env: dict[str, int]) -> int:
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Nil):
        return q.zero
    if isinstance(t, Prefix):
        return q.prefix(t.action, _evaluate(q, t.body, env))
    if isinstance(t, Sum):
        return q.plus(*(_evaluate(q, s, env) for s in t.summands))
    if isinstance(t, HMerge):
        return q.hmerge(_evaluate(q, t.left, env), _evaluate(q, t.right, env))
    if isinstance(t, Par):
        return q.par(_evaluate(q, t.left, env), _evaluate(q, t.right, env))
    if isinstance(t, Started):
        return q.started(t.action, _evaluate(q, t.body, env))
    raise TypeError(f"cannot evaluate {t!r}")


def _hm6_exhaustive(q: Quotient, a: str, classes: list[int]):
    """HM6 over all class combinations.

    The right side is the left side plus ``tau.(x | y | w)``, so the two
    agree iff the left side already has that tau move.  The tau moves of
    ``a.x |/ N`` are exactly ``x | n`` for the ``~a``-derivatives ``n`` of
    ``N``, so only those are computed.
    """
    co = complement(a)
    evaluations = 0
    failures = []
    derivs = {c: [d for e, d in q.sig(c) if e == co] for c in classes}
    for x, y, w in itertools.product(classes, repeat=3):
        goal = q.par(q.par(x, y), w)
        merged = q.hmerge(q.prefix(co, y), w)
        shared = any(q.par(x, d) == goal for e, d in q.sig(merged) if e == co)
        for z in classes:
            evaluations += 1
            if not (shared or any(q.par(x, d) == goal for d in derivs[z])):
                failures.append((f"HM6[{a}]", {"x": x, "y": y, "w": w, "z": z}))
    return evaluations, failures


def exhaustive_soundness(axiom_ids, pool: list[Term]):
    """Check every closing substitution drawn from ``pool``.

    Substitutions are enumerated over the bisimilarity classes of ``pool``
    and the two sides evaluated on class numbers, which by congruence
    decides every substitution whose images lie in those classes.
    Returns (substitutions covered, class evaluations, failures).
    """
    q = Quotient(SPLIT2)
    classes = sorted({q.of(t) for t in pool})
    covered = evaluations = 0
    failures = []
    for a in axiom_ids:
        eq = ax.axiom_equation(a)
        names = sorted(variables(eq.lhs) | variables(eq.rhs))
        covered += len(pool) ** len(names)
        if a.name == "HM6":
            n, bad = _hm6_exhaustive(q, a.action, classes)
            evaluations += n
            failures += bad
            continue
        for combo in itertools.product(classes, repeat=len(names)):
            env = dict(zip(names, combo))
            evaluations += 1
            if _evaluate(q, eq.lhs, env) != _evaluate(q, eq.rhs, env):
                failures.append((str(a), env))
    return covered, evaluations, failures


def random_soundness(axiom_ids, rng: random.Random, count: int, names=("a", "b")):
    failures = []
    for i in range(count):
        a = axiom_ids[i % len(axiom_ids)]
        eq = ax.axiom_equation(a)
        subst = {v: random_term(rng, names, 4)
                 for v in sorted(variables(eq.lhs) | variables(eq.rhs))}
        if not ax.soundness_sample(a, subst):
            failures.append((str(a), {k: render(v) for k, v in subst.items()}))
    return failures


@_timed(3, "axiom soundness", 120.0)
def c3_soundness(max_size: int = 4, samples: int = 500):
    """Every axiom instance is split-2 sound, exhaustively and at random."""
    ids = ax.all_axioms(["a", "b"])
    covered, evals, fails = exhaustive_soundness(ids, closed_terms(["a"], max_size))
    rfails = random_soundness(ids, random.Random(SEED), samples)
    ok = not fails and not rfails
    return ok, (f"{len(ids)} axioms; {covered} exhaustive substitutions "
                f"({evals} class evaluations), {samples} random; "
                f"failures {len(fails) + len(rfails)}")


# -------------------------------------------------------------- criterion 4

@_timed(4, "normalization contract", 120.0)
def c4_normalization(max_size: int = 5):
    """Normal forms are in NF, replay, and are bisimilar to their input."""
    terms = closed_terms(["a"], max_size)
    bad = []
    for p in terms:
        nf, cert = normalize(p)
        out = nf.to_process()
        if not (is_nf(out) and ax.check_certificate(cert) and bisimilar(p, out)):
            bad.append(render(p))
    return not bad, f"{len(terms)} terms of size <= {max_size}; failures {len(bad)}"


# -------------------------------------------------------------- criterion 5

def sampled_pairs(max_size: int, count: int, rng: random.Random):
    """Half bisimilar pairs (drawn within classes), half uniform pairs."""
    pool = closed_terms(["a"], max_size)
    by_class = defaultdict(list)
    for p in pool:
        by_class[bisim_class(p)].append(p)
    shared = sorted((c for c in by_class.values() if len(c) > 1), key=lambda c: c[0].key)
    pairs = []
    for _ in range(count // 2):
        pairs.append(tuple(rng.sample(rng.choice(shared), 2)))
    while len(pairs) < count:
        pairs.append((rng.choice(pool), rng.choice(pool)))
    return pairs


@_timed(5, "prover round trip", 300.0)
def c5_roundtrip(max_size: int = 4, big_size: int = 6, samples: int = 200):
    """The prover agrees with the bisimilarity checker on every pair."""
    universe = closed_terms(["a"], max_size)
    full = roundtrip_suite(universe)
    sampled = roundtrip_suite(None, sampled_pairs(big_size, samples, random.Random(SEED)))
    ok = full.ok and sampled.ok
    return ok, (f"{full.pairs} pairs at size <= {max_size} ({full.proved} proved), "
                f"{sampled.pairs} sampled at size <= {big_size} ({sampled.proved} proved); "
                f"mismatches {len(full.mismatches) + len(sampled.mismatches)}")


# -------------------------------------------------------------- criterion 6

@_timed(6, "derived parallel laws", 30.0)
def c6_lemmas(max_size: int = 3):
    """Unit, commutativity and associativity certificates replay."""
    terms = closed_terms(["a"], max_size)
    checked = bad = 0
    jobs = [("par-unit-r", (x,)) for x in terms] + [("par-unit-l", (x,)) for x in terms]
    jobs += [("par-comm", xy) for xy in itertools.product(terms, repeat=2)]
    jobs += [("par-assoc", xyz) for xyz in itertools.product(terms, repeat=3)]
    for kind, args in jobs:
        checked += 1
        if not ax.check_certificate(ax.derived_lemma(kind, *args)):
            bad += 1
    return not bad, f"{checked} instances over {len(terms)} terms; failures {bad}"


# -------------------------------------------------------------- criterion 7

NIL_AXIOMS = {"A4", "HM4", "M", "A1", "A2"}


@_timed(7, "nil derivations", 30.0)
def c7_nil(max_size: int = 5):
    """Processes bisimilar to 0 are provably 0 with A4, HM4 and M."""
    zero = bisim_class(NIL)
    targets = [p for p in closed_terms(["a"], max_size) if bisim_class(p) == zero]
    bad = []
    for p in targets:
        cert = ax.nil_certificate(p)
        if not (ax.check_certificate(cert) and isinstance(cert.end, Nil)
                and cert.axioms_used() <= NIL_AXIOMS):
            bad.append(render(p))
    return not bad, f"{len(targets)} processes bisimilar to 0; failures {len(bad)}"


# -------------------------------------------------------------- criterion 8

@_timed(8, "unique decomposition", 300.0)
def c8_decomposition(alphabet: str = "a", max_depth: int = 2):
    """Every state factors uniquely into primes; started states are prime."""
    u = enumerate_universe(alphabet, max_depth)
    report = uniqueness_audit(u)
    ok = report.ok and report.started_checked > 0
    return ok, (f"{report.states} classes, {report.primes} primes, "
                f"{report.started_checked} started states; violations {len(report.violations)}")


# -------------------------------------------------------------- criterion 9

@_timed(9, "semantic invariants", 60.0)
def c9_semantics(count: int = 1000, pairs: int = 500):
    """Depth decreases along transitions, adds up over |, and bisimilar
    states have the same traces."""
    rng = random.Random(SEED)
    terms = [random_term(rng, ("a", "b"), 4) for _ in range(count)]
    bad_steps = 0
    for t in terms:
        for s in build_lts([t]).states:
            bad_steps += sum(depth(u) >= depth(s) for _, u in transitions(s))
    bad_add = 0
    for _ in range(pairs):
        s, t = rng.choice(terms), rng.choice(terms)
        bad_add += depth(Par(s, t)) != depth(s) + depth(t)
    by_class = defaultdict(list)
    for t in terms:
        by_class[bisim_class(t)].append(t)
    equal_pairs = [(c[0], u) for c in by_class.values() for u in c[1:] if u != c[0]]
    bad_traces = 0
    for s, t in equal_pairs:
        if not bisimilar(s, t):
            bad_traces += 1
        elif traces(s) != traces(t):
            bad_traces += 1
    ok = not (bad_steps or bad_add or bad_traces)
    return ok, (f"{count} terms, {pairs} depth sums, {len(equal_pairs)} bisimilar pairs; "
                f"failures {bad_steps + bad_add + bad_traces}")


CRITERIA = [c1_examples, c2_en, c3_soundness, c4_normalization, c5_roundtrip,
            c6_lemmas, c7_nil, c8_decomposition, c9_semantics]


# --------------------------------------------------------- worked examples

def worked_examples() -> list[tuple[str, bool]]:
    """Worked examples taken from the source material."""
    from .decompose import local_universe
    from .prover import Refuted, prove_equal

    out = []
    ab, ab_seq, seq = (parse(s) for s in ("a|b", "a|b + a.b", "a.b + b.a"))
    out.append(("a|b, a|b+a.b, a.b+b.a pairwise apart",
                not any(bisimilar(p, q) for p, q in itertools.combinations([ab, ab_seq, seq], 2))))
    for r in en_range(0, 4):
        out.append((f"e_{r['n']} strongly sound, split-2 unsound", r["ok"]))
    out.append(("a.b+b.a and a|b refuted",
                isinstance(prove_equal(ab, seq), Refuted)))
    d = distinguish(seq, ab)
    out.append(("a.b+b.a vs a|b told apart by <S(a)><S(b)>tt",
                formula_to_json(d.formula) == ["dia", "S(a)", ["dia", "S(b)", ["t"]]]
                and d.holds_for == "right"))
    started = parse("@a.b")
    out.append(("@a.b is prime", is_prime(started, local_universe(started))))
    nf, _ = normalize(parse("a|~a"))
    out.append(("a|~a normalises with a tau summand",
                render(nf.to_process()) == "a.0 |/ (~a.0 |/ 0) + ~a.0 |/ (a.0 |/ 0) + tau.0"))
    u1 = enumerate_universe("a", 1)
    out.append(("every depth-1 state is prime",
                all(is_prime(s, u1) for s in u1.states if s != NIL)))
    return out


# smaller bounds for a fast smoke run
QUICK = {3: {"max_size": 3, "samples": 100}, 4: {"max_size": 4},
         5: {"big_size": 5, "samples": 50}, 6: {"max_size": 2},
         9: {"count": 200, "pairs": 100}}


def run(criteria=None, overrides=None) -> list[Outcome]:
    """Run the chosen criteria (all by default); ``overrides`` maps a
    criterion number to keyword arguments for it."""
    overrides = overrides or {}
    chosen = CRITERIA if criteria is None else [c for c in CRITERIA if c.number in criteria]
    return [c(**overrides.get(c.number, {})) for c in chosen]
