from __future__ import annotations

from functools import lru_cache

import pytest
from hypothesis import assume, given

from ccsh.equivalence import (SPLIT2, STRONG, TT, Diamond, Equivalent, EquivalentStates,
                              Quotient, bisim_class, bisimilar, bisimulation,
                              check_en_family, check_partition, distinguish,
                              formula_from_json, formula_to_json, modal_depth,
                              satisfies, separation_round)
from ccsh.families import gen_en, gen_pn
from ccsh.semantics import build_lts, depth, traces, transitions
from ccsh.syntax import parse
from ccsh.terms import NIL, HMerge, Par, Prefix, Started, is_act_event, plus

from conftest import processes, states


@lru_cache(maxsize=None)
def naive(s, t, strong=False):
    """Direct transfer-game check; fine because the graphs are acyclic."""
    keep = (lambda e: is_act_event(e)) if strong else (lambda e: True)
    ms = [(e, u) for e, u in transitions(s) if keep(e)]
    mt = [(e, u) for e, u in transitions(t) if keep(e)]
    return (all(any(f == e and naive(u, v, strong) for f, v in mt) for e, u in ms)
            and all(any(f == e and naive(u, v, strong) for f, u in ms) for e, v in mt))


P = {k: parse(v) for k, v in {"par": "a|b", "mixed": "a|b + a.b", "seq": "a.b + b.a"}.items()}


def test_classic_terms_pairwise_apart():
    assert not bisimilar(P["par"], P["seq"])
    assert not bisimilar(P["par"], P["mixed"])
    assert not bisimilar(P["mixed"], P["seq"])


def test_interleaving_is_strongly_equal():
    assert bisimilar(P["par"], P["seq"], STRONG)
    assert naive(P["par"], P["seq"], strong=True)


def test_reflexive_on_examples():
    for p in P.values():
        assert bisimilar(p, p) and bisimilar(p, p, STRONG)


def test_distinguish_interleaving():
    d = distinguish(P["seq"], P["par"])
    assert d.holds_for == "right"
    assert d.formula == Diamond("S(a)", Diamond("S(b)", TT))
    assert satisfies(P["par"], d.formula) and not satisfies(P["seq"], d.formula)


def test_distinguish_started():
    d = distinguish(parse("@a.b"), parse("b"))
    assert d.formula == Diamond("F(a)", TT) and d.holds_for == "left"


def test_distinguish_strong_tau():
    d = distinguish(parse("tau"), NIL, STRONG)
    assert d.formula == Diamond("tau", TT) and d.holds_for == "left"


def test_distinguish_equivalent_raises():
    with pytest.raises(EquivalentStates):
        distinguish(parse("a|b"), parse("b|a"))


def test_formula_json_roundtrip():
    d = distinguish(P["mixed"], P["seq"])
    data = formula_to_json(d.formula)
    assert formula_from_json(data) == d.formula
    assert formula_to_json(Diamond("S(a)", TT)) == ["dia", "S(a)", ["t"]]


def test_bisimulation_evidence():
    ev = bisimulation(parse("a|b"), parse("b|a"))
    assert isinstance(ev, Equivalent)
    assert check_partition(ev.lts, ev.partition)
    assert not isinstance(bisimulation(P["par"], P["seq"]), Equivalent)


@pytest.mark.parametrize("n", range(5))
def test_en_family(n):
    r = check_en_family(n)
    assert r["strong"] and not r["split2"] and r["ok"]
    lhs, _ = gen_en(n)
    # the unique S(a)-derivative of the left side is @a.0 | p_n
    assert [t for e, t in transitions(lhs) if e == "S(a)"] == [Par(Started("a", NIL), gen_pn(n))]
    assert "S(~a)" in r["candidate_events"]
    assert r["target_events"] == ["F(a)"]


def test_en_zero_shape():
    lhs, rhs = gen_en(0)
    assert lhs == parse("a.0 |/ ~a.0")
    assert rhs == parse("a.~a.0 + tau.0")


@given(states(), states())
def test_engines_agree(s, t):
    expected = naive(s, t)
    assert bisimilar(s, t) == expected
    assert (bisim_class(s) == bisim_class(t)) == expected
    assert bisimilar(s, t, STRONG) == naive(s, t, strong=True)


@given(processes(), processes())
def test_split2_refines_strong(p, q):
    if bisimilar(p, q):
        assert bisimilar(p, q, STRONG)


@given(processes(5))
def test_zero_unit_keeps_traces(p):
    q = plus(p, NIL)
    assert bisimilar(p, q)
    assert traces(p) == traces(q) and depth(p) == depth(q)


def _bisimilar_pairs(terms):
    groups = {}
    for t in terms:
        groups.setdefault(bisim_class(t), []).append(t)
    return [(g[0], u) for g in groups.values() for u in g[1:]]


def test_bisimilar_pairs_share_traces():
    from ccsh.generate import closed_terms
    pairs = _bisimilar_pairs(closed_terms(["a"], 5))
    assert len(pairs) > 100
    for s, t in pairs:
        assert traces(s) == traces(t)


@given(processes(4), processes(4), processes(4))
def test_equivalence_relation(p, q, r):
    assert bisimilar(p, p)
    assert bisimilar(p, q) == bisimilar(q, p)
    if bisimilar(p, q) and bisimilar(q, r):
        assert bisimilar(p, r)


@given(processes(4), processes(4))
def test_congruence(p, q):
    for p2 in (plus(p, NIL), plus(p, p), Par(p, NIL)):
        assert bisimilar(p, p2)
        assert bisimilar(plus(p, q), plus(p2, q))
        assert bisimilar(Prefix("a", p), Prefix("a", p2))
        assert bisimilar(Prefix("tau", p), Prefix("tau", p2))
        assert bisimilar(HMerge(p, q), HMerge(p2, q))
        assert bisimilar(HMerge(q, p), HMerge(q, p2))
        assert bisimilar(Par(q, p), Par(q, p2))


@given(states(), states(), states())
def test_state_monoid_laws(s, t, u):
    assert bisimilar(Par(s, NIL), s)
    assert bisimilar(Par(s, t), Par(t, s))
    assert bisimilar(Par(Par(s, t), u), Par(s, Par(t, u)))


@given(states(), states())
def test_formula_depth_within_refinement_rounds(s, t):
    assume(not bisimilar(s, t))
    d = distinguish(s, t)
    yes, no = (s, t) if d.holds_for == "left" else (t, s)
    assert satisfies(yes, d.formula) and not satisfies(no, d.formula)
    lts = build_lts([s, t])
    rounds = separation_round(lts, *lts.roots)
    assert rounds is not None and modal_depth(d.formula) <= rounds


@given(states(), states())
def test_distinguish_is_deterministic(s, t):
    assume(not bisimilar(s, t))
    assert distinguish(s, t) == distinguish(s, t)


@given(states(4), states(4))
def test_quotient_matches_terms(s, t):
    q = Quotient()
    cs, ct = q.of(s), q.of(t)
    assert q.par(cs, ct) == q.of(Par(s, t))
    if s.process and t.process:
        assert q.plus(cs, ct) == q.of(plus(s, t))
        assert q.hmerge(cs, ct) == q.of(HMerge(s, t))
        for a in ("tau", "a", "~b"):
            assert q.prefix(a, cs) == q.of(Prefix(a, s))
        assert q.started("a", cs) == q.of(Started("a", s))
    assert q.depth(cs) == depth(s)


@given(states(4), states(4))
def test_quotient_strong_matches_terms(s, t):
    q = Quotient(STRONG)
    assert q.par(q.of(s), q.of(t)) == q.of(Par(s, t))
    if s.process:
        assert q.prefix("a", q.of(s)) == q.of(Prefix("a", s))
