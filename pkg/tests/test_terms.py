from __future__ import annotations

import pytest
from hypothesis import given

from ccsh.terms import (NIL, TAU, HMerge, Par, Prefix, Started, Sum, UnboundVariable,
                        Var, ac_canonical, apply_subst, complement, finish,
                        is_act_event, plus, size, start, subterm, variables)
from ccsh.syntax import parse, render

from conftest import processes, states


def test_size_examples():
    assert size(NIL) == 1
    assert size(parse("a.0")) == 2
    assert size(parse("a.0 | b.0")) == 5
    assert size(parse("a + b + c")) == 8


def test_size_ignores_sum_bracketing():
    a, b, c = (parse(x) for x in "abc")
    assert size(plus(plus(a, b), c)) == size(plus(a, plus(b, c))) == 8


def test_complement_is_involution():
    for a in ("a", "~a", "b1"):
        assert complement(complement(a)) == a
    with pytest.raises(ValueError):
        complement(TAU)


def test_events():
    assert start("a") == "S(a)" and finish("~a") == "F(~a)"
    assert is_act_event("~a") and is_act_event(TAU)
    assert not is_act_event("S(a)")
    with pytest.raises(ValueError):
        start(TAU)


def test_started_needs_visible_action():
    with pytest.raises(ValueError):
        Started(TAU, NIL)


def test_sum_canonical_order():
    a, b, c = (parse(x) for x in "abc")
    assert plus(plus(a, b), c) == plus(a, plus(c, b))
    assert plus(a) == a and plus() == NIL


def test_sum_keeps_duplicates():
    a = parse("a")
    s = plus(a, a)
    assert isinstance(s, Sum) and s.summands == (a, a)


def test_ac_canonical_identity_on_non_sums():
    a = parse("a.0")
    assert ac_canonical(a) == a


@given(processes())
def test_ac_canonical_idempotent(p):
    assert ac_canonical(ac_canonical(p)) == ac_canonical(p)


@given(processes(), processes(), processes())
def test_sum_permutations_agree(p, q, r):
    assert plus(p, plus(q, r)) == plus(plus(r, p), q)


def test_apply_subst_examples():
    x, y = Var("x"), Var("y")
    got = apply_subst(plus(x, y), {"x": parse("a.0"), "y": NIL})
    assert render(got) == "a.0 + 0" or render(got) == "0 + a.0"
    assert apply_subst(HMerge(x, NIL), {"x": parse("tau.0")}) == parse("tau.0 |/ 0")
    hm6 = parse("a.x |/ ((~a.y |/ w) + z)", variables="xyzw")
    closed = apply_subst(hm6, dict.fromkeys("xyzw", NIL))
    assert closed == parse("a.0 |/ ((~a.0 |/ 0) + 0)")
    assert closed.closed


def test_apply_subst_unbound():
    with pytest.raises(UnboundVariable):
        apply_subst(Var("x"), {})


def test_variables_and_closedness():
    t = parse("x | a.y", variables="xy")
    assert variables(t) == {"x", "y"}
    assert not t.closed
    assert parse("a | b").closed


def test_subterm():
    t = parse("a.0 |/ b.0")
    assert subterm(t, (1,)) == parse("b.0")
    with pytest.raises(IndexError):
        subterm(t, (2,))


def test_process_flag():
    assert parse("a | b").process
    s = Par(Started("a", NIL), Prefix("b", NIL))
    assert not s.process
    with pytest.raises(TypeError):
        HMerge(s, NIL)


@given(states())
def test_hash_consistent_with_equality(s):
    t = parse(render(s))
    assert t == s and hash(t) == hash(s)
