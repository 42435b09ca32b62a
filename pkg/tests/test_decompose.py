from __future__ import annotations

from itertools import product

import pytest

from ccsh.decompose import (BoundError, all_factorizations, enumerate_universe,
                            factorize, is_prime, local_universe, simulated_by, twice,
                            uniqueness_audit)
from ccsh.equivalence import bisimilar
from ccsh.generate import actions_over
from ccsh.semantics import depth
from ccsh.syntax import parse, render
from ccsh.terms import NIL, HMerge, Par, Prefix, Started, plus


def _states_up_to(names, n):
    """Naive enumeration of all states (processes and started states) of
    syntax size at most ``n``."""
    acts = actions_over(names)
    by = {1: [NIL]}
    for k in range(2, n + 1):
        out = []
        for a in acts:
            for p in by[k - 1]:
                if p.process:
                    out.append(Prefix(a, p))
                    if a != "tau":
                        out.append(Started(a, p))
                else:
                    pass
        for i in range(1, k - 1):
            for p, q in product(by[i], by[k - 1 - i]):
                out.append(Par(p, q))
                if p.process and q.process:
                    out += [plus(p, q), HMerge(p, q)]
        by[k] = out
    return [t for k in by for t in by[k]]


def _oracle_classes(names, max_depth, n):
    reps = []
    for s in _states_up_to(names, n):
        if depth(s) <= max_depth and not any(bisimilar(s, r) for r in reps):
            reps.append(s)
    return reps


@pytest.mark.parametrize("names, d, count", [
    ("a", 0, 1), ("a", 1, 4), ("a", 2, 25), ("ab", 1, 6), ("ab", 2, 86),
])
def test_universe_counts(names, d, count):
    u = enumerate_universe(names, d)
    assert len(u) == count
    assert u.states[0] == NIL
    for i, s in enumerate(u.states):
        assert depth(s) <= d and u.index(s) == i


def test_depth_one_classes():
    u = enumerate_universe("a", 1)
    assert sorted(render(s) for s in u.states) == ["0", "@a.0", "@~a.0", "tau.0"]


@pytest.mark.parametrize("names, d, n", [("a", 1, 5), ("ab", 1, 4), ("a", 2, 5)])
def test_oracle_classes_are_in_universe(names, d, n):
    u = enumerate_universe(names, d)
    found = _oracle_classes(names, d, n)
    idx = {u.index(s) for s in found}
    assert len(idx) == len(found)
    if d == 1:
        assert len(found) == len(u)


def test_representatives_pairwise_distinct():
    u = enumerate_universe("a", 2)
    for i, j in product(range(len(u)), repeat=2):
        assert bisimilar(u.states[i], u.states[j]) == (i == j)


def test_every_depth_one_state_is_prime():
    u = enumerate_universe("ab", 1)
    assert all(is_prime(s, u) for s in u.states[1:])


def test_is_prime_examples():
    u = enumerate_universe("ab", 2)
    assert not is_prime(NIL, u)
    assert is_prime(parse("@a.tau"), u)
    assert not is_prime(parse("@a.0 | @b.0"), u)
    s = parse("@a.b")
    assert is_prime(s, local_universe(s))
    assert not is_prime(parse("a | b"), local_universe(parse("a | b")))


def test_outside_universe():
    u = enumerate_universe("a", 1)
    with pytest.raises(BoundError):
        u.index(parse("a.a"))
    with pytest.raises(BoundError):
        u.index(parse("tau.b"))
    with pytest.raises(BoundError):
        enumerate_universe("a", -1)


def test_cap():
    with pytest.raises(BoundError):
        enumerate_universe("a", 2, cap=500)
    assert enumerate_universe("a", 2, cap=1000).candidates <= 1000


@pytest.mark.parametrize("text, factors", [
    ("a | b", ["a.0", "b.0"]), ("a | a", ["a.0", "a.0"]),
    ("@a.0 | ~a", ["@a.0", "~a.0"]), ("tau | tau | tau", ["tau.0"] * 3),
    ("a | tau", ["a.0", "tau.0"]), ("@a.b", ["@a.b.0"]), ("0", []),
])
def test_local_factorize(text, factors):
    s = parse(text)
    u = local_universe(s)
    f = factorize(s, u)
    assert sorted(render(t) for t in f.terms()) == sorted(factors)
    assert bisimilar(f.compose(), s)
    assert all_factorizations(u.index(s), u) == {f.factors}
    assert is_prime(s, u) == (len(factors) == 1)


def test_factorize_json():
    f = factorize(parse("a | b"), local_universe(parse("a | b")))
    assert f.to_json() == {"factors": ["a.0", "b.0"]}
    assert f.multiplicities() == {"a.0": 1, "b.0": 1}


def test_local_agrees_with_full():
    full = enumerate_universe("a", 2)
    for s in full.states:
        loc = local_universe(s)
        assert is_prime(s, loc) == is_prime(s, full)
        fa = sorted(render(t) for t in factorize(s, full).terms())
        fb = sorted(render(t) for t in factorize(s, loc).terms())
        assert [bisimilar(parse(x), parse(y)) for x, y in zip(fa, fb)] == [True] * len(fa)


def test_simulation():
    assert simulated_by(parse("a"), parse("a + b"))
    assert not simulated_by(parse("a + b"), parse("a"))
    assert simulated_by(NIL, parse("tau"))


def test_twice():
    assert not twice(parse("@a.a"), "F(a)")
    assert twice(parse("@a.0 | @a.0"), "F(a)")


@pytest.mark.parametrize("names, d", [("a", 1), ("a", 2), ("ab", 1), ("ab", 2)])
def test_uniqueness_audit(names, d):
    rep = uniqueness_audit(enumerate_universe(names, d))
    assert rep.ok, rep.violations
    assert rep.primes > 0


def test_audit_counts():
    rep = uniqueness_audit(enumerate_universe("a", 2))
    assert (rep.states, rep.primes, rep.started_checked) == (25, 18, 4)
