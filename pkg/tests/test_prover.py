from __future__ import annotations

import pytest
from hypothesis import given, settings

from ccsh.axioms import check_certificate
from ccsh.equivalence import bisimilar, satisfies
from ccsh.families import gen_en
from ccsh.generate import closed_terms
from ccsh.prover import Proved, Refuted, prove_equal, roundtrip_suite
from ccsh.syntax import parse
from ccsh.terms import ac_canonical

from conftest import processes


def _proved(p, q):
    res = prove_equal(p, q)
    assert isinstance(res, Proved) and res
    cert = res.cert
    assert check_certificate(cert)
    assert (cert.start, cert.end) == (ac_canonical(p), ac_canonical(q))
    return cert


def _refuted(p, q):
    res = prove_equal(p, q)
    assert isinstance(res, Refuted) and not res
    ev = res.evidence
    yes, no = (p, q) if ev.holds_for == "left" else (q, p)
    assert satisfies(yes, ev.formula) and not satisfies(no, ev.formula)
    return ev


def test_reflexive():
    p = parse("a.(b | ~b) + tau")
    _proved(p, p)


@pytest.mark.parametrize("left, right", [
    ("a | b", "b | a"), ("a | 0", "a"), ("(a|b)|c", "a|(b|c)"),
    ("a + a", "a"), ("a | ~a", "a |/ ~a + ~a |/ a + tau"),
    ("0 |/ a", "0"), ("tau | tau", "tau.tau + tau.tau"),
])
def test_proves_equations(left, right):
    _proved(parse(left), parse(right))


@pytest.mark.parametrize("left, right", [
    ("a | b", "a.b + b.a"), ("a", "b"), ("tau", "0"), ("a | ~a", "a.~a + ~a.a + tau"),
])
def test_refutes(left, right):
    _refuted(parse(left), parse(right))


@pytest.mark.parametrize("n", range(3))
def test_en_refuted(n):
    _refuted(*gen_en(n))


def test_tiny_universe():
    rep = roundtrip_suite([parse("0"), parse("tau"), parse("0 + 0")])
    assert rep.ok and rep.pairs == 9
    assert rep.proved == 5 and rep.refuted == 4


def test_roundtrip_size_three():
    rep = roundtrip_suite(closed_terms(["a"], 3))
    assert rep.ok, rep.mismatches
    assert rep.pairs == 16 * 16
    assert rep.proved + rep.refuted == rep.pairs


@settings(max_examples=30)
@given(processes(5), processes(5))
def test_prover_agrees_with_checker(p, q):
    res = prove_equal(p, q)
    assert bool(res) == bisimilar(p, q)
    if res:
        assert check_certificate(res.cert)
