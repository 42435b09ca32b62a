from __future__ import annotations

import pytest
from hypothesis import given

from ccsh.axioms import check_certificate
from ccsh.equivalence import bisimilar
from ccsh.generate import closed_terms
from ccsh.normalform import NormalForm, is_nf, normalize, nf_violations
from ccsh.semantics import OpenTermError, depth
from ccsh.syntax import parse, render

from conftest import processes


def test_normalize_nil_is_empty():
    nf, cert = normalize(parse("0"))
    assert nf == NormalForm((), ()) and cert.steps == ()


def test_normalize_prefix():
    nf, cert = normalize(parse("a"))
    assert render(nf.to_process()) == "a.0 |/ 0"
    assert [s.axiom for s in cert.steps] == ["HM3"]


def test_normalize_communication():
    nf, cert = normalize(parse("a | ~a"))
    assert render(nf.to_process()) == "a.0 |/ (~a.0 |/ 0) + ~a.0 |/ (a.0 |/ 0) + tau.0"
    assert check_certificate(cert)


@pytest.mark.parametrize("text, expected", [
    ("0", True), ("tau.0", True), ("a.0 |/ 0", True),
    ("a.0", False), ("a.0 |/ ((~a.0 |/ 0) + 0)", False),
    ("a.0 |/ 0 + ~a.0 |/ 0 + tau.0", True),
    ("a.0 |/ (~a.0 |/ 0)", False),
])
def test_is_nf_examples(text, expected):
    p = parse(text)
    assert is_nf(p) is expected
    assert (nf_violations(p) == []) is expected


def test_relaxed_reading_accepts_bisimilar_tau_bodies():
    p = parse("a.0 |/ 0 + ~a.0 |/ 0 + tau.(0|/0)")
    assert not is_nf(p)   # 0 |/ 0 is not itself a normal form
    q = parse("a.0 |/ (tau.0) + tau.(tau.0)")
    assert is_nf(q)


def test_from_process_roundtrip():
    nf, _ = normalize(parse("a.b | tau"))
    assert NormalForm.from_process(nf.to_process()) == nf
    with pytest.raises(ValueError):
        NormalForm.from_process(parse("a.0"))


def test_open_terms_rejected():
    with pytest.raises(OpenTermError):
        normalize(parse("a.x", variables="x"))


def test_normalize_contract_exhaustive():
    strict = 0
    terms = closed_terms(["a"], 5)
    for p in terms:
        nf, cert = normalize(p)
        q = nf.to_process()
        assert cert.start == p and cert.end == q
        assert check_certificate(cert)
        assert is_nf(q)
        assert bisimilar(p, q)
        assert depth(q) == depth(p)
        strict += is_nf(q, strict=True)
        again, cert2 = normalize(q)
        assert again == nf and cert2.steps == ()
    print(f"\n{strict} of {len(terms)} normal forms also satisfy the strict reading")


@given(processes(6))
def test_normalize_contract_random(p):
    nf, cert = normalize(p)
    assert check_certificate(cert) and cert.end == nf.to_process()
    assert is_nf(cert.end) and bisimilar(p, cert.end)
