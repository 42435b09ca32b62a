"""Deciding provable equality of closed processes.

Two bisimilar processes are proved equal by normalising both sides and then
absorbing every summand of one normal form into the other: a copy of a
matching summand is made with ``x = x + x`` and then rewritten, component by
component, into the summand to be absorbed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .axioms import (HOLE, RL, Derivation, ProofCertificate, check_certificate,
                     concat, empty, reverse)
from .equivalence import (SPLIT2, Distinguished, bisimilar, distinguish,
                          same_class, satisfies)
from .normalform import normalize
from .syntax import render
from .terms import TAU, HMerge, Nil, Prefix, Sum, Term, ac_canonical

__all__ = ["Proved", "Refuted", "prove_equal", "roundtrip_suite",
           "AbsorptionError", "RoundtripReport"]


class AbsorptionError(RuntimeError):
    """No summand matches during absorption; the inputs were not bisimilar
    normal forms, or something is badly wrong."""


@dataclass(frozen=True)
class Proved:
    cert: ProofCertificate

    def __bool__(self):
        return True


@dataclass(frozen=True)
class Refuted:
    evidence: Distinguished

    def __bool__(self):
        return False


def _summands(p: Term) -> tuple[Term, ...]:
    if isinstance(p, Sum):
        return p.summands
    return () if isinstance(p, Nil) else (p,)


def _matches(p: Term, q: Term) -> bool:
    """Can summand ``p`` be rewritten into summand ``q`` componentwise?"""
    if isinstance(q, Prefix):
        return isinstance(p, Prefix) and same_class(p.body, q.body)
    return (isinstance(p, HMerge) and p.left.action == q.left.action
            and same_class(p.left.body, q.left.body)
            and same_class(p.right, q.right))


def _absorb(p: Term, q: Term) -> ProofCertificate:
    """``p = p + q`` for bisimilar normal forms ``p`` and ``q``."""
    d = Derivation(p)
    for target in _summands(q):
        own = _summands(p)
        if target in own:
            source = target
        else:
            source = next((s for s in own if _matches(s, target)), None)
            if source is None:
                raise AbsorptionError(
                    f"no summand of {render(p)} matches {render(target)}")
        d.step("A3", RL, d.summand_pos(source), x=source)
        if source == target:
            continue
        if isinstance(target, Prefix):
            d.extend_in(source, Prefix(TAU, HOLE), nf_equal(source.body, target.body))
        else:
            a = source.left.action
            d.extend_in(source, HMerge(Prefix(a, HOLE), source.right),
                        nf_equal(source.left.body, target.left.body))
            mid = HMerge(target.left, source.right)
            d.extend_in(mid, HMerge(target.left, HOLE),
                        nf_equal(source.right, target.right))
    return d.certificate()


@lru_cache(maxsize=None)
def nf_equal(p: Term, q: Term) -> ProofCertificate:
    """``p = q`` for bisimilar normal forms: ``p = p + q = q``."""
    if p == q:
        return empty(p)
    return concat(_absorb(p, q), reverse(_absorb(q, p)))


def prove_equal(p: Term, q: Term) -> Proved | Refuted:
    """A certificate for ``p = q`` or a formula telling them apart."""
    p, q = ac_canonical(p), ac_canonical(q)
    if not same_class(p, q):
        return Refuted(distinguish(p, q, SPLIT2))
    np, cp = normalize(p)
    nq, cq = normalize(q)
    middle = nf_equal(cp.end, cq.end)
    return Proved(concat(cp, middle, reverse(cq)))


# ---------------------------------------------------------------- round trip

@dataclass
class RoundtripReport:
    pairs: int = 0
    proved: int = 0
    refuted: int = 0
    max_steps: int = 0
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"pairs": self.pairs, "proved": self.proved, "refuted": self.refuted,
                "max_steps": self.max_steps,
                "mismatches": [list(m) for m in self.mismatches]}


def check_pair(p: Term, q: Term, report: RoundtripReport) -> None:
    """Run the prover on ``(p, q)`` and record any disagreement with the
    partition-refinement checker."""
    report.pairs += 1
    expected = bisimilar(p, q)
    try:
        result = prove_equal(p, q)
    except AbsorptionError as exc:
        report.mismatches.append((render(p), render(q), f"absorption failed: {exc}"))
        return
    if isinstance(result, Proved):
        report.proved += 1
        report.max_steps = max(report.max_steps, len(result.cert.steps))
        if not expected:
            report.mismatches.append((render(p), render(q), "proved but not bisimilar"))
        elif not check_certificate(result.cert):
            report.mismatches.append((render(p), render(q), "certificate does not replay"))
        elif (result.cert.start, result.cert.end) != (ac_canonical(p), ac_canonical(q)):
            report.mismatches.append((render(p), render(q), "certificate has wrong endpoints"))
    else:
        report.refuted += 1
        if expected:
            report.mismatches.append((render(p), render(q), "refuted but bisimilar"))
            return
        f = result.evidence.formula
        yes, no = (p, q) if result.evidence.holds_for == "left" else (q, p)
        if not (satisfies(yes, f) and not satisfies(no, f)):
            report.mismatches.append((render(p), render(q), "formula does not distinguish"))


def roundtrip_suite(universe, pairs=None) -> RoundtripReport:
    """Check every ordered pair of ``universe`` (or just ``pairs``)."""
    report = RoundtripReport()
    if pairs is None:
        pairs = ((p, q) for p in universe for q in universe)
    for p, q in pairs:
        check_pair(p, q, report)
    return report
