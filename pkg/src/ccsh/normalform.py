"""Normal forms and certificate-producing normalisation.

A normal form is a sum of *action summands* ``a.p |/ p'`` (``a`` visible)
and *tau summands* ``tau.q`` whose components are again normal forms, such
that every tau-derivative of an action summand is matched, up to split-2
bisimilarity, by the body of some tau summand.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .axioms import (HOLE, LR, RL, Derivation, ProofCertificate, empty)
from .equivalence import same_class
from .semantics import OpenTermError, transitions
from .syntax import render
from .terms import (NIL, TAU, HMerge, Nil, Par, Prefix, Sum, Term, ac_canonical,
                    complement, is_visible, plus)

__all__ = ["NormalForm", "is_nf", "normalize", "nf_violations"]


@dataclass(frozen=True)
class NormalForm:
    action_summands: tuple[tuple[str, NormalForm, NormalForm], ...]
    tau_summands: tuple[NormalForm, ...]

    def to_process(self) -> Term:
        return plus(*(HMerge(Prefix(a, p.to_process()), q.to_process())
                      for a, p, q in self.action_summands),
                    *(Prefix(TAU, q.to_process()) for q in self.tau_summands))

    @staticmethod
    def from_process(p: Term) -> NormalForm:
        """Read ``p`` as a normal form (shape only); ``ValueError`` otherwise."""
        acts, taus = [], []
        for s in _summands(p):
            if isinstance(s, HMerge) and isinstance(s.left, Prefix) and is_visible(s.left.action):
                acts.append((s.left.action, NormalForm.from_process(s.left.body),
                             NormalForm.from_process(s.right)))
            elif isinstance(s, Prefix) and s.action == TAU:
                taus.append(NormalForm.from_process(s.body))
            else:
                raise ValueError(f"{render(s)} is not a normal-form summand")
        return NormalForm(tuple(acts), tuple(taus))

    def __str__(self):
        return render(self.to_process())


def _summands(p: Term) -> tuple[Term, ...]:
    if isinstance(p, Sum):
        return p.summands
    if isinstance(p, Nil):
        return ()
    return (p,)


def nf_violations(p: Term, strict: bool = False) -> list[str]:
    """Reasons why ``p`` is not a normal form (empty list if it is).

    ``strict`` demands that tau-derivatives of action summands appear
    literally (modulo AC of +) as tau summands, instead of up to split-2
    bisimilarity.
    """
    out: list[str] = []
    summands = _summands(p)
    taus = [s.body for s in summands if isinstance(s, Prefix) and s.action == TAU]
    for s in summands:
        if isinstance(s, HMerge) and isinstance(s.left, Prefix) and is_visible(s.left.action):
            out += nf_violations(s.left.body, strict)
            out += nf_violations(s.right, strict)
            for e, q in transitions(s):
                if e != TAU:
                    continue
                if strict:
                    ok = ac_canonical(q) in taus
                else:
                    ok = any(same_class(q, r) for r in taus)
                if not ok:
                    out.append(f"tau-derivative {render(q)} of {render(s)} is not covered")
        elif isinstance(s, Prefix) and s.action == TAU:
            out += nf_violations(s.body, strict)
        else:
            out.append(f"{render(s)} is not a normal-form summand")
    return out


def is_nf(p: Term, strict: bool = False) -> bool:
    return not nf_violations(p, strict)


@lru_cache(maxsize=None)
def _already_nf(p: Term) -> bool:
    return is_nf(p)


# ------------------------------------------------------------ normalising

def _dedup(d: Derivation) -> None:
    """Collapse repeated summands with x + x = x."""
    while True:
        seen = set()
        for s in d.summands():
            if s in seen:
                break
            seen.add(s)
        else:
            return
        d.step("A3", LR, (), x=s)


def _drop_zeros(d: Derivation) -> None:
    while isinstance(d.term, Sum) and NIL in d.term.summands:
        rest = list(d.term.summands)
        rest.remove(NIL)
        d.step("A4", LR, (), x=plus(*rest))


def _normalize_summands(d: Derivation) -> None:
    """Normalise every summand of the current term in place."""
    for s in list(d.summands()):
        cert = _normalize(s)
        if cert.steps:
            d.extend_in(s, HOLE, cert)
    _drop_zeros(d)
    _dedup(d)


def _tau_close(d: Derivation) -> None:
    """Add, with HM6, a tau summand for every synchronisation of an action
    summand ``a.x |/ N`` with an ``~a`` summand of ``N``; normalise it."""
    for summand in list(d.summands()):
        if not (isinstance(summand, HMerge) and isinstance(summand.left, Prefix)):
            continue
        a, x = summand.left.action, summand.left.body
        n = summand.right
        partners = [s for s in _summands(n)
                    if isinstance(s, HMerge) and isinstance(s.left, Prefix)
                    and s.left.action == complement(a)]
        if not partners:
            continue
        current = summand
        padded = not isinstance(n, Sum)
        if padded:
            # a.x |/ N  ->  a.x |/ (N + 0) so that the schema's z has a value
            d.step("A4", RL, d.summand_pos(current) + (1,), x=n)
            current = HMerge(summand.left, plus(n, NIL))
        for partner in partners:
            rest = list(_summands(current.right))
            rest.remove(partner)
            y, w = partner.left.body, partner.right
            d.step("HM6", LR, d.summand_pos(current), action=a,
                   x=x, y=y, w=w, z=plus(*rest))
            new_tau = Prefix(TAU, Par(Par(x, y), w))
            cert = _normalize(new_tau.body)
            if cert.steps:
                d.extend_in(new_tau, Prefix(TAU, HOLE), cert)
        if padded:
            d.step("A4", LR, d.summand_pos(current) + (1,), x=n)


def _merge_case(q: Term, r: Term) -> ProofCertificate:
    d = Derivation(HMerge(q, r))
    cert = _normalize(q)
    if cert.steps:
        d.extend(cert, HMerge(HOLE, r))
    qn = d.term.left
    if isinstance(qn, Nil):
        d.step("HM4", LR, (), x=r)
        return d.certificate()
    # distribute over the summands of the normal form of q
    while True:
        pending = [s for s in d.summands() if isinstance(s, HMerge) and isinstance(s.left, Sum)]
        if not pending:
            break
        s = pending[0]
        first, rest = s.left.summands[0], plus(*s.left.summands[1:])
        d.step("HM1", LR, d.summand_pos(s), x=first, y=rest, z=r)
    for s in list(d.summands()):
        inner = s.left
        if isinstance(inner, HMerge):
            d.step("HM2", LR, d.summand_pos(s), x=inner.left, y=inner.right, z=r)
        else:
            d.step("HM5", LR, d.summand_pos(s), x=inner.body, y=r)
    for s in list(d.summands()):
        if isinstance(s, HMerge):
            cert = _normalize(s.right)
            if cert.steps:
                d.extend_in(s, HMerge(s.left, HOLE), cert)
        else:
            cert = _normalize(s.body)
            if cert.steps:
                d.extend_in(s, Prefix(TAU, HOLE), cert)
    _dedup(d)
    _tau_close(d)
    _dedup(d)
    return d.certificate()


@lru_cache(maxsize=None)
def _normalize(p: Term) -> ProofCertificate:
    if not p.closed:
        raise OpenTermError(f"open term: {render(p)}")
    if isinstance(p, Nil) or _already_nf(p):
        return empty(p)
    d = Derivation(p)
    if isinstance(p, Prefix):
        cert = _normalize(p.body)
        if cert.steps:
            d.extend(cert, Prefix(p.action, HOLE))
        if p.action != TAU:
            d.step("HM3", RL, (), x=d.term)
    elif isinstance(p, Sum):
        _normalize_summands(d)
    elif isinstance(p, HMerge):
        return _merge_case(p.left, p.right)
    elif isinstance(p, Par) and p.process:
        d.step("M", LR, (), x=p.left, y=p.right)
        _normalize_summands(d)
    else:
        raise TypeError(f"not a process: {render(p)}")
    return d.certificate()


def normalize(p: Term) -> tuple[NormalForm, ProofCertificate]:
    """A normal form of the closed process ``p`` and a proof ``p = nf``."""
    cert = _normalize(ac_canonical(p))
    return NormalForm.from_process(cert.end), cert
