"""The axiom system, positioned rewriting and replayable proof certificates.

Terms are always kept canonical modulo associativity/commutativity of
``+``, so a step whose instantiated source side is a sum may rewrite any
sub-multiset of the summands of a sum node (rewriting with an implicit
extension variable).  Every other comparison is exact.

A :class:`Derivation` records steps while it applies them; sub-derivations
are lifted into one-hole contexts with :meth:`Derivation.extend`.
"""
from __future__ import annotations

import json
from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import lru_cache

from .syntax import parse, render
from .terms import (NIL, TAU, HMerge, Nil, Par, Prefix, Started, Sum, Term,
                    _T_HOLE, ac_canonical, apply_subst, complement, is_visible,
                    plus, subterm, variables)

__all__ = [
    "AXIOMS", "AxiomId", "Equation", "axiom_equation", "all_axioms",
    "ProofStep", "ProofCertificate", "StepError", "apply_step", "check_certificate",
    "CheckResult", "reverse", "concat", "Derivation", "HOLE", "plug",
    "derived_lemma", "nil_certificate", "soundness_sample", "instantiate",
    "LR", "RL",
]

LR, RL = "LR", "RL"
AXIOMS = ("A1", "A2", "A3", "A4", "HM1", "HM2", "HM3", "HM4", "HM5", "HM6", "M")
_VARS = ("x", "y", "z", "w")


class StepError(ValueError):
    pass


@dataclass(frozen=True)
class AxiomId:
    name: str
    action: str | None = None

    def __post_init__(self):
        if self.name not in AXIOMS:
            raise ValueError(f"unknown axiom {self.name!r}")
        if (self.name == "HM6") != (self.action is not None):
            raise ValueError("HM6, and only HM6, is indexed by a visible action")
        if self.action is not None and not is_visible(self.action):
            raise ValueError("HM6 is indexed by visible actions only")

    def __str__(self):
        return f"HM6[{self.action}]" if self.action else self.name


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    def __str__(self):
        return f"{render(self.lhs)} = {render(self.rhs)}"


_TABLE = {
    "A1": ("x + y", "y + x"),
    "A2": ("(x + y) + z", "x + (y + z)"),
    "A3": ("x + x", "x"),
    "A4": ("x + 0", "x"),
    "HM1": ("(x + y) |/ z", "x |/ z + y |/ z"),
    "HM2": ("(x |/ y) |/ z", "x |/ (y | z)"),
    "HM3": ("x |/ 0", "x"),
    "HM4": ("0 |/ x", "0"),
    "HM5": ("tau.x |/ y", "tau.(x | y)"),
    "M": ("x | y", "x |/ y + y |/ x"),
}


@lru_cache(maxsize=None)
def axiom_equation(ax: AxiomId | str) -> Equation:
    if isinstance(ax, str):
        ax = AxiomId(ax)
    if ax.name == "HM6":
        a, co = ax.action, complement(ax.action)
        lhs = f"{a}.x |/ (({co}.y |/ w) + z)"
        rhs = f"{lhs} + tau.(x | y | w)"
    else:
        lhs, rhs = _TABLE[ax.name]
    return Equation(parse(lhs, variables=_VARS), parse(rhs, variables=_VARS))


def all_axioms(names) -> list[AxiomId]:
    """Every axiom, with HM6 instantiated for each visible action over ``names``."""
    out = []
    for n in AXIOMS:
        if n == "HM6":
            out.extend(AxiomId(n, a) for name in names for a in (name, "~" + name))
        else:
            out.append(AxiomId(n))
    return out


# ------------------------------------------------------------------ steps

@dataclass(frozen=True)
class ProofStep:
    axiom: str
    direction: str
    position: tuple[int, ...]
    subst: tuple[tuple[str, Term], ...]
    action: str | None = None

    @staticmethod
    def make(axiom, direction, position, subst: Mapping[str, Term], action=None):
        if direction not in (LR, RL):
            raise ValueError(f"direction must be LR or RL, not {direction!r}")
        pairs = tuple(sorted((k, ac_canonical(v)) for k, v in subst.items()))
        return ProofStep(axiom, direction, tuple(position), pairs, action)

    @property
    def axiom_id(self) -> AxiomId:
        return AxiomId(self.axiom, self.action)

    def flipped(self, position) -> ProofStep:
        return ProofStep(self.axiom, RL if self.direction == LR else LR,
                         tuple(position), self.subst, self.action)

    def to_json(self) -> dict:
        d = {"axiom": self.axiom, "dir": self.direction, "pos": list(self.position),
             "subst": {k: render(v) for k, v in self.subst}}
        if self.action is not None:
            d["action"] = self.action
        return d

    @staticmethod
    def from_json(d) -> ProofStep:
        return ProofStep.make(d["axiom"], d["dir"], d["pos"],
                              {k: parse(v) for k, v in d["subst"].items()},
                              d.get("action"))


def instantiate(ax: AxiomId | str, subst: Mapping[str, Term]) -> tuple[Term, Term]:
    """Both sides of ``ax`` under ``subst`` (canonical)."""
    eq = axiom_equation(ax)
    missing = (variables(eq.lhs) | variables(eq.rhs)) - set(subst)
    if missing:
        raise StepError(f"unbound variable(s): {', '.join(sorted(missing))}")
    return apply_subst(eq.lhs, subst), apply_subst(eq.rhs, subst)


def _replace(term: Term, path: tuple[int, ...], new: Term):
    """Put ``new`` at ``path``; return the canonical result and where ``new``
    ended up (a sum node absorbing it, if it was flattened)."""
    if not path:
        return new, ()
    i = path[0]
    kids = list(term.children)
    sub, loc = _replace(kids[i], path[1:], new)
    kids[i] = sub
    if isinstance(term, Sum):
        res = plus(*kids)
        if isinstance(sub, Sum):
            return res, ()
        return res, (res.summands.index(sub),) + loc
    return term.with_children(tuple(kids)), (i,) + loc


def _apply(term: Term, step: ProofStep):
    try:
        ax = step.axiom_id
    except ValueError as exc:
        raise StepError(str(exc)) from None
    lhs, rhs = instantiate(ax, dict(step.subst))
    src, tgt = (lhs, rhs) if step.direction == LR else (rhs, lhs)
    try:
        node = subterm(term, step.position)
    except IndexError as exc:
        raise StepError(f"position {list(step.position)}: {exc}") from None
    inner = ()
    if node == src:
        new = tgt
    elif isinstance(node, Sum) and isinstance(src, Sum):
        have = Counter(node.summands)
        need = Counter(src.summands)
        if any(have[k] < v for k, v in need.items()):
            raise StepError(f"{render(src)} does not match {render(node)}")
        rest = list((have - need).elements())
        new = plus(*rest, tgt)
        if not isinstance(tgt, Sum):
            inner = (new.summands.index(tgt),)
    else:
        raise StepError(f"{render(src)} does not match {render(node)}")
    result, loc = _replace(term, step.position, new)
    return result, loc + inner


def apply_step(term: Term, step: ProofStep) -> Term:
    return _apply(term, step)[0]


# ----------------------------------------------------------- certificates

@dataclass(frozen=True)
class ProofCertificate:
    start: Term
    steps: tuple[ProofStep, ...]
    end: Term

    def to_json(self) -> dict:
        return {"start": render(self.start), "end": render(self.end),
                "steps": [s.to_json() for s in self.steps]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @staticmethod
    def from_json(d) -> ProofCertificate:
        if isinstance(d, str):
            d = json.loads(d)
        return ProofCertificate(parse(d["start"]),
                                tuple(ProofStep.from_json(s) for s in d["steps"]),
                                parse(d["end"]))

    def axioms_used(self) -> set[str]:
        return {s.axiom for s in self.steps}


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    failed_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def check_certificate(c: ProofCertificate) -> CheckResult:
    """Replay ``c`` from its start; succeed iff the replay reaches its end."""
    term = ac_canonical(c.start)
    for i, step in enumerate(c.steps):
        try:
            term = apply_step(term, step)
        except StepError as exc:
            return CheckResult(False, i, str(exc))
    if term != ac_canonical(c.end):
        return CheckResult(False, len(c.steps),
                           f"replay ends at {render(term)}, not {render(c.end)}")
    return CheckResult(True)


def reverse(c: ProofCertificate) -> ProofCertificate:
    """The same proof read from end to start."""
    term = ac_canonical(c.start)
    back = []
    for step in c.steps:
        term, loc = _apply(term, step)
        back.append(step.flipped(loc))
    back.reverse()
    return ProofCertificate(c.end, tuple(back), c.start)


def concat(*certs: ProofCertificate) -> ProofCertificate:
    for a, b in zip(certs, certs[1:]):
        if a.end != b.start:
            raise ValueError(f"cannot chain {render(a.end)} with {render(b.start)}")
    steps = tuple(s for c in certs for s in c.steps)
    return ProofCertificate(certs[0].start, steps, certs[-1].end)


# --------------------------------------------------- contexts and lifting

class Hole(Term):
    __slots__ = ()

    def __init__(self):
        self._finish((_T_HOLE,), False, True)

    def with_children(self, children):
        return self

    def render(self):
        return "[]"


HOLE = Hole()


def _has_hole(t: Term) -> bool:
    return t is HOLE or any(_has_hole(c) for c in t.children)


def plug(ctx: Term, x: Term) -> Term:
    if ctx is HOLE:
        return x
    if not _has_hole(ctx):
        return ctx
    return ctx.with_children(tuple(plug(c, x) for c in ctx.children))


def _abs_path(ctx: Term, x: Term, rel: tuple[int, ...]) -> tuple[int, ...]:
    """Translate a position inside ``x`` to one inside ``plug(ctx, x)``."""
    if ctx is HOLE:
        return tuple(rel)
    kids = ctx.children
    k = next(i for i, c in enumerate(kids) if _has_hole(c))
    if isinstance(ctx, Sum):
        y = plug(kids[k], x)
        whole = plus(*(c for i, c in enumerate(kids) if i != k), y)
        if isinstance(y, Sum):
            if not rel:
                return ()
            return (whole.summands.index(y.summands[rel[0]]),) + tuple(rel[1:])
        return (whole.summands.index(y),) + _abs_path(kids[k], x, rel)
    return (k,) + _abs_path(kids[k], x, rel)


@dataclass
class Derivation:
    """Builds a certificate by applying steps to a current term."""

    start: Term
    steps: list[ProofStep] = field(default_factory=list)

    def __post_init__(self):
        self.start = ac_canonical(self.start)
        self.term = self.start

    def step(self, axiom: str, direction: str, position=(), action=None, **subst) -> Term:
        s = ProofStep.make(axiom, direction, position, subst, action)
        self.term = apply_step(self.term, s)
        self.steps.append(s)
        return self.term

    def extend(self, cert: ProofCertificate, ctx: Term = HOLE) -> Term:
        """Append ``cert``, which rewrites the hole of ``ctx``."""
        cur = cert.start
        if plug(ctx, cur) != self.term:
            raise ValueError(f"context does not match {render(self.term)}")
        for s in cert.steps:
            pos = _abs_path(ctx, cur, s.position)
            lifted = ProofStep(s.axiom, s.direction, pos, s.subst, s.action)
            self.term = apply_step(self.term, lifted)
            self.steps.append(lifted)
            cur = apply_step(cur, s)
        return self.term

    def summands(self) -> tuple[Term, ...]:
        if isinstance(self.term, Sum):
            return self.term.summands
        return () if isinstance(self.term, Nil) else (self.term,)

    def summand_pos(self, summand: Term) -> tuple[int, ...]:
        if isinstance(self.term, Sum):
            return (self.term.summands.index(summand),)
        if self.term == summand:
            return ()
        raise ValueError(f"{render(summand)} is not a summand of {render(self.term)}")

    def summand_context(self, summand: Term, inner: Term = HOLE) -> Term:
        """Context putting ``inner`` in place of one copy of ``summand``."""
        if isinstance(self.term, Sum):
            rest = list(self.term.summands)
            rest.remove(summand)
            return Sum(rest + [inner])
        if self.term == summand:
            return inner
        raise ValueError(f"{render(summand)} is not a summand of {render(self.term)}")

    def extend_in(self, summand: Term, inner: Term, cert: ProofCertificate) -> Term:
        return self.extend(cert, self.summand_context(summand, inner))

    def certificate(self) -> ProofCertificate:
        return ProofCertificate(self.start, tuple(self.steps), self.term)


def empty(t: Term) -> ProofCertificate:
    t = ac_canonical(t)
    return ProofCertificate(t, (), t)


# ------------------------------------------------------ derived equations

def _par_unit(x: Term, left_unit: bool) -> ProofCertificate:
    d = Derivation(Par(NIL, x) if left_unit else Par(x, NIL))
    d.step("M", LR, (), x=d.start.left, y=d.start.right)
    d.step("HM3", LR, d.summand_pos(HMerge(x, NIL)), x=x)
    d.step("HM4", LR, d.summand_pos(HMerge(NIL, x)), x=x)
    d.step("A4", LR, (), x=x)
    return d.certificate()


def _par_comm(x: Term, y: Term) -> ProofCertificate:
    d = Derivation(Par(x, y))
    d.step("M", LR, (), x=x, y=y)
    d.step("M", RL, (), x=y, y=x)
    return d.certificate()


def _expand_triple(first: Term, second: Term, third: Term, nested_left: bool):
    """Rewrite ``(first|second)|third`` (or ``first|(second|third)``) into a
    sum of three merges, reordering the inner compositions with
    commutativity where needed so both bracketings meet."""
    if nested_left:
        x, y, z = first, second, third
        d = Derivation(Par(Par(x, y), z))
        d.step("M", LR, (), x=Par(x, y), y=z)
        inner, outer = Par(x, y), z
    else:
        x, y, z = first, second, third
        d = Derivation(Par(x, Par(y, z)))
        d.step("M", LR, (), x=x, y=Par(y, z))
        inner, outer = Par(y, z), x
    merge = HMerge(inner, outer)
    pos = d.summand_pos(merge)
    d.step("M", LR, pos + (0,), x=inner.left, y=inner.right)
    u, v = inner.left, inner.right
    distributed = HMerge(plus(HMerge(u, v), HMerge(v, u)), outer)
    d.step("HM1", LR, d.summand_pos(distributed), x=HMerge(u, v), y=HMerge(v, u), z=outer)
    d.step("HM2", LR, d.summand_pos(HMerge(HMerge(u, v), outer)), x=u, y=v, z=outer)
    d.step("HM2", LR, d.summand_pos(HMerge(HMerge(v, u), outer)), x=v, y=u, z=outer)
    if nested_left:
        # x|/(y|z) + y|/(x|z) + z|/(x|y): commute the last two
        d.extend_in(HMerge(z, Par(x, y)), HMerge(z, HOLE), _par_comm(x, y))
        d.extend_in(HMerge(y, Par(x, z)), HMerge(y, HOLE), _par_comm(x, z))
    # either way: x|/(y|z) + y|/(z|x) + z|/(y|x)
    return d.certificate()


def _par_assoc(x: Term, y: Term, z: Term) -> ProofCertificate:
    left = _expand_triple(x, y, z, nested_left=True)
    right = _expand_triple(x, y, z, nested_left=False)
    return concat(left, reverse(right))


def derived_lemma(kind: str, *terms: Term) -> ProofCertificate:
    """Certificate for an instance of a derived law of parallel composition.

    ``kind`` is one of ``par-unit-r`` (x|0 = x), ``par-unit-l`` (0|x = x),
    ``par-comm`` (x|y = y|x) and ``par-assoc`` ((x|y)|z = x|(y|z)).
    """
    terms = tuple(ac_canonical(t) for t in terms)
    if kind == "par-unit-r":
        return _par_unit(*terms, left_unit=False)
    if kind == "par-unit-l":
        return _par_unit(*terms, left_unit=True)
    if kind == "par-comm":
        return _par_comm(*terms)
    if kind == "par-assoc":
        return _par_assoc(*terms)
    raise ValueError(f"unknown lemma {kind!r}")


@lru_cache(maxsize=None)
def nil_certificate(p: Term) -> ProofCertificate:
    """Proof of ``p = 0`` for a process without transitions, using only
    A4, HM4 and M.  Raises ``ValueError`` if ``p`` can move."""
    if isinstance(p, Nil):
        return empty(p)
    d = Derivation(p)
    if isinstance(p, Sum):
        for s in p.summands:
            if s != NIL:
                d.extend_in(s, HOLE, nil_certificate(s))
        while isinstance(d.term, Sum):
            d.step("A4", LR, (), x=plus(*d.term.summands[1:]))
    elif isinstance(p, HMerge):
        d.extend(nil_certificate(p.left), HMerge(HOLE, p.right))
        d.step("HM4", LR, (), x=p.right)
    elif isinstance(p, Par) and p.process:
        d.extend(nil_certificate(p.left), Par(HOLE, p.right))
        d.extend(nil_certificate(p.right), Par(NIL, HOLE))
        d.step("M", LR, (), x=NIL, y=NIL)
        zero_merge = HMerge(NIL, NIL)
        d.step("HM4", LR, (0,), x=NIL)
        d.step("HM4", LR, d.summand_pos(zero_merge), x=NIL)
        d.step("A4", LR, (), x=NIL)
    else:
        raise ValueError(f"{render(p)} is not bisimilar to 0")
    return d.certificate()


def soundness_sample(ax: AxiomId | str, subst: Mapping[str, Term]) -> bool:
    """Are both sides of the instance split-2 bisimilar?"""
    from .equivalence import bisimilar
    lhs, rhs = instantiate(ax, subst)
    return bisimilar(lhs, rhs)
