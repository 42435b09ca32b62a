"""Split-2 and strong bisimilarity, with evidence.

Two engines are provided and cross-checked by the test-suite:

* :func:`bisimilar` / :func:`bisimulation` build the finite LTS reachable
  from both roots and run partition refinement on it;
* :func:`bisim_class` assigns every state a global class number from the
  signature ``{(event, class of target)}``.  Since transition graphs are
  finite and acyclic this is exact, and it is what bulk callers (the prover,
  the universe enumeration) use.

:class:`Quotient` evaluates the operators of the language directly on class
numbers.  That is only valid because bisimilarity is a congruence, so it is
used to speed up exhaustive checks and is itself tested against the
term-level route.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .semantics import Lts, build_lts, transitions
from .syntax import render
from .terms import TAU, Par, Term, complement, finish, is_act_event, start

__all__ = [
    "SPLIT2", "STRONG", "MODES", "event_filter", "moves", "bisim_class",
    "same_class", "refine", "bisimilar", "bisimulation", "Equivalent",
    "Distinguished", "check_partition", "TT", "Diamond", "Conj", "Neg",
    "satisfies", "distinguish", "formula_to_json", "formula_from_json",
    "modal_depth", "separation_round", "Quotient", "check_en_family",
    "EquivalentStates",
]

SPLIT2 = "split2"
STRONG = "strong"
MODES = (SPLIT2, STRONG)


class EquivalentStates(ValueError):
    pass


def event_filter(mode: str):
    if mode == SPLIT2:
        return None
    if mode == STRONG:
        return is_act_event
    raise ValueError(f"unknown mode {mode!r}")


def moves(s: Term, mode: str = SPLIT2):
    """Transitions of ``s`` visible in ``mode``, sorted."""
    keep = event_filter(mode)
    out = [(e, t) for e, t in transitions(s) if keep is None or keep(e)]
    out.sort(key=lambda m: (m[0], m[1].key))
    return out


# ------------------------------------------------------ global class numbers

class _ClassTable:
    def __init__(self, mode: str):
        self.mode = mode
        self.ids: dict[frozenset, int] = {}
        self.sigs: list[frozenset] = []
        self.memo: dict[Term, int] = {}

    def intern(self, sig: frozenset) -> int:
        cid = self.ids.get(sig)
        if cid is None:
            cid = self.ids[sig] = len(self.sigs)
            self.sigs.append(sig)
        return cid

    def of(self, s: Term) -> int:
        cid = self.memo.get(s)
        if cid is None:
            sig = frozenset((e, self.of(t)) for e, t in moves(s, self.mode))
            cid = self.memo[s] = self.intern(sig)
        return cid


_TABLES = {m: _ClassTable(m) for m in MODES}


def bisim_class(s: Term, mode: str = SPLIT2) -> int:
    """Class number of ``s``; equal numbers iff bisimilar (same mode)."""
    return _TABLES[mode].of(s)


def same_class(s: Term, t: Term, mode: str = SPLIT2) -> bool:
    return s == t or bisim_class(s, mode) == bisim_class(t, mode)


class Quotient:
    """The language's operators evaluated on class numbers."""

    def __init__(self, mode: str = SPLIT2):
        self.table = _TABLES[mode]
        self.keep = event_filter(mode)
        self._par: dict[tuple[int, int], int] = {}
        self._merge: dict[tuple[int, int], int] = {}
        self.zero = self.table.intern(frozenset())

    def _ok(self, e: str) -> bool:
        return self.keep is None or self.keep(e)

    def of(self, t: Term) -> int:
        return self.table.of(t)

    def sig(self, c: int) -> frozenset:
        return self.table.sigs[c]

    def started(self, a: str, c: int) -> int:
        e = finish(a)
        return self.table.intern(frozenset([(e, c)] if self._ok(e) else []))

    def prefix(self, action: str, c: int) -> int:
        if action == TAU:
            return self.table.intern(frozenset([(TAU, c)]))
        sig = {(action, c)} if self._ok(action) else set()
        if self._ok(start(action)):
            sig.add((start(action), self.started(action, c)))
        return self.table.intern(frozenset(sig))

    def plus(self, *cs: int) -> int:
        sig = frozenset().union(*(self.sig(c) for c in cs))
        return self.table.intern(sig)

    def _sync(self, c1: int, c2: int) -> set:
        out = set()
        right = self.sig(c2)
        for e, d1 in self.sig(c1):
            if e != TAU and is_act_event(e):
                partner = complement(e)
                for e2, d2 in right:
                    if e2 == partner:
                        out.add((TAU, self.par(d1, d2)))
        return out

    def par(self, c1: int, c2: int) -> int:
        key = (c1, c2)
        cid = self._par.get(key)
        if cid is None:
            sig = {(e, self.par(d, c2)) for e, d in self.sig(c1)}
            sig |= {(e, self.par(c1, d)) for e, d in self.sig(c2)}
            sig |= self._sync(c1, c2)
            cid = self._par[key] = self.table.intern(frozenset(sig))
        return cid

    def hmerge(self, c1: int, c2: int) -> int:
        key = (c1, c2)
        cid = self._merge.get(key)
        if cid is None:
            sig = {(e, self.par(d, c2)) for e, d in self.sig(c1)}
            sig |= self._sync(c1, c2)
            cid = self._merge[key] = self.table.intern(frozenset(sig))
        return cid

    def depth(self, c: int) -> int:
        return max((1 + self.depth(d) for _, d in self.sig(c)), default=0)


# ------------------------------------------------------ partition refinement

def _renumber(keys) -> list[int]:
    seen: dict = {}
    return [seen.setdefault(k, len(seen)) for k in keys]


def _local_depths(lts: Lts) -> list[int]:
    out = lts.outgoing()
    memo: dict[int, int] = {}

    def d(i: int) -> int:
        if i not in memo:
            memo[i] = max((1 + d(j) for _, j in out[i]), default=0)
        return memo[i]

    return [d(i) for i in range(len(lts.states))]


def refine(lts: Lts, seeded: bool = True, history: list | None = None):
    """Coarsest stable partition of ``lts``.

    With ``seeded`` the initial partition groups states by (longest path,
    enabled events); otherwise it is the single block.  Returns the block
    number of every state and the number of refinement rounds; ``history``,
    if given, receives the block assignment after every round.
    """
    out = lts.outgoing()
    if seeded:
        ld = _local_depths(lts)
        blocks = _renumber((ld[i], frozenset(e for e, _ in out[i]))
                           for i in range(len(lts.states)))
    else:
        blocks = [0] * len(lts.states)
    if history is not None:
        history.append(list(blocks))
    rounds = 0
    while True:
        rounds += 1
        new = _renumber((blocks[i], frozenset((e, blocks[j]) for e, j in out[i]))
                        for i in range(len(lts.states)))
        if history is not None:
            history.append(list(new))
        if max(new, default=-1) == max(blocks, default=-1):
            return new, rounds
        blocks = new


def separation_round(lts: Lts, i: int, j: int) -> int | None:
    """First round of unseeded refinement that puts ``i`` and ``j`` apart."""
    history: list = []
    refine(lts, seeded=False, history=history)
    for k, blocks in enumerate(history):
        if blocks[i] != blocks[j]:
            return k
    return None


@dataclass(frozen=True)
class Equivalent:
    lts: Lts
    partition: tuple[tuple[int, ...], ...]
    mode: str

    def to_json(self):
        return {"partition": [list(b) for b in self.partition],
                "states": [render(s) for s in self.lts.states]}


def check_partition(lts: Lts, partition) -> bool:
    """True iff ``partition`` is a bisimulation on ``lts``."""
    block_of = {}
    for b, members in enumerate(partition):
        for i in members:
            block_of[i] = b
    if sorted(block_of) != list(range(len(lts.states))):
        return False
    out = lts.outgoing()
    for members in partition:
        sigs = {frozenset((e, block_of[j]) for e, j in out[i]) for i in members}
        if len(sigs) > 1:
            return False
    return True


def bisimulation(s: Term, t: Term, mode: str = SPLIT2):
    """Decide bisimilarity; return :class:`Equivalent` or :class:`Distinguished`."""
    lts = build_lts([s, t], event_filter(mode))
    blocks, _ = refine(lts)
    i, j = lts.roots
    if blocks[i] == blocks[j]:
        groups: dict[int, list[int]] = {}
        for k, b in enumerate(blocks):
            groups.setdefault(b, []).append(k)
        return Equivalent(lts, tuple(tuple(g) for g in groups.values()), mode)
    return distinguish(s, t, mode)


def bisimilar(s: Term, t: Term, mode: str = SPLIT2) -> bool:
    lts = build_lts([s, t], event_filter(mode))
    blocks, _ = refine(lts)
    i, j = lts.roots
    return blocks[i] == blocks[j]


# --------------------------------------------------- distinguishing formulas

@dataclass(frozen=True)
class _TT:
    def __repr__(self):
        return "TT"


TT = _TT()


@dataclass(frozen=True)
class Diamond:
    event: str
    body: object = TT


@dataclass(frozen=True)
class Conj:
    parts: tuple


@dataclass(frozen=True)
class Neg:
    body: object


def conj(parts) -> object:
    uniq = sorted(set(parts), key=formula_rank)
    if not uniq:
        return TT
    if len(uniq) == 1:
        return uniq[0]
    return Conj(tuple(uniq))


def satisfies(s: Term, f) -> bool:
    if f is TT or isinstance(f, _TT):
        return True
    if isinstance(f, Diamond):
        return any(e == f.event and satisfies(t, f.body) for e, t in transitions(s))
    if isinstance(f, Conj):
        return all(satisfies(s, g) for g in f.parts)
    if isinstance(f, Neg):
        return not satisfies(s, f.body)
    raise TypeError(f"not a formula: {f!r}")


def modal_depth(f) -> int:
    if isinstance(f, Diamond):
        return 1 + modal_depth(f.body)
    if isinstance(f, Conj):
        return max(modal_depth(g) for g in f.parts)
    if isinstance(f, Neg):
        return modal_depth(f.body)
    return 0


def _negs(f) -> int:
    if isinstance(f, Diamond):
        return _negs(f.body)
    if isinstance(f, Conj):
        return sum(_negs(g) for g in f.parts)
    if isinstance(f, Neg):
        return 1 + _negs(f.body)
    return 0


def formula_to_json(f):
    if isinstance(f, Diamond):
        return ["dia", f.event, formula_to_json(f.body)]
    if isinstance(f, Conj):
        return ["and"] + [formula_to_json(g) for g in f.parts]
    if isinstance(f, Neg):
        return ["not", formula_to_json(f.body)]
    return ["t"]


def formula_from_json(data):
    tag = data[0]
    if tag == "t":
        return TT
    if tag == "dia":
        return Diamond(data[1], formula_from_json(data[2]))
    if tag == "and":
        return Conj(tuple(formula_from_json(g) for g in data[1:]))
    if tag == "not":
        return Neg(formula_from_json(data[1]))
    raise ValueError(f"unknown formula tag {tag!r}")


def event_key(e: str):
    """Fixed event order: finishes, then starts, then plain actions."""
    if e.startswith("F("):
        return (0, e[2:-1])
    if e.startswith("S("):
        return (1, e[2:-1])
    return (2, e)


def _events(f) -> tuple:
    if isinstance(f, Diamond):
        return (event_key(f.event),) + _events(f.body)
    if isinstance(f, Conj):
        return sum((_events(g) for g in f.parts), ())
    if isinstance(f, Neg):
        return ((3, "not"),) + _events(f.body)
    return ()


def formula_rank(f):
    evs = _events(f)
    return (modal_depth(f), _negs(f), len(evs), evs)


@dataclass(frozen=True)
class Distinguished:
    formula: object
    holds_for: str      # "left" or "right"
    mode: str

    def to_json(self):
        return {"formula": formula_to_json(self.formula), "holds_for": self.holds_for}


def _by_class(succ, mode):
    reps = {}
    for t in succ:
        reps.setdefault(bisim_class(t, mode), t)
    return reps


@lru_cache(maxsize=None)
def _holds_not(s: Term, t: Term, mode: str):
    """A formula true at ``s`` and false at ``t`` (which must be apart)."""
    ms, mt = moves(s, mode), moves(t, mode)
    events = sorted({e for e, _ in ms} | {e for e, _ in mt}, key=event_key)
    candidates = []
    for e in events:
        s_next = _by_class([u for f, u in ms if f == e], mode)
        t_next = _by_class([u for f, u in mt if f == e], mode)
        for c, u in s_next.items():
            if c not in t_next:
                body = conj(_holds_not(u, v, mode) for v in t_next.values())
                candidates.append(Diamond(e, body))
        for c, v in t_next.items():
            if c not in s_next:
                body = conj(_holds_not(v, u, mode) for u in s_next.values())
                candidates.append(Neg(Diamond(e, body)))
    if not candidates:
        raise EquivalentStates(f"{render(s)} and {render(t)} are bisimilar")
    return min(candidates, key=formula_rank)


def distinguish(s: Term, t: Term, mode: str = SPLIT2) -> Distinguished:
    """Shallowest formula telling ``s`` and ``t`` apart.

    Candidates are ranked by modal depth, then number of negations, then
    size; ``holds_for`` says which argument satisfies the formula.
    """
    if same_class(s, t, mode):
        raise EquivalentStates(f"{render(s)} and {render(t)} are bisimilar ({mode})")
    left = _holds_not(s, t, mode)
    right = _holds_not(t, s, mode)
    if formula_rank(left) <= formula_rank(right):
        return Distinguished(left, "left", mode)
    return Distinguished(right, "right", mode)


# ------------------------------------------------------------ e_n family

def check_en_family(n: int) -> dict:
    """Verdicts for the equation ``a.0 |/ p_n = a.p_n + sum_i tau.a^i``.

    The two sides are strongly bisimilar but not split-2 bisimilar: the
    right side's ``S(a)`` move to ``@a.p_n`` is matched only by
    ``@a.0 | p_n``, which can start ``~a`` while ``@a.p_n`` can only
    finish ``a``.
    """
    from .families import gen_en, gen_pn
    from .terms import NIL, Started

    lhs, rhs = gen_en(n)
    pn = gen_pn(n)
    sa = start("a")
    lhs_sa = sorted(t for e, t in transitions(lhs) if e == sa)
    rhs_target = Started("a", pn)
    candidate = Par(Started("a", NIL), pn)
    candidate_events = sorted({e for e, _ in transitions(candidate)})
    rhs_events = sorted({e for e, _ in transitions(rhs_target)})
    strong = bisimilar(lhs, rhs, STRONG)
    split2 = bisimilar(lhs, rhs, SPLIT2)
    return {
        "n": n,
        "lhs": render(lhs),
        "rhs": render(rhs),
        "strong": strong,
        "split2": split2,
        "rhs_has_S(a)_move_to": render(rhs_target)
        if (sa, rhs_target) in transitions(rhs) else None,
        "lhs_S(a)_derivatives": [render(t) for t in lhs_sa],
        "candidate_events": candidate_events,
        "target_events": rhs_events,
        "ok": (strong and not split2 and lhs_sa == [candidate]
               and start("~a") in candidate_events and rhs_events == [finish("a")]
               and (sa, rhs_target) in transitions(rhs)),
    }
