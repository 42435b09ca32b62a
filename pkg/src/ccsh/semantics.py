"""Event-labelled operational semantics with split actions.

A visible action ``a`` is observed as a start event ``S(a)`` followed by a
finish event ``F(a)``, and may also be taken atomically as ``a``:

    a.p  --S(a)--> @a.p        @a.p --F(a)--> p        mu.p --mu--> p

Choice and parallel composition are as in CCS (with synchronisation on
complementary *actions*, never on start/finish events).  Hennessy's merge
``p |/ q`` lets ``p`` move first with any event, continuing as ``s | q``,
or synchronises a move of ``p`` with a complementary move of ``q``.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .syntax import render
from .terms import (TAU, HMerge, Nil, Par, Prefix, Started, Sum, Term,
                    complement, finish, is_act_event, start)

__all__ = ["OpenTermError", "transitions", "successors", "depth", "traces",
           "Lts", "build_lts", "initial_events"]


class OpenTermError(ValueError):
    pass


def _sync(left, right, make):
    """tau moves from complementary action moves of ``left`` and ``right``."""
    out = set()
    for e1, s1 in left:
        if e1 == TAU or not is_act_event(e1):
            continue
        partner = complement(e1)
        for e2, s2 in right:
            if e2 == partner:
                out.add((TAU, make(s1, s2)))
    return out


@lru_cache(maxsize=None)
def transitions(s: Term) -> frozenset[tuple[str, Term]]:
    """All ``(event, target)`` pairs derivable for the closed state ``s``."""
    if not s.closed:
        raise OpenTermError(f"open term: {render(s)}")
    if isinstance(s, Nil):
        return frozenset()
    if isinstance(s, Prefix):
        if s.action == TAU:
            return frozenset([(TAU, s.body)])
        return frozenset([(start(s.action), Started(s.action, s.body)),
                          (s.action, s.body)])
    if isinstance(s, Started):
        return frozenset([(finish(s.action), s.body)])
    if isinstance(s, Sum):
        out = set()
        for p in s.summands:
            out |= transitions(p)
        return frozenset(out)
    if isinstance(s, Par):
        left, right = transitions(s.left), transitions(s.right)
        out = {(e, Par(l2, s.right)) for e, l2 in left}
        out |= {(e, Par(s.left, r2)) for e, r2 in right}
        out |= _sync(left, right, Par)
        return frozenset(out)
    if isinstance(s, HMerge):
        left = transitions(s.left)
        out = {(e, Par(l2, s.right)) for e, l2 in left}
        out |= _sync(left, transitions(s.right), Par)
        return frozenset(out)
    raise TypeError(f"not a state: {s!r}")


def successors(s: Term, event: str) -> list[Term]:
    return sorted(t for e, t in transitions(s) if e == event)


def initial_events(s: Term) -> frozenset[str]:
    return frozenset(e for e, _ in transitions(s))


@lru_cache(maxsize=None)
def depth(s: Term) -> int:
    """Length of the longest trace of ``s``."""
    return max((1 + depth(t) for _, t in transitions(s)), default=0)


def traces(s: Term, max_len: int | None = None) -> frozenset[tuple[str, ...]]:
    """All event sequences of length at most ``max_len`` (default: all)."""
    if max_len is None:
        max_len = depth(s)
    return _traces(s, max_len)


@lru_cache(maxsize=4096)
def _traces(s: Term, n: int) -> frozenset[tuple[str, ...]]:
    out = {()}
    if n > 0:
        for e, t in transitions(s):
            out.update((e,) + tr for tr in _traces(t, n - 1))
    return frozenset(out)


@dataclass(frozen=True)
class Lts:
    states: tuple[Term, ...]
    transitions: tuple[tuple[int, str, int], ...]
    roots: tuple[int, ...]

    def index(self, state: Term) -> int:
        return self.states.index(state)

    def outgoing(self) -> list[list[tuple[str, int]]]:
        out = [[] for _ in self.states]
        for i, e, j in self.transitions:
            out[i].append((e, j))
        return out

    def to_json(self) -> str:
        data = {
            "states": [render(s) for s in self.states],
            "roots": list(self.roots),
            "transitions": [list(t) for t in self.transitions],
        }
        return json.dumps(data, sort_keys=True)


def build_lts(roots, event_filter=None) -> Lts:
    """Breadth-first closure of ``roots`` under :func:`transitions`.

    States are indexed in discovery order, successors visited sorted by
    (event, target).  ``event_filter`` restricts which events are followed.
    """
    index: dict[Term, int] = {}
    states: list[Term] = []
    queue: deque[Term] = deque()

    def visit(s: Term) -> int:
        if s not in index:
            if not s.closed:
                raise OpenTermError(f"open term: {render(s)}")
            index[s] = len(states)
            states.append(s)
            queue.append(s)
        return index[s]

    root_ids = tuple(visit(r) for r in roots)
    edges = []
    while queue:
        s = queue.popleft()
        i = index[s]
        moves = sorted(transitions(s), key=lambda m: (m[0], m[1].key))
        for e, t in moves:
            if event_filter is not None and not event_filter(e):
                continue
            edges.append((i, e, visit(t)))
    edges.sort()
    return Lts(tuple(states), tuple(edges), root_ids)
