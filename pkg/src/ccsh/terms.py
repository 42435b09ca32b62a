"""Abstract syntax for CCS with Hennessy's merge, plus operational states.

Terms are immutable and hashable.  Every node caches its hash and an
ordering key, so terms can be used freely as dictionary keys by the
memoised semantics and equivalence code.

Sums are kept flattened and sorted (equality modulo associativity and
commutativity of ``+``); duplicates are kept, so idempotence of ``+`` is
always an explicit proof step.

Actions and events are plain strings: ``"tau"``, ``"a"``, ``"~a"`` for
actions and additionally ``"S(a)"`` / ``"F(~a)"`` for the start and finish
events of a visible action.
"""
from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping

TAU = "tau"

__all__ = [
    "TAU", "Term", "Nil", "Var", "Prefix", "Sum", "Par", "HMerge", "Started",
    "NIL", "plus", "ac_canonical", "apply_subst", "size", "variables",
    "is_closed", "is_process", "complement", "is_visible", "action_name",
    "start", "finish", "is_act_event", "subterm", "children",
    "UnboundVariable", "walk",
]


class UnboundVariable(KeyError):
    pass


# ---------------------------------------------------------------- actions

def is_visible(action: str) -> bool:
    return action != TAU


def complement(action: str) -> str:
    if action == TAU:
        raise ValueError("tau has no complement")
    return action[1:] if action.startswith("~") else "~" + action


def action_name(action: str) -> str:
    """The underlying name of a visible action (``~a`` -> ``a``)."""
    return action.lstrip("~")


def start(action: str) -> str:
    if action == TAU:
        raise ValueError("only visible actions have a start event")
    return f"S({action})"


def finish(action: str) -> str:
    if action == TAU:
        raise ValueError("only visible actions have a finish event")
    return f"F({action})"


def is_act_event(event: str) -> bool:
    """True for events that are plain actions (no start/finish marker)."""
    return "(" not in event


# ------------------------------------------------------------------ nodes

class Term:
    """Base class of process terms and states."""

    __slots__ = ("_hash", "key", "closed", "process")

    children: tuple[Term, ...] = ()

    def _finish(self, key: tuple, closed: bool, process: bool) -> None:
        self.key = key
        self._hash = hash(key)
        self.closed = closed
        self.process = process

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return self._hash == other._hash and self.key == other.key

    def __lt__(self, other: Term) -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        from .syntax import render
        return f"<{type(self).__name__} {render(self)}>"

    def __str__(self) -> str:
        from .syntax import render
        return render(self)

    def with_children(self, children: tuple[Term, ...]) -> Term:
        raise NotImplementedError


# ordering tags: merges sort before prefixes so that normal forms print as
# action summands followed by tau summands
_T_NIL, _T_VAR, _T_HMERGE, _T_PREFIX, _T_PAR, _T_SUM, _T_STARTED, _T_HOLE = range(8)


class Nil(Term):
    __slots__ = ()

    def __init__(self):
        self._finish((_T_NIL,), True, True)

    def with_children(self, children):
        return self


class Var(Term):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._finish((_T_VAR, name), False, True)

    def with_children(self, children):
        return self


class Prefix(Term):
    __slots__ = ("action", "body")

    def __init__(self, action: str, body: Term):
        if not body.process:
            raise TypeError("prefix body must be a process")
        self.action = action
        self.body = body
        self._finish((_T_PREFIX, action, body.key), body.closed, True)

    @property
    def children(self):
        return (self.body,)

    def with_children(self, children):
        (body,) = children
        return Prefix(self.action, body)


class Sum(Term):
    """n-ary choice.  Use :func:`plus` to obtain the canonical form."""

    __slots__ = ("summands",)

    def __init__(self, summands: Iterable[Term]):
        summands = tuple(summands)
        if len(summands) < 2:
            raise ValueError("a Sum needs at least two summands")
        if not all(s.process for s in summands):
            raise TypeError("summands must be processes")
        self.summands = summands
        self._finish((_T_SUM, tuple(s.key for s in summands)),
                     all(s.closed for s in summands), True)

    @property
    def children(self):
        return self.summands

    def with_children(self, children):
        return plus(*children)


class Par(Term):
    """Parallel composition; a state whenever either side is a state."""

    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        self.left = left
        self.right = right
        self._finish((_T_PAR, left.key, right.key), left.closed and right.closed,
                     left.process and right.process)

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, children):
        return Par(*children)


class HMerge(Term):
    """Hennessy's merge ``p |/ q``."""

    __slots__ = ("left", "right")

    def __init__(self, left: Term, right: Term):
        if not (left.process and right.process):
            raise TypeError("merge arguments must be processes")
        self.left = left
        self.right = right
        self._finish((_T_HMERGE, left.key, right.key), left.closed and right.closed, True)

    @property
    def children(self):
        return (self.left, self.right)

    def with_children(self, children):
        return HMerge(*children)


class Started(Term):
    """The state ``a_S p``: action ``a`` has started but not finished."""

    __slots__ = ("action", "body")

    def __init__(self, action: str, body: Term):
        if not is_visible(action):
            raise ValueError("only visible actions can be started")
        if not body.process:
            raise TypeError("started body must be a process")
        self.action = action
        self.body = body
        self._finish((_T_STARTED, action, body.key), body.closed, False)

    @property
    def children(self):
        return (self.body,)

    def with_children(self, children):
        (body,) = children
        return Started(self.action, body)


NIL = Nil()


def plus(*terms: Term) -> Term:
    """Canonical sum of ``terms``: flattened, sorted, duplicates kept.

    ``plus()`` is ``0`` and ``plus(p)`` is ``p``.
    """
    flat: list[Term] = []
    for t in terms:
        if isinstance(t, Sum):
            flat.extend(t.summands)
        else:
            flat.append(t)
    if not flat:
        return NIL
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=lambda t: t.key)
    return Sum(flat)


def children(t: Term) -> tuple[Term, ...]:
    return t.children


def ac_canonical(t: Term) -> Term:
    """Representative of the class of ``t`` modulo associativity and
    commutativity of ``+``."""
    if not t.children:
        return t
    return t.with_children(tuple(ac_canonical(c) for c in t.children))


def size(t: Term) -> int:
    """Number of operation symbols (variables are not operations)."""
    if isinstance(t, Var):
        return 0
    if isinstance(t, Sum):
        return len(t.summands) - 1 + sum(size(s) for s in t.summands)
    return 1 + sum(size(c) for c in t.children)


def variables(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    out: set[str] = set()
    for c in t.children:
        out |= variables(c)
    return frozenset(out)


def is_closed(t: Term) -> bool:
    return t.closed


def is_process(t: Term) -> bool:
    return t.process


def apply_subst(t: Term, subst: Mapping[str, Term]) -> Term:
    """Replace every variable of ``t`` by its image; the result is canonical."""
    if isinstance(t, Var):
        try:
            return subst[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if t.closed:
        return ac_canonical(t)
    return t.with_children(tuple(apply_subst(c, subst) for c in t.children))


def subterm(t: Term, position: Iterable[int]) -> Term:
    for i in position:
        kids = t.children
        if not 0 <= i < len(kids):
            raise IndexError(f"position index {i} out of range")
        t = kids[i]
    return t


def walk(t: Term) -> Iterator[Term]:
    yield t
    for c in t.children:
        yield from walk(c)
