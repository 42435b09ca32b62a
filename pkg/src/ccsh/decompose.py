"""Prime decomposition of states, checked by brute force over a bounded
universe of bisimilarity classes.

The universe holds one representative per split-2 class of states of depth
at most ``max_depth``.  It is computed as a fixpoint: every constructor of
the grammar is applied to the current representatives and results within
the depth bound are added when they form a new class.  Because
bisimilarity is a congruence, and an argument of a constructor never has
larger depth than the result unless the result is bisimilar to ``0``, this
reaches every class.

For a single state ``s`` a much smaller *local* universe suffices: a factor
of ``s`` is simulated by ``s``, and the arguments of any constructor whose
result is simulated by a state reachable from ``s`` are again simulated by
such a state.  Filtering candidates by this test keeps every class a
factorisation of ``s`` can use.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement

from .equivalence import bisim_class
from .semantics import build_lts, depth, traces, transitions
from .syntax import names, render
from .terms import NIL, TAU, HMerge, Par, Prefix, Started, Term, finish, plus

__all__ = ["BoundError", "Universe", "PrimeFactorization", "enumerate_universe",
           "local_universe", "simulated_by",
           "is_prime", "factorize", "all_factorizations", "uniqueness_audit",
           "twice", "DEFAULT_CAP"]

DEFAULT_CAP = 10**6


class BoundError(ValueError):
    pass


def _rank(t: Term) -> tuple[int, str]:
    s = render(t)
    return len(s), s


@dataclass
class Universe:
    """Class representatives, in canonical order (``states[0]`` is ``0``)."""

    states: list[Term]
    max_depth: int
    alphabet: tuple[str, ...]
    candidates: int = 0
    local: bool = False
    _index: dict[int, int] = field(default_factory=dict, repr=False)
    _splits: dict[int, list[tuple[int, int]]] | None = field(default=None, repr=False)

    def __post_init__(self):
        self._index = {bisim_class(s): i for i, s in enumerate(self.states)}

    def __len__(self):
        return len(self.states)

    def index(self, s: Term) -> int:
        """Universe index of the class of ``s``."""
        if depth(s) > self.max_depth:
            raise BoundError(f"{render(s)} has depth {depth(s)} > {self.max_depth}")
        try:
            return self._index[bisim_class(s)]
        except KeyError:
            raise BoundError(f"{render(s)} is outside the universe alphabet") from None

    def splits(self) -> dict[int, list[tuple[int, int]]]:
        """For each class, the pairs ``i <= j`` of non-0 classes whose
        parallel composition lies in it."""
        if self._splits is None:
            table: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(self))}
            ds = [depth(s) for s in self.states]
            for i, j in combinations_with_replacement(range(1, len(self)), 2):
                if ds[i] + ds[j] <= self.max_depth:
                    k = self._index.get(bisim_class(Par(self.states[i], self.states[j])))
                    if k is not None:
                        table[k].append((i, j))
            self._splits = table
        return self._splits

    def to_json(self) -> dict:
        return {"max_depth": self.max_depth, "alphabet": list(self.alphabet),
                "states": [render(s) for s in self.states]}


@lru_cache(maxsize=None)
def simulated_by(s: Term, t: Term) -> bool:
    """Is ``s`` simulated by ``t`` (over all events)?"""
    if depth(s) > depth(t):
        return False
    succ: dict[str, list[Term]] = {}
    for e, t2 in transitions(t):
        succ.setdefault(e, []).append(t2)
    return all(any(simulated_by(s2, t2) for t2 in succ.get(e, ()))
               for e, s2 in transitions(s))


def enumerate_universe(alphabet, max_depth: int, cap: int = DEFAULT_CAP,
                       within: Term | None = None) -> Universe:
    """All split-2 classes of states of depth at most ``max_depth``.

    With ``within``, only classes simulated by a state reachable from it
    are kept.  Raises :class:`BoundError` once more than ``cap`` candidate
    terms have been built.
    """
    if max_depth < 0:
        raise BoundError("max_depth must be non-negative")
    alphabet = tuple(sorted(set(alphabet)))
    visible = [x for n in alphabet for x in (n, "~" + n)]
    hosts = [NIL] if within is None else list(build_lts([within]).states)
    everyone = (1 << len(hosts)) - 1
    zero = bisim_class(NIL)
    reps: dict[int, Term] = {zero: NIL}
    # bit k set: the class is simulated by hosts[k] (unused without ``within``)
    masks: dict[int, int] = {zero: everyone}
    ranks: dict[int, tuple[int, str]] = {zero: _rank(NIL)}
    depths: dict[int, int] = {zero: 0}
    count = 0
    fresh: set[int] = set()

    def offer(t: Term, d: int, allowed: int) -> None:
        # ``d`` is the depth of ``t``, computed from its arguments
        nonlocal count
        count += 1
        if count > cap:
            raise BoundError(f"more than {cap} candidate terms; lower the bounds")
        if d > max_depth:
            return
        if within is not None:
            allowed = sum(1 << k for k in range(len(hosts))
                          if allowed >> k & 1 and simulated_by(t, hosts[k]))
            if not allowed:
                return
        c = bisim_class(t)
        old = ranks.get(c)
        r = _rank(t)
        if old is None or r < old:
            reps[c], ranks[c], depths[c], masks[c] = t, r, d, allowed
            fresh.add(c)

    fresh.add(zero)
    while fresh:
        new_ids = set(fresh)
        fresh.clear()
        items = sorted(reps.items(), key=lambda kv: ranks[kv[0]])
        for c, p in items:
            if c not in new_ids or not p.process:
                continue
            d = depths[c]
            offer(Prefix(TAU, p), d + 1, everyone)
            for a in visible:
                offer(Started(a, p), d + 1, everyone)
                offer(Prefix(a, p), d + 2, everyone)
        for i, (c1, s) in enumerate(items):
            d1 = depths[c1]
            for c2, t in items[i:]:
                if c1 not in new_ids and c2 not in new_ids:
                    continue
                d2 = depths[c2]
                # 0 is a unit for + and |
                both = masks[c1] & masks[c2] if zero not in (c1, c2) else 0
                if both:
                    offer(Par(s, t), d1 + d2, both)
                if s.process and t.process:
                    if both:
                        offer(plus(s, t), max(d1, d2), both)
                    offer(HMerge(s, t), d1 + d2 if d1 else 0, masks[c1])
                    if s != t:
                        offer(HMerge(t, s), d1 + d2 if d2 else 0, masks[c2])
    states = sorted(reps.values(), key=_rank)
    return Universe(states, max_depth, alphabet, count, local=within is not None)


def local_universe(s: Term, cap: int = DEFAULT_CAP) -> Universe:
    """Enough of the universe to decide primality and factors of ``s``."""
    return enumerate_universe(names(s), depth(s), cap, within=s)


# ------------------------------------------------------------ factorisation

def is_prime(s: Term, u: Universe) -> bool:
    """``s`` is not bisimilar to 0 and is not a parallel composition of two
    states that are not bisimilar to 0."""
    i = u.index(s)
    return i != 0 and not u.splits()[i]


@dataclass(frozen=True)
class PrimeFactorization:
    factors: tuple[int, ...]        # sorted universe indices
    universe: Universe = field(repr=False, compare=False)

    def terms(self) -> list[Term]:
        return [self.universe.states[i] for i in self.factors]

    def compose(self) -> Term:
        ts = self.terms()
        if not ts:
            return NIL
        out = ts[0]
        for t in ts[1:]:
            out = Par(out, t)
        return out

    def multiplicities(self) -> dict[str, int]:
        return dict(Counter(render(t) for t in self.terms()))

    def to_json(self) -> dict:
        return {"factors": [render(t) for t in self.terms()]}


def factorize(s: Term, u: Universe) -> PrimeFactorization:
    """Greedy decomposition: peel off the first prime (in canonical order)
    that has a cofactor in the universe."""
    out = []
    i = u.index(s)
    splits = u.splits()
    while i != 0:
        if not splits[i]:
            out.append(i)
            break
        prime_split = next(((a, b) for a, b in _ordered(splits[i]) if not splits[a]), None)
        if prime_split is None:
            raise RuntimeError(f"no prime factor found for {render(u.states[i])}")
        a, i = prime_split
        out.append(a)
    return PrimeFactorization(tuple(sorted(out)), u)


def _ordered(pairs):
    """Both orientations of each split, sorted by first component."""
    return sorted({(a, b) for a, b in pairs} | {(b, a) for a, b in pairs})


def all_factorizations(i: int, u: Universe) -> frozenset[tuple[int, ...]]:
    """Every multiset of prime classes obtained by splitting class ``i``
    repeatedly in every possible way."""
    splits = u.splits()

    @lru_cache(maxsize=None)
    def go(k: int) -> frozenset[tuple[int, ...]]:
        if k == 0:
            return frozenset([()])
        if not splits[k]:
            return frozenset([(k,)])
        out = set()
        for a, b in splits[k]:
            for fa in go(a):
                for fb in go(b):
                    out.add(tuple(sorted(fa + fb)))
        return frozenset(out)

    return go(i)


def twice(s: Term, event: str) -> bool:
    """Can ``s`` perform ``event`` two times in a row, right away?"""
    return (event, event) in traces(s, 2)


@dataclass
class AuditReport:
    states: int = 0
    primes: int = 0
    started_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"states": self.states, "primes": self.primes,
                "started_checked": self.started_checked,
                "violations": list(self.violations)}


def uniqueness_audit(u: Universe) -> AuditReport:
    """Check every universe state: greedy factorisation recomposes to it and
    uses primes, all factorisations agree, and every started state
    ``@a.p`` is prime and cannot finish ``a`` twice in a row, unlike a
    parallel composition of two started ``a``."""
    rep = AuditReport(states=len(u))
    splits = u.splits()
    for i, s in enumerate(u.states):
        name = render(s)
        if i and not splits[i]:
            rep.primes += 1
        try:
            f = factorize(s, u)
        except RuntimeError as exc:
            rep.violations.append(str(exc))
            continue
        if bisim_class(f.compose()) != bisim_class(s):
            rep.violations.append(f"factors of {name} do not recompose to it")
        if any(splits[k] or k == 0 for k in f.factors):
            rep.violations.append(f"{name} has a non-prime factor")
        every = all_factorizations(i, u)
        if every != {f.factors}:
            rep.violations.append(f"{name} has {len(every)} distinct prime factorisations")
    for p in u.states:
        if not p.process or depth(p) + 1 > u.max_depth:
            continue
        for n in u.alphabet:
            for a in (n, "~" + n):
                s = Started(a, p)
                if u.local and bisim_class(s) not in u._index:
                    continue
                rep.started_checked += 1
                if not is_prime(s, u):
                    rep.violations.append(f"{render(s)} is not prime")
                if twice(s, finish(a)):
                    rep.violations.append(f"{render(s)} can finish {a} twice")
                double = Par(Started(a, NIL), s)
                if not twice(double, finish(a)):
                    rep.violations.append(f"{render(double)} cannot finish {a} twice")
    return rep
