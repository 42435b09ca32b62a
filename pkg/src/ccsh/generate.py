"""Exhaustive and random generation of closed processes."""
from __future__ import annotations

import random
from functools import lru_cache

from .terms import NIL, TAU, HMerge, Par, Prefix, Term, plus

__all__ = ["actions_over", "terms_of_size", "closed_terms", "random_term"]


def actions_over(names) -> tuple[str, ...]:
    """``tau`` plus every name and co-name."""
    out = [TAU]
    for n in sorted(names):
        out += [n, "~" + n]
    return tuple(out)


_BINARY = (lambda p, q: plus(p, q), HMerge, Par)


@lru_cache(maxsize=None)
def terms_of_size(names: tuple[str, ...], n: int) -> tuple[Term, ...]:
    """All closed processes of size exactly ``n``, one per AC class of ``+``."""
    if n <= 0:
        return ()
    if n == 1:
        return (NIL,)
    out: dict[Term, None] = {}
    for a in actions_over(names):
        for p in terms_of_size(names, n - 1):
            out[Prefix(a, p)] = None
    for i in range(1, n - 1):
        for p in terms_of_size(names, i):
            for q in terms_of_size(names, n - 1 - i):
                for op in _BINARY:
                    out[op(p, q)] = None
    return tuple(sorted(out))


def closed_terms(names, max_size: int) -> list[Term]:
    """All closed processes of size at most ``max_size``, smallest first."""
    names = tuple(sorted(names))
    return [t for n in range(1, max_size + 1) for t in terms_of_size(names, n)]


def random_term(rng: random.Random, names, max_height: int = 4) -> Term:
    """A random closed process whose syntax tree has height at most
    ``max_height`` (``0`` has height 0)."""
    acts = actions_over(names)
    if max_height <= 0 or rng.random() < 0.15:
        return NIL
    k = rng.random()
    if k < 0.4:
        return Prefix(rng.choice(acts), random_term(rng, names, max_height - 1))
    op = rng.choice(_BINARY)
    return op(random_term(rng, names, max_height - 1),
              random_term(rng, names, max_height - 1))
