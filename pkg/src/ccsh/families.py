"""Generators for the term families used as regression corpora."""
from __future__ import annotations

from .terms import NIL, TAU, HMerge, Prefix, Term, plus

__all__ = ["power", "gen_pn", "gen_en"]


def power(action: str, n: int) -> Term:
    """``action`` repeated ``n`` times: ``a^0 = 0``, ``a^(m+1) = a.a^m``."""
    t = NIL
    for _ in range(n):
        t = Prefix(action, t)
    return t


def gen_pn(n: int) -> Term:
    """``p_n = sum_{i=0..n} ~a.a^i``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return plus(*(Prefix("~a", power("a", i)) for i in range(n + 1)))


def gen_en(n: int) -> tuple[Term, Term]:
    """Both sides of ``a.0 |/ p_n = a.p_n + sum_{i=0..n} tau.a^i``."""
    pn = gen_pn(n)
    lhs = HMerge(Prefix("a", NIL), pn)
    rhs = plus(Prefix("a", pn), *(Prefix(TAU, power("a", i)) for i in range(n + 1)))
    return lhs, rhs
