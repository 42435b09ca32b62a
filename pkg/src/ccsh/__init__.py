"""Verification workbench for CCS with Hennessy's merge under split-2 semantics."""

from .terms import (NIL, TAU, HMerge, Nil, Par, Prefix, Started, Sum, Term, Var,
                    ac_canonical, apply_subst, plus, size)
from .syntax import ParseError, parse, render

__version__ = "0.1.0"
