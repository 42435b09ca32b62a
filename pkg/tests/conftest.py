from __future__ import annotations

import hypothesis.strategies as st
from hypothesis import settings

from ccsh.terms import NIL, TAU, HMerge, Par, Prefix, Started, plus

settings.register_profile("ccsh", max_examples=60, deadline=None)
settings.load_profile("ccsh")

ACTIONS = (TAU, "a", "~a", "b", "~b")
VISIBLE = ("a", "~a", "b", "~b")


def processes(max_leaves: int = 6):
    """Closed processes over the names a and b."""
    return st.recursive(
        st.just(NIL),
        lambda kids: st.one_of(
            st.builds(Prefix, st.sampled_from(ACTIONS), kids),
            st.builds(lambda p, q: plus(p, q), kids, kids),
            st.builds(Par, kids, kids),
            st.builds(HMerge, kids, kids),
        ),
        max_leaves=max_leaves,
    )


def states(max_leaves: int = 5):
    """Closed states: processes, started prefixes and their compositions."""
    return st.recursive(
        st.one_of(processes(max_leaves),
                  st.builds(Started, st.sampled_from(VISIBLE), processes(3))),
        lambda kids: st.builds(Par, kids, kids),
        max_leaves=3,
    )
