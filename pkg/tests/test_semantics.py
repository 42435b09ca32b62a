from __future__ import annotations

import json
from collections import Counter

import pytest
from hypothesis import given

from ccsh.semantics import (OpenTermError, build_lts, depth, initial_events,
                            traces, transitions)
from ccsh.syntax import parse
from ccsh.terms import NIL, Par

from conftest import processes, states


def moves(text):
    return {(e, t) for e, t in transitions(parse(text))}


def test_prefix_rules():
    assert moves("a.0") == {("S(a)", parse("@a.0")), ("a", NIL)}
    assert moves("@a.b.0") == {("F(a)", parse("b.0"))}
    assert moves("tau.a") == {("tau", parse("a"))}


def test_merge_example():
    assert moves("a.0 |/ ~a.0") == {
        ("S(a)", parse("@a.0 | ~a.0")),
        ("a", parse("0 | ~a.0")),
        ("tau", parse("0 | 0")),
    }


def test_merge_right_side_cannot_move_first():
    assert initial_events(parse("0 |/ a")) == set()
    assert initial_events(parse("b |/ a")) == {"S(b)", "b"}


def test_no_synchronisation_on_split_events():
    # the started halves may not synchronise: only a and ~a do
    s = parse("@a.0 | @~a.0")
    assert {e for e, _ in transitions(s)} == {"F(a)", "F(~a)"}
    assert ("tau", parse("0 | 0")) in transitions(parse("a | ~a"))


def test_choice_and_parallel():
    assert moves("a + b") == moves("a") | moves("b")
    assert ("tau", parse("0|0")) in moves("a|~a")
    assert len(moves("a|b")) == 4


def test_open_terms_rejected():
    with pytest.raises(OpenTermError):
        transitions(parse("x", variables="x"))
    with pytest.raises(OpenTermError):
        build_lts([parse("a.x", variables="x")])


@pytest.mark.parametrize("text, d", [("0", 0), ("a.0", 2), ("a.0 | b.0", 4),
                                     ("tau.tau", 2), ("@a.b", 3), ("a |/ b", 4)])
def test_depth(text, d):
    assert depth(parse(text)) == d


def test_traces_examples():
    assert traces(NIL) == {()}
    assert traces(parse("tau")) == {(), ("tau",)}
    assert traces(parse("a")) == {(), ("a",), ("S(a)",), ("S(a)", "F(a)")}
    assert traces(parse("a.b"), 1) == {(), ("a",), ("S(a)",)}


def test_build_lts_examples():
    assert len(build_lts([NIL]).states) == 1
    lts = build_lts([parse("a")])
    assert set(lts.states) == {parse("a"), parse("@a.0"), NIL}
    assert len(lts.transitions) == 3
    assert len(build_lts([parse("a | b")]).states) == 9


def test_lts_json_is_deterministic():
    lts = build_lts([parse("a |/ ~a")])
    data = json.loads(lts.to_json())
    assert data["roots"] == [0]
    assert data["states"][0] == "a.0 |/ ~a.0"
    assert lts.to_json() == build_lts([parse("a |/ ~a")]).to_json()
    assert all(len(t) == 3 for t in data["transitions"])


def test_lts_event_filter():
    lts = build_lts([parse("a | b")], event_filter=lambda e: "(" not in e)
    assert len(lts.states) == 4


@given(states())
def test_transitions_decrease_depth(s):
    for t in build_lts([s]).states:
        for _, u in transitions(t):
            assert depth(u) < depth(t)


@given(states(), states())
def test_depth_is_additive(s, t):
    assert depth(Par(s, t)) == depth(s) + depth(t)


@given(states())
def test_depth_is_longest_trace(s):
    assert depth(s) == max(len(tr) for tr in traces(s))


@given(processes())
def test_finishes_never_outrun_starts(p):
    for tr in traces(p):
        seen = Counter()
        for e in tr:
            if e.startswith("S("):
                seen[e[2:-1]] += 1
            elif e.startswith("F("):
                seen[e[2:-1]] -= 1
                assert seen[e[2:-1]] >= 0
