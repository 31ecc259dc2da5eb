"""Hypothesis strategies for small random automata."""
from __future__ import annotations

from hypothesis import strategies as st

from omegasucc.automaton import Automaton, Mode

SMALL_ALPHABET = ("a", "b")


@st.composite
def automata(draw, alphabet=SMALL_ALPHABET, max_states=4, mode=Mode.FINITE, deterministic=False, complete=False):
    n = draw(st.integers(1, max_states))
    rows = []
    for _ in range(n):
        row = []
        for _ in alphabet:
            if deterministic:
                lo = 1 if complete else 0
                row.append(frozenset(draw(st.sets(st.integers(0, n - 1), min_size=lo, max_size=1))))
            else:
                lo = 1 if complete else 0
                row.append(frozenset(draw(st.sets(st.integers(0, n - 1), min_size=lo, max_size=n))))
        rows.append(tuple(row))
    finals = draw(st.sets(st.integers(0, n - 1)))
    return Automaton(tuple(alphabet), n, 0, tuple(rows), frozenset(finals), mode)


def buchi_automata(**kw):
    return automata(mode=Mode.BUCHI, **kw)


def dfas(**kw):
    return automata(deterministic=True, complete=True, **kw)
