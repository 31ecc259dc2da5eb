"""Büchi-specific operations: lasso membership, intersection, emptiness."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import graphs
from .automaton import Automaton, LassoWord, Mode, Symbol, Word
from .errors import ContractError, InputError


def _require_buchi(*automata: Automaton) -> None:
    for a in automata:
        if a.mode is not Mode.BUCHI:
            raise ContractError("expected a Büchi automaton")


def accepts_lasso(a: Automaton, w: LassoWord) -> bool:
    """Does ``a`` accept ``stem . loop^omega``?

    Searches the graph of (state, position) pairs, where positions past the
    end of the loop wrap to the start of the loop, for a reachable cycle
    through a final state.
    """
    _require_buchi(a)
    letters = a.check_word(w.stem + w.loop)
    idx = [a.symbol_index(s) for s in letters]
    stem_len, total = len(w.stem), len(letters)

    def nxt(p):
        return p + 1 if p + 1 < total else stem_len

    def succ(v):
        q, p = divmod(v, total)
        p2 = nxt(p)
        return [t * total + p2 for t in a.delta[q][idx[p]]]

    start = a.initial * total
    seen = sorted(graphs.reachable([start], succ))
    for comp in graphs.tarjan_scc(seen, succ):
        if graphs.is_nontrivial(comp, succ) and any(v // total in a.finals for v in comp):
            return True
    return False


@dataclass(frozen=True)
class AcceptingLasso:
    word: LassoWord
    stem_states: list[int]  # len(stem) + 1 states, ending at the cycle entry
    loop_states: list[int]  # len(loop) + 1 states, first == last


def _letter_edges(a: Automaton):
    def edges(q):
        return [(sym, t) for i, sym in enumerate(a.alphabet) for t in sorted(a.delta[q][i])]

    return edges


def find_accepting_lasso(a: Automaton) -> AcceptingLasso | None:
    """A reachable accepting cycle, or None if the language is empty.

    The stem is a shortest path to the first final state (in BFS order) that
    lies on a cycle; the loop is a shortest cycle through that state.
    """
    reach = graphs.reachable([a.initial], a.graph_successors)
    good: set[int] = set()
    comp_of: dict[int, int] = {}
    for c, comp in enumerate(graphs.tarjan_scc(sorted(reach), a.graph_successors)):
        for q in comp:
            comp_of[q] = c
        if graphs.is_nontrivial(comp, a.graph_successors):
            good.update(q for q in comp if q in a.finals)
    if not good:
        return None
    edges = _letter_edges(a)
    stem_letters, stem_states = graphs.bfs_path([a.initial], edges, lambda q: q in good)
    f = stem_states[-1]
    loop_letters, loop_states = graphs.bfs_path(
        [f], edges, lambda q: q == f, allowed=lambda q: comp_of.get(q) == comp_of[f], min_length=1
    )
    lasso = LassoWord(tuple(stem_letters), tuple(loop_letters))
    return AcceptingLasso(lasso, stem_states, loop_states)


def is_empty_buchi(a: Automaton) -> tuple[bool, LassoWord | None]:
    _require_buchi(a)
    found = find_accepting_lasso(a)
    return (True, None) if found is None else (False, found.word)


def intersect_nba(a1: Automaton, a2: Automaton) -> Automaton:
    """Two-phase product recognising ``L(a1) & L(a2)``.

    State ``(q1, q2, phase)`` has index ``(q1 * |Q2| + q2) * 2 + phase - 1``.
    Phase 1 waits for an ``a1``-final state and phase 2 for an ``a2``-final
    one; the final states are the phase-2 states whose ``q2`` is final, from
    which the phase flips back to 1.
    """
    _require_buchi(a1, a2)
    if a1.alphabet != a2.alphabet:
        raise InputError("alphabet mismatch")
    n2 = a2.num_states

    def encode(p, q, phase):
        return (p * n2 + q) * 2 + phase - 1

    delta = []
    finals = set()
    for p in a1.states:
        for q in a2.states:
            for phase in (1, 2):
                if phase == 1:
                    nphase = 2 if p in a1.finals else 1
                else:
                    nphase = 1 if q in a2.finals else 2
                    if q in a2.finals:
                        finals.add(encode(p, q, phase))
                row = []
                for i in range(len(a1.alphabet)):
                    row.append(
                        frozenset(
                            encode(p2, q2, nphase) for p2 in a1.delta[p][i] for q2 in a2.delta[q][i]
                        )
                    )
                delta.append(tuple(row))
    return Automaton(
        a1.alphabet,
        a1.num_states * n2 * 2,
        encode(a1.initial, a2.initial, 1),
        tuple(delta),
        frozenset(finals),
        Mode.BUCHI,
    )


def loopify(a: Automaton) -> Automaton:
    """Send every blocking transition back to the initial state; switch to Büchi."""
    if a.mode is not Mode.FINITE:
        raise ContractError("loopify expects a finite-word automaton")
    back = frozenset({a.initial})
    delta = tuple(tuple(t if t else back for t in row) for row in a.delta)
    return Automaton(a.alphabet, a.num_states, a.initial, delta, a.finals, Mode.BUCHI)


# -- bounded lasso equivalence ---------------------------------------------
#
# Brute force over every stem of length <= B and loop of length 1..B is
# exponential in B. The check below is equivalent but quotients words by
# what the automata can observe: a stem matters only through the pair of
# state sets it reaches, and a loop only through its transition profile
# (which states reach which, and whether a final state is visited).


def _loop_profile_step(a: Automaton, profile, sym_index: int):
    reach, reach_f = profile
    new_reach = []
    new_f = []
    for q in a.states:
        r = set()
        rf = set()
        for p in reach[q]:
            for t in a.delta[p][sym_index]:
                r.add(t)
                if t in a.finals:
                    rf.add(t)
        for p in reach_f[q]:
            rf.update(a.delta[p][sym_index])
        new_reach.append(frozenset(r))
        new_f.append(frozenset(rf))
    return tuple(new_reach), tuple(new_f)


def _identity_profile(a: Automaton):
    return tuple(frozenset({q}) for q in a.states), tuple(frozenset() for _ in a.states)


def _omega_acceptors(a: Automaton, profile) -> frozenset[int]:
    """States from which ``v^omega`` is accepted, ``v`` the word behind the profile."""
    reach, reach_f = profile

    def succ(q):
        return reach[q]

    good_edges = [(x, y) for x in a.states for y in reach_f[x]]
    # An F-edge x -> y lies on a cycle iff x is reachable from y.
    on_cycle = {x for x, y in good_edges if x in graphs.reachable([y], succ)}
    result = set()
    for q in a.states:
        if graphs.reachable([q], succ) & on_cycle:
            result.add(q)
    return frozenset(result)


def _stem_classes(a1: Automaton, a2: Automaton, bound: int) -> list[tuple[Word, frozenset, frozenset]]:
    start = (frozenset({a1.initial}), frozenset({a2.initial}))
    found = {start: ()}
    frontier = [start]
    for _ in range(bound):
        nxt = []
        for s1, s2 in frontier:
            w = found[(s1, s2)]
            for sym in a1.alphabet:
                key = (a1.post(s1, sym), a2.post(s2, sym))
                if key not in found:
                    found[key] = w + (sym,)
                    nxt.append(key)
        frontier = nxt
    return [(w, s1, s2) for (s1, s2), w in found.items()]


def _loop_classes(a1: Automaton, a2: Automaton, bound: int):
    start = (_identity_profile(a1), _identity_profile(a2))
    seen = set()
    frontier = [((), start)]
    out = []
    for _ in range(bound):
        nxt = []
        for w, (p1, p2) in frontier:
            for i, sym in enumerate(a1.alphabet):
                key = (_loop_profile_step(a1, p1, i), _loop_profile_step(a2, p2, i))
                if key not in seen:
                    seen.add(key)
                    entry = (w + (sym,), key)
                    nxt.append(entry)
                    out.append(entry)
        frontier = nxt
    return out


def buchi_equiv_on_lassos(
    a1: Automaton, a2: Automaton, bound: int | None = None
) -> tuple[bool, LassoWord | None]:
    """Compare acceptance on every lasso with ``|stem| <= bound`` and ``1 <= |loop| <= bound``.

    Returns the first disagreement in (loop, stem) length-lexicographic order.
    The default bound is ``2 * max(|Q1|, |Q2|) + 2``. Agreement is evidence,
    not a proof of language equivalence.
    """
    _require_buchi(a1, a2)
    if a1.alphabet != a2.alphabet:
        raise InputError("alphabet mismatch")
    if bound is None:
        bound = 2 * max(a1.num_states, a2.num_states) + 2
    if bound < 1:
        raise InputError("bound must be at least 1")
    stems = _stem_classes(a1, a2, bound)
    stems.sort(key=lambda e: (len(e[0]), [a1.symbol_index(s) for s in e[0]]))
    verdicts: dict[tuple[frozenset, frozenset], list] = {}
    for loop, (p1, p2) in _loop_classes(a1, a2, bound):
        acc = (_omega_acceptors(a1, p1), _omega_acceptors(a2, p2))
        verdicts.setdefault(acc, []).append(loop)
    first: tuple | None = None
    for (acc1, acc2), loops in verdicts.items():
        loop = loops[0]
        for stem, s1, s2 in stems:
            if bool(s1 & acc1) != bool(s2 & acc2):
                key = (len(loop), [a1.symbol_index(s) for s in loop],
                       len(stem), [a1.symbol_index(s) for s in stem])
                if first is None or key < first[0]:
                    first = (key, LassoWord(stem, loop))
                break
    if first is None:
        return True, None
    return False, first[1]


def iter_lassos(alphabet: Iterable[Symbol], max_stem: int, max_loop: int):
    """All lassos within the bounds, loops then stems in length-lex order."""
    from itertools import product

    alphabet = tuple(alphabet)
    for lk in range(1, max_loop + 1):
        for loop in product(alphabet, repeat=lk):
            for sk in range(0, max_stem + 1):
                for stem in product(alphabet, repeat=sk):
                    yield LassoWord(stem, loop)


def determinize_weak(a: Automaton) -> Automaton:
    """Complete DBA for a safety or reachability NBA by plain subset construction.

    For a safety automaton a word is accepted iff the set of reachable states
    never empties; for a reachability automaton iff some prefix reaches the
    final sink. In both cases the subset automaton, with the added non-final
    sink, accepts exactly the same words under Büchi acceptance.
    """
    _require_buchi(a)
    if not (a.safety or a.reachability):
        raise ContractError("plain subset construction is only sound for safety or reachability NBAs")
    from .dfa import complete_with_sink, determinize

    return complete_with_sink(determinize(a)[0])
