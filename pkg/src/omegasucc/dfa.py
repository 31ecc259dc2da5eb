"""Finite-word operations: membership, determinization, minimization, products."""
from __future__ import annotations

from collections import deque
from typing import Iterable

from . import graphs
from .automaton import Automaton, Mode, Symbol, Word
from .errors import ContractError, InputError


def accepts_finite(a: Automaton, w: Iterable[Symbol]) -> bool:
    """Forward set simulation; a missing transition simply drops the run."""
    w = a.check_word(w)
    current = frozenset({a.initial})
    for sym in w:
        current = a.post(current, sym)
        if not current:
            return False
    return bool(current & a.finals)


def reachable_states(a: Automaton) -> set[int]:
    return graphs.reachable([a.initial], a.graph_successors)


def restrict_to_reachable(a: Automaton) -> Automaton:
    """Drop unreachable states, renumbering the rest in ascending order."""
    keep = sorted(reachable_states(a))
    if len(keep) == a.num_states:
        return a
    renum = {q: i for i, q in enumerate(keep)}
    delta = tuple(
        tuple(frozenset(renum[t] for t in targets) for targets in a.delta[q]) for q in keep
    )
    finals = frozenset(renum[q] for q in keep if q in a.finals)
    return Automaton(a.alphabet, len(keep), renum[a.initial], delta, finals, a.mode)


def determinize(a: Automaton) -> tuple[Automaton, list[frozenset[int]]]:
    """Subset construction over the reachable nonempty subsets.

    States are numbered in BFS discovery order (symbols in alphabet order),
    so subset ``{initial}`` is state 0. The empty subset is not materialized;
    the result is therefore partial wherever ``a`` blocks completely.
    A subset is final iff it meets ``a.finals``. The mode is preserved.
    Returns the automaton and the subset carried by each of its states.
    """
    start = frozenset({a.initial})
    subsets = [start]
    index = {start: 0}
    rows: list[list[frozenset[int]]] = []
    queue = deque([start])
    while queue:
        current = queue.popleft()
        row = []
        for sym in a.alphabet:
            target = a.post(current, sym)
            if not target:
                row.append(frozenset())
                continue
            if target not in index:
                index[target] = len(subsets)
                subsets.append(target)
                queue.append(target)
            row.append(frozenset({index[target]}))
        rows.append(row)
    finals = frozenset(i for i, s in enumerate(subsets) if s & a.finals)
    delta = tuple(tuple(r) for r in rows)
    return Automaton(a.alphabet, len(subsets), 0, delta, finals, a.mode), subsets


def subset_construction(a: Automaton) -> Automaton:
    if a.mode is not Mode.FINITE:
        raise ContractError("subset construction expects a finite-word automaton")
    return determinize(a)[0]


def complete_with_sink(a: Automaton) -> Automaton:
    """Route every blocking transition to one fresh non-final sink.

    The sink, when added, gets index ``a.num_states``. Complete inputs are
    returned unchanged.
    """
    if a.complete:
        return a
    sink = a.num_states
    k = len(a.alphabet)
    delta = [
        tuple(t if t else frozenset({sink}) for t in row) for row in a.delta
    ]
    delta.append(tuple(frozenset({sink}) for _ in range(k)))
    return Automaton(a.alphabet, a.num_states + 1, a.initial, tuple(delta), a.finals, a.mode)


def _require_complete_dfa(d: Automaton, what: str = "automaton") -> None:
    if not d.deterministic:
        raise ContractError(f"{what} must be deterministic")
    if not d.complete:
        raise ContractError(f"{what} must be complete (use complete_with_sink)")


def _dfa_table(d: Automaton) -> list[list[int]]:
    return [[next(iter(t)) for t in row] for row in d.delta]


def hopcroft_minimize(d: Automaton) -> Automaton:
    """Minimal DFA for the finite-word language of ``d``.

    Unreachable states are removed first, then Hopcroft partition
    refinement. Blocks are numbered by the BFS order in which the quotient
    reaches them, so the output is canonical up to the input language.
    """
    _require_complete_dfa(d, "hopcroft_minimize input")
    d = restrict_to_reachable(d)
    n, k = d.num_states, len(d.alphabet)
    table = _dfa_table(d)
    inverse: list[list[list[int]]] = [[[] for _ in range(n)] for _ in range(k)]
    for q in range(n):
        for i in range(k):
            inverse[i][table[q][i]].append(q)

    finals = set(d.finals)
    nonfinals = set(range(n)) - finals
    partition: list[set[int]] = [b for b in (finals, nonfinals) if b]
    block_of = [0] * n
    for b, block in enumerate(partition):
        for q in block:
            block_of[q] = b
    if len(partition) == 2:
        smaller = 0 if len(partition[0]) <= len(partition[1]) else 1
        work = {(smaller, i) for i in range(k)}
    else:
        work = set()
    work_order = deque(sorted(work))

    while work_order:
        splitter, i = work_order.popleft()
        work.discard((splitter, i))
        pre: set[int] = set()
        for q in partition[splitter]:
            pre.update(inverse[i][q])
        touched: dict[int, set[int]] = {}
        for q in pre:
            touched.setdefault(block_of[q], set()).add(q)
        for b, inside in sorted(touched.items()):
            block = partition[b]
            if len(inside) == len(block):
                continue
            outside = block - inside
            partition[b] = inside
            new = len(partition)
            partition.append(outside)
            for q in outside:
                block_of[q] = new
            for j in range(k):
                if (b, j) in work:
                    work.add((new, j))
                    work_order.append((new, j))
                else:
                    pick = b if len(inside) <= len(outside) else new
                    work.add((pick, j))
                    work_order.append((pick, j))

    # Renumber blocks in BFS order from the initial block.
    order = {block_of[d.initial]: 0}
    queue = deque([block_of[d.initial]])
    rep = {b: min(block) for b, block in enumerate(partition)}
    while queue:
        b = queue.popleft()
        for i in range(k):
            c = block_of[table[rep[b]][i]]
            if c not in order:
                order[c] = len(order)
                queue.append(c)
    delta = [None] * len(order)
    for b, new_b in order.items():
        delta[new_b] = tuple(
            frozenset({order[block_of[table[rep[b]][i]]]}) for i in range(k)
        )
    new_finals = frozenset(order[b] for b in order if rep[b] in finals)
    return Automaton(d.alphabet, len(order), 0, tuple(delta), new_finals, d.mode)


def _same_alphabet(d1: Automaton, d2: Automaton) -> None:
    if d1.alphabet != d2.alphabet:
        raise InputError(f"alphabet mismatch: {d1.alphabet} vs {d2.alphabet}")


def dfa_equivalent(d1: Automaton, d2: Automaton) -> tuple[bool, Word | None]:
    """Language equality of two complete DFAs.

    On inequality, returns the length-lexicographically least word accepted
    by exactly one of them.
    """
    _same_alphabet(d1, d2)
    _require_complete_dfa(d1, "first argument")
    _require_complete_dfa(d2, "second argument")
    t1, t2 = _dfa_table(d1), _dfa_table(d2)
    k = len(d1.alphabet)
    n2 = d2.num_states

    def edges(v):
        p, q = divmod(v, n2)
        return ((d1.alphabet[i], t1[p][i] * n2 + t2[q][i]) for i in range(k))

    def differs(v):
        p, q = divmod(v, n2)
        return (p in d1.finals) != (q in d2.finals)

    found = graphs.bfs_path([d1.initial * n2 + d2.initial], edges, differs)
    if found is None:
        return True, None
    return False, tuple(found[0])


def intersect_dfa(d1: Automaton, d2: Automaton) -> Automaton:
    """Full synchronous product; state ``(p, q)`` has index ``p * |Q2| + q``."""
    _same_alphabet(d1, d2)
    _require_complete_dfa(d1, "first argument")
    _require_complete_dfa(d2, "second argument")
    t1, t2 = _dfa_table(d1), _dfa_table(d2)
    n2, k = d2.num_states, len(d1.alphabet)
    delta = tuple(
        tuple(frozenset({t1[p][i] * n2 + t2[q][i]}) for i in range(k))
        for p in range(d1.num_states)
        for q in range(n2)
    )
    finals = frozenset(p * n2 + q for p in d1.finals for q in d2.finals)
    return Automaton(
        d1.alphabet, d1.num_states * n2, d1.initial * n2 + d2.initial, delta, finals, Mode.FINITE
    )


def complement_dfa(d: Automaton) -> Automaton:
    _require_complete_dfa(d)
    return d.with_finals(set(d.states) - d.finals)


def is_empty_finite(a: Automaton) -> bool:
    return not (reachable_states(a) & a.finals)


def shortest_accepted(a: Automaton) -> Word | None:
    """Length-lexicographically least accepted word of a (possibly partial) automaton."""

    def edges(q):
        return ((sym, t) for i, sym in enumerate(a.alphabet) for t in sorted(a.delta[q][i]))

    found = graphs.bfs_path([a.initial], edges, lambda q: q in a.finals)
    return None if found is None else tuple(found[0])
