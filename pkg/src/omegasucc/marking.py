"""The marking procedure on a DBA for L_n^omega and the collapsed automaton P.

Marking runs in three phases:

1. every final state is marked with the word ``0``;
2. every state with a nonempty {0,1}-path to a final state is marked with
   the shortest (then lexicographically least) such word;
3. repeated ascending scans mark a state as soon as some word of Gamma_n
   leads from it to an already marked state, until a scan marks nothing.

Collapsing every marked state into one accepting sink yields the partial
DFA P whose size is bounded from below by the checks in this module.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import graphs
from .automaton import Automaton, Mode, Word
from .dfa import (
    complement_dfa,
    complete_with_sink,
    dfa_equivalent,
    hopcroft_minimize,
    intersect_dfa,
    is_empty_finite,
    reachable_states,
)
from .errors import ContractError
from .families import BITS, build_bn, build_cn, build_dn, build_gamma_dfa


class Phase(enum.Enum):
    FINAL = "P1"
    BINARY = "P2"
    GAMMA = "P3"


@dataclass
class Marking:
    num_states: int
    assignments: dict[int, Word] = field(default_factory=dict)
    phase: dict[int, Phase] = field(default_factory=dict)
    order: list[int] = field(default_factory=list)

    def mark(self, q: int, w: Word, phase: Phase) -> None:
        self.assignments[q] = w
        self.phase[q] = phase
        self.order.append(q)

    @property
    def marked(self) -> set[int]:
        return set(self.assignments)

    @property
    def unmarked(self) -> list[int]:
        return [q for q in range(self.num_states) if q not in self.assignments]


def _require_marking_input(d: Automaton) -> None:
    if d.mode is not Mode.BUCHI:
        raise ContractError("marking expects a Büchi automaton")
    if not d.deterministic or not d.complete:
        raise ContractError("marking expects a deterministic complete automaton")
    if not d.finals:
        raise ContractError("marking expects at least one final state")
    if len(reachable_states(d)) != d.num_states:
        raise ContractError("marking expects every state to be reachable")


def _gamma_witness(d: Automaton, gamma: Automaton, q: int, marked: set[int]) -> Word | None:
    """Length-lex least w in Gamma_n with delta(q, w) marked, via the product with the Gamma DFA."""
    size = gamma.num_states

    def edges(v):
        p, g = divmod(v, size)
        for sym in d.alphabet:
            g2 = gamma.step(g, sym)
            if g2 >= 0:
                yield sym, d.step(p, sym) * size + g2

    def goal(v):
        p, g = divmod(v, size)
        return g in gamma.finals and p in marked

    found = graphs.bfs_path([q * size + gamma.initial], edges, goal, min_length=1)
    return None if found is None else tuple(found[0])


def run_marking(d: Automaton, n: int, phases: int = 3) -> Marking:
    """Run the first ``phases`` phases of the marking procedure on ``d``."""
    _require_marking_input(d)
    m = Marking(d.num_states)
    for q in sorted(d.finals):
        m.mark(q, ("0",), Phase.FINAL)
    if phases < 2:
        return m

    def bit_edges(q):
        return ((b, d.step(q, b)) for b in BITS)

    for q in d.states:
        if q in m.assignments:
            continue
        found = graphs.bfs_path([q], bit_edges, lambda p: p in d.finals, min_length=1)
        if found is not None:
            m.mark(q, tuple(found[0]), Phase.BINARY)
    if phases < 3:
        return m

    gamma = build_gamma_dfa(n)
    progress = True
    while progress:
        progress = False
        for q in m.unmarked:
            w = _gamma_witness(d, gamma, q, m.marked)
            if w is not None:
                m.mark(q, w, Phase.GAMMA)
                progress = True
    return m


def run(d: Automaton, q: int, w: Word) -> int:
    for sym in w:
        q = d.step(q, sym)
    return q


def check_unmarked_closure(d: Automaton, marking: Marking) -> bool:
    """True iff the 0- and 1-successors of every unmarked state are unmarked."""
    marked = marking.marked
    return all(d.step(q, b) not in marked for q in marking.unmarked for b in BITS)


# -- the collapsed automaton P ------------------------------------------------


@dataclass(frozen=True)
class Collapsed:
    automaton: Automaton  # partial DFA, finite-word mode
    state_map: dict[int, int]  # unmarked state of d -> state of P
    sink: int

    def rooted_at(self, q: int) -> Automaton:
        """P_q for an unmarked state ``q`` of the original automaton."""
        return self.automaton.rerooted(self.state_map[q])


def collapse_to_p(d: Automaton, marking: Marking) -> Collapsed:
    """Keep the unmarked states and send every move into a marked state to one final sink.

    Unmarked states keep their relative order; the sink comes last and has
    no outgoing transitions. If ``d``'s initial state is marked, P is rooted
    at the sink and only its re-rooted versions are meaningful.
    """
    unmarked = marking.unmarked
    if not unmarked:
        raise ContractError("every state is marked; P would be just the sink")
    if not marking.assignments:
        raise ContractError("no state is marked; P would have no final state")
    state_map = {q: i for i, q in enumerate(unmarked)}
    sink = len(unmarked)
    delta = []
    for q in unmarked:
        row = []
        for sym in d.alphabet:
            t = d.step(q, sym)
            row.append(frozenset({state_map.get(t, sink)}))
        delta.append(tuple(row))
    delta.append(tuple(frozenset() for _ in d.alphabet))
    initial = state_map.get(d.initial, sink)
    p = Automaton(d.alphabet, sink + 1, initial, tuple(delta), frozenset({sink}), Mode.FINITE)
    return Collapsed(p, state_map, sink)


def gamma_reaches_sink(collapsed: Collapsed, n: int) -> tuple[int, Word] | None:
    """Structural check that no P_q accepts a Gamma_n word.

    Explores the product of P with the Gamma_n DFA from every unmarked state
    and returns ``(state of P, word)`` for the first accepting pair found, or
    None when there is none.
    """
    p = collapsed.automaton
    gamma = build_gamma_dfa(n)
    size = gamma.num_states

    def edges(v):
        a, g = divmod(v, size)
        for sym in p.alphabet:
            a2, g2 = p.step(a, sym), gamma.step(g, sym)
            if a2 >= 0 and g2 >= 0:
                yield sym, a2 * size + g2

    def goal(v):
        a, g = divmod(v, size)
        return a == collapsed.sink and g in gamma.finals

    for q in sorted(collapsed.state_map.values()):
        found = graphs.bfs_path([q * size + gamma.initial], edges, goal)
        if found is not None:
            return q, tuple(found[0])
    return None


def gamma_words(n: int, max_length: int):
    """All Gamma_n words of length at most ``max_length``, shortest first."""
    for length in range(n + 1, max_length + 1):
        for body in itertools.product(BITS, repeat=length - 1):
            if body[-n] == "0":
                yield body + ("$",)


def gamma_rejected_up_to(collapsed: Collapsed, n: int, max_length: int) -> tuple[int, Word] | None:
    """Enumerative counterpart of :func:`gamma_reaches_sink`; the first (state, word) accepted."""
    p = collapsed.automaton
    for w in gamma_words(n, max_length):
        for q in sorted(collapsed.state_map.values()):
            if run(p, q, w) in p.finals:
                return q, w
    return None


def universal_state(collapsed: Collapsed, bn: Automaton) -> int | None:
    """Lowest state q of P with L(B_n) contained in L(P_q), or None."""
    bn_full = complete_with_sink(bn)
    for q in range(collapsed.sink):
        pq = complete_with_sink(collapsed.automaton.rerooted(q))
        if is_empty_finite(intersect_dfa(bn_full, complement_dfa(pq))):
            return q
    return None


@dataclass
class SizeBoundReport:
    n: int
    dn_states: int
    marked: int
    unmarked: int
    p_states: int
    closure_after_phase2: bool
    closure_at_end: bool
    gamma_structural_witness: tuple | None
    gamma_enumeration_witness: tuple | None
    enumeration_length: int
    universal_state: int | None
    cut_equals_ln: bool
    bound: Fraction

    @property
    def p_meets_bound(self) -> bool:
        return self.p_states >= self.bound

    @property
    def dn_meets_bound(self) -> bool:
        return self.dn_states >= self.bound

    @property
    def passed(self) -> bool:
        return (
            self.closure_after_phase2
            and self.closure_at_end
            and self.unmarked >= 1
            and self.gamma_structural_witness is None
            and self.gamma_enumeration_witness is None
            and self.universal_state is not None
            and self.cut_equals_ln
            and self.p_meets_bound
            and self.dn_meets_bound
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "dnStates": self.dn_states,
            "marked": self.marked,
            "unmarked": self.unmarked,
            "pStates": self.p_states,
            "closureAfterPhase2": self.closure_after_phase2,
            "closureAtEnd": self.closure_at_end,
            "gammaStructuralWitness": _witness_json(self.gamma_structural_witness),
            "gammaEnumerationWitness": _witness_json(self.gamma_enumeration_witness),
            "enumerationLength": self.enumeration_length,
            "universalState": self.universal_state,
            "cutEqualsLn": self.cut_equals_ln,
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "pMeetsBound": self.p_meets_bound,
            "dnMeetsBound": self.dn_meets_bound,
            "passed": self.passed,
        }


def _witness_json(w):
    return None if w is None else {"state": w[0], "word": "".join(w[1])}


def size_bound_report(n: int, d: Automaton | None = None, extra_length: int = 3) -> SizeBoundReport:
    """Run marking on ``d`` (default D_n) and check every step of the size argument for P."""
    d = build_dn(n) if d is None else d
    phase2 = run_marking(d, n, phases=2)
    marking = run_marking(d, n)
    closure_end = check_unmarked_closure(d, marking)
    bound = Fraction(2**n, n + 2)
    if not marking.unmarked:
        return SizeBoundReport(
            n, d.num_states, len(marking.order), 0, 0, check_unmarked_closure(d, phase2),
            closure_end, None, None, 0, None, False, bound,
        )
    collapsed = collapse_to_p(d, marking)
    bn = build_bn(n)
    structural = gamma_reaches_sink(collapsed, n)
    max_len = n + 1 + extra_length
    enumerated = gamma_rejected_up_to(collapsed, n, max_len)
    q = universal_state(collapsed, bn)
    cut_ok = False
    if q is not None:
        pq = complete_with_sink(collapsed.automaton.rerooted(q))
        cut = hopcroft_minimize(intersect_dfa(pq, complete_with_sink(build_cn(n))))
        cut_ok = dfa_equivalent(cut, hopcroft_minimize(complete_with_sink(bn)))[0]
    return SizeBoundReport(
        n=n,
        dn_states=d.num_states,
        marked=len(marking.order),
        unmarked=len(marking.unmarked),
        p_states=collapsed.automaton.num_states,
        closure_after_phase2=check_unmarked_closure(d, phase2),
        closure_at_end=closure_end,
        gamma_structural_witness=structural,
        gamma_enumeration_witness=enumerated,
        enumeration_length=max_len,
        universal_state=q,
        cut_equals_ln=cut_ok,
        bound=bound,
    )
