from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from omegasucc.automaton import SIGMA, Automaton, Mode
from omegasucc.dfa import restrict_to_reachable
from omegasucc.errors import ContractError
from omegasucc.families import BITS, build_bn, build_dn, build_gn, build_ls_dba
from omegasucc.marking import (
    Marking,
    Phase,
    check_unmarked_closure,
    collapse_to_p,
    gamma_reaches_sink,
    gamma_rejected_up_to,
    gamma_words,
    run,
    run_marking,
    size_bound_report,
    universal_state,
)

from .oracles import words


def gamma_contains(n, w):
    return len(w) >= n + 1 and w[-1] == "$" and all(c in BITS for c in w[:-1]) and w[-1 - n] == "0"


@st.composite
def complete_dbas(draw, max_states=5):
    n = draw(st.integers(1, max_states))
    rows = tuple(tuple(frozenset({draw(st.integers(0, n - 1))}) for _ in SIGMA) for _ in range(n))
    finals = draw(st.sets(st.integers(0, n - 1), min_size=1))
    d = restrict_to_reachable(Automaton(SIGMA, n, 0, rows, frozenset(finals), Mode.BUCHI))
    assume(d.finals)
    return d


@st.composite
def mutated_dn(draw):
    """D_n with a few transitions redirected; marking often leaves states unmarked."""
    n = draw(st.integers(1, 3))
    d = build_dn(n)
    rows = [list(row) for row in d.delta]
    for _ in range(draw(st.integers(1, 3))):
        q = draw(st.integers(0, d.num_states - 1))
        i = draw(st.integers(0, len(SIGMA) - 1))
        rows[q][i] = frozenset({draw(st.integers(0, d.num_states - 1))})
    a = Automaton(SIGMA, d.num_states, 0, tuple(map(tuple, rows)), d.finals, Mode.BUCHI)
    a = restrict_to_reachable(a)
    assume(a.finals)
    return n, a


def _least(candidates):
    return min(candidates, key=lambda w: (len(w), [SIGMA.index(c) for c in w]), default=None)


@settings(max_examples=150, deadline=None)
@given(complete_dbas(), st.integers(1, 3))
def test_marking_witnesses_are_valid_and_least(d, n):
    m = run_marking(d, n)
    assert len(m.order) == len(set(m.order)) == len(m.assignments)
    for i, q in enumerate(m.order):
        w, phase = m.assignments[q], m.phase[q]
        if phase is Phase.FINAL:
            assert q in d.finals and w == ("0",)
            continue
        assert q not in d.finals
        if phase is Phase.BINARY:
            assert w and all(c in BITS for c in w)
            assert run(d, q, w) in d.finals
            best = _least(x for x in words(BITS, len(w), 1) if run(d, q, x) in d.finals)
            assert w == best
        else:
            earlier = set(m.order[:i])
            assert gamma_contains(n, w)
            assert run(d, q, w) in earlier
            # the witness is searched against the states marked so far
            best = _least(x for x in words(SIGMA, len(w), n + 1)
                          if gamma_contains(n, x) and run(d, q, x) in earlier)
            assert best == w


@settings(max_examples=150, deadline=None)
@given(complete_dbas(), st.integers(1, 3))
def test_unmarked_states_have_no_witness(d, n):
    m = run_marking(d, n)
    marked = m.marked
    for q in m.unmarked:
        assert q not in d.finals
        for x in words(BITS, d.num_states, 1):
            assert run(d, q, x) not in d.finals
        for x in gamma_words(n, n + d.num_states + 1):
            assert run(d, q, x) not in marked


@settings(max_examples=150, deadline=None)
@given(complete_dbas(), st.integers(1, 3))
def test_closure_check_matches_direct_computation(d, n):
    for phases in (1, 2, 3):
        m = run_marking(d, n, phases)
        direct = all(run(d, q, b) not in m.marked for q in m.unmarked for b in BITS)
        assert check_unmarked_closure(d, m) == direct
    # after phase 2 an unmarked state never reaches a final by bits, so closure holds
    assert check_unmarked_closure(d, run_marking(d, n, 2))


@settings(max_examples=150, deadline=None)
@given(mutated_dn())
def test_collapse_structure_and_gamma_checks_agree(case):
    n, d = case
    m = run_marking(d, n)
    assume(m.unmarked)
    c = collapse_to_p(d, m)
    p = c.automaton
    assert p.num_states == len(m.unmarked) + 1 and c.sink == p.num_states - 1
    assert p.finals == {c.sink} and not p.graph_successors(c.sink)
    for q in m.unmarked:
        for s in SIGMA:
            t = d.step(q, s)
            assert p.step(c.state_map[q], s) == c.state_map.get(t, c.sink)
    structural = gamma_reaches_sink(c, n)
    enumerated = gamma_rejected_up_to(c, n, n + p.num_states + 1)
    assert (structural is None) == (enumerated is None)
    # full marking leaves no Gamma path to a marked state
    assert structural is None


def test_mutated_marking_breaks_closure():
    d = build_dn(2)
    m = run_marking(d, 2)
    assert check_unmarked_closure(d, m)
    victim = next(q for q in m.unmarked if any(d.step(p, b) == q for p in m.unmarked if p != q for b in BITS))
    mutated = Marking(m.num_states, dict(m.assignments), dict(m.phase), list(m.order))
    mutated.mark(victim, ("0",), Phase.GAMMA)
    assert not check_unmarked_closure(d, mutated)


@pytest.mark.parametrize("n", range(1, 6))
def test_dn_marking_marks_only_the_final_state(n):
    d = build_dn(n)
    m = run_marking(d, n)
    assert m.marked == set(d.finals)
    rep = size_bound_report(n)
    assert rep.passed
    assert rep.p_states == 2**n + 1 == rep.dn_states
    assert rep.bound == Fraction(2**n, n + 2)
    assert rep.as_dict()["passed"] is True


def test_phase_two_and_three_on_a_hand_made_automaton():
    # 0 -0-> 1 -1-> 2 (final); 3 -0-> 3, 3 -$-> 0; everything else goes to 3
    edges = [(0, "0", 1), (1, "1", 2), (3, "0", 3), (3, "$", 0)]
    edges += [(q, s, 3) for q in range(4) for s in SIGMA if (q, s) not in {(0, "0"), (1, "1"), (3, "0"), (3, "$")}]
    d = Automaton.from_edges(SIGMA, 4, 0, edges, [2], Mode.BUCHI)
    m = run_marking(d, 1)
    assert m.assignments[2] == ("0",) and m.phase[2] is Phase.FINAL
    assert m.assignments[1] == ("1",) and m.phase[1] is Phase.BINARY
    assert m.assignments[0] == ("0", "1") and m.phase[0] is Phase.BINARY
    assert m.assignments[3] == ("0", "$") and m.phase[3] is Phase.GAMMA
    assert m.unmarked == []
    with pytest.raises(ContractError):
        collapse_to_p(d, m)


def test_universal_state_on_dn():
    n = 2
    d = build_dn(n)
    c = collapse_to_p(d, run_marking(d, n))
    q = universal_state(c, build_bn(n))
    assert q is not None
    assert universal_state(c, build_bn(n)) == q


def test_contracts():
    with pytest.raises(ContractError):
        run_marking(build_gn(1), 1)
    with pytest.raises(ContractError):
        run_marking(build_dn(1).with_mode(Mode.FINITE), 1)
    with pytest.raises(ContractError):
        run_marking(build_dn(1).with_finals([]), 1)
    partial = Automaton.from_edges(SIGMA, 1, 0, [(0, "0", 0)], [0], Mode.BUCHI)
    with pytest.raises(ContractError):
        run_marking(partial, 1)
    unreachable = Automaton.from_edges(SIGMA, 2, 0, [(q, s, q) for q in range(2) for s in SIGMA], [0], Mode.BUCHI)
    with pytest.raises(ContractError):
        run_marking(unreachable, 1)
    d = build_ls_dba(1)
    with pytest.raises(ContractError):
        collapse_to_p(d, Marking(d.num_states))


def test_gamma_words_enumeration():
    ws = list(gamma_words(2, 4))
    assert all(gamma_contains(2, w) for w in ws)
    assert len(ws) == len([w for w in words(SIGMA, 4) if gamma_contains(2, w)])
