from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omegasucc.automaton import SIGMA, Automaton, Mode
from omegasucc.errors import ContractError, InputError
from omegasucc.families import build_an, build_dn, build_gn, build_lr_dba, build_ls_dba, build_rn, build_sn
from omegasucc.mdp import Action, Branch, LabelledMdp, build_example_mc, build_random_mc, mc_language_probability
from omegasucc.product import (
    Semantics,
    build_product,
    first_reached_pairs,
    mec_decomposition,
    max_reach_probability,
    psem,
    psyn,
    psyn_details,
    strategy_value,
)

from .oracles import value_iteration


def test_example_values():
    m = build_example_mc()
    assert psyn(m, build_sn(1)) == Fraction(1, 8)
    assert psyn(m, build_sn(1), Semantics.COMMITTED) == Fraction(1, 8)
    assert psyn(m, build_sn(1), Semantics.INFORMED) == Fraction(1, 6)
    assert psem(m, build_ls_dba(1)) == Fraction(1, 4)


def test_example_product_structure():
    p = build_product(build_example_mc(), build_sn(1))
    assert set(p.nodes) == {("state", 0, 0), ("state", 1, 0), ("reject",), ("state", 1, 1), ("state", 2, 1)}
    assert {p.nodes[i] for i in p.accepting} == {("state", 0, 0), ("state", 1, 0), ("state", 1, 1), ("state", 2, 1)}
    assert p.nodes[p.initial] == ("state", 0, 0)
    # from (s1, q0) the automaton may stay in q0 or commit to q1
    assert len(p.actions[p.index_of(1, 0)]) == 2
    assert p.index_of(0, 1) is None


def test_example_reach_from_guessing_state():
    p = build_product(build_example_mc(), build_sn(1))
    target = {p.index_of(2, 1)}
    values, _ = max_reach_probability(p, target)
    assert values[p.index_of(1, 1)] == Fraction(1, 2)
    assert values[p.index_of(1, 0)] == Fraction(1, 8)


def test_example_informed_product_has_choice_node():
    p = build_product(build_example_mc(), build_sn(1), Semantics.INFORMED)
    assert ("choice", 1, 0, "1") in p.nodes
    choice = p.nodes.index(("choice", 1, 0, "1"))
    assert len(p.actions[choice]) == 2


def test_product_contracts():
    m = build_example_mc()
    with pytest.raises(ContractError):
        build_product(m, build_an(1))
    small = Automaton.from_edges(("0",), 1, 0, [(0, "0", 0)], [0], Mode.BUCHI)
    with pytest.raises(InputError):
        build_product(m, small)
    with pytest.raises(ContractError):
        psem(m, build_gn(1))


# -- random MDPs ---------------------------------------------------------------


@st.composite
def mdps(draw, max_states=4):
    n = draw(st.integers(1, max_states))
    acts = []
    for _ in range(n):
        k = draw(st.integers(1, 2))
        here = []
        for j in range(k):
            targets = draw(st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from(SIGMA)),
                                    min_size=1, max_size=3, unique=True))
            weights = [draw(st.integers(1, 3)) for _ in targets]
            total = sum(weights) + draw(st.sampled_from([0, 0, 1]))
            here.append(Action(f"a{j}", tuple(Branch(Fraction(w, total), lab, t)
                                              for w, (t, lab) in zip(weights, targets))))
        acts.append(tuple(here))
    return LabelledMdp(n, 0, SIGMA, tuple(acts))


AUTOMATA = [build_gn(1), build_sn(1), build_rn(1), build_dn(1), build_gn(2), build_sn(2)]
automata_st = st.sampled_from(AUTOMATA)
semantics_st = st.sampled_from(list(Semantics))


@settings(max_examples=120, deadline=None)
@given(mdps(), automata_st, semantics_st)
def test_values_are_a_bellman_fixpoint(m, a, sem):
    p, mecs, values, strategy = psyn_details(m, a, sem)
    target = set().union(*(ec.states for ec in mecs)) if mecs else set()
    for s in range(p.num_states):
        if s in target:
            assert values[s] == 1
            continue
        best = max((sum((pr * values[t] for pr, _, t in act.branches), Fraction(0))
                    for act in p.actions[s]), default=Fraction(0))
        assert values[s] == best
        if p.actions[s]:
            chosen = p.actions[s][strategy[s]]
            assert sum((pr * values[t] for pr, _, t in chosen.branches), Fraction(0)) == best


@settings(max_examples=120, deadline=None)
@given(mdps(), automata_st, semantics_st)
def test_value_iteration_approaches_from_below(m, a, sem):
    p, mecs, values, _ = psyn_details(m, a, sem)
    target = set().union(*(ec.states for ec in mecs)) if mecs else set()
    approx = value_iteration(p, target, p.num_states)
    for s in range(p.num_states):
        assert approx[s] <= values[s]
        # a positive value needs a path of length < |S| to the target
        assert (approx[s] > 0) == (values[s] > 0)


@settings(max_examples=120, deadline=None)
@given(mdps(), automata_st, semantics_st)
def test_returned_strategy_attains_the_value(m, a, sem):
    p, mecs, values, strategy = psyn_details(m, a, sem)
    target = set().union(*(ec.states for ec in mecs)) if mecs else set()
    assert strategy_value(p, strategy, target) == values[p.initial]


@settings(max_examples=120, deadline=None)
@given(mdps(), automata_st, semantics_st)
def test_mec_invariants(m, a, sem):
    p = build_product(m, a, sem)
    mecs = mec_decomposition(p)
    seen = set()
    for ec in mecs:
        assert not (ec.states & seen)
        seen |= ec.states
        g = nx.DiGraph()
        g.add_nodes_from(ec.states)
        for s, ks in ec.actions.items():
            assert ks, "every state of an end component keeps an action"
            for k in ks:
                targets = {t for _, _, t in p.actions[s][k].branches}
                assert targets <= ec.states
                g.add_edges_from((s, t) for t in targets)
            # maximality of the retained actions: every action staying inside is kept
            for k, act in enumerate(p.actions[s]):
                if {t for _, _, t in act.branches} <= ec.states:
                    assert k in ks
        assert nx.is_strongly_connected(g)
        assert len(ec.states) > 1 or g.has_edge(*(2 * tuple(ec.states)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), automata_st)
def test_mecs_of_a_chain_are_its_bottom_components(seed, a):
    m = build_random_mc(seed, 4, absorbing=1)
    p = build_product(m, build_dn(1) if not a.deterministic else a, Semantics.INFORMED)
    assert p.markov_chain
    g = nx.DiGraph()
    g.add_nodes_from(range(p.num_states))
    for s in range(p.num_states):
        g.add_edges_from((s, t) for _, _, t in p.actions[s][0].branches)
    bottoms = {frozenset(c) for c in nx.attracting_components(g)}
    assert {ec.states for ec in mec_decomposition(p)} == bottoms


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2]))
def test_deterministic_informed_value_is_language_probability(seed, n):
    m = build_random_mc(seed, 4, absorbing=2)
    for dba in (build_dn(n), build_ls_dba(n), build_lr_dba(n)):
        assert psyn(m, dba, Semantics.INFORMED) == mc_language_probability(m, dba)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2]))
def test_syntactic_never_exceeds_semantic(seed, n):
    m = build_random_mc(seed, 4, absorbing=2)
    pairs = [(build_gn(n), build_dn(n)), (build_sn(n), build_ls_dba(n)), (build_rn(n), build_lr_dba(n))]
    for nba, dba in pairs:
        committed = psyn(m, nba, Semantics.COMMITTED)
        informed = psyn(m, nba, Semantics.INFORMED)
        assert committed <= informed <= psem(m, dba)


def test_first_reached_pairs_on_example():
    m = build_example_mc()
    p, _, _, strategy = psyn_details(m, build_ls_dba(1), Semantics.INFORMED)
    hits = first_reached_pairs(p, strategy, 1)
    assert len(hits) == 1
    assert p.nodes[next(iter(hits))][1] == 1
