"""MDP x NBA products and their exact syntactic/semantic satisfaction values.

Two product semantics are provided.

``COMMITTED``
    Product actions are pairs ``(a, q')``; the automaton commits to ``q'``
    before the letter is drawn, and every branch whose letter cannot lead
    from ``q`` to ``q'`` is lost to the reject sink. This is the literal
    product with actions ``Act x Q``.

``INFORMED``
    The letter is drawn first and the automaton then picks ``q'`` among
    ``delta(q, letter)``. Nondeterministic picks are made in explicit
    choice nodes. Under this semantics a deterministic automaton yields the
    same value as the language probability, which is the setting in which
    good-for-MDPs claims are made.

Both materialize the reject sink explicitly and only build reachable nodes.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import graphs, linalg
from .automaton import Automaton, Mode, Symbol
from .errors import ContractError, InputError
from .mdp import LabelledMdp, mc_language_probability


class Semantics(enum.Enum):
    COMMITTED = "committed"
    INFORMED = "informed"


@dataclass(frozen=True)
class ProductAction:
    name: tuple
    branches: tuple[tuple[Fraction, Symbol | None, int], ...]


@dataclass(frozen=True)
class ProductMdp:
    """Reachable part of the product.

    ``nodes[i]`` records provenance: ``("state", s, q)``, ``("choice", s, q, letter)``
    (informed semantics only) or ``("reject",)``. Node 0 is the initial node.
    """

    nodes: tuple[tuple, ...]
    actions: tuple[tuple[ProductAction, ...], ...]
    accepting: frozenset[int]
    semantics: Semantics
    initial: int = 0

    @property
    def num_states(self) -> int:
        return len(self.nodes)

    def index_of(self, s: int, q: int) -> int | None:
        try:
            return self.nodes.index(("state", s, q))
        except ValueError:
            return None

    @property
    def markov_chain(self) -> bool:
        return all(len(acts) == 1 for acts in self.actions)


def build_product(m: LabelledMdp, a: Automaton, semantics: Semantics = Semantics.COMMITTED) -> ProductMdp:
    if a.mode is not Mode.BUCHI:
        raise ContractError("the product needs a Büchi automaton")
    if set(m.alphabet) - set(a.alphabet):
        raise InputError(f"MDP labels {m.alphabet} are not covered by automaton alphabet {a.alphabet}")

    nodes: list[tuple] = []
    index: dict[tuple, int] = {}
    pending: list[int] = []

    def node(key: tuple) -> int:
        if key not in index:
            index[key] = len(nodes)
            nodes.append(key)
            pending.append(index[key])
        return index[key]

    reject_key = ("reject",)
    node(("state", m.initial, a.initial))
    actions: dict[int, tuple[ProductAction, ...]] = {}

    while pending:
        i = pending.pop()
        key = nodes[i]
        if key[0] == "reject":
            actions[i] = (ProductAction(("reject",), ((Fraction(1), None, i),)),)
            continue
        if key[0] == "choice":
            _, s, q, sym = key
            actions[i] = tuple(
                ProductAction((q2,), ((Fraction(1), None, node(("state", s, q2))),))
                for q2 in sorted(a.succ(q, sym))
            )
            continue
        _, s, q = key
        acts: list[ProductAction] = []
        for act in m.actions[s]:
            if semantics is Semantics.COMMITTED:
                options = sorted(set().union(*(a.succ(q, b.label) for b in act.branches)))
                for q2 in options:
                    branches = []
                    kept = Fraction(0)
                    for b in act.branches:
                        if q2 in a.succ(q, b.label):
                            branches.append((b.prob, b.label, node(("state", b.target, q2))))
                            kept += b.prob
                    if kept < 1:
                        branches.append((1 - kept, None, node(reject_key)))
                    acts.append(ProductAction((act.name, q2), tuple(branches)))
            else:
                branches = []
                lost = 1 - act.mass
                for b in act.branches:
                    targets = a.succ(q, b.label)
                    if not targets:
                        lost += b.prob
                    elif len(targets) == 1:
                        (q2,) = targets
                        branches.append((b.prob, b.label, node(("state", b.target, q2))))
                    else:
                        branches.append((b.prob, b.label, node(("choice", b.target, q, b.label))))
                if lost:
                    branches.append((lost, None, node(reject_key)))
                acts.append(ProductAction((act.name,), tuple(branches)))
        if not acts:
            acts.append(ProductAction(("blocked",), ((Fraction(1), None, node(reject_key)),)))
        actions[i] = tuple(acts)

    accepting = frozenset(
        i for i, key in enumerate(nodes) if key[0] == "state" and key[2] in a.finals
    )
    return ProductMdp(
        tuple(nodes), tuple(actions[i] for i in range(len(nodes))), accepting, semantics
    )


# -- end components ----------------------------------------------------------


@dataclass(frozen=True)
class EndComponent:
    states: frozenset[int]
    actions: dict[int, tuple[int, ...]]  # state -> indices of actions staying inside


def _branches(p, s: int, k: int) -> Sequence[tuple]:
    return p.actions[s][k].branches


def mec_decomposition(p) -> list[EndComponent]:
    """Maximal end components by iterated SCC refinement.

    Works on anything with ``num_states`` and ``actions[s][k].branches``
    holding ``(prob, label, target)`` triples. A component's states and
    retained actions are returned; components are listed by smallest state.
    """
    n = p.num_states
    enabled: dict[int, set[int]] = {s: set(range(len(p.actions[s]))) for s in range(n)}
    alive = {s for s in range(n) if enabled[s]}
    while True:
        def succ(s):
            out = set()
            for k in enabled[s]:
                out.update(t for _, _, t in _branches(p, s, k))
            return [t for t in out if t in alive]

        comps = graphs.tarjan_scc(sorted(alive), succ)
        comp_of = {s: c for c, comp in enumerate(comps) for s in comp}
        changed = False
        for s in sorted(alive):
            for k in sorted(enabled[s]):
                targets = [t for _, _, t in _branches(p, s, k)]
                if any(t not in alive or comp_of[t] != comp_of[s] for t in targets):
                    enabled[s].discard(k)
                    changed = True
        dead = {s for s in alive if not enabled[s]}
        if dead:
            alive -= dead
            changed = True
        if not changed:
            break
    result = [
        EndComponent(frozenset(comp), {s: tuple(sorted(enabled[s])) for s in comp})
        for comp in graphs.tarjan_scc(sorted(alive), succ)
    ]
    result.sort(key=lambda ec: min(ec.states))
    return result


def accepting_mecs(p: ProductMdp) -> list[EndComponent]:
    return [ec for ec in mec_decomposition(p) if ec.states & p.accepting]


# -- reachability -------------------------------------------------------------


def _q_value(p, s, k, values) -> Fraction:
    return sum((prob * values.get(t, 0) for prob, _, t in _branches(p, s, k)), Fraction(0))


def _evaluate(p, policy: dict[int, int], target: set[int], candidates: set[int]) -> dict[int, Fraction]:
    def succ(s):
        if s in target or s not in candidates:
            return []
        return [t for _, _, t in _branches(p, s, policy[s])]

    pred: dict[int, set[int]] = {}
    for s in candidates:
        for t in succ(s):
            pred.setdefault(t, set()).add(s)
    reaching = graphs.reachable(target, lambda t: pred.get(t, ()))
    unknowns = sorted(s for s in reaching if s not in target)
    transitions = {}
    for s in unknowns:
        merged: dict[int, Fraction] = {}
        for prob, _, t in _branches(p, s, policy[s]):
            merged[t] = merged.get(t, 0) + prob
        transitions[s] = sorted((pr, t) for t, pr in merged.items())
    known = {t: Fraction(1) for t in target}
    values = dict(known)
    if unknowns:
        values.update(linalg.solve_absorbing(unknowns, transitions, known))
    return values


def max_reach_probability(p, target: Iterable[int]) -> tuple[dict[int, Fraction], dict[int, int]]:
    """Exact maximal probability of reaching ``target`` and an optimal positional strategy.

    States that cannot reach ``target`` under any strategy are fixed to 0
    first. Policy iteration then starts from the first action everywhere,
    evaluates each policy exactly, and switches a state to the lowest-index
    action that strictly improves its value until no switch is possible.
    The strategy maps every state with actions to an action index.
    """
    n = p.num_states
    target = set(target)
    pred: dict[int, set[int]] = {}
    for s in range(n):
        for k in range(len(p.actions[s])):
            for _, _, t in _branches(p, s, k):
                pred.setdefault(t, set()).add(s)
    can_reach = graphs.reachable(target, lambda t: pred.get(t, ()))
    candidates = {s for s in can_reach if s not in target}
    policy = {s: 0 for s in range(n) if p.actions[s]}
    while True:
        values = _evaluate(p, policy, target, candidates)
        changed = False
        for s in sorted(candidates):
            current = values.get(s, Fraction(0))
            for k in range(len(p.actions[s])):
                if k != policy[s] and _q_value(p, s, k, values) > current:
                    policy[s] = k
                    changed = True
                    break
        if not changed:
            break
    full = {s: values.get(s, Fraction(0)) for s in range(n)}
    return full, policy


def psyn_details(m: LabelledMdp, a: Automaton, semantics: Semantics = Semantics.COMMITTED):
    """Product, accepting MECs, values and strategy behind :func:`psyn`."""
    prod = build_product(m, a, semantics)
    mecs = accepting_mecs(prod)
    target = set().union(*(ec.states for ec in mecs)) if mecs else set()
    values, strategy = max_reach_probability(prod, target)
    return prod, mecs, values, strategy


def psyn(m: LabelledMdp, a: Automaton, semantics: Semantics = Semantics.COMMITTED) -> Fraction:
    """Optimal probability of an accepting run in the product, from its initial node."""
    prod, _, values, _ = psyn_details(m, a, semantics)
    return values[prod.initial]


def psem(m: LabelledMdp, equivalent_dba: Automaton) -> Fraction:
    """Probability that the chain's word lies in the language of a deterministic witness.

    The caller vouches that ``equivalent_dba`` recognises the language of
    interest; bounded lasso checks are the only evidence this library offers.
    """
    if not equivalent_dba.deterministic:
        raise ContractError("psem needs a deterministic witness automaton")
    return mc_language_probability(m, equivalent_dba)


def induced_chain(p: ProductMdp, strategy: dict[int, int]) -> dict[int, list[tuple[Fraction, int]]]:
    return {
        s: [(prob, t) for prob, _, t in p.actions[s][strategy[s]].branches]
        for s in range(p.num_states)
        if p.actions[s]
    }


def first_reached_pairs(p: ProductMdp, strategy: dict[int, int], mdp_state: int) -> set[int]:
    """Product state nodes over ``mdp_state`` entered first under the strategy.

    Explores the induced chain from the initial node and stops at the first
    node whose MDP component is ``mdp_state``.
    """
    chain = induced_chain(p, strategy)
    seen = {p.initial}
    stack = [p.initial]
    hits: set[int] = set()
    while stack:
        v = stack.pop()
        key = p.nodes[v]
        if key[0] == "state" and key[1] == mdp_state:
            hits.add(v)
            continue
        for prob, t in chain.get(v, ()):
            if prob > 0 and t not in seen:
                seen.add(t)
                stack.append(t)
    return hits


def strategy_value(p: ProductMdp, strategy: dict[int, int], target: Iterable[int]) -> Fraction:
    """Reachability value of the chain induced by a fixed positional strategy."""
    target = set(target)
    candidates = set(range(p.num_states)) - target
    values = _evaluate(p, strategy, target, candidates)
    return values.get(p.initial, Fraction(0))
