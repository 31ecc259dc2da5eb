"""Transition-labelled MDPs and Markov chains with exact probabilities."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from . import graphs, linalg
from .automaton import SIGMA, Alphabet, Automaton, Symbol
from .errors import ContractError, InputError


class Branch(NamedTuple):
    prob: Fraction
    label: Symbol
    target: int


@dataclass(frozen=True)
class Action:
    name: str
    branches: tuple[Branch, ...]

    @property
    def mass(self) -> Fraction:
        return sum((b.prob for b in self.branches), Fraction(0))


@dataclass(frozen=True)
class LabelledMdp:
    """``actions[s]`` lists the actions enabled in ``s`` with their branches.

    An action's probabilities may sum to less than one; the missing mass
    goes to an implicit absorbing reject state.
    """

    num_states: int
    initial: int
    alphabet: Alphabet
    actions: tuple[tuple[Action, ...], ...]

    def __post_init__(self):
        if self.num_states < 1:
            raise InputError("an MDP needs at least one state")
        if not 0 <= self.initial < self.num_states:
            raise InputError(f"initial state {self.initial} out of range")
        if len(self.actions) != self.num_states:
            raise InputError("actions must list one tuple per state")
        for s, acts in enumerate(self.actions):
            names = [a.name for a in acts]
            if len(set(names)) != len(names):
                raise InputError(f"duplicate action names in state {s}")
            for act in acts:
                for b in act.branches:
                    if not isinstance(b.prob, Fraction) or b.prob <= 0:
                        raise InputError(f"probabilities must be positive Fractions: {b}")
                    if b.label not in self.alphabet:
                        raise InputError(f"label {b.label!r} not in alphabet")
                    if not 0 <= b.target < self.num_states:
                        raise InputError(f"target {b.target} out of range")
                if act.mass > 1:
                    raise InputError(f"state {s} action {act.name!r} has mass {act.mass} > 1")

    @property
    def markov_chain(self) -> bool:
        return all(len(acts) == 1 for acts in self.actions)

    def successors(self, s: int) -> set[int]:
        return {b.target for act in self.actions[s] for b in act.branches}

    def with_explicit_reject(self, label: Symbol | None = None) -> LabelledMdp:
        """Materialize the deficit as a new absorbing state ``num_states``."""
        label = label or self.alphabet[-1]
        rej = self.num_states
        acts = []
        for s_acts in self.actions:
            new = []
            for act in s_acts:
                missing = 1 - act.mass
                branches = act.branches + ((Branch(missing, label, rej),) if missing else ())
                new.append(Action(act.name, branches))
            acts.append(tuple(new))
        acts.append((Action("reject", (Branch(Fraction(1), label, rej),)),))
        return LabelledMdp(self.num_states + 1, self.initial, self.alphabet, tuple(acts))


def chain(num_states: int, initial: int, branches: Iterable[tuple[int, Fraction | str, Symbol, int]],
          alphabet: Alphabet = SIGMA, action: str = "m") -> LabelledMdp:
    """Markov chain from ``(source, prob, label, target)`` tuples; one action per state."""
    per_state: list[list[Branch]] = [[] for _ in range(num_states)]
    for s, p, label, t in branches:
        per_state[s].append(Branch(Fraction(p), label, t))
    acts = tuple((Action(action, tuple(bs)),) for bs in per_state)
    return LabelledMdp(num_states, initial, alphabet, acts)


def build_sigma_mc(n: int, sigma: Sequence[int]) -> LabelledMdp:
    """The chain s_0 -sigma_1-> ... -sigma_n-> s_n, then 1/4 : 0, 1/4 : 1 loops and 1/2 : $ to s_f.

    States ``s_0..s_n`` are ``0..n`` and ``s_f`` is ``n + 1``.
    """
    if n < 1:
        raise InputError("n must be positive")
    sigma = list(sigma)
    if len(sigma) != n or any(b not in (0, 1) for b in sigma):
        raise InputError(f"sigma must be a 0/1 vector of length {n}")
    f = n + 1
    q = Fraction(1, 4)
    branches = [(i, 1, str(sigma[i]), i + 1) for i in range(n)]
    branches += [(n, q, "0", n), (n, q, "1", n), (n, Fraction(1, 2), "$", f), (f, 1, "$", f)]
    return chain(n + 2, 0, branches)


def build_example_mc() -> LabelledMdp:
    """The three-state example chain; identical to ``build_sigma_mc(1, [0])``."""
    return build_sigma_mc(1, [0])


def build_random_mc(
    seed: int,
    state_count: int,
    label_alphabet: Alphabet = SIGMA,
    density: float = 0.5,
    max_attempts: int = 1000,
    absorbing: int = 0,
) -> LabelledMdp:
    """Seeded random chain whose rows sum to exactly one and whose states are all reachable.

    Every (target, label) pair is kept with probability ``density``; each row
    keeps at least one. Kept pairs receive integer weights in 1..4,
    normalized to Fractions. The last ``absorbing`` states only loop on
    themselves, with a random nonempty set of labels, which gives chains
    several bottom components and values strictly between 0 and 1. Draws
    that leave a state unreachable are rejected and redrawn from the same
    generator.
    """
    if state_count < 1:
        raise InputError("state_count must be at least 1")
    if not 0 < density <= 1:
        raise InputError("density must lie in (0, 1]")
    if not label_alphabet:
        raise InputError("label alphabet must be nonempty")
    if not 0 <= absorbing < state_count:
        raise InputError("absorbing must leave at least one other state")
    rng = random.Random(seed)
    pairs = [(t, lab) for t in range(state_count) for lab in label_alphabet]
    first_absorbing = state_count - absorbing
    for _ in range(max_attempts):
        rows = []
        for s in range(state_count):
            if s >= first_absorbing:
                options = [(s, lab) for lab in label_alphabet]
            else:
                options = pairs
            kept = [pr for pr in options if rng.random() < density]
            if not kept:
                kept = [rng.choice(options)]
            weights = [rng.randint(1, 4) for _ in kept]
            total = sum(weights)
            rows.append([(Fraction(w, total), lab, t) for w, (t, lab) in zip(weights, kept)])
        succ = [{t for _, _, t in row} for row in rows]
        if len(graphs.reachable([0], lambda s: succ[s])) == state_count:
            branches = [(s, p, lab, t) for s, row in enumerate(rows) for p, lab, t in row]
            return chain(state_count, 0, branches, tuple(label_alphabet))
    raise InputError("could not draw a chain with all states reachable")


# -- language probability of a chain against a DBA -------------------------


def mc_language_probability(mc: LabelledMdp, dba: Automaton) -> Fraction:
    """Exact probability that the chain's label sequence is accepted by ``dba``.

    Builds the synchronous product chain (missing automaton moves and the
    chain's own deficit both lead to an absorbing reject state), finds its
    bottom SCCs, calls a BSCC accepting iff it contains a state whose
    automaton component is final, and solves the hitting-probability
    equations exactly.
    """
    if not mc.markov_chain:
        raise ContractError("mc_language_probability needs a Markov chain")
    if not dba.deterministic:
        raise ContractError("mc_language_probability needs a deterministic automaton")
    if set(mc.alphabet) - set(dba.alphabet):
        raise InputError("chain labels are not covered by the automaton alphabet")

    index: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    REJECT = 0
    pairs.append((-1, -1))
    trans: dict[int, list[tuple[Fraction, int]]] = {REJECT: [(Fraction(1), REJECT)]}

    def node(s, q):
        key = (s, q)
        if key not in index:
            index[key] = len(pairs)
            pairs.append(key)
            stack.append(key)
        return index[key]

    stack: list[tuple[int, int]] = []
    start = node(mc.initial, dba.initial)
    while stack:
        s, q = stack.pop()
        here = index[(s, q)]
        (act,) = mc.actions[s]
        out: dict[int, Fraction] = {}
        lost = 1 - act.mass
        for b in act.branches:
            q2 = dba.step(q, b.label)
            if q2 < 0:
                lost += b.prob
                continue
            t = node(b.target, q2)
            out[t] = out.get(t, 0) + b.prob
        if lost:
            out[REJECT] = out.get(REJECT, 0) + lost
        trans[here] = [(p, t) for t, p in sorted(out.items())]

    def succ(v):
        return [t for _, t in trans[v]]

    vertices = list(range(len(pairs)))
    accepting: set[int] = set()
    for comp in graphs.tarjan_scc(vertices, succ):
        comp_set = set(comp)
        bottom = all(t in comp_set for v in comp for t in succ(v))
        if bottom and any(v != REJECT and pairs[v][1] in dba.finals for v in comp):
            accepting |= comp_set
    if not accepting:
        return Fraction(0)
    pred: dict[int, set[int]] = {v: set() for v in vertices}
    for v in vertices:
        for t in succ(v):
            pred[t].add(v)
    can_win = graphs.reachable(accepting, lambda v: pred[v])
    unknowns = [v for v in can_win if v not in accepting]
    values = linalg.solve_absorbing(
        unknowns, trans, {v: Fraction(1) for v in accepting}
    ) if unknowns else {}
    if start in accepting:
        return Fraction(1)
    return values.get(start, Fraction(0))


# -- JSON ------------------------------------------------------------------


def mdp_to_json(m: LabelledMdp) -> dict:
    transitions = []
    for s, acts in enumerate(m.actions):
        for act in acts:
            for b in act.branches:
                transitions.append(
                    {
                        "from": s,
                        "action": act.name,
                        "prob": f"{b.prob.numerator}/{b.prob.denominator}",
                        "label": b.label,
                        "to": b.target,
                    }
                )
    return {
        "states": m.num_states,
        "initial": m.initial,
        "alphabet": list(m.alphabet),
        "transitions": transitions,
    }


def _parse_prob(text) -> Fraction:
    if not isinstance(text, str) or "/" not in text:
        raise InputError(f"probability must be a 'num/den' string, got {text!r}")
    num, den = text.split("/", 1)
    try:
        value = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad probability {text!r}") from None
    return value


def mdp_from_json(data: dict) -> LabelledMdp:
    try:
        n = int(data["states"])
        initial = int(data["initial"])
        alphabet = tuple(data["alphabet"])
        raw = data["transitions"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed MDP document: {exc}") from None
    if n < 1:
        raise InputError("an MDP needs at least one state")
    order: list[list[str]] = [[] for _ in range(n)]
    branches: dict[tuple[int, str], list[Branch]] = {}
    for t in raw:
        try:
            s, name, label, target = int(t["from"]), str(t["action"]), t["label"], int(t["to"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed transition {t!r}: {exc}") from None
        if not 0 <= s < n:
            raise InputError(f"transition source {s} out of range")
        if (s, name) not in branches:
            branches[(s, name)] = []
            order[s].append(name)
        branches[(s, name)].append(Branch(_parse_prob(t["prob"]), label, target))
    actions = tuple(
        tuple(Action(name, tuple(branches[(s, name)])) for name in order[s]) for s in range(n)
    )
    return LabelledMdp(n, initial, alphabet, actions)


def load_mdp(path) -> LabelledMdp:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: not valid JSON: {exc}") from None
    return mdp_from_json(data)


def dump_mdp(m: LabelledMdp, path) -> None:
    with open(path, "w") as fh:
        json.dump(mdp_to_json(m), fh, indent=2)
        fh.write("\n")
