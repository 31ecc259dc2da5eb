"""Finite-word and Büchi automata over an explicit, ordered alphabet.

States are dense indices ``0..n-1``. The transition relation is total as a
map: ``delta[q][i]`` is a (possibly empty) frozenset of successors of ``q``
on the ``i``-th alphabet symbol, so a blocking transition is an empty set
rather than a missing key.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, InputError

Symbol = str
Alphabet = tuple[Symbol, ...]
Word = tuple[Symbol, ...]

SIGMA: Alphabet = ("0", "1", "$")


class Mode(enum.Enum):
    FINITE = "finite"
    BUCHI = "buchi"


def word(letters: Iterable[Symbol] | str) -> Word:
    """Turn ``"01$"`` or any iterable of symbols into a word tuple."""
    return tuple(letters)


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word ``stem . loop^omega``."""

    stem: Word
    loop: Word

    def __post_init__(self):
        object.__setattr__(self, "stem", word(self.stem))
        object.__setattr__(self, "loop", word(self.loop))
        if not self.loop:
            raise InputError("lasso loop must be nonempty")

    def __str__(self):
        return "".join(self.stem) + "(" + "".join(self.loop) + ")^w"


@dataclass(frozen=True)
class Automaton:
    alphabet: Alphabet
    num_states: int
    initial: int
    delta: tuple[tuple[frozenset[int], ...], ...]
    finals: frozenset[int]
    mode: Mode = Mode.FINITE
    _index: dict[Symbol, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InputError(f"alphabet symbols must be distinct: {self.alphabet}")
        if not 0 <= self.initial < self.num_states:
            raise InputError(f"initial state {self.initial} out of range")
        if len(self.delta) != self.num_states:
            raise InputError("delta must have one row per state")
        for q, row in enumerate(self.delta):
            if len(row) != len(self.alphabet):
                raise InputError(f"delta row {q} must have one entry per symbol")
            for targets in row:
                for t in targets:
                    if not 0 <= t < self.num_states:
                        raise InputError(f"transition target {t} out of range")
        if any(not 0 <= f < self.num_states for f in self.finals):
            raise InputError("final state out of range")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.alphabet)})

    @classmethod
    def from_edges(
        cls,
        alphabet: Sequence[Symbol],
        num_states: int,
        initial: int,
        edges: Iterable[tuple[int, Symbol, int]],
        finals: Iterable[int],
        mode: Mode = Mode.FINITE,
    ) -> Automaton:
        alphabet = tuple(alphabet)
        index = {s: i for i, s in enumerate(alphabet)}
        rows = [[set() for _ in alphabet] for _ in range(num_states)]
        for q, sym, t in edges:
            if sym not in index:
                raise InputError(f"symbol {sym!r} not in alphabet {alphabet}")
            if not 0 <= q < num_states:
                raise InputError(f"source state {q} out of range")
            rows[q][index[sym]].add(t)
        delta = tuple(tuple(frozenset(s) for s in row) for row in rows)
        return cls(alphabet, num_states, initial, delta, frozenset(finals), mode)

    # -- basic access ------------------------------------------------------

    @property
    def states(self) -> range:
        return range(self.num_states)

    def symbol_index(self, sym: Symbol) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise InputError(f"letter {sym!r} not in alphabet {self.alphabet}") from None

    def succ(self, q: int, sym: Symbol) -> frozenset[int]:
        return self.delta[q][self.symbol_index(sym)]

    def post(self, states: Iterable[int], sym: Symbol) -> frozenset[int]:
        i = self.symbol_index(sym)
        out: set[int] = set()
        for q in states:
            out |= self.delta[q][i]
        return frozenset(out)

    def step(self, q: int, sym: Symbol) -> int:
        """Unique successor in a deterministic automaton, -1 when blocked."""
        targets = self.succ(q, sym)
        if len(targets) > 1:
            raise ContractError(f"state {q} is nondeterministic on {sym!r}")
        return next(iter(targets)) if targets else -1

    def edges(self) -> list[tuple[int, Symbol, int]]:
        """All transition triples in canonical (state, symbol, target) order."""
        return [
            (q, sym, t)
            for q in self.states
            for i, sym in enumerate(self.alphabet)
            for t in sorted(self.delta[q][i])
        ]

    def graph_successors(self, q: int) -> frozenset[int]:
        out: set[int] = set()
        for targets in self.delta[q]:
            out |= targets
        return frozenset(out)

    @property
    def num_transitions(self) -> int:
        """Number of (state, letter, state) triples."""
        return sum(len(t) for row in self.delta for t in row)

    # -- classification ----------------------------------------------------

    @property
    def deterministic(self) -> bool:
        return all(len(t) <= 1 for row in self.delta for t in row)

    @property
    def complete(self) -> bool:
        return all(len(t) >= 1 for row in self.delta for t in row)

    @property
    def safety(self) -> bool:
        return len(self.finals) == self.num_states

    @property
    def reachability(self) -> bool:
        if len(self.finals) != 1:
            return False
        (f,) = self.finals
        return all(t == frozenset({f}) for t in self.delta[f])

    # -- derived automata --------------------------------------------------

    def rerooted(self, q: int) -> Automaton:
        if not 0 <= q < self.num_states:
            raise InputError(f"state {q} out of range")
        return Automaton(self.alphabet, self.num_states, q, self.delta, self.finals, self.mode)

    def with_mode(self, mode: Mode) -> Automaton:
        return Automaton(self.alphabet, self.num_states, self.initial, self.delta, self.finals, mode)

    def with_finals(self, finals: Iterable[int]) -> Automaton:
        return Automaton(
            self.alphabet, self.num_states, self.initial, self.delta, frozenset(finals), self.mode
        )

    def check_word(self, w: Iterable[Symbol]) -> Word:
        w = word(w)
        for sym in w:
            self.symbol_index(sym)
        return w

    def __repr__(self):
        return (
            f"Automaton(|Q|={self.num_states}, init={self.initial}, "
            f"F={sorted(self.finals)}, mode={self.mode.value}, |delta|={self.num_transitions})"
        )
