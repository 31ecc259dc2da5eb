"""Ambiguity and separation checks, and the GfM witness experiments on chains."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .automaton import Automaton, LassoWord, Mode
from .buchi import buchi_equiv_on_lassos, find_accepting_lasso, intersect_nba, is_empty_buchi
from .errors import ContractError, InputError
from .families import build_dn, build_gn, build_lr_dba, build_ls_dba
from .mdp import build_random_mc, build_sigma_mc
from .product import Semantics, first_reached_pairs, psem, psyn, psyn_details


def _require_buchi(a: Automaton) -> None:
    if a.mode is not Mode.BUCHI:
        raise ContractError("expected a Büchi automaton")


# -- self product -------------------------------------------------------------


@dataclass(frozen=True)
class RunPair:
    """Two runs of one automaton on ``word``, each as a stem and a closed loop of states."""

    word: LassoWord
    first: tuple[list[int], list[int]]
    second: tuple[list[int], list[int]]


def _self_product(a: Automaton, both_accepting: bool) -> tuple[Automaton, int]:
    """Pairs of runs on a common word.

    State ``(p, q, diverged, phase)`` has index
    ``((p * |Q| + q) * 2 + diverged) * 2 + phase - 1``. ``diverged`` becomes
    true once the two runs sit in different states and stays true. With
    ``both_accepting`` the phase bit makes the final states those where both
    runs have been accepting since the last visit; otherwise every diverged
    state is final.
    """
    n = a.num_states

    def encode(p, q, div, phase):
        return ((p * n + q) * 2 + div) * 2 + phase - 1

    delta = []
    finals = set()
    for p in a.states:
        for q in a.states:
            for div in (0, 1):
                for phase in (1, 2):
                    if both_accepting:
                        if phase == 1:
                            nphase = 2 if p in a.finals else 1
                        else:
                            nphase = 1 if q in a.finals else 2
                            if q in a.finals and div:
                                finals.add(encode(p, q, div, phase))
                    else:
                        nphase = 1
                        if div:
                            finals.add(encode(p, q, div, phase))
                    row = []
                    for i in range(len(a.alphabet)):
                        row.append(
                            frozenset(
                                encode(p2, q2, int(div or p2 != q2), nphase)
                                for p2 in a.delta[p][i]
                                for q2 in a.delta[q][i]
                            )
                        )
                    delta.append(tuple(row))
    init = encode(a.initial, a.initial, 0, 1)
    return Automaton(a.alphabet, n * n * 4, init, tuple(delta), frozenset(finals), Mode.BUCHI), n


def _decode(v: int, n: int) -> tuple[int, int]:
    pq = v // 4
    return divmod(pq, n)


def _run_pair(a: Automaton, both_accepting: bool) -> RunPair | None:
    prod, n = _self_product(a, both_accepting)
    found = find_accepting_lasso(prod)
    if found is None:
        return None
    stem = [_decode(v, n) for v in found.stem_states]
    loop = [_decode(v, n) for v in found.loop_states]
    return RunPair(
        found.word,
        ([p for p, _ in stem], [p for p, _ in loop]),
        ([q for _, q in stem], [q for _, q in loop]),
    )


def is_run(a: Automaton, w: LassoWord, stem_states: Sequence[int], loop_states: Sequence[int]) -> bool:
    """Do the given states form a run of ``a`` on ``w`` (stem, then a repeated loop)?"""
    if len(stem_states) != len(w.stem) + 1 or len(loop_states) != len(w.loop) + 1:
        return False
    if stem_states[0] != a.initial or stem_states[-1] != loop_states[0] != loop_states[-1]:
        return False
    for states, letters in ((stem_states, w.stem), (loop_states, w.loop)):
        for q, sym, t in zip(states, letters, states[1:]):
            if t not in a.succ(q, sym):
                return False
    return True


def is_accepting_run(a: Automaton, w: LassoWord, stem_states, loop_states) -> bool:
    return is_run(a, w, stem_states, loop_states) and any(q in a.finals for q in loop_states)


def is_unambiguous(a: Automaton) -> tuple[bool, RunPair | None]:
    """At most one accepting run per word; otherwise two distinct accepting runs on a lasso."""
    _require_buchi(a)
    pair = _run_pair(a, both_accepting=True)
    return pair is None, pair


def is_strongly_unambiguous(a: Automaton) -> tuple[bool, RunPair | None]:
    """At most one infinite run per word; otherwise two distinct runs on a lasso."""
    _require_buchi(a)
    pair = _run_pair(a, both_accepting=False)
    return pair is None, pair


def is_separating(a: Automaton) -> tuple[bool, tuple[int, int, LassoWord] | None]:
    """Pairwise disjoint state languages; otherwise ``(p, q, word in both)``."""
    _require_buchi(a)
    for p, q in itertools.combinations(a.states, 2):
        empty, w = is_empty_buchi(intersect_nba(a.rerooted(p), a.rerooted(q)))
        if not empty:
            return False, (p, q, w)
    return True, None


# -- experiments --------------------------------------------------------------


def sigma_value(sigma: Sequence[int]) -> Fraction:
    """Probability that the chain ``build_sigma_mc(n, sigma)`` produces a word of the language."""
    n = len(sigma)
    return Fraction(1, 2 ** (n + 1)) + sum(
        (Fraction(b, 2 ** (i + 1)) for i, b in enumerate(sigma)), Fraction(0)
    )


@dataclass
class SigmaOutcome:
    sigma: tuple[int, ...]
    semantic: Fraction
    syntactic: Fraction
    paired_state: int | None = None

    @property
    def attained(self) -> bool:
        return self.syntactic == self.semantic


@dataclass
class LowerBoundReport:
    n: int
    flavor: str
    candidate_states: int
    lasso_bound: int
    lasso_agreement: bool | None  # None when the check was skipped
    lasso_counterexample: LassoWord | None
    outcomes: list[SigmaOutcome] = field(default_factory=list)

    @property
    def semantic_values_distinct(self) -> bool:
        values = [o.semantic for o in self.outcomes]
        return len(set(values)) == len(values)

    @property
    def all_attained(self) -> bool:
        return all(o.attained for o in self.outcomes)

    @property
    def shortfalls(self) -> list[SigmaOutcome]:
        return [o for o in self.outcomes if not o.attained]

    @property
    def distinct_paired_states(self) -> int | None:
        """Number of distinct automaton states met at s_n; only defined when every value is attained."""
        if not self.all_attained:
            return None
        return len({o.paired_state for o in self.outcomes})

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "flavor": self.flavor,
            "candidateStates": self.candidate_states,
            "assumption": {
                "lassoBound": self.lasso_bound,
                "agrees": self.lasso_agreement,
                "counterexample": None if self.lasso_counterexample is None else str(self.lasso_counterexample),
            },
            "outcomes": [
                {
                    "sigma": "".join(map(str, o.sigma)),
                    "semantic": _frac(o.semantic),
                    "syntactic": _frac(o.syntactic),
                    "attained": o.attained,
                    "pairedState": o.paired_state,
                }
                for o in self.outcomes
            ],
            "semanticValuesDistinct": self.semantic_values_distinct,
            "allAttained": self.all_attained,
            "shortfallCount": len(self.shortfalls),
            "distinctPairedStates": self.distinct_paired_states,
        }


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


REFERENCE = {"safety": build_ls_dba, "reach": build_lr_dba}


def gfm_lower_bound_experiment(
    n: int, candidate: Automaton, flavor: str, lasso_bound: int | None = None
) -> LowerBoundReport:
    """Run ``candidate`` on every sigma-chain and compare with the semantic value.

    Uses the product where the letter is seen before the automaton moves.
    The candidate's language is compared with a reference DBA on lassos up
    to ``2n + 3`` (pass ``lasso_bound=0`` to skip); the result is recorded
    as an assumption, not a proof. For each sigma at which the candidate
    attains the semantic value, the automaton state paired with s_n on
    first arrival under the optimal strategy is recorded.
    """
    if flavor not in REFERENCE:
        raise InputError(f"flavor must be one of {sorted(REFERENCE)}")
    _require_buchi(candidate)
    bound = 2 * n + 3 if lasso_bound is None else lasso_bound
    if bound > 0:
        agrees, cex = buchi_equiv_on_lassos(candidate, REFERENCE[flavor](n), bound)
    else:
        agrees, cex = None, None
    report = LowerBoundReport(n, flavor, candidate.num_states, bound, agrees, cex)
    for sigma in itertools.product((0, 1), repeat=n):
        m = build_sigma_mc(n, sigma)
        prod, _, values, strategy = psyn_details(m, candidate, Semantics.INFORMED)
        outcome = SigmaOutcome(sigma, sigma_value(sigma), values[prod.initial])
        if outcome.attained:
            hits = first_reached_pairs(prod, strategy, n)
            if len(hits) != 1:
                raise ContractError(
                    f"sigma={sigma}: expected one product state over s_n on first arrival, got {len(hits)}"
                )
            outcome.paired_state = prod.nodes[hits.pop()][2]
        report.outcomes.append(outcome)
    return report


@dataclass
class SpotCheckReport:
    n: int
    seeds: list[int]
    states: int
    results: list[tuple[int, Fraction, Fraction]] = field(default_factory=list)

    @property
    def counterexamples(self) -> list[tuple[int, Fraction, Fraction]]:
        return [r for r in self.results if r[1] != r[2]]

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "states": self.states,
            "results": [
                {"seed": s, "psyn": _frac(a), "psem": _frac(b), "equal": a == b}
                for s, a, b in self.results
            ],
            "passed": self.passed,
        }


def gfm_spot_check(
    n: int,
    seeds: Iterable[int],
    states: int = 5,
    nba: Automaton | None = None,
    dba: Automaton | None = None,
    density: float = 0.5,
    absorbing: int = 2,
) -> SpotCheckReport:
    """Compare psyn of G_n with psem via D_n on seeded random chains.

    ``nba`` and ``dba`` default to G_n and D_n; overriding ``nba`` with a
    non-GfM automaton for the same language is how a shortfall shows up.
    Chains come from :func:`build_random_mc` with ``absorbing`` looping
    states, so that values other than 0 and 1 occur.
    """
    nba = build_gn(n) if nba is None else nba
    dba = build_dn(n) if dba is None else dba
    seeds = list(seeds)
    report = SpotCheckReport(n, seeds, states)
    for seed in seeds:
        m = build_random_mc(seed, states, density=density, absorbing=absorbing)
        report.results.append((seed, psyn(m, nba, Semantics.INFORMED), psem(m, dba)))
    return report
