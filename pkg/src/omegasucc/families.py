"""Automata for the languages L_n, L_n^omega, L_n^r and L_n^s.

Index layout, unless stated otherwise: ``q_i`` is state ``i`` for
``i = 0..n`` and, where present, the extra state ``f`` is ``n + 1``.
Every automaton uses the full alphabet ``("0", "1", "$")``.
"""
from __future__ import annotations

from .automaton import SIGMA, Automaton, Mode
from .buchi import determinize_weak, loopify
from .dfa import determinize
from .errors import InputError

BITS = ("0", "1")


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")


def _chain(n: int) -> list[tuple[int, str, int]]:
    """q0 loops on 0,1 and guesses q1 on 1; q_i moves to q_{i+1} on 0,1."""
    edges = [(0, "0", 0), (0, "1", 0), (0, "1", 1)]
    edges += [(i, b, i + 1) for i in range(1, n) for b in BITS]
    return edges


def build_an(n: int) -> Automaton:
    """NFA for L_n: words over {0,1} ending in $ whose n-th letter before $ is 1."""
    _check_n(n)
    f = n + 1
    edges = _chain(n) + [(n, "$", f)]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {f}, Mode.FINITE)


def build_an_prime(n: int) -> Automaton:
    """NFA over {0,1} for "the n-th to last letter is 1"; q_n is final and has no exits."""
    _check_n(n)
    return Automaton.from_edges(SIGMA, n + 1, 0, _chain(n), {n}, Mode.FINITE)


def build_gn(n: int) -> Automaton:
    """NBA for L_n^omega: A_n with every blocking move sent back to q0."""
    _check_n(n)
    f = n + 1
    edges = _chain(n) + [(n, "$", f), (n, "0", 0), (n, "1", 0)]
    edges += [(f, s, 0) for s in SIGMA]
    edges += [(q, "$", 0) for q in range(n)]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {f}, Mode.BUCHI)


def build_bn(n: int) -> Automaton:
    """Deterministic (partial) DFA for L_n.

    States ``0..2^n - 1`` are the reachable subsets of ``A_n'`` in BFS
    order; state ``2^n`` is the fresh final ``f``, entered on ``$`` from
    every subset containing ``q_n``.
    """
    _check_n(n)
    sub, subsets = determinize(build_an_prime(n))
    f = sub.num_states
    edges = [e for e in sub.edges()]
    edges += [(q, "$", f) for q in sub.finals]
    return Automaton.from_edges(SIGMA, f + 1, 0, edges, {f}, Mode.FINITE)


def build_dn(n: int) -> Automaton:
    """Complete DBA for L_n^omega, obtained from B_n like G_n from A_n."""
    return loopify(build_bn(n))


def build_rn(n: int) -> Automaton:
    """Reachability NBA for L_n^r; f is an accepting sink."""
    _check_n(n)
    f = n + 1
    edges = _chain(n) + [(n, "$", f)] + [(f, s, f) for s in SIGMA]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {f}, Mode.BUCHI)


def build_sn(n: int) -> Automaton:
    """Safety NBA for L_n^s; all n + 1 states are final, q_n loops on $."""
    _check_n(n)
    edges = _chain(n) + [(n, "$", n)]
    return Automaton.from_edges(SIGMA, n + 1, 0, edges, range(n + 1), Mode.BUCHI)


def build_rn_prime(n: int) -> Automaton:
    """Separating NBA for L_n^r with finals {q_n, f}.

    From q_n, ``$`` leads to every q_i and to f; f loops on 0,1 and may
    also move to q1 on 0.
    """
    _check_n(n)
    f = n + 1
    edges = _chain(n)
    edges += [(n, "$", q) for q in range(n + 2)]
    edges += [(f, "0", f), (f, "1", f), (f, "0", 1)]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {n, f}, Mode.BUCHI)


def build_cn(n: int) -> Automaton:
    """Partial DFA for {0,1}^n {0,1}^* $ (length gate)."""
    _check_n(n)
    f = n + 1
    edges = [(i, b, i + 1) for i in range(n) for b in BITS]
    edges += [(n, "0", n), (n, "1", n), (n, "$", f)]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {f}, Mode.FINITE)


def build_gamma_nfa(n: int) -> Automaton:
    _check_n(n)
    f = n + 1
    edges = [(0, "0", 0), (0, "1", 0), (0, "0", 1)]
    edges += [(i, b, i + 1) for i in range(1, n) for b in BITS]
    edges += [(n, "$", f)]
    return Automaton.from_edges(SIGMA, n + 2, 0, edges, {f}, Mode.FINITE)


def build_gamma_dfa(n: int) -> Automaton:
    """Partial DFA for Gamma_n: words over {0,1} ending in $ whose n-th letter before $ is 0."""
    return determinize(build_gamma_nfa(n))[0]


def build_ls_dba(n: int) -> Automaton:
    """Complete deterministic Büchi automaton for L_n^s (subsets of S_n plus a sink)."""
    return determinize_weak(build_sn(n))


def build_lr_dba(n: int) -> Automaton:
    """Complete deterministic Büchi automaton for L_n^r (subsets of R_n plus a sink)."""
    return determinize_weak(build_rn(n))


FAMILIES = {
    "An": build_an,
    "AnPrime": build_an_prime,
    "Gn": build_gn,
    "Bn": build_bn,
    "Dn": build_dn,
    "Rn": build_rn,
    "Sn": build_sn,
    "RnPrime": build_rn_prime,
    "Cn": build_cn,
    "Gamma": build_gamma_dfa,
    "LsDba": build_ls_dba,
    "LrDba": build_lr_dba,
}


# -- language membership by definition ---------------------------------------


def ln_contains(n: int, w) -> bool:
    """Is ``w`` in L_n = {0,1}* 1 {0,1}^(n-1) $ ?"""
    w = tuple(w)
    return (
        len(w) >= n + 1
        and w[-1] == "$"
        and all(c in BITS for c in w[:-1])
        and w[-1 - n] == "1"
    )


def ln_omega_contains(n: int, lasso) -> bool:
    """Does ``stem . loop^omega`` contain infinitely many factors from L_n?

    Such a factor ends at a ``$`` whose n preceding letters are bits, the
    first of them a 1. It occurs infinitely often iff it ends inside some
    copy of the loop far enough from the stem, so one copy checked with
    enough context suffices.
    """
    loop = tuple(lasso.loop)
    copies = n // len(loop) + 2
    unrolled = loop * copies
    start = len(unrolled) - len(loop)
    for p in range(start, len(unrolled)):
        if unrolled[p] == "$" and ln_contains(n, unrolled[p - n : p + 1]):
            return True
    return False


def _first_dollar_prefix(lasso):
    """Prefix up to and including the first ``$`` of ``stem . loop^omega``, or None."""
    w = tuple(lasso.stem) + tuple(lasso.loop)
    if "$" not in w:
        return None
    return w[: w.index("$") + 1]


def lr_contains(n: int, lasso) -> bool:
    """L_n^r: some prefix lies in L_n (equivalently, the prefix up to the first $ does)."""
    prefix = _first_dollar_prefix(lasso)
    return prefix is not None and ln_contains(n, prefix)


def ls_contains(n: int, lasso) -> bool:
    """L_n^s: a word of L_n followed by $^omega, or an infinite word over {0,1}."""
    prefix = _first_dollar_prefix(lasso)
    if prefix is None:
        return True
    w = tuple(lasso.stem) + tuple(lasso.loop)
    return ln_contains(n, prefix) and all(c == "$" for c in w[len(prefix):]) and set(lasso.loop) == {"$"}
