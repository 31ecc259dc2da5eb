import pytest

from omegasucc.automaton import SIGMA
from omegasucc.buchi import iter_lassos
from omegasucc.dfa import complete_with_sink, hopcroft_minimize, subset_construction
from omegasucc.errors import InputError
from omegasucc.families import (
    FAMILIES,
    build_an,
    build_an_prime,
    build_bn,
    build_cn,
    build_dn,
    build_gamma_dfa,
    build_gamma_nfa,
    build_gn,
    build_lr_dba,
    build_ls_dba,
    build_rn,
    build_rn_prime,
    build_sn,
    ln_contains,
    ln_omega_contains,
    lr_contains,
    ls_contains,
)
from omegasucc.reproduce import curated_lassos

from .oracles import lasso_accepts, moore_size, nfa_accepts, words

NS = [1, 2, 3]


def gamma_contains(n, w):
    w = tuple(w)
    return len(w) >= n + 1 and w[-1] == "$" and all(c in "01" for c in w[:-1]) and w[-1 - n] == "0"


def cn_contains(n, w):
    w = tuple(w)
    return len(w) >= n + 1 and w[-1] == "$" and all(c in "01" for c in w[:-1])


def nth_last_is_one(n, w):
    return len(w) >= n and all(c in "01" for c in w) and w[-n] == "1"


@pytest.mark.parametrize("n", NS)
def test_finite_word_families_match_definitions(n):
    automata = [
        (build_an(n), ln_contains),
        (build_bn(n), ln_contains),
        (build_gamma_nfa(n), gamma_contains),
        (build_gamma_dfa(n), gamma_contains),
        (build_cn(n), cn_contains),
        (build_an_prime(n), nth_last_is_one),
    ]
    for w in words(SIGMA, n + 3):
        for a, member in automata:
            assert nfa_accepts(a, w) == member(n, w), (a, w)


@pytest.mark.parametrize("n", NS)
def test_omega_families_match_definitions(n):
    cases = [
        (build_gn(n), ln_omega_contains),
        (build_dn(n), ln_omega_contains),
        (build_rn(n), lr_contains),
        (build_rn_prime(n), lr_contains),
        (build_lr_dba(n), lr_contains),
        (build_sn(n), ls_contains),
        (build_ls_dba(n), ls_contains),
    ]
    for w in iter_lassos(SIGMA, n + 2, 3 if n < 3 else 2):
        for a, member in cases:
            assert lasso_accepts(a, w) == member(n, w), (a, w)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_curated_lassos_labels_follow_the_definition(n):
    for w, expected in curated_lassos(n):
        assert ln_omega_contains(n, w) == expected


def test_definition_predicates_on_examples():
    from omegasucc.automaton import LassoWord

    assert ln_contains(2, "0110$") is True
    assert ln_contains(2, "0100$") is False
    assert ln_contains(2, "0101$") is False
    assert ln_contains(2, "0010$") is True
    assert ln_contains(1, "1$") and not ln_contains(1, "$")
    assert lr_contains(1, LassoWord("1$", "0"))
    assert not lr_contains(1, LassoWord("0$1$", "0"))
    assert ls_contains(1, LassoWord("1$", "$"))
    assert not ls_contains(1, LassoWord("1$", "0"))
    assert ls_contains(3, LassoWord("", "01"))
    assert ln_omega_contains(1, LassoWord("", "01$"))
    assert not ln_omega_contains(1, LassoWord("1$", "0$"))


FROZEN = {
    # minimal complete DFA of A_n, reference counts from Moore refinement
    "minAn": [4, 6, 10, 18, 34, 66],
    "Bn": [3, 5, 9, 17, 33, 65],
    "LsDba": [4, 6, 10, 18, 34, 66],
    "LrDba": [4, 6, 10, 18, 34, 66],
    "Gamma": [3, 5, 9, 17, 33, 65],
}


@pytest.mark.parametrize("n", range(1, 7))
def test_frozen_sizes(n):
    d = complete_with_sink(subset_construction(build_an(n)))
    assert hopcroft_minimize(d).num_states == FROZEN["minAn"][n - 1] == moore_size(d)
    assert build_bn(n).num_states == FROZEN["Bn"][n - 1] == 2**n + 1
    assert build_dn(n).num_states == FROZEN["Bn"][n - 1]
    assert build_ls_dba(n).num_states == FROZEN["LsDba"][n - 1]
    assert build_lr_dba(n).num_states == FROZEN["LrDba"][n - 1]
    assert build_gamma_dfa(n).num_states == FROZEN["Gamma"][n - 1]


@pytest.mark.parametrize("n", range(1, 11))
def test_structural_counts(n):
    g, rn, rp, sn, cn = build_gn(n), build_rn(n), build_rn_prime(n), build_sn(n), build_cn(n)
    assert (g.num_states, g.num_transitions) == (n + 2, 3 * n + 7)
    assert (rn.num_states, rn.num_transitions) == (n + 2, 2 * n + 5)
    assert (rp.num_states, rp.num_transitions) == (n + 2, 3 * n + 6)
    assert (sn.num_states, sn.num_transitions) == (n + 1, 2 * n + 2)
    assert cn.num_states == n + 2


@pytest.mark.parametrize("n", range(1, 6))
def test_shape_properties(n):
    assert build_dn(n).complete and build_dn(n).deterministic
    assert build_bn(n).deterministic
    assert build_sn(n).safety
    assert build_rn(n).reachability
    assert build_ls_dba(n).complete and build_lr_dba(n).complete


def test_registry_and_bad_n():
    assert set(FAMILIES) >= {"An", "Gn", "Dn", "Sn", "Rn", "RnPrime", "Cn", "Bn"}
    for bad in (0, -1, 1.5):
        with pytest.raises(InputError):
            build_gn(bad)
