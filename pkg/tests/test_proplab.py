import pytest
from hypothesis import given, settings

from omegasucc.automaton import LassoWord, Mode
from omegasucc.buchi import accepts_lasso, iter_lassos
from omegasucc.errors import ContractError, InputError
from omegasucc.families import build_dn, build_gn, build_lr_dba, build_ls_dba, build_rn, build_rn_prime, build_sn
from omegasucc.proplab import (
    gfm_lower_bound_experiment,
    gfm_spot_check,
    is_accepting_run,
    is_run,
    is_separating,
    is_strongly_unambiguous,
    is_unambiguous,
    sigma_value,
)

from .oracles import lasso_accepts, run_pairs_on_lasso
from .strategies import SMALL_ALPHABET, buchi_automata

SMALL_LASSOS = list(iter_lassos(SMALL_ALPHABET, 2, 3))


def _unroll(stem, loop, length):
    seq = list(stem)
    while len(seq) < length:
        seq.extend(loop[1:])
    return seq[:length]


def _assert_distinct_runs(a, pair, accepting):
    check = is_accepting_run if accepting else is_run
    assert check(a, pair.word, *pair.first)
    assert check(a, pair.word, *pair.second)
    horizon = len(pair.first[0]) + len(pair.second[0]) + 2 * len(pair.first[1]) * len(pair.second[1])
    assert _unroll(*pair.first, horizon) != _unroll(*pair.second, horizon)


@settings(max_examples=150, deadline=None)
@given(buchi_automata(max_states=3))
def test_unambiguity_against_lasso_oracle(a):
    holds, pair = is_unambiguous(a)
    if holds:
        assert not any(run_pairs_on_lasso(a, w, True) for w in SMALL_LASSOS)
    else:
        _assert_distinct_runs(a, pair, accepting=True)
        assert run_pairs_on_lasso(a, pair.word, True)


@settings(max_examples=150, deadline=None)
@given(buchi_automata(max_states=3))
def test_strong_unambiguity_against_lasso_oracle(a):
    holds, pair = is_strongly_unambiguous(a)
    if holds:
        assert not any(run_pairs_on_lasso(a, w, False) for w in SMALL_LASSOS)
    else:
        _assert_distinct_runs(a, pair, accepting=False)
        assert run_pairs_on_lasso(a, pair.word, False)
    # strong unambiguity implies unambiguity
    if holds:
        assert is_unambiguous(a)[0]


@settings(max_examples=150, deadline=None)
@given(buchi_automata(max_states=3))
def test_separation_against_lasso_oracle(a):
    holds, witness = is_separating(a)
    if holds:
        for w in SMALL_LASSOS:
            assert sum(lasso_accepts(a.rerooted(q), w) for q in a.states) <= 1
    else:
        p, q, w = witness
        assert p != q
        assert lasso_accepts(a.rerooted(p), w) and lasso_accepts(a.rerooted(q), w)


@pytest.mark.parametrize("n", range(1, 5))
def test_known_family_properties(n):
    assert is_strongly_unambiguous(build_sn(n))[0]
    assert is_separating(build_sn(n))[0]
    assert is_unambiguous(build_rn(n))[0]
    assert is_separating(build_rn_prime(n))[0]


def test_small_examples():
    holds, pair = is_unambiguous(build_gn(1))
    assert not holds
    _assert_distinct_runs(build_gn(1), pair, accepting=True)
    holds, (p, q, w) = is_separating(build_gn(1))
    assert not holds and accepts_lasso(build_gn(1).rerooted(p), w) and accepts_lasso(build_gn(1).rerooted(q), w)
    assert is_separating(build_sn(1))[0]
    assert is_unambiguous(build_sn(1))[0]


def test_is_run_rejects_bad_sequences():
    a = build_sn(1)
    w = LassoWord("1", "$")
    assert is_accepting_run(a, w, [0, 1], [1, 1])
    assert not is_run(a, w, [0, 0], [0, 0])
    assert not is_run(a, w, [0, 1], [1])
    assert not is_run(a, w, [1, 1], [1, 1])


def test_contracts():
    fin = build_gn(1).with_mode(Mode.FINITE)
    for fn in (is_unambiguous, is_strongly_unambiguous, is_separating):
        with pytest.raises(ContractError):
            fn(fin)
    with pytest.raises(InputError):
        gfm_lower_bound_experiment(1, build_ls_dba(1), "liveness")


@pytest.mark.parametrize("n", [1, 2, 3])
def test_lower_bound_experiment_small(n):
    det = gfm_lower_bound_experiment(n, build_ls_dba(n), "safety")
    assert det.lasso_agreement is True
    assert det.all_attained and det.semantic_values_distinct
    assert det.distinct_paired_states == 2**n
    for o in det.outcomes:
        assert o.semantic == sigma_value(o.sigma)
    reach = gfm_lower_bound_experiment(n, build_lr_dba(n), "reach")
    assert reach.all_attained and reach.distinct_paired_states == 2**n
    sn = gfm_lower_bound_experiment(n, build_sn(n), "safety")
    rn = gfm_lower_bound_experiment(n, build_rn(n), "reach")
    assert sn.lasso_agreement and rn.lasso_agreement
    assert sn.shortfalls and rn.shortfalls
    assert sn.distinct_paired_states is None
    assert all(o.syntactic < o.semantic for o in sn.shortfalls)


def test_lower_bound_experiment_flags_wrong_language():
    rep = gfm_lower_bound_experiment(2, build_dn(2), "safety")
    assert rep.lasso_agreement is False and rep.lasso_counterexample is not None
    skipped = gfm_lower_bound_experiment(1, build_ls_dba(1), "safety", lasso_bound=0)
    assert skipped.lasso_agreement is None
    d = skipped.as_dict()
    assert d["assumption"]["agrees"] is None and d["distinctPairedStates"] == 2


def test_spot_check_agrees_for_gn_and_not_for_sn():
    rep = gfm_spot_check(1, range(20))
    assert rep.passed and len(rep.results) == 20
    bad = gfm_spot_check(1, range(50), nba=build_sn(1), dba=build_ls_dba(1))
    assert not bad.passed
    for _, syn, sem in bad.counterexamples:
        assert syn < sem
    assert bad.as_dict()["passed"] is False
