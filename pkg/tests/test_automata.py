import itertools

import pytest
from hypothesis import given, settings

from conftest import lassos
from lassynt.automata import (Dfa, ParityAutomaton, build_prefix_dfa, dfa_to_dot, lift_parity,
                              minimize_dfa, parity_accepts_lasso, parity_to_dot)
from lassynt.lasso import Lasso, input_letters, lassos_of_length, representable_at, unroll

A1 = input_letters(["r"])
A2 = input_letters(["r", "w"])


def prefixes_of_k_words(alphabet, k, length):
    return {unroll(l, length) for l in lassos_of_length(alphabet, k)}


@pytest.mark.parametrize("alphabet,k", [(A1, 1), (A1, 2), (A1, 3), (A2, 1), (A2, 2)])
def test_prefix_dfa_matches_enumeration(alphabet, k):
    dfa = build_prefix_dfa(alphabet, k)
    for length in range(2 * k + 2):
        good = prefixes_of_k_words(alphabet, k, length)
        for w in itertools.product(alphabet, repeat=length):
            assert dfa.accepts(w) == (w in good), w


@pytest.mark.parametrize("alphabet,k", [(A1, 2), (A1, 3), (A2, 2)])
def test_minimization_preserves_language(alphabet, k):
    dfa = build_prefix_dfa(alphabet, k)
    small = minimize_dfa(dfa)
    assert small.num_states <= dfa.num_states
    for length in range(2 * k + 3):
        for w in itertools.product(alphabet, repeat=length):
            assert small.accepts(w) == dfa.accepts(w)
    assert minimize_dfa(small).num_states == small.num_states


def test_minimize_merges_equivalent_states():
    # two accepting states that behave identically
    d = Dfa(["a"], [[1], [2], [1]], 0, frozenset({1, 2}))
    assert minimize_dfa(d).num_states == 2


@pytest.mark.parametrize("k", [2, 3, 4])
def test_lower_bound(k):
    assert minimize_dfa(build_prefix_dfa(A1, k)).num_states >= 2 ** (k - 1)


def test_prefix_dfa_rejects_bad_args():
    with pytest.raises(ValueError):
        build_prefix_dfa(A1, 0)
    with pytest.raises(ValueError):
        build_prefix_dfa([], 2)
    with pytest.raises(ValueError):
        build_prefix_dfa(A1, 2).step(0, "zzz")


def test_prefix_dfa_is_prefix_closed_and_sink_rejecting():
    dfa = build_prefix_dfa(A1, 2)
    for q in range(dfa.num_states):
        if q not in dfa.accepting:
            assert all(r not in dfa.accepting for r in dfa.trans[q])


R, E = frozenset({"r"}), frozenset()


def gf_r():
    # state 1 is entered on r and has color 2; state 0 has color 1
    return ParityAutomaton(A1, [[0, 1], [0, 1]], [0], [1, 2], max_color=2)


def test_parity_acceptance():
    a = gf_r()
    assert parity_accepts_lasso(a, Lasso((), (E, R)))
    assert not parity_accepts_lasso(a, Lasso((R, R), (E,)))


def test_parity_validation():
    with pytest.raises(ValueError):
        ParityAutomaton(A1, [[0, 0]], [0], [3], max_color=2)
    nondet = ParityAutomaton(A1, [[("or", [0]), 0]], [0], [0])
    assert not nondet.deterministic
    with pytest.raises(ValueError):
        parity_accepts_lasso(nondet, Lasso((), (E,)))


@given(lassos(atoms=("r",), max_len=5))
@settings(max_examples=200)
def test_lift_accepts_exactly_out_of_bound_words_or_accepted(lasso):
    k = 2
    lifted = lift_parity(gf_r(), build_prefix_dfa(A1, k), lambda x: x)
    expect = parity_accepts_lasso(gf_r(), lasso) or not representable_at(lasso, k)
    assert parity_accepts_lasso(lifted, lasso) == expect


def test_dot_output():
    text = dfa_to_dot(build_prefix_dfa(A1, 2), "p")
    assert text.startswith("digraph p {") and "doublecircle" in text
    assert "q0 ->" in parity_to_dot(gf_r())
