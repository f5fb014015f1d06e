import itertools

import pytest
from hypothesis import given, settings, strategies as st

from conftest import lassos
from lassynt.lasso import (Lasso, canonical_word, delta, enumerate_k_words, enumerate_k_words_bruteforce,
                           format_lasso, input_letters, lassos_of_length, letter_index,
                           representable_at, unroll, word_eq)

A1 = input_letters(["r"])
A2 = input_letters(["r", "w"])


def test_delta_examples():
    # k=3 looping to 1: positions 0 1 2 1 2 1 2
    assert [delta(j, 3, 1) for j in range(7)] == [0, 1, 2, 1, 2, 1, 2]
    assert [delta(j, 2, 0) for j in range(5)] == [0, 1, 0, 1, 0]
    with pytest.raises(ValueError):
        delta(0, 3, 3)
    with pytest.raises(ValueError):
        delta(-1, 3, 0)


@given(lassos(), st.integers(0, 30))
def test_letter_agrees_with_unroll(lasso, j):
    assert lasso.letter(j) == unroll(lasso, j + 1)[j]


def test_input_letters_binary_order():
    assert A2 == [frozenset(), {"r"}, {"w"}, {"r", "w"}]
    assert [letter_index(a, ["r", "w"]) for a in A2] == [0, 1, 2, 3]


def test_empty_period_rejected():
    with pytest.raises(ValueError):
        Lasso((frozenset(),), ())


# number of distinct infinite words denoted by lassos of length exactly k,
# frozen from pairwise word_eq deduplication
WORD_COUNTS = {(1, 1): 2, (1, 2): 6, (1, 3): 18, (1, 4): 48, (2, 1): 4, (2, 2): 28, (2, 3): 172}


@pytest.mark.parametrize("ni,k", sorted(WORD_COUNTS))
def test_word_counts(ni, k):
    letters = input_letters(["a", "b"][:ni])
    assert len(enumerate_k_words(letters, k)) == WORD_COUNTS[ni, k]


@pytest.mark.parametrize("alphabet,k", [(A1, 1), (A1, 2), (A1, 3), (A1, 4), (A2, 2), (A2, 3)])
def test_canonical_enumeration_matches_pairwise(alphabet, k):
    fast = enumerate_k_words(alphabet, k)
    slow = enumerate_k_words_bruteforce(alphabet, k)
    assert [w.rep for w in fast] == slow


def test_two_k_unrolling_determines_the_word():
    for k in (1, 2, 3):
        ls = list(lassos_of_length(A1, k))
        for a, b in itertools.combinations(ls, 2):
            assert word_eq(a, b) == (unroll(a, 2 * k) == unroll(b, 2 * k))


def test_shorter_unrolling_does_not_suffice():
    # two different words of lasso length 2 that share their first two letters
    x, y = A1
    a, b = Lasso((x, y), (y,)) , Lasso((x,), (y, x))
    assert a != b
    assert unroll(a, 2) == unroll(b, 2) and not word_eq(a, b)


@given(lassos(max_len=4), st.integers(1, 5))
@settings(max_examples=200)
def test_monotonicity(lasso, k):
    # a word representable at length k is representable at every longer length
    if representable_at(lasso, k):
        assert representable_at(lasso, k + 1)


@given(lassos(max_len=4))
def test_lasso_representable_at_own_length(lasso):
    assert representable_at(lasso, len(lasso))
    assert canonical_word(lasso).unrolling == unroll(lasso, 2 * len(lasso))


def test_format():
    r, e = frozenset({"r"}), frozenset()
    assert format_lasso(Lasso((r,), (e, r)), ["r"]) == "{r} ({} {r})^w"
    assert format_lasso(Lasso((), (e,))) == "({})^w"
