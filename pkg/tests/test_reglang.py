from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from snbclab.graph_core import bouquet, theta
from snbclab.reglang import (
    Automaton,
    count_wordings,
    eigenvalues_of_type,
    full_nb_btype,
    languages_equal,
    language_words,
    nb_automaton,
    occurrence_poly_sum,
    occurrence_poly_sum_brute,
    reverse_automaton,
    single_word_automaton,
    trim,
    validate_btype,
    weighted_count,
    weighted_count_brute,
    wording_summation,
    wording_summation_brute,
)
from snbclab.walks_homotopy import count_snbc


def _even_as() -> Automaton:
    return Automaton.build(["e", "o"], "e", ["e"],
                           [("e", "a", "o"), ("o", "a", "e"), ("e", "b", "e"), ("o", "b", "o")])


def test_even_number_of_as():
    a = _even_as()
    assert a.deterministic
    assert a.accepts("abba") and not a.accepts("ab")
    assert weighted_count(a, None, 4) == 8


def test_letter_weights():
    a = _even_as()
    beta = {"a": Fraction(1, 2), "b": 3}
    for k in range(7):
        assert weighted_count(a, beta, k) == weighted_count_brute(a, beta, k)


def test_json_round_trip():
    a = _even_as()
    b = Automaton.from_json(a.to_json())
    assert languages_equal(a, b)


def test_nb_automaton_counts_nonbacktracking_words():
    g = bouquet(2)
    a = nb_automaton(g)
    # 4 first letters then 3 choices each
    assert [weighted_count(a, None, k) for k in range(1, 5)] == [4, 12, 36, 108]


def test_single_word_language():
    a = single_word_automaton(("a", "b'"))
    assert language_words(a, 2) == [("a", "b'")]
    assert language_words(a, 3) == []


def test_reverse_of_nb_language_is_itself():
    g = theta()
    a = nb_automaton(g)
    assert languages_equal(trim(reverse_automaton(a, g)), trim(a))


def test_occurrence_polynomial_sum():
    a = _even_as()
    poly = {(("a", 2),): 1, (("b", 1),): 3, (): 1}
    for k in range(6):
        assert occurrence_poly_sum(a, poly, k) == occurrence_poly_sum_brute(a, poly, k)


def test_full_nb_type_is_valid_and_sums_match(figure_eight_type):
    bt = full_nb_btype(figure_eight_type, bouquet(2))
    assert validate_btype(bt).valid
    for lengths in [(1, 1), (2, 1), (2, 3)]:
        assert count_wordings(bt, lengths) > 0
        assert wording_summation(bt, 1, lengths) == wording_summation_brute(bt, 1, lengths)


def test_type_eigenvalues_of_bouquet_include_mu1(figure_eight_type):
    eigs = eigenvalues_of_type(full_nb_btype(figure_eight_type, bouquet(2)))
    assert any(abs(z - 3) < 1e-9 for z in eigs)


@st.composite
def automata(draw):
    n = draw(st.integers(1, 3))
    letters = ["x", "y", "z"][: draw(st.integers(1, 3))]
    trans = draw(st.lists(st.tuples(st.integers(0, n - 1), st.sampled_from(letters), st.integers(0, n - 1)),
                          max_size=8, unique=True))
    accepting = draw(st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True))
    return Automaton.build(list(range(n)), 0, accepting, trans)


@settings(max_examples=60, deadline=None)
@given(automata(), st.integers(0, 7))
def test_transfer_matrix_counts_runs(a, k):
    assert weighted_count(a, None, k) == weighted_count_brute(a, None, k)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([bouquet(2), theta()]), st.integers(1, 6))
def test_closed_nb_words_relate_to_trace(g, k):
    # every SNBC walk is a nonbacktracking word, never the other way round
    assert count_snbc(g, k) <= weighted_count(nb_automaton(g), None, k)
