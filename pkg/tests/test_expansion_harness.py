from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snbclab.covering_models import ModelSpec, assemble_cover, enumerate_all, sample_arrays
from snbclab.graph_core import attach_b, bouquet, cycle, theta
from snbclab.expansion_harness import (
    VerifyConfig,
    candidate_bases,
    closed_word_fixed_points,
    divisor_power_sum,
    embedding_expectation_formula,
    exact_embedding_expectation,
    expectation,
    fit_expansion_values,
    fixed_point_statistic,
    hashimoto_trace_divisor_sum,
    report_json,
    snbc_total_statistic,
    verify_theorem_walks,
)
from snbclab.walks_homotopy import count_snbc


def _labelled_cycle(base, word):
    labels = {}
    for i, letter in enumerate(word):
        labels[f"c{i}"] = letter
        labels[f"c{i}'"] = letter + "'"
    return attach_b(cycle(len(word)), base, labels)


def test_expected_fixed_points_is_one():
    for n in (2, 3, 4):
        assert expectation(bouquet(1), ModelSpec(), n, fixed_point_statistic("a")) == 1


def test_fast_exact_path_matches_full_enumeration():
    base, model = theta(), ModelSpec()
    stat = snbc_total_statistic((1, 2, 3, 4), base)
    for n in (2, 3):
        atoms = list(enumerate_all(base, model, n))
        brute = [Fraction(sum(count_snbc(assemble_cover(base, a), k) for a in atoms), len(atoms))
                 for k in (1, 2, 3, 4)]
        assert list(expectation(base, model, n, stat)) == brute


def test_closed_word_fixed_points_count_cover_walks():
    base = bouquet(2)
    perms = sample_arrays(base, ModelSpec(), 6, seed=1)
    batch = [p[None, :] for p in perms]
    got = closed_word_fixed_points(base, batch, (1, 2, 3, 4, 5))[0]
    g = assemble_cover(base, sample_from_arrays(perms))
    assert list(got) == [count_snbc(g, k) for k in (1, 2, 3, 4, 5)]


def sample_from_arrays(perms):
    from snbclab.covering_models import PermutationAssignment

    return PermutationAssignment(len(perms[0]), tuple(tuple(int(x) for x in p) for p in perms))


def test_embedding_expectation_formula_matches_enumeration():
    base = bouquet(2)
    for word in ("ab", "aab", "abab"):
        s = _labelled_cycle(base, word)
        for n in (3, 4, 5):
            assert exact_embedding_expectation(s, n) == embedding_expectation_formula(s, n)


def test_first_order_term_of_labelled_cycles():
    base = bouquet(2)
    grid = range(3, 9)
    s = _labelled_cycle(base, "aab")
    values = {(n, 0): exact_embedding_expectation(s, n) for n in grid}
    c = fit_expansion_values(values, grid, [0], r=6).coefficients[0]
    assert c[0] == pytest.approx(1) and c[1] == pytest.approx(-2)


def test_fit_recovers_exact_polynomial_in_inverse_n():
    grid = (2, 3, 4, 5)
    values = {(n, 1): Fraction(3) + Fraction(-2, n) + Fraction(5, n * n) for n in grid}
    fit = fit_expansion_values(values, grid, [1], r=3)
    assert fit.coefficients[1] == [3, -2, 5]
    assert max(abs(x) for x in fit.residuals[1]) == 0


def test_fit_rejects_short_grids():
    with pytest.raises(ValueError):
        fit_expansion_values({(2, 1): 1}, (2,), [1], r=2)


def test_batched_monte_carlo_matches_per_cover_sampling():
    base, model = theta(), ModelSpec()
    fast = snbc_total_statistic((2, 3, 4), base)
    slow = snbc_total_statistic((2, 3, 4))
    a = expectation(base, model, 7, fast, mode="mc", samples=30, seed=2)
    b = expectation(base, model, 7, slow, mode="mc", samples=30, seed=2)
    assert a == b


def test_monte_carlo_ignores_worker_count():
    base, model = bouquet(2), ModelSpec()
    stat = snbc_total_statistic((2, 3), base)
    one = expectation(base, model, 30, stat, mode="mc", samples=200, seed=5, workers=1)
    three = expectation(base, model, 30, stat, mode="mc", samples=200, seed=5, workers=3)
    assert one == three


def test_candidate_bases_include_growth_and_zero():
    bases = candidate_bases(bouquet(2))
    assert any(abs(b - 3) < 1e-9 for b in bases)
    assert any(abs(b) < 1e-12 for b in bases)


def test_divisor_sums():
    # degree 4 base: (d - 1)^k' summed over k' | 4
    assert divisor_power_sum(4, 4) == 3 + 9 + 81
    assert hashimoto_trace_divisor_sum(bouquet(2), 4) == 100


def test_walk_verification_report_is_reproducible(figure_eight_type):
    cfg = VerifyConfig(n_grid=(2, 3, 4), ks=(1, 2, 3))
    a = report_json(verify_theorem_walks(bouquet(2), ModelSpec(), figure_eight_type, (1, 1), 2, cfg))
    b = report_json(verify_theorem_walks(bouquet(2), ModelSpec(), figure_eight_type, (1, 1), 2, cfg))
    assert a == b


@settings(max_examples=10, deadline=None)
@given(st.integers(2, 20), st.integers(0, 10**6))
def test_closed_word_counts_on_random_covers(n, seed):
    base = theta()
    perms = sample_arrays(base, ModelSpec(), n, seed=seed)
    got = closed_word_fixed_points(base, [p[None, :] for p in perms], (1, 2, 3, 4, 5, 6))[0]
    g = assemble_cover(base, sample_from_arrays(perms))
    assert np.array_equal(got, [count_snbc(g, k) for k in range(1, 7)])
