from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from snbclab.polyexp import (
    Polyexponential,
    additive_convolve,
    certified_dot_convolve_numeric,
    delay,
    dot_factorizations,
    fit_polyexp,
    gen_series,
    growth_estimate,
    omega_values,
    restricted_sum_m_ge_2,
    series_product,
    shift_left,
)

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=4)
nonzero_bases = st.sampled_from([Fraction(b, d) for b in (-3, -2, -1, 1, 2, 3) for d in (1, 2)])


@st.composite
def polyexps(draw):
    terms = draw(st.dictionaries(nonzero_bases, st.lists(fractions, min_size=1, max_size=3), max_size=3))
    exc = draw(st.dictionaries(st.integers(0, 3), fractions, max_size=2))
    return Polyexponential(terms, exc)


def test_evaluation_with_polynomial_part():
    p = Polyexponential({2: [1, 3]}, {0: 5})
    assert p.eval(0) == 6
    assert p.eval(3) == 8 * 10


def test_zero_base_must_be_exceptional():
    with pytest.raises(ValueError):
        Polyexponential({0: [1]})


def test_json_round_trip():
    p = Polyexponential({Fraction(1, 2): [1, 2], 3: [Fraction(-1, 3)]}, {1: 4})
    # coefficients are stored as float pairs
    q = Polyexponential.from_json(p.to_json())
    assert all(complex(q.eval(k)) == pytest.approx(complex(p.eval(k))) for k in range(10))


def test_convolution_of_geometric_sequences():
    # sum_{j=0..k} 2^j 3^(k-j) = 3^(k+1) - 2^(k+1)
    c = additive_convolve(Polyexponential.monomial(2), Polyexponential.monomial(3))
    assert [c.eval(k) for k in range(6)] == [3 ** (k + 1) - 2 ** (k + 1) for k in range(6)]


def test_dot_factorizations_respect_bounds():
    for kv, m in dot_factorizations((1, 2), 9):
        assert kv[0] >= 1 and kv[1] >= 2 and min(m) >= 1
        assert kv[0] * m[0] + kv[1] * m[1] == 9


def test_restricted_sum_needs_repeated_edges():
    # with every m_i >= 2 and s = 1, k must be at least 2
    assert restricted_sum_m_ge_2(lambda kv: 1, lambda m: 1, (1,), 1) == 0
    assert restricted_sum_m_ge_2(lambda kv: 1, lambda m: 1, (1,), 6) == 3


def test_numeric_dot_convolution_counts_divisors():
    assert certified_dot_convolve_numeric(lambda kv: 1, lambda m: 1, (1,), 12) == 6


def test_growth_estimate_of_exponential():
    assert growth_estimate({k: 5 * 3 ** k for k in range(1, 40)}).rate == pytest.approx(3.0, abs=1e-9)
    assert growth_estimate({k: k ** 3 * 2 ** k for k in range(1, 80)}).rate == pytest.approx(2.0, rel=0.1)


def test_growth_certificate_holds_on_its_samples():
    samples = {k: 2 ** k for k in range(1, 30)}
    assert growth_estimate(samples).holds(samples)


def test_omega_takes_the_maximum_over_splits():
    omega = omega_values(lambda m: m[0] * 10 + m[1], (1, 1), 4)
    assert omega[2] == 11
    assert omega[4] == 31


def test_fit_recovers_known_terms():
    truth = Polyexponential({3: [2, 1], -1: [4]})
    fit = fit_polyexp({k: truth.eval(k) for k in range(12)}, [3, -1], max_degree=1)
    assert fit.residual_max < 1e-8
    assert all(abs(complex(fit.poly.eval(k)) - truth.eval(k)) < 1e-6 for k in range(15))


@settings(max_examples=40, deadline=None)
@given(polyexps(), polyexps())
def test_convolution_matches_series_product(p, q):
    order = 25
    assert series_product(gen_series(p, order), gen_series(q, order), order) == gen_series(additive_convolve(p, q), order)


@settings(max_examples=40, deadline=None)
@given(polyexps(), polyexps())
def test_convolution_matches_direct_sum(p, q):
    c = additive_convolve(p, q)
    for k in range(10):
        assert c.eval(k) == sum(p.eval(j) * q.eval(k - j) for j in range(k + 1))


@settings(max_examples=40, deadline=None)
@given(polyexps(), st.integers(0, 4))
def test_shift_and_delay_are_inverse(p, h):
    back = shift_left(delay(p, h), h)
    assert all(back.eval(k) == p.eval(k) for k in range(12))
    d = delay(p, h)
    assert all(d.eval(k) == 0 for k in range(h))
    assert all(d.eval(k) == p.eval(k - h) for k in range(h, 12))


@settings(max_examples=30, deadline=None)
@given(polyexps(), polyexps())
def test_addition_is_pointwise(p, q):
    s = p + q
    assert all(s.eval(k) == p.eval(k) + q.eval(k) for k in range(10))
