import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from snbclab.graph_core import bouquet, complete_graph, cycle, theta
from snbclab.spectral import adjacency, eigenvalues, hashimoto, is_tangle, mu1, spectral_radius
from snbclab.walks_homotopy import count_snbc


def test_bouquet_growth_is_2d_minus_1():
    assert mu1(bouquet(2)) == pytest.approx(3.0, abs=1e-9)
    assert mu1(bouquet(3)) == pytest.approx(5.0, abs=1e-9)


def test_theta_is_three_regular():
    # every vertex has degree 3, so the non-backtracking growth is 2
    assert mu1(theta()) == pytest.approx(2.0, abs=1e-9)


def test_cycles_have_unit_growth():
    assert mu1(cycle(5)) == pytest.approx(1.0, abs=1e-9)


def test_complete_graph_k4():
    assert mu1(complete_graph(4)) == pytest.approx(2.0, abs=1e-9)


def test_hashimoto_rows_exclude_reversal():
    g = bouquet(2)
    h = hashimoto(g).entries
    for e in range(g.num_dir_edges):
        assert h[e, g.inv[e]] == 0
        assert h[e].sum() == 3


def test_hashimoto_csv_has_header_and_rows():
    text = hashimoto(theta()).to_csv()
    lines = text.strip().splitlines()
    assert len(lines) == 7


def test_spectral_radius_matches_numpy():
    rng = np.random.default_rng(3)
    m = rng.integers(0, 3, size=(6, 6)).astype(float)
    assert spectral_radius(m) == pytest.approx(max(abs(eigenvalues(m))), rel=1e-7)


def test_adjacency_counts_loops_twice():
    a = adjacency(bouquet(1))
    assert a[0, 0] == 2


def test_tangle_predicate():
    assert is_tangle(theta(), 1.5, 2)
    assert not is_tangle(theta(), 1.5, 1)
    with pytest.raises(ValueError):
        is_tangle(theta(), -1, 2)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([bouquet(2), theta(), cycle(3), complete_graph(4), bouquet(1, 1)]), st.integers(1, 9))
def test_trace_of_hashimoto_power_counts_snbc_walks(g, k):
    h = hashimoto(g).entries.astype(np.int64)
    assert int(np.trace(np.linalg.matrix_power(h, k))) == count_snbc(g, k)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([bouquet(2), theta(), complete_graph(4), bouquet(2, 1)]))
def test_snbc_growth_tends_to_mu1(g):
    k = 40
    rate = count_snbc(g, k) ** (1 / k)
    assert math.isclose(rate, mu1(g), rel_tol=0.1)
