import random

from hypothesis import given, settings, strategies as st

from snbclab.covering_models import ModelSpec, assemble_cover, sample
from snbclab.graph_core import OrderedGraph, bouquet, default_ordering, theta
from snbclab.pairs import (
    constrained_count_direct,
    count_ordered_copies,
    inclusion_exclusion_count,
    pair_census,
    pair_reduce,
    pairs_count,
    per_graph_pair_identity,
    relation_checks,
    x_edges_of_type,
)
from snbclab.walks_homotopy import enumerate_snbc, per_graph_walk_identity, type_census

from conftest import edge_psi


def _cover(base, n, seed):
    return assemble_cover(base, sample(base, ModelSpec(), n, seed=seed))


def test_single_edge_has_two_ordered_copies_per_orbit():
    g = theta()
    psi = edge_psi(g, 0)
    assert count_ordered_copies(psi, g) == 6


def test_pairs_count_is_a_product():
    g = _cover(bouquet(2), 3, 0)
    psi = edge_psi(g, 0)
    s = OrderedGraph(g, default_ordering(g))
    assert pairs_count(g, s, psi) == count_ordered_copies(s, g) * count_ordered_copies(psi, g)


def test_pair_reduction_without_subgraph_matches_walk_lengths():
    g = theta()
    w = [g.eindex[x] for x in ("a", "b'", "a", "c'")]
    red = pair_reduce(g, w)
    # no subgraph: X is the walk's own type, with every edge used once
    assert red.type.x2_edges == ()
    assert sum(red.lengths) == 3
    assert relation_checks(g, w).ok


def test_inclusion_exclusion_matches_direct_filter():
    rng = random.Random(4)
    g = _cover(bouquet(2), 3, 4)
    census, reps = pair_census(g, edge_psi(g, 0), 5)
    for key in sorted(reps, key=repr)[:10]:
        ptype = reps[key]
        _, paths = x_edges_of_type(ptype)
        xi = [rng.randint(1, 2) for _ in paths]
        assert inclusion_exclusion_count(ptype, census, xi) == constrained_count_direct(ptype, census, xi)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([bouquet(2), theta()]), st.integers(2, 4), st.integers(0, 1000), st.integers(1, 6))
def test_per_graph_identities(base, n, seed, k):
    g = _cover(base, n, seed)
    psi = edge_psi(g, seed % g.num_dir_edges)
    _, reps = type_census(g, k)
    for t in list(reps.values())[:3]:
        xi = (1,) * len(t.ordering.edge_order)
        lhs, rhs = per_graph_walk_identity(g, t, xi, k)
        assert lhs == rhs
        plhs, prhs, _ = per_graph_pair_identity(g, t, psi, xi, k)
        assert plhs == prhs


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.integers(2, 6))
def test_relations_hold_for_random_walks(seed, k):
    g = _cover(theta(), 3, seed)
    walks = list(enumerate_snbc(g, k))
    if not walks:
        return
    rng = random.Random(seed)
    w = rng.choice(walks)
    e = rng.randrange(g.num_dir_edges)
    assert relation_checks(g, w, (g.tail[e], g.head[e]), (e,)).ok
