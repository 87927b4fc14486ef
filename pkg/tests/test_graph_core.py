from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from snbclab.graph_core import (
    GraphError,
    OrderedGraph,
    bouquet,
    build_graph,
    canonical_key,
    connected_components,
    cycle,
    default_ordering,
    disjoint_union,
    euler_char,
    graph_to_json,
    is_covering,
    identity_morphism,
    is_pruned,
    iter_embeddings,
    load_ordered,
    order_of,
    ordered_iso,
    projection,
    prune,
    theta,
    validate_graph,
)


def test_small_graph_orders():
    assert order_of(cycle(4)) == 0
    assert order_of(bouquet(2)) == 1
    assert order_of(theta()) == 1
    assert order_of(bouquet(1, 1)) == 1


def test_euler_characteristic_counts_half_edges():
    assert euler_char(theta()) == -1
    assert euler_char(bouquet(0, 1)) == Fraction(1, 2)


def test_inverse_must_be_an_involution():
    with pytest.raises(GraphError):
        build_graph(["u", "v"], [("a", "u", "v", "b"), ("b", "v", "u", "a"), ("c", "u", "v", "b")])


def test_json_round_trip_keeps_ordering():
    g = theta()
    raw = graph_to_json(g, default_ordering(g))
    og = load_ordered(raw)
    assert graph_to_json(og.graph, og.ordering) == raw


def test_validate_rejects_dangling_head():
    raw = {"vertices": ["u"], "dir_edges": [{"id": "a", "tail": "u", "head": "x", "inv": "a"}]}
    with pytest.raises(GraphError):
        validate_graph(raw)


def test_prune_strips_leaves():
    g = build_graph(["u", "v"], [("a", "u", "u", "a'"), ("a'", "u", "u", "a"),
                                 ("b", "u", "v", "b'"), ("b'", "v", "u", "b")])
    assert not is_pruned(g)
    p = prune(g)
    assert is_pruned(p) and p.num_vertices == 1


def test_disjoint_union_components():
    g = disjoint_union(cycle(3), bouquet(1))
    assert len(connected_components(g)) == 2


def test_identity_is_a_cover_and_projection_needs_structure():
    g = bouquet(2)
    assert is_covering(identity_morphism(g))
    with pytest.raises(GraphError):
        projection(g)


def test_embeddings_of_cycle_into_itself():
    c = cycle(5)
    # rotations times reflections
    assert sum(1 for _ in iter_embeddings(c, c)) == 10


def test_ordered_iso_detects_relabelling():
    g = theta()
    a = OrderedGraph(g, default_ordering(g))
    assert ordered_iso(a, a) is not None
    assert canonical_key(a) == canonical_key(a)


@given(st.integers(0, 4), st.integers(0, 3))
def test_bouquet_order_and_half_loops(whole, half):
    if whole == 0 and half == 0:
        return
    g = bouquet(whole, half)
    assert g.num_dir_edges == 2 * whole + half
    assert order_of(g) == whole + half - 1
    # a lone half-loop leaves its vertex with degree one
    assert is_pruned(g) == (2 * whole + half >= 2)


@settings(max_examples=30)
@given(st.integers(1, 12))
def test_cycles_have_order_zero(k):
    assert order_of(cycle(k)) == 0
    assert euler_char(cycle(k)) == 0
