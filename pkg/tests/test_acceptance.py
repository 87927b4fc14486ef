"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import edge_psi, record, walk_type
from snbclab.covering_models import (
    MODEL_NAMES,
    CapExceeded,
    ModelError,
    ModelSpec,
    assemble_cover,
    cover_projection,
    enumerate_all,
    sample,
)
from snbclab.expansion_harness import (
    VerifyConfig,
    exact_embedding_expectation,
    fit_expansion_values,
    hashimoto_trace_divisor_sum,
    mc_cycle_type_expectation,
    report_json,
    verify_theorem_pairs,
    verify_theorem_walks,
)
from snbclab.graph_core import (
    Ordering,
    OrderedGraph,
    attach_b,
    bouquet,
    build_graph,
    cycle,
    empty_graph,
    euler_char,
    is_connected,
    is_covering,
    is_pruned,
    order_of,
    theta,
)
from snbclab.pairs import (
    constrained_count_direct,
    inclusion_exclusion_count,
    pair_census,
    per_graph_pair_identity,
    x_edges_of_type,
)
from snbclab.polyexp import (
    Polyexponential,
    additive_convolve,
    certified_dot_convolve,
    fit_polyexp,
    gen_series,
    growth_estimate,
    omega_values,
    series_product,
)
from snbclab.reglang import (
    Automaton,
    BType,
    count_wordings,
    full_nb_btype,
    nb_automaton,
    reverse_automaton,
    transfer_matrix,
    validate_btype,
    weighted_count,
    weighted_count_brute,
    wording_summation,
    wording_summation_brute,
)
from snbclab.spectral import mu1
from snbclab.walks_homotopy import (
    enumerate_snbc,
    legal_count,
    legal_length_counts,
    per_graph_walk_identity,
    reduce_ordered,
    type_census,
    visited_subgraph_ordered,
    visits_direct_counts,
    visits_formula,
    vlg,
    walk_shapes,
)


def verdict(number: int, name: str, ok: bool, detail: str) -> None:
    record(f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {name}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------- 1


def test_c01_length_multiplicity_identity():
    t0 = time.perf_counter()
    shapes = walk_shapes(8)
    k_max = 12
    mismatches = 0
    for s in shapes:
        red = reduce_ordered(s)
        if visits_direct_counts(s, k_max) != legal_length_counts(red.type, red.lengths, k_max):
            mismatches += 1
    # term-by-term sum over multiplicity vectors on a fixed random subset
    rng = random.Random(1)
    literal = rng.sample(shapes, 150)
    for s in literal:
        direct = visits_direct_counts(s, k_max)
        if any(direct[k] != visits_formula(s, k) for k in range(1, k_max + 1)):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    verdict(1, "length-multiplicity identity", mismatches == 0 and elapsed < 60,
            f"{len(shapes)} ordered graphs, k <= {k_max}, {mismatches} mismatches, "
            f"{len(literal)} re-checked term by term, {elapsed:.1f}s (limit 60s)")


# ---------------------------------------------------------------- 2


def test_c02_per_graph_identities():
    rng = random.Random(2)
    checks = failures = 0
    t0 = time.perf_counter()
    for i in range(50):
        base = bouquet(2) if i % 2 == 0 else theta()
        n = rng.randint(2, 5)
        g = assemble_cover(base, sample(base, ModelSpec(), n, seed=2, index=i))
        psi = edge_psi(g, rng.randrange(g.num_dir_edges))
        for k in range(1, 9):
            _, reps = type_census(g, k)
            types = sorted(reps.values(), key=lambda t: repr(t.key))
            for t in rng.sample(types, min(2, len(types))):
                n_edges = len(t.ordering.edge_order)
                for xi in [(1,) * n_edges, tuple(rng.randint(1, 2) for _ in range(n_edges))]:
                    lhs, rhs = per_graph_walk_identity(g, t, xi, k)
                    plhs, prhs, _ = per_graph_pair_identity(g, t, psi, xi, k)
                    checks += 2
                    failures += (lhs != rhs) + (plhs != prhs)
    elapsed = time.perf_counter() - t0
    verdict(2, "per-graph walk and pair identities", failures == 0,
            f"50 covers, k <= 8, {checks} identities, {failures} failures, {elapsed:.0f}s")


# ---------------------------------------------------------------- 3


def _random_automaton(rng: random.Random) -> tuple[Automaton, dict]:
    n_states = rng.randint(1, 4)
    letters = ["a", "b", "c"][: rng.randint(1, 3)]
    trans = [(s, x, rng.randrange(n_states), rng.choice([1, 2, 3, -1]))
             for s in range(n_states) for x in letters if rng.random() < 0.5]
    accepting = [s for s in range(n_states) if rng.random() < 0.5] or [0]
    beta = {x: rng.choice([1, 2, -1]) for x in letters}
    return Automaton.build(range(n_states), 0, accepting, trans), beta


def test_c03_regular_language_counts():
    rng = random.Random(3)
    t0 = time.perf_counter()
    mismatches = 0
    worst = 0.0
    for _ in range(100):
        a, beta = _random_automaton(rng)
        for k in range(13):
            mismatches += weighted_count(a, beta, k) != weighted_count_brute(a, beta, k)
        eig = list(np.linalg.eigvals(transfer_matrix(a, beta).astype(float)))
        # skip the nilpotent transient, which lasts at most #states steps
        start = len(a.states)
        samples = {k: weighted_count(a, beta, k) for k in range(start, start + 25)}
        fit = fit_polyexp(samples, eig, len(a.states) - 1)
        worst = max(worst, fit.residual_rel)
    elapsed = time.perf_counter() - t0
    verdict(3, "regular-language lemma", mismatches == 0 and worst < 1e-6 and elapsed < 60,
            f"100 automata, k <= 12, {mismatches} mismatches, worst relative fit residual {worst:.2e}, "
            f"{elapsed:.1f}s")


# ---------------------------------------------------------------- 4


def _first_letter_language(base, letters) -> Automaton:
    """Non-backtracking words of ``base`` whose first letter is in ``letters``."""
    nb = nb_automaton(base)
    trans = [t for t in nb.transitions if t[0] != "^" or t[1] in letters]
    return Automaton.build(nb.states, nb.initial, nb.accepting, trans)


def _restricted_btype(t, base, letters) -> BType:
    g = t.graph
    langs = {}
    for e in t.ordering.edge_order:
        lang = _first_letter_language(base, letters)
        langs[e] = lang
        langs[g.inv[e]] = reverse_automaton(lang, base)
    return BType.of(t, base, langs)


def test_c04_wording_summation(loop_type, figure_eight_type, theta_type):
    b2 = bouquet(2)
    cases = []
    for t in (loop_type, figure_eight_type, theta_type):
        cases.append(full_nb_btype(t, b2))
        cases.append(_restricted_btype(t, b2, {"a", "b'"}))
    th = theta()
    cases.append(full_nb_btype(theta_type, th))
    t0 = time.perf_counter()
    instances = mismatches = 0
    for bt in cases:
        assert validate_btype(bt).valid
        g = bt.type_graph
        edges = [g.edge_ids[e] for e in bt.ordering.ordering.edge_order]
        base_edges = [bt.base.edge_ids[bt.base.orbits[0][0]], bt.base.edge_ids[bt.base.orbits[-1][0]]]
        polys = [1,
                 {(((base_edges[0], edges[0]), 1),): 1},
                 {(((base_edges[0], edges[0]), 2), ((base_edges[-1], edges[-1]), 1)): 3, (): -1}]
        for lengths in itertools.product(range(1, 5), repeat=len(edges)):
            if count_wordings(bt, lengths) > 10**5:
                continue
            for poly in polys:
                instances += 1
                mismatches += wording_summation(bt, poly, lengths) != wording_summation_brute(bt, poly, lengths)
    elapsed = time.perf_counter() - t0
    verdict(4, "wording summation", mismatches == 0 and elapsed < 60,
            f"{instances} instances with <= 1e5 wordings, {mismatches} mismatches, {elapsed:.1f}s")


# ---------------------------------------------------------------- 5


def _random_polyexp(rng: random.Random) -> Polyexponential:
    terms = {}
    for _ in range(rng.randint(1, 3)):
        base = Fraction(rng.choice([-4, -3, -2, -1, 1, 2, 3, 4]), rng.choice([1, 2, 3]))
        terms[base] = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.randint(1, 3))]
    exceptional = {rng.randint(0, 3): Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(0, 2))}
    return Polyexponential(terms, exceptional)


def test_c05_generating_function_convolution():
    rng = random.Random(5)
    order = 60
    mismatches = 0
    for _ in range(25):
        p, q = _random_polyexp(rng), _random_polyexp(rng)
        lhs = series_product(gen_series(p, order), gen_series(q, order), order)
        rhs = gen_series(additive_convolve(p, q), order)
        mismatches += lhs != rhs
    verdict(5, "generating-function convolution", mismatches == 0,
            f"25 random rational pairs to order {order}, {mismatches} mismatches")


# ---------------------------------------------------------------- 6


def test_c06_certified_dot_convolution():
    f = Polyexponential.monomial(4, 0, 1)
    cc = certified_dot_convolve(f, lambda m: 1, (1,), 60)
    bases = cc.principal.bases
    growth = growth_estimate({k: cc.residual(k) for k in range(1, 61)}).rate
    ok = bases == [(4,)] and growth <= 2.0 + 0.1
    verdict(6, "certified dot convolution", ok,
            f"principal bases {bases}, residual growth {growth:.4f} (bound 2 + 0.1), certified rate {cc.rate}")


# ---------------------------------------------------------------- 7


def test_c07_legal_walk_growth(loop_type, figure_eight_type, theta_type):
    rows = []
    ok = True
    for name, t in (("whole-loop", loop_type), ("figure-eight", figure_eight_type), ("theta", theta_type)):
        n_edges = len(t.ordering.edge_order)
        for xi in [(1,) * n_edges, (2,) * n_edges, tuple(range(1, n_edges + 1))]:
            omega = omega_values(lambda m, t=t: legal_count(t, m), xi, 40)
            rate = growth_estimate(omega).rate
            bound = mu1(vlg(t, xi))
            ok &= rate <= bound + 0.1
            rows.append(f"{name}{list(xi)} {rate:.3f}<={bound:.3f}")
    verdict(7, "legal-walk growth", ok, "; ".join(rows))


# ---------------------------------------------------------------- 8


def _labelled_cycle(base, word):
    g = cycle(len(word))
    labels = {}
    for i, letter in enumerate(word):
        labels[f"c{i}"] = letter
        labels[f"c{i}'"] = letter + "'"
    return attach_b(g, base, labels)


CYCLE_WORDS = ("aab", "aabb", "aaabb")


@pytest.fixture(scope="module")
def cycle_fits():
    base = bouquet(2)
    grid = range(3, 9)
    fits = {}
    for word in CYCLE_WORDS:
        s = _labelled_cycle(base, word)
        values = {(n, 0): exact_embedding_expectation(s, n) for n in grid}
        fits[word] = fit_expansion_values(values, grid, [0], r=6).coefficients[0]
    return fits


def test_c08_first_order_coefficient_anchor(cycle_fits):
    rows = []
    ok = True
    for word in CYCLE_WORDS:
        c0, c1 = cycle_fits[word][:2]
        target = word.count("a") * word.count("b")
        ok &= abs(c0 - 1) <= 0.02 and abs(c1 - target) <= 0.05 * abs(target)
        rows.append(f"{word}: c0={c0:.4f} c1={c1:.4f} target {target}")
    verdict(8, "first-order coefficient anchor", ok, "; ".join(rows))


def test_first_order_coefficient_is_minus_product(cycle_fits):
    # the exact expectation is (n)_L / ((n)_a (n)_b), whose 1/n term is -a*b
    rows = []
    ok = True
    for word in CYCLE_WORDS:
        c0, c1 = cycle_fits[word][:2]
        target = -word.count("a") * word.count("b")
        ok &= abs(c0 - 1) <= 0.02 and abs(c1 - target) <= 0.05 * abs(target)
        rows.append(f"{word}: c1={c1:.4f} vs {target}")
    record(f"companion    {'PASS' if ok else 'FAIL'}  first-order coefficient vs -a*b: " + "; ".join(rows))
    assert ok


# ---------------------------------------------------------------- 9


@pytest.fixture(scope="module")
def simple_loop_mc():
    return mc_cycle_type_expectation(bouquet(2), ModelSpec(), 2000, 4, samples=20_000, seed=9)


def test_c09_simple_loop_divisor_sum(simple_loop_mc):
    mean, err = simple_loop_mc.mean, simple_loop_mc.stderr
    tol = max(3 * err, 5)
    target = sum(3**d for d in (1, 2, 4))
    verdict(9, "simple-loop divisor sum", abs(mean - target) <= tol,
            f"MC mean {mean:.3f} +- {err:.3f} (2e4 samples, n=2000), target {target} +- {tol:.2f}")


def test_simple_loop_mean_matches_hashimoto_trace_sum(simple_loop_mc):
    target = hashimoto_trace_divisor_sum(bouquet(2), 4)
    tol = max(3 * simple_loop_mc.stderr, 5)
    ok = abs(simple_loop_mc.mean - target) <= tol
    record(f"companion    {'PASS' if ok else 'FAIL'}  simple-loop mean vs sum of tr H_B^d over d | 4: "
           f"{simple_loop_mc.mean:.3f} vs {target} +- {tol:.2f}")
    assert target == 100
    assert ok


# ---------------------------------------------------------------- 10


def test_c10_vlg_monotonicity():
    rng = random.Random(10)
    pool = []
    for s in walk_shapes(6):
        t = reduce_ordered(s).type
        if order_of(t.graph) >= 1:
            pool.append(t)
    worst = float("inf")
    for _ in range(200):
        t = rng.choice(pool)
        g = t.graph
        lo, hi = [], []
        for e in t.ordering.edge_order:
            if g.is_half_loop(e):
                lo.append(1)
                hi.append(1)
            else:
                a = rng.randint(1, 4)
                lo.append(a)
                hi.append(a + rng.randint(0, 3))
        worst = min(worst, mu1(vlg(t, lo)) - mu1(vlg(t, hi)))
    verdict(10, "VLG monotonicity", worst >= -1e-9,
            f"200 random (T, k <= k') pairs from {len(pool)} types, min mu1 gap {worst:.3e}")


# ---------------------------------------------------------------- 11


def test_c11_inclusion_exclusion():
    rng = random.Random(11)
    done = mismatches = attempts = 0
    while done < 100:
        attempts += 1
        base = bouquet(2) if attempts % 2 else theta()
        g = assemble_cover(base, sample(base, ModelSpec(), 3, seed=11, index=attempts))
        psi = edge_psi(g, rng.randrange(g.num_dir_edges))
        census, reps = pair_census(g, psi, rng.randint(3, 6))
        if not reps:
            continue
        ptype = reps[rng.choice(sorted(reps, key=repr))]
        _, paths = x_edges_of_type(ptype)
        xi = [rng.randint(1, 3) for _ in paths]
        try:
            ie = inclusion_exclusion_count(ptype, census, xi)
        except ValueError:
            continue
        mismatches += ie != constrained_count_direct(ptype, census, xi)
        done += 1
    verdict(11, "inclusion-exclusion over Xi", mismatches == 0,
            f"100 pair-type instances ({attempts} drawn), {mismatches} mismatches")


# ---------------------------------------------------------------- 12


def test_c12_empty_psi_reduction(loop_type, figure_eight_type, theta_type):
    empty = OrderedGraph(empty_graph(), Ordering((), ()))
    configs = [
        (bouquet(2), loop_type, (1,), 2, (2, 3, 4)),
        (bouquet(2), loop_type, (2,), 2, (2, 3, 4)),
        (bouquet(2), figure_eight_type, (1, 1), 2, (2, 3)),
        (bouquet(2), figure_eight_type, (1, 2), 1, (2, 3)),
        (bouquet(2), theta_type, (1, 1, 1), 2, (2, 3)),
        (theta(), loop_type, (1,), 2, (2, 3, 4)),
        (theta(), loop_type, (3,), 3, (2, 3, 4)),
        (theta(), theta_type, (1, 1, 1), 2, (2, 3, 4)),
        (theta(), figure_eight_type, (1, 1), 2, (2, 3)),
        (bouquet(1), loop_type, (1,), 3, (2, 3, 4, 5)),
    ]
    identical = 0
    for base, t, xi, r, grid in configs:
        cfg = VerifyConfig(n_grid=grid, ks=(1, 2, 3, 4))
        walks = report_json(verify_theorem_walks(base, ModelSpec(), t, xi, r, cfg))
        pairs = report_json(verify_theorem_pairs(base, ModelSpec(), t, xi, empty, r, cfg))
        identical += walks == pairs
    verdict(12, "empty-psi reduction", identical == len(configs),
            f"{identical}/{len(configs)} configurations byte-identical")


# ---------------------------------------------------------------- 13


def _small_graphs(max_vertices: int = 3, max_edges: int = 4):
    """Every graph on up to ``max_vertices`` vertices with up to ``max_edges`` edges, as multisets of slots."""
    for nv in range(1, max_vertices + 1):
        slots = [("plain", u, v) for u in range(nv) for v in range(u + 1, nv)]
        slots += [("whole", v, v) for v in range(nv)] + [("half", v, v) for v in range(nv)]
        for m in range(max_edges + 1):
            for combo in itertools.combinations_with_replacement(slots, m):
                recs = []
                for j, (kind, u, v) in enumerate(combo):
                    if kind == "half":
                        recs.append((f"e{j}", u, u, f"e{j}"))
                    else:
                        recs.append((f"e{j}", u, v, f"e{j}'"))
                        recs.append((f"e{j}'", v, u, f"e{j}"))
                yield build_graph(range(nv), recs)


def test_c13_structural_invariants():
    counts = dict.fromkeys(["order", "spectral", "pruned", "inverse", "covering"], 0)
    failures = []
    for g in _small_graphs():
        halves = sum(g.is_half_loop(e) for e in range(g.num_dir_edges))
        ord_g, chi = order_of(g), euler_char(g)
        counts["order"] += 1
        if ord_g < -chi or (ord_g == -chi) != (halves == 0):
            failures.append(("order", g))
        if g.num_dir_edges and is_connected(g) and is_pruned(g):
            counts["spectral"] += 1
            if (mu1(g) > 1 + 1e-9) != (chi < 0):
                failures.append(("spectral", g))
        for k in range(1, 6):
            for w in enumerate_snbc(g, k):
                counts["pruned"] += 1
                if not is_pruned(visited_subgraph_ordered(g, w).graph):
                    failures.append(("pruned", g, w))
    for s in walk_shapes(7):
        counts["pruned"] += 1
        if not is_pruned(s.graph):
            failures.append(("pruned-shape", s))
    bases = [bouquet(2), theta(), bouquet(1, 1), bouquet(0, 2), cycle(2)]
    for base in bases:
        for name in MODEL_NAMES:
            for n in range(1, 5):
                try:
                    atoms = list(enumerate_all(base, ModelSpec(name), n, cap=20_000))
                except (ModelError, CapExceeded):
                    continue
                for a in atoms:
                    counts["inverse"] += 1
                    for e in range(base.num_dir_edges):
                        p, q = a.sigma[e], a.sigma[base.inv[e]]
                        if any(q[p[i]] != i for i in range(n)):
                            failures.append(("inverse", base, name, a))
                    counts["covering"] += 1
                    if not is_covering(cover_projection(assemble_cover(base, a))):
                        failures.append(("covering", base, name, a))
    detail = ", ".join(f"{k} {v}" for k, v in counts.items()) + f"; {len(failures)} failures"
    verdict(13, "structural invariants", not failures, detail)
