"""Expectations over cover models, 1/n expansion fits and verification reports."""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from .covering_models import (
    CapExceeded,
    DEFAULT_ENUM_CAP,
    ModelSpec,
    PermutationAssignment,
    assemble_cover,
    atom_count,
    enumerate_all,
    sample,
    sample_arrays,
)
from .graph_core import Graph, OrderedGraph, count_embeddings, is_connected, is_etale, order_of, projection
from .pairs import certified_pairs_direct, pair_census, x_edges_of_type
from .polyexp import fit_polyexp
from .spectral import eigenvalues, hashimoto, mu1
from .walks_homotopy import (
    _meets,
    count_snbc,
    count_snbc_min_order,
    enumerate_snbc,
    type_census,
    vlg,
)

DEFAULT_WINDOW_C = 4.0


# ---------------------------------------------------------------- statistics


@dataclass(frozen=True)
class Statistic:
    """``fn`` maps a cover (a B-graph) to an integer or a tuple of integers.

    ``batch``, when given, evaluates the same statistic on a batch of covers
    described by per-edge permutation arrays of shape ``(batch, n)`` and
    returns an integer array of shape ``(batch,)`` or ``(batch, width)``.
    """

    name: str
    fn: Callable[[Graph], int | tuple[int, ...]]
    batch: Callable[[Sequence[np.ndarray]], np.ndarray] | None = None

    def __call__(self, g: Graph):
        return self.fn(g)


def _per_k(ks: Sequence[int], one: Callable[[Graph, int], int]) -> Callable[[Graph], tuple[int, ...]]:
    return lambda g: tuple(one(g, k) for k in ks)


def snbc_total_statistic(ks: Sequence[int], base: Graph | None = None) -> Statistic:
    batch = (lambda perms: closed_word_fixed_points(base, perms, ks)) if base is not None else None
    return Statistic("snbc", _per_k(ks, count_snbc), batch)


def snbc_type_statistic(t: OrderedGraph, ks: Sequence[int], xi: Sequence[int] | None = None,
                        exact: Sequence[int] | None = None) -> Statistic:
    tk = t.key

    def one(g: Graph, k: int) -> int:
        census, _ = type_census(g, k)
        return sum(c for (key, lengths), c in census.items() if key == tk and _meets(lengths, exact, xi))

    return Statistic("snbc_by_type", _per_k(ks, one))


def embedding_statistic(s: OrderedGraph | Graph) -> Statistic:
    g = s.graph if isinstance(s, OrderedGraph) else s
    batch = (lambda perms: count_embeddings_batch(g, perms)) if g.b is not None and is_connected(g) else None
    return Statistic("embeddings", lambda h: count_embeddings(s, h), batch)


def pairs_statistic(t: OrderedGraph, psi: OrderedGraph, xi: Sequence[int], ks: Sequence[int]) -> Statistic:
    return Statistic("pairs", _per_k(ks, lambda g, k: certified_pairs_direct(g, t, psi, xi, k)))


def min_order_statistic(ks: Sequence[int], r: int) -> Statistic:
    return Statistic("snbc_min_order", _per_k(ks, lambda g, k: count_snbc_min_order(g, k, r)))


def fixed_point_statistic(edge_id) -> Statistic:
    """Fixed points of the permutation on one base edge."""

    def fn(g: Graph) -> int:
        base = g.b.base
        e = base.eindex[edge_id]
        return sum(1 for f in range(g.num_dir_edges)
                   if g.b.emap[f] == e and g.tail[f] == g.head[f])

    return Statistic("fixed_points", fn)


# ---------------------------------------------------------------- expectations


@dataclass(frozen=True)
class MCResult:
    mean: float | tuple[float, ...]
    stderr: float | tuple[float, ...]
    samples: int


def _as_tuple(v) -> tuple:
    return v if isinstance(v, tuple) else (v,)


def _unwrap(vals: list, scalar: bool):
    return vals[0] if scalar else tuple(vals)


def _chunks(total: int, parts: int) -> list[range]:
    parts = max(1, min(parts, total)) if total else 1
    step = -(-total // parts) if total else 0
    return [range(i, min(total, i + step)) for i in range(0, total, step)] if total else []


def expectation(B: Graph, model: ModelSpec, n: int, stat: Statistic, mode: str = "exact",
                samples: int = 1000, seed: int = 0, workers: int = 1, cap: int = DEFAULT_ENUM_CAP):
    """Exact expectation (a ``Fraction``) or a Monte Carlo ``MCResult``.

    Per-atom values are integers and are accumulated exactly in index order,
    so results do not depend on ``workers``.
    """
    if mode == "exact":
        if _class_reducible(B, model):
            if stat.batch is not None:
                return _unwrap(exact_batch_expectation(B, n, stat.batch, cap=cap), stat_is_scalar(stat, B, n))
            return _class_reduced_expectation(B, n, stat, cap)
        total = atom_count(B, model, n)
        if total > cap:
            raise CapExceeded(f"{total} assignments exceed the enumeration cap {cap}")
        acc: list[int] | None = None
        scalar = True
        for a in enumerate_all(B, model, n, cap):
            v = stat(assemble_cover(B, a))
            scalar = not isinstance(v, tuple)
            vt = _as_tuple(v)
            acc = list(vt) if acc is None else [x + y for x, y in zip(acc, vt)]
        vals = [Fraction(x, total) for x in (acc or [0])]
        return _unwrap(vals, scalar)
    if mode != "mc":
        raise ValueError("mode must be 'exact' or 'mc'")
    if samples < 2:
        raise ValueError("need at least two samples")

    def per_cover(idx: range) -> list:
        return [stat(assemble_cover(B, sample(B, model, n, seed, i))) for i in idx]

    # same draws as sample(), evaluated on permutation arrays without building covers
    def batched(idx: range) -> list:
        scalar = stat_is_scalar(stat, B, n)
        out = []
        for i in idx:
            row = stat.batch([p[None, :] for p in sample_arrays(B, model, n, seed, i)])[0]
            out.append(int(row) if scalar else tuple(int(x) for x in row))
        return out

    has_half = any(B.is_half_loop(e) for e in range(B.num_dir_edges))
    run = batched if stat.batch is not None and not has_half else per_cover
    raw = _run_chunks(run, samples, workers)
    return _mc_summary([_as_tuple(v) for v in raw], samples, not isinstance(raw[0], tuple))


def _run_chunks(run: Callable[[range], list], samples: int, workers: int) -> list:
    chunks = _chunks(samples, workers)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, chunks))
    else:
        parts = [run(c) for c in chunks]
    return [r for p in parts for r in p]


def _mc_summary(rows: list[tuple], samples: int, scalar: bool) -> MCResult:
    width = len(rows[0])
    means, errs = [], []
    for j in range(width):
        s1 = sum(r[j] for r in rows)
        s2 = sum(r[j] * r[j] for r in rows)
        mean = Fraction(s1, samples)
        var = (Fraction(s2, samples) - mean * mean) * Fraction(samples, samples - 1)
        means.append(float(mean))
        errs.append(math.sqrt(max(0.0, float(var)) / samples))
    return MCResult(_unwrap(means, scalar), _unwrap(errs, scalar), samples)


# ---------------------------------------------------------------- vectorized embedding counts


def _bfs_plan(s: Graph) -> tuple[int, list[tuple[int, int, bool]]]:
    """Root and edge steps ``(edge, new-vertex?, ...)`` for a connected graph."""
    root = 0
    seen = {root}
    steps: list[tuple[int, int, bool]] = []
    done_orbits: set[int] = set()
    queue = [root]
    while queue:
        v = queue.pop(0)
        for e in s.out_edges[v]:
            orb = min(e, s.inv[e])
            if orb in done_orbits:
                continue
            done_orbits.add(orb)
            h = s.head[e]
            steps.append((e, h, h not in seen))
            if h not in seen:
                seen.add(h)
                queue.append(h)
    if len(seen) != s.num_vertices:
        raise ValueError("vectorized embedding counts need a connected graph")
    return root, steps


def count_embeddings_batch(s: Graph, perms: Sequence[np.ndarray]) -> np.ndarray:
    """Embedding counts of the B-graph ``s`` into a batch of covers.

    ``perms[e]`` has shape ``(batch, n)`` and holds ``sigma(e)`` for every base
    directed edge.  An embedding is fixed by the image of the root, so all
    root images are tried at once.
    """
    base = s.b.base
    if not is_etale(projection(s)):
        return np.zeros(perms[0].shape[0], dtype=np.int64)
    batch, n = perms[0].shape
    if s.num_vertices == 0:
        return np.ones(batch, dtype=np.int64)
    root, steps = _bfs_plan(s)
    img: list[np.ndarray | None] = [None] * s.num_vertices
    img[root] = np.broadcast_to(np.arange(n), (batch, n))
    ok = np.ones((batch, n), dtype=bool)
    for e, h, new in steps:
        dest = np.take_along_axis(perms[s.b.emap[e]], img[s.tail[e]], axis=1)
        if new:
            img[h] = dest
        else:
            ok &= dest == img[h]
    for u in range(s.num_vertices):
        for v in range(u + 1, s.num_vertices):
            if s.b.vmap[u] == s.b.vmap[v]:
                ok &= img[u] != img[v]
    return ok.sum(axis=1)


def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for p in range(min(n, largest), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


def _class_size(parts: Sequence[int]) -> int:
    n = sum(parts)
    denom = 1
    for p in set(parts):
        c = parts.count(p)
        denom *= p**c * math.factorial(c)
    return math.factorial(n) // denom


def _class_rep(parts: Sequence[int]) -> np.ndarray:
    p = np.arange(sum(parts))
    start = 0
    for size in parts:
        block = np.arange(start, start + size)
        p[block] = np.roll(block, -1)
        start += size
    return p


def _all_perms(n: int) -> np.ndarray:
    from itertools import permutations

    return np.array(list(permutations(range(n))), dtype=np.int64).reshape(-1, n)


def _class_reducible(B: Graph, model: ModelSpec) -> bool:
    return (model.name == "permutation" and model.parity == "any" and B.num_dir_edges > 0
            and not any(B.is_half_loop(e) for e in range(B.num_dir_edges)))


def _class_reduced_batches(base: Graph, n: int, batch: int,
                           cap: int = DEFAULT_ENUM_CAP) -> Iterator[tuple[int, list[np.ndarray]]]:
    """Weighted batches of permutation assignments covering the permutation model.

    Relabelling the fibres simultaneously is a symmetry of the model and of every
    isomorphism-invariant statistic, so one edge's permutation only needs a
    representative per conjugacy class, weighted by the class size; every other
    permutation is enumerated in full.
    """
    if not _class_reducible(base, ModelSpec("permutation")):
        raise ValueError("class reduction needs the permutation model on a base without half-loops")
    reps = [orb[0] for orb in base.orbits]
    pinned, free = reps[0], reps[1:]
    parts = list(_partitions(n))
    work = len(parts) * math.factorial(n) ** len(free)
    if work > cap:
        raise CapExceeded(f"{work} class-reduced assignments exceed the enumeration cap {cap}")
    allp = _all_perms(n)
    inv_all = np.argsort(allp, axis=1)
    grids = np.meshgrid(*[np.arange(len(allp))] * len(free), indexing="ij") if free else []
    flat = [g.ravel() for g in grids]
    count = len(flat[0]) if flat else 1
    for part in parts:
        rep = _class_rep(part)
        inv_rep = np.argsort(rep)
        for lo in range(0, count, batch):
            hi = min(count, lo + batch)
            size = hi - lo
            perms: list[np.ndarray] = [np.empty(0)] * base.num_dir_edges
            perms[pinned] = np.broadcast_to(rep, (size, n))
            perms[base.inv[pinned]] = np.broadcast_to(inv_rep, (size, n))
            for e, idx in zip(free, flat):
                sel = idx[lo:hi]
                perms[e] = allp[sel]
                perms[base.inv[e]] = inv_all[sel]
            yield _class_size(part), perms


def exact_batch_expectation(base: Graph, n: int, fn: Callable[[Sequence[np.ndarray]], np.ndarray],
                            batch: int = 50_000, cap: int = DEFAULT_ENUM_CAP) -> list[Fraction]:
    """Exact expectation of a batched statistic in the permutation model, one entry per column."""
    total: np.ndarray | None = None
    for weight, perms in _class_reduced_batches(base, n, batch, cap):
        vals = np.asarray(fn(perms), dtype=np.int64)
        col = vals.reshape(vals.shape[0], -1).sum(axis=0).astype(object) * weight
        total = col if total is None else total + col
    atoms = math.factorial(n) ** len(base.orbits)
    return [Fraction(int(x), atoms) for x in total]  # type: ignore[union-attr]


def _class_reduced_expectation(B: Graph, n: int, stat: Statistic, cap: int):
    acc: list[int] | None = None
    scalar = True
    for weight, perms in _class_reduced_batches(B, n, 4096, cap):
        rows = [np.asarray(p) for p in perms]
        for i in range(rows[0].shape[0]):
            a = PermutationAssignment(n, tuple(tuple(int(x) for x in p[i]) for p in rows))
            v = stat(assemble_cover(B, a))
            scalar = not isinstance(v, tuple)
            vt = [weight * x for x in _as_tuple(v)]
            acc = vt if acc is None else [x + y for x, y in zip(acc, vt)]
    atoms = math.factorial(n) ** len(B.orbits)
    return _unwrap([Fraction(x, atoms) for x in (acc or [0])], scalar)


def stat_is_scalar(stat: Statistic, base: Graph, n: int) -> bool:
    probe = [np.broadcast_to(np.arange(n), (1, n))] * base.num_dir_edges
    return np.asarray(stat.batch(probe)).ndim == 1  # type: ignore[misc]


def exact_embedding_expectation(s: Graph, n: int, batch: int = 50_000) -> Fraction:
    """Exact ``E[count_embeddings(s, G)]`` in the permutation model, by class-reduced enumeration."""
    return exact_batch_expectation(s.b.base, n, lambda perms: count_embeddings_batch(s, perms), batch)[0]


def closed_word_fixed_points(base: Graph, perms: Sequence[np.ndarray], ks: Sequence[int]) -> np.ndarray:
    """``tr H^k`` of each cover in the batch, for every ``k`` in ``ks``.

    A closed non-backtracking base word of length ``k`` that is also
    non-backtracking across its ends contributes the fixed points of its
    lifted permutation.  The words are walked as a prefix tree.
    """
    batch, n = perms[0].shape
    col = {k: i for i, k in enumerate(ks)}
    out = np.zeros((batch, len(ks)), dtype=np.int64)
    ident = np.broadcast_to(np.arange(n), (batch, n))
    kmax = max(ks)

    def rec(first: int, last: int, depth: int, img: np.ndarray) -> None:
        if depth in col and base.head[last] == base.tail[first] and first != base.inv[last]:
            out[:, col[depth]] += (img == ident).sum(axis=1)
        if depth == kmax:
            return
        for f in base.out_edges[base.head[last]]:
            if f != base.inv[last]:
                rec(first, f, depth + 1, np.take_along_axis(perms[f], img, axis=1))

    for e in range(base.num_dir_edges):
        rec(e, e, 1, np.asarray(perms[e]))
    return out


def embedding_expectation_formula(s: Graph, n: int) -> Fraction:
    """``prod_v (n)_{b_v} / prod_e (n)_{a_e}`` for an etale ``s`` in the permutation model."""
    base = s.b.base
    if not is_etale(projection(s)):
        return Fraction(0)
    a = [0] * base.num_dir_edges
    for e in range(s.num_dir_edges):
        a[s.b.emap[e]] += 1
    bv = [0] * base.num_vertices
    for v in range(s.num_vertices):
        bv[s.b.vmap[v]] += 1
    num = math.prod(math.perm(n, x) for x in bv)
    den = math.prod(math.perm(n, a[orb[0]]) for orb in base.orbits)
    return Fraction(num, den) if den else Fraction(0)


# ---------------------------------------------------------------- cycle-type walks in large covers


def _nb_words(base: Graph, length: int) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []

    def rec(w: list[int]) -> None:
        if len(w) == length:
            out.append(tuple(w))
            return
        for f in base.out_edges[base.head[w[-1]]]:
            if f != base.inv[w[-1]]:
                w.append(f)
                rec(w)
                w.pop()

    for e in range(base.num_dir_edges):
        rec([e])
    return out


@lru_cache(maxsize=64)
def _cycle_words(base: Graph, length: int) -> np.ndarray:
    words = [w for w in _nb_words(base, length)
             if base.head[w[-1]] == base.tail[w[0]] and w[0] != base.inv[w[-1]]]
    return np.array(words, dtype=np.int64).reshape(-1, length)


def simple_cycle_walks(base: Graph, perms: Sequence[np.ndarray], length: int) -> int:
    """Pairs ``(u, i)``: ``u`` a cyclically non-backtracking base word of the given length and
    ``i`` a point over its start whose lift closes up through ``length`` distinct vertices."""
    words = _cycle_words(base, length)
    if not len(words):
        return 0
    stack = np.stack([np.asarray(p) for p in perms])
    n = stack.shape[1]
    flat = stack.ravel()
    inv_flat = np.argsort(stack, axis=1).ravel()
    # meet in the middle over distinct halves: first half forwards, second half backwards
    h = (length + 1) // 2
    heads, head_of = np.unique(words[:, :h], axis=0, return_inverse=True)
    tails, tail_of = np.unique(words[:, h:], axis=0, return_inverse=True)
    fwd = np.broadcast_to(np.arange(n), (len(heads), n))
    for j in range(heads.shape[1]):
        fwd = flat[heads[:, j:j + 1] * n + fwd]
    bwd = np.broadcast_to(np.arange(n), (len(tails), n))
    for j in range(tails.shape[1] - 1, -1, -1):
        bwd = inv_flat[tails[:, j:j + 1] * n + bwd]
    fwd, bwd = fwd[head_of.ravel()], bwd[tail_of.ravel()]
    wi, start = np.nonzero(fwd == bwd)
    if not wi.size:
        return 0
    letters = words[wi]
    pos = [start]
    for j in range(length - 1):
        pos.append(flat[letters[:, j] * n + pos[-1]])
    if length == 1:
        return int(wi.size)
    # distinct vertices; points over different base vertices never collide
    fibre = np.array(base.tail, dtype=np.int64)[letters]
    key = np.sort(fibre * n + np.stack(pos, axis=1), axis=1)
    return int((np.diff(key, axis=1) != 0).all(axis=1).sum())


def cycle_type_walk_count(base: Graph, perms: Sequence[np.ndarray], k: int) -> int:
    """SNBC walks of length ``k`` in the cover whose visited subgraph is a cycle."""
    return sum(simple_cycle_walks(base, perms, d) for d in range(1, k + 1) if k % d == 0)


def mc_cycle_type_expectation(base: Graph, model: ModelSpec, n: int, k: int, samples: int,
                              seed: int = 0, workers: int = 1) -> MCResult:
    def run(idx: range) -> list[tuple[int]]:
        return [(cycle_type_walk_count(base, sample_arrays(base, model, n, seed, i), k),) for i in idx]

    return _mc_summary(_run_chunks(run, samples, workers), samples, True)


def divisor_power_sum(d: int, k: int) -> int:
    """``sum over k' | k`` of ``(d - 1)^k'``."""
    return sum((d - 1) ** j for j in range(1, k + 1) if k % j == 0)


def hashimoto_trace_divisor_sum(base: Graph, k: int) -> int:
    """``sum over k' | k`` of ``tr H_B^k'``."""
    return sum(count_snbc(base, j) for j in range(1, k + 1) if k % j == 0)


# ---------------------------------------------------------------- fitting


@dataclass
class ExpansionFit:
    order: int
    coefficients: dict[int, list[float]]
    residuals: dict[int, list[float]]
    n_grid: tuple[int, ...]
    exact: bool
    samples: int | None = None
    window_ok: dict[int, bool] = field(default_factory=dict)
    window_c: float = DEFAULT_WINDOW_C

    def to_csv(self) -> str:
        head = ["k"] + [f"c{i}" for i in range(self.order)] + ["residual"]
        lines = [",".join(head)]
        for k in sorted(self.coefficients):
            res = max((abs(x) for x in self.residuals[k]), default=0.0)
            lines.append(",".join([str(k)] + [repr(float(c)) for c in self.coefficients[k]] + [repr(res)]))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {"order": self.order, "n_grid": list(self.n_grid), "exact": self.exact, "samples": self.samples,
                "window_c": self.window_c,
                "coefficients": {str(k): [float(c) for c in v] for k, v in sorted(self.coefficients.items())},
                "residuals": {str(k): [float(c) for c in v] for k, v in sorted(self.residuals.items())},
                "window_ok": {str(k): v for k, v in sorted(self.window_ok.items())}}


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    m = [r[:] + [b] for r, b in zip(rows, rhs)]
    size = len(m)
    for c in range(size):
        piv = next((r for r in range(c, size) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("singular fitting system (duplicate n?)")
        m[c], m[piv] = m[piv], m[c]
        for r in range(size):
            if r != c and m[r][c] != 0:
                f = m[r][c] / m[c][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [m[i][size] / m[i][i] for i in range(size)]


def fit_expansion_values(values: Mapping[tuple[int, int], object], n_grid: Sequence[int], ks: Sequence[int],
                         r: int, window_c: float = DEFAULT_WINDOW_C, samples: int | None = None) -> ExpansionFit:
    """Fit ``value(n, k) ~ sum_{i<r} c_i(k) / n^i`` per ``k``.

    Rational values are fitted in exact arithmetic (interpolation when the grid
    has ``r`` points, normal equations otherwise); anything else by floating
    point least squares.
    """
    grid = tuple(int(n) for n in n_grid)
    if len(set(grid)) != len(grid):
        raise ValueError("singular fitting system: duplicate n in the grid")
    if len(grid) < r:
        raise ValueError("need at least r grid points")
    exact = all(isinstance(values[n, k], (int, Fraction)) for n in grid for k in ks)
    coeffs: dict[int, list] = {}
    resid: dict[int, list[float]] = {}
    for k in ks:
        if exact:
            rows = [[Fraction(1, n**i) for i in range(r)] for n in grid]
            y = [Fraction(values[n, k]) for n in grid]  # type: ignore[arg-type]
            if len(grid) == r:
                c = _solve_exact(rows, y)
            else:
                normal = [[sum(row[i] * row[j] for row in rows) for j in range(r)] for i in range(r)]
                c = _solve_exact(normal, [sum(row[i] * v for row, v in zip(rows, y)) for i in range(r)])
            coeffs[k] = [float(x) for x in c]
            resid[k] = [float(v - sum(a * b for a, b in zip(row, c))) for row, v in zip(rows, y)]
        else:
            a = np.array([[1.0 / n**i for i in range(r)] for n in grid])
            y = np.array([float(values[n, k]) for n in grid])  # type: ignore[arg-type]
            sol, *_ = np.linalg.lstsq(a, y, rcond=None)
            coeffs[k] = [float(x) for x in sol]
            resid[k] = [float(x) for x in y - a @ sol]
    window = {k: k <= math.sqrt(min(grid)) / window_c for k in ks}
    return ExpansionFit(r, coeffs, resid, grid, exact, samples, window, window_c)


def expansion_values(B: Graph, model: ModelSpec, n_grid: Sequence[int], ks: Sequence[int],
                     stat: Statistic, mode: str = "exact", samples: int = 1000, seed: int = 0,
                     workers: int = 1, cap: int = DEFAULT_ENUM_CAP) -> dict[tuple[int, int], object]:
    """``stat`` must return one value per entry of ``ks``."""
    out: dict[tuple[int, int], object] = {}
    for n in n_grid:
        res = expectation(B, model, n, stat, mode, samples, seed, workers, cap)
        vals = res.mean if isinstance(res, MCResult) else res
        for k, v in zip(ks, _as_tuple(vals)):
            out[n, k] = v
    return out


def fit_expansion(stat: Statistic, B: Graph, model: ModelSpec, n_grid: Sequence[int], ks: Sequence[int],
                  r: int, mode: str = "exact", samples: int = 1000, seed: int = 0, workers: int = 1,
                  window_c: float = DEFAULT_WINDOW_C, cap: int = DEFAULT_ENUM_CAP) -> ExpansionFit:
    values = expansion_values(B, model, n_grid, ks, stat, mode, samples, seed, workers, cap)
    return fit_expansion_values(values, n_grid, ks, r, window_c, samples if mode == "mc" else None)


# ---------------------------------------------------------------- theorem pipelines


@dataclass
class VerifyConfig:
    n_grid: tuple[int, ...] = (3, 4, 5)
    ks: tuple[int, ...] = (1, 2, 3, 4)
    mode: str = "exact"
    samples: int = 1000
    seed: int = 0
    workers: int = 1
    window_c: float = DEFAULT_WINDOW_C
    vanish_tol: float = 1e-6
    slack: float = 0.1
    cap: int = DEFAULT_ENUM_CAP
    census_samples: int = 3
    census_n: int | None = None


def candidate_bases(B: Graph, extra: Sequence[complex] = ()) -> list[complex]:
    """Distinct eigenvalues of ``H_B`` plus 0 and any extra bases."""
    out: list[complex] = []
    for z in list(eigenvalues(hashimoto(B).entries)) + [0j] + [complex(x) for x in extra]:
        z = complex(round(z.real, 9), round(z.imag, 9))
        if not any(abs(z - y) < 1e-7 for y in out):
            out.append(z)
    return out


def _coefficient_report(fit: ExpansionFit, bases: list[complex], nu: float, slack: float) -> list[dict]:
    rows = []
    for i in range(fit.order):
        samples = {k: fit.coefficients[k][i] for k in sorted(fit.coefficients)}
        fr = fit_polyexp(samples, bases, 0) if len(samples) >= len(bases) else None
        entry = {"index": i, "values": [samples[k] for k in sorted(samples)]}
        if fr is None:
            entry.update(fit_residual=None, residual_rate=None, within_nu=None)
        else:
            rate = fr.residual_growth.rate if fr.residual_growth is not None else None
            entry.update(fit_residual=fr.residual_max,
                         residual_rate=rate,
                         within_nu=None if rate is None else rate <= nu + slack)
        rows.append(entry)
    return rows


def _report(B: Graph, model: ModelSpec, t: OrderedGraph, xi: Sequence[int], r: int, cfg: VerifyConfig,
            fit: ExpansionFit, min_order: int) -> dict:
    nu = max(math.sqrt(mu1(B)), mu1(vlg(t, xi)))
    bases = candidate_bases(B)
    coeff_rows = _coefficient_report(fit, bases, nu, cfg.slack)
    vanishing = {}
    for i in range(min(min_order, r)):
        worst = max(abs(fit.coefficients[k][i]) for k in fit.coefficients)
        vanishing[str(i)] = {"max_abs": worst, "ok": worst <= cfg.vanish_tol}
    passed = all(v["ok"] for v in vanishing.values()) and all(
        row["within_nu"] in (None, True) for row in coeff_rows)
    return {
        "type_key": repr(t.key),
        "xi": list(xi),
        "r": r,
        "model": model.name,
        "n_grid": list(cfg.n_grid),
        "ks": list(cfg.ks),
        "mode": cfg.mode,
        "nu": nu,
        "min_order": min_order,
        "fit": fit.to_json(),
        "coefficients": coeff_rows,
        "vanishing": vanishing,
        "pass": passed,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True)


def verify_theorem_walks(B: Graph, model: ModelSpec, t: OrderedGraph, xi: Sequence[int], r: int,
                         cfg: VerifyConfig | None = None) -> dict:
    """Fit the 1/n expansion of ``E[snbc(t, >= xi; G, k)]`` and check its shape."""
    cfg = cfg or VerifyConfig()
    stat = snbc_type_statistic(t, cfg.ks, xi=xi)
    fit = fit_expansion(stat, B, model, cfg.n_grid, cfg.ks, r, cfg.mode, cfg.samples, cfg.seed,
                        cfg.workers, cfg.window_c, cfg.cap)
    return _report(B, model, t, xi, r, cfg, fit, order_of(t.graph))


def _pair_min_order(B: Graph, model: ModelSpec, t: OrderedGraph, psi: OrderedGraph, xi: Sequence[int],
                    cfg: VerifyConfig) -> int:
    """Smallest order among unions of sampled pairs whose walk is of type ``t`` with lengths ``>= xi``."""
    n = cfg.census_n or max(cfg.n_grid)
    best: int | None = None
    for i in range(cfg.census_samples):
        g = assemble_cover(B, sample(B, model, n, cfg.seed, i))
        for k in cfg.ks:
            census, reps = pair_census(g, psi, k)
            for (key, lengths), c in census.items():
                tt, paths = x_edges_of_type(reps[key])
                if tt.key != t.key:
                    continue
                if all(sum(lengths[p] for p, _ in path) >= x for x, path in zip(xi, paths)):
                    o = reps[key].order
                    best = o if best is None else min(best, o)
    return order_of(t.graph) if best is None else best


def verify_theorem_pairs(B: Graph, model: ModelSpec, t: OrderedGraph, xi: Sequence[int], psi: OrderedGraph,
                         r: int, cfg: VerifyConfig | None = None) -> dict:
    """Same pipeline for ``E[#(psi in G) * snbc(t, >= xi; G, k)]``, counted pair by pair."""
    cfg = cfg or VerifyConfig()
    stat = pairs_statistic(t, psi, xi, cfg.ks)
    fit = fit_expansion(stat, B, model, cfg.n_grid, cfg.ks, r, cfg.mode, cfg.samples, cfg.seed,
                        cfg.workers, cfg.window_c, cfg.cap)
    return _report(B, model, t, xi, r, cfg, fit, _pair_min_order(B, model, t, psi, xi, cfg))
