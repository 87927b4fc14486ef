"""SNBC walks, first-encountered orderings, bead suppression and legal-walk counts.

Walks are tuples of directed-edge indices.  A walk ``(e1, ..., ek)`` is closed
when ``head(ek) == tail(e1)``; it is strictly non-backtracking closed (SNBC)
when additionally no step reverses the previous one, cyclically.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from ._budget import Budget as _Budget
from ._budget import BudgetExceeded
from .polyexp import dot_factorizations
from .graph_core import (
    Graph,
    GraphError,
    OrderedGraph,
    Ordering,
    attach_b,
    build_graph,
    count_embeddings,
    fibre_counts,
    order_of,
    subgraph,
)

__all__ = [
    "BudgetExceeded", "ConsistencyError", "HomotopyReduction", "enumerate_snbc", "count_snbc",
    "count_snbc_enumerated", "visited_subgraph_ordered", "reduce_walk", "reduce_ordered",
    "suppress_beads", "beads", "vlg", "vlg_ordered", "vlg_b", "legal_count", "legal_length_counts",
    "visits_count", "visits_direct", "visits_direct_counts", "visits_formula",
    "visits_formula_counts", "legal_table", "type_census", "snbc_by_type",
    "per_graph_walk_identity", "count_snbc_min_order", "fibre_counts", "dot_factorizations",
    "is_snbc", "walk_vertices", "reverse_word", "walk_shapes",
]


class ConsistencyError(AssertionError):
    pass


# ---------------------------------------------------------------- walks


def walk_vertices(g: Graph, w: Sequence[int]) -> list[int]:
    if not w:
        return []
    return [g.tail[w[0]]] + [g.head[e] for e in w]


def is_snbc(g: Graph, w: Sequence[int]) -> bool:
    k = len(w)
    if k == 0:
        return False
    for i in range(k):
        a, b = w[i], w[(i + 1) % k]
        if g.head[a] != g.tail[b] or g.inv[a] == b:
            return False
    return True


def enumerate_snbc(g: Graph, k: int, budget: int | None = None) -> Iterator[tuple[int, ...]]:
    """All SNBC walks of length ``k``; starting points and directions count separately."""
    if k < 1:
        raise ValueError("k must be at least 1")
    bud = _Budget(budget)
    succ = [tuple(f for f in g.out_edges[g.head[e]] if f != g.inv[e]) for e in range(g.num_dir_edges)]
    walk: list[int] = []

    def rec(depth: int) -> Iterator[tuple[int, ...]]:
        last = walk[-1]
        if depth == k:
            first = walk[0]
            if g.head[last] == g.tail[first] and g.inv[last] != first:
                yield tuple(walk)
            return
        for f in succ[last]:
            bud.spend()
            walk.append(f)
            yield from rec(depth + 1)
            walk.pop()

    for e in range(g.num_dir_edges):
        walk.append(e)
        yield from rec(1)
        walk.pop()


def count_snbc(g: Graph, k: int) -> int:
    """Number of SNBC walks of length ``k``, as the exact trace of ``H^k``."""
    m = g.num_dir_edges
    h = np.zeros((m, m), dtype=object)
    for e in range(m):
        for f in g.out_edges[g.head[e]]:
            if f != g.inv[e]:
                h[e, f] += 1
    if m == 0:
        return 0
    p = np.identity(m, dtype=object)
    base, n = h, k
    while n:
        if n & 1:
            p = p.dot(base)
        base = base.dot(base)
        n >>= 1
    return int(sum(p[i, i] for i in range(m)))


def count_snbc_enumerated(g: Graph, k: int, budget: int | None = None) -> int:
    return sum(1 for _ in enumerate_snbc(g, k, budget))


def _first_encounter(g: Graph, w: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Vertex order and oriented edge order (host indices) by first occurrence."""
    vseen: dict[int, None] = {g.tail[w[0]]: None}
    eseen: dict[int, None] = {}
    orbit_seen: set[int] = set()
    for e in w:
        if e not in orbit_seen:
            orbit_seen.add(e)
            orbit_seen.add(g.inv[e])
            eseen[e] = None
        vseen.setdefault(g.head[e], None)
    return tuple(vseen), tuple(eseen)


def _ordered_subgraph(g: Graph, vorder: Sequence[int], eorder: Sequence[int]) -> OrderedGraph:
    s = subgraph(g, vorder, eorder)
    ordering = Ordering(tuple(s.vindex[g.vertex_ids[v]] for v in vorder),
                        tuple(s.eindex[g.edge_ids[e]] for e in eorder))
    return OrderedGraph(s, ordering)


def visited_subgraph_ordered(g: Graph, w: Sequence[int]) -> OrderedGraph:
    """The visited subgraph with its first-encountered ordering."""
    vorder, eorder = _first_encounter(g, w)
    return _ordered_subgraph(g, vorder, eorder)


# ---------------------------------------------------------------- bead suppression


@dataclass(frozen=True, eq=False)
class HomotopyReduction:
    """Reduced ordered graph with edge-lengths and (for B-graphs) the induced wording.

    ``lengths`` and ``multiplicities`` are indexed by position in the type's
    edge order; ``paths`` and ``wording`` by directed edge of the type graph.
    """

    type: OrderedGraph
    lengths: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]
    source: OrderedGraph
    wording: dict[int, tuple] | None = None
    type_walk: tuple[int, ...] | None = None
    multiplicities: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        from .graph_core import graph_to_json

        t = self.type.graph
        out = {"type_graph": graph_to_json(t, self.type.ordering),
               "lengths": list(self.lengths)}
        if self.wording is not None:
            out["wording"] = {str(t.edge_ids[e]): [str(x) for x in wd]
                              for e, wd in sorted(self.wording.items())}
        return out


def beads(g: Graph) -> set[int]:
    """Vertices of degree two that carry no self-loop."""
    return {v for v in range(g.num_vertices) if g.degree(v) == 2 and not g.has_self_loop(v)}


def suppress_beads(og: OrderedGraph, removed: set[int]) -> tuple[OrderedGraph, tuple[tuple[int, ...], ...]]:
    """Suppress the bead set ``removed`` of ``og``.

    Returns the reduced ordered graph and, for each of its directed edges, the
    beaded path of source directed edges it replaces.  Reduced vertices and
    edges keep the ids of the source vertex and of the path's first edge.
    """
    s = og.graph
    for v in removed:
        if s.degree(v) != 2 or s.has_self_loop(v):
            raise GraphError(f"vertex {s.vertex_ids[v]!r} is not a bead")
    kept = [v for v in range(s.num_vertices) if v not in removed]
    paths: dict[int, tuple[int, ...]] = {}
    for e in range(s.num_dir_edges):
        if s.tail[e] in removed:
            continue
        p = [e]
        while s.head[p[-1]] in removed:
            cur = p[-1]
            nxt = [f for f in s.out_edges[s.head[cur]] if f != s.inv[cur]]
            p.append(nxt[0])
            if len(p) > s.num_dir_edges:
                raise GraphError("bead set is not proper (a component consists of beads)")
        paths[e] = tuple(p)
    covered = sum(len(p) for p in paths.values())
    if covered != s.num_dir_edges:
        raise GraphError("bead set is not proper (a component consists of beads)")
    firsts = sorted(paths)
    tidx = {e: i for i, e in enumerate(firsts)}
    vpos = {v: i for i, v in enumerate(kept)}
    tail, head, inv = [], [], []
    for e in firsts:
        p = paths[e]
        tail.append(vpos[s.tail[p[0]]])
        head.append(vpos[s.head[p[-1]]])
        inv.append(tidx[s.inv[p[-1]]])
    t = Graph(tuple(s.vertex_ids[v] for v in kept), tuple(s.edge_ids[e] for e in firsts),
              tuple(tail), tuple(head), tuple(inv))
    epos = {e: i for i, e in enumerate(og.ordering.edge_order)}
    epos.update({s.inv[e]: i for e, i in list(epos.items())})
    rank = []
    for i, e in enumerate(firsts):
        best = min(paths[e], key=lambda x: epos[x])
        rank.append((epos[best], best in og.ordering.orientation, i))
    by_orbit: dict[int, list[tuple[int, bool, int]]] = {}
    for r in rank:
        by_orbit.setdefault(r[0], []).append(r)
    edge_order = []
    for pos in sorted(by_orbit):
        cands = by_orbit[pos]
        chosen = next((c for c in cands if c[1]), cands[0])
        edge_order.append(chosen[2])
    vorder = tuple(vpos[v] for v in og.ordering.vertex_order if v not in removed)
    tog = OrderedGraph(t, Ordering(vorder, tuple(edge_order)))
    return tog, tuple(paths[e] for e in firsts)


def _wording(og: OrderedGraph, paths: Sequence[Sequence[int]]) -> dict[int, tuple] | None:
    s = og.graph
    if s.b is None:
        return None
    return {i: tuple(s.b.edge_label(e) for e in p) for i, p in enumerate(paths)}


def reduce_ordered(og: OrderedGraph, keep: set[int] = frozenset()) -> HomotopyReduction:  # type: ignore[assignment]
    """Suppress every bead except the first vertex and those in ``keep``."""
    s = og.graph
    first = og.ordering.vertex_order[0] if og.ordering.vertex_order else None
    removed = {v for v in beads(s) if v != first and v not in keep}
    t, paths = suppress_beads(og, removed)
    lengths = []
    for e in t.ordering.edge_order:
        lengths.append(len(paths[e]))
    return HomotopyReduction(t, tuple(lengths), paths, og, _wording(og, paths))


def reduce_walk(g: Graph, w: Sequence[int]) -> HomotopyReduction:
    """Homotopy reduction of a closed non-backtracking walk in ``g``."""
    og = visited_subgraph_ordered(g, w)
    red = reduce_ordered(og)
    s = og.graph
    local = [s.eindex[g.edge_ids[e]] for e in w]
    start_of = {p[0]: i for i, p in enumerate(red.paths)}
    tw = []
    i = 0
    while i < len(local):
        te = start_of.get(local[i])
        if te is None:
            raise ConsistencyError("walk does not decompose into beaded paths")
        if tuple(local[i:i + len(red.paths[te])]) != red.paths[te]:
            raise ConsistencyError("walk leaves a beaded path midway")
        tw.append(te)
        i += len(red.paths[te])
    t = red.type.graph
    pos = {e: j for j, e in enumerate(red.type.ordering.edge_order)}
    pos.update({t.inv[e]: j for e, j in list(pos.items())})
    mult = [0] * len(red.type.ordering.edge_order)
    for te in tw:
        mult[pos[te]] += 1
    return HomotopyReduction(red.type, red.lengths, red.paths, og, red.wording, tuple(tw), tuple(mult))


def reverse_word(base: Graph, word: Sequence[Hashable]) -> tuple:
    """Letterwise inverse of the reversed word."""
    return tuple(base.edge_ids[base.inv[base.eindex[x]]] for x in reversed(word))


# ---------------------------------------------------------------- variable-length graphs


def _subdivide(t: Graph, reps: Sequence[int], lengths: Sequence[int]) -> tuple[Graph, dict[int, list[int]]]:
    vids = list(t.vertex_ids)
    recs = []
    chains: dict[int, list] = {}
    for r, L in zip(reps, lengths):
        L = int(L)
        if L < 1:
            raise GraphError("edge-lengths must be positive")
        rid, iid = t.edge_ids[r], t.edge_ids[t.inv[r]]
        tv, hv = t.vertex_ids[t.tail[r]], t.vertex_ids[t.head[r]]
        if t.is_half_loop(r):
            if L != 1:
                raise GraphError(f"half-loop {rid!r} cannot carry length {L}")
            recs.append((rid, tv, tv, rid))
            chains[r] = [rid]
            continue
        if L == 1:
            recs.append((rid, tv, hv, iid))
            recs.append((iid, hv, tv, rid))
            chains[r] = [rid]
            continue
        nodes = [tv] + [f"{rid}.v{j}" for j in range(1, L)] + [hv]
        vids.extend(nodes[1:-1])
        chain = []
        for j in range(1, L + 1):
            fwd, bwd = f"{rid}.{j}", f"{iid}.{L + 1 - j}"
            recs.append((fwd, nodes[j - 1], nodes[j], bwd))
            recs.append((bwd, nodes[j], nodes[j - 1], fwd))
            chain.append(fwd)
        chains[r] = chain
    g = build_graph(vids, recs)
    return g, {r: [g.eindex[x] for x in c] for r, c in chains.items()}


def vlg(t: Graph | OrderedGraph, lengths: Sequence[int]) -> Graph:
    """Subdivide each edge into a path of the given length.

    For a plain graph ``lengths`` follows ``t.orbits``; for an ordered graph it
    follows the edge order.
    """
    if isinstance(t, OrderedGraph):
        return vlg_ordered(t, lengths).graph
    reps = [orb[0] for orb in t.orbits]
    if len(lengths) != len(reps):
        raise GraphError("one length per edge is required")
    return _subdivide(t, reps, lengths)[0]


def vlg_ordered(t: OrderedGraph, lengths: Sequence[int]) -> OrderedGraph:
    """Ordered subdivision whose reduction recovers ``(t, lengths)``."""
    tg, o = t.graph, t.ordering
    if len(lengths) != len(o.edge_order):
        raise GraphError("one length per edge is required")
    g, chains = _subdivide(tg, o.edge_order, lengths)
    vorder: list[int] = []
    seen: set[int] = set()

    def add(v: int) -> None:
        if v not in seen:
            seen.add(v)
            vorder.append(v)

    if o.vertex_order:
        add(g.vindex[tg.vertex_ids[o.vertex_order[0]]])
    eorder = []
    for r in o.edge_order:
        for e in chains[r]:
            add(g.tail[e])
            add(g.head[e])
            eorder.append(e)
    for v in o.vertex_order:
        add(g.vindex[tg.vertex_ids[v]])
    return OrderedGraph(g, Ordering(tuple(vorder), tuple(eorder)))


def vlg_b(t: Graph | OrderedGraph, wording: Mapping[int, Sequence[Hashable]], base: Graph) -> Graph:
    """The B-graph obtained by spelling each directed edge of ``t`` with its word."""
    tg = t.graph if isinstance(t, OrderedGraph) else t
    reps = [orb[0] for orb in tg.orbits]
    for e in range(tg.num_dir_edges):
        w = tuple(wording[e])
        if tuple(wording[tg.inv[e]]) != reverse_word(base, w):
            raise GraphError(f"wording of inv({tg.edge_ids[e]!r}) is not the reversed word")
        if tg.is_half_loop(e) and (len(w) != 1 or not base.is_half_loop(base.eindex[w[0]])):
            raise GraphError("half-loop edges need one-letter half-loop words")
    g, chains = _subdivide(tg, reps, [len(wording[r]) for r in reps])
    labels = {}
    for r in reps:
        for e, letter in zip(chains[r], wording[r]):
            labels[g.edge_ids[e]] = letter
            labels[g.edge_ids[g.inv[e]]] = base.edge_ids[base.inv[base.eindex[letter]]]
    return attach_b(g, base, labels)


# ---------------------------------------------------------------- legal walks


def _legal_tables(t: OrderedGraph):
    g, o = t.graph, t.ordering
    pos = {}
    for j, e in enumerate(o.edge_order):
        pos[e] = j
        pos[g.inv[e]] = j
    # discovering the j-th edge in its oriented direction must reveal vertices
    # in the prescribed vertex order
    valid = []
    known = {o.vertex_order[0]} if o.vertex_order else set()
    nxt = 1
    for e in o.edge_order:
        ok = g.tail[e] in known
        h = g.head[e]
        if h not in known:
            if nxt < len(o.vertex_order) and o.vertex_order[nxt] == h:
                known.add(h)
                nxt += 1
            else:
                ok = False
        valid.append(ok)
    complete = nxt == len(o.vertex_order)
    succ = [tuple(f for f in g.out_edges[g.head[e]] if f != g.inv[e]) for e in range(g.num_dir_edges)]
    return pos, valid, complete, succ


def legal_count(t: OrderedGraph, m: Sequence[int]) -> int:
    """Number of SNBC walks in ``t`` whose first-encountered ordering is ``t``'s
    and which traverse edge ``j`` (of the edge order) exactly ``m[j]`` times."""
    g, o = t.graph, t.ordering
    nE = len(o.edge_order)
    if len(m) != nE:
        raise GraphError("one multiplicity per edge is required")
    if nE == 0 or any(x < 1 for x in m):
        return 0
    pos, valid, complete, succ = _legal_tables(t)
    if not (complete and all(valid)):
        return 0
    e1 = o.edge_order[0]
    v0 = o.vertex_order[0]
    if g.tail[e1] != v0:
        return 0

    @lru_cache(maxsize=None)
    def rec(d: int, j: int, rem: tuple[int, ...]) -> int:
        if not any(rem):
            return int(j == nE and g.head[d] == v0 and g.inv[d] != e1)
        total = 0
        for f in succ[d]:
            p = pos[f]
            if rem[p] == 0:
                continue
            if p < j:
                nj = j
            elif p == j and f == o.edge_order[j]:
                nj = j + 1
            else:
                continue
            total += rec(f, nj, rem[:p] + (rem[p] - 1,) + rem[p + 1:])
        return total

    start = tuple(m[0] - 1 if i == 0 else m[i] for i in range(nE))
    return rec(e1, 1, start)


def legal_length_counts(t: OrderedGraph, weights: Sequence[int], max_len: int) -> list[int]:
    """``out[M] = sum over m with weights . m == M of legal_count(t, m)``, for M <= max_len."""
    g, o = t.graph, t.ordering
    nE = len(o.edge_order)
    out = [0] * (max_len + 1)
    if nE == 0:
        return out
    pos, valid, complete, succ = _legal_tables(t)
    e1, v0 = o.edge_order[0], o.vertex_order[0]
    if not (complete and all(valid)) or g.tail[e1] != v0:
        return out
    wt = [int(weights[pos[e]]) for e in range(g.num_dir_edges)]
    order = o.edge_order
    steps = [tuple((f, pos[f], wt[f]) for f in succ[d]) for d in range(g.num_dir_edges)]
    closing = [g.head[d] == v0 and g.inv[d] != e1 for d in range(g.num_dir_edges)]
    # allowed moves depend only on (last edge, edges discovered); build them lazily
    moves: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}

    def moves_from(d: int, j: int) -> list[tuple[tuple[int, int], int]]:
        nxt = []
        for f, p, w in steps[d]:
            if p < j:
                nxt.append(((f, j), w))
            elif p == j and f == order[j]:
                nxt.append(((f, j + 1), w))
        moves[d, j] = nxt
        return nxt

    layers: list[dict[tuple[int, int], int]] = [dict() for _ in range(max_len + 1)]
    if wt[e1] <= max_len:
        layers[wt[e1]][(e1, 1)] = 1
    for L in range(max_len + 1):
        room = max_len - L
        for key, c in layers[L].items():
            if key[1] == nE and closing[key[0]]:
                out[L] += c
            nxt = moves.get(key)
            if nxt is None:
                nxt = moves_from(*key)
            for state, w in nxt:
                if w <= room:
                    layer = layers[L + w]
                    layer[state] = layer.get(state, 0) + c
    return out


def legal_table(t: OrderedGraph, lengths: Sequence[int], max_len: int) -> dict[tuple[int, ...], int]:
    """``legal_count(t, m)`` for every ``m >= 1`` with ``lengths . m <= max_len``, in one pass.

    Zero entries are omitted.
    """
    g, o = t.graph, t.ordering
    nE = len(o.edge_order)
    table: dict[tuple[int, ...], int] = {}
    if nE == 0:
        return table
    pos, valid, complete, succ = _legal_tables(t)
    e1, v0 = o.edge_order[0], o.vertex_order[0]
    if not (complete and all(valid)) or g.tail[e1] != v0 or lengths[0] > max_len:
        return table
    unit = [tuple(int(i == j) for i in range(nE)) for j in range(nE)]
    layers: list[dict[tuple, int]] = [dict() for _ in range(max_len + 1)]
    layers[lengths[0]][(e1, 1, unit[0])] = 1
    for L in range(max_len + 1):
        for (d, j, m), c in layers[L].items():
            if j == nE and g.head[d] == v0 and g.inv[d] != e1:
                table[m] = table.get(m, 0) + c
            for f in succ[d]:
                p = pos[f]
                if p < j:
                    nj = j
                elif p == j and f == o.edge_order[j]:
                    nj = j + 1
                else:
                    continue
                L2 = L + lengths[p]
                if L2 <= max_len:
                    key = (f, nj, tuple(a + b for a, b in zip(m, unit[p])))
                    layers[L2][key] = layers[L2].get(key, 0) + c
    return table


def visits_direct_counts(s: OrderedGraph, k_max: int) -> list[int]:
    """``out[k]`` = walks of length ``k`` in ``s`` whose first-encountered ordering is ``s``'s.

    Walks are followed step by step inside ``s``.  Discovery is forced to follow
    the ordering, so the set of seen edges and vertices is a prefix of each
    order and the state is ``(last edge, #edges seen, #vertices seen)``.
    """
    g, o = s.graph, s.ordering
    out = [0] * (k_max + 1)
    if not o.edge_order or k_max < 1:
        return out
    e1, v0 = o.edge_order[0], o.vertex_order[0]
    if g.tail[e1] != v0:
        return out
    epos = {}
    for j, e in enumerate(o.edge_order):
        epos[e] = epos[g.inv[e]] = j
    vpos = {v: i for i, v in enumerate(o.vertex_order)}
    nE, nV = len(o.edge_order), len(o.vertex_order)
    h1 = g.head[e1]
    if h1 != v0 and (nV < 2 or o.vertex_order[1] != h1):
        return out
    head, inv, order = g.head, g.inv, o.edge_order
    # per directed edge: successors with their edge and head-vertex positions
    succ = [tuple((f, epos[f], vpos[head[f]]) for f in g.out_edges[head[e]] if f != inv[e])
            for e in range(g.num_dir_edges)]
    closing = [head[e] == v0 and inv[e] != e1 for e in range(g.num_dir_edges)]
    moves: dict[tuple[int, int, int], list[tuple[int, int, int]]] = {}

    def moves_from(last: int, ne: int, nv: int) -> list[tuple[int, int, int]]:
        nxt = []
        for f, ep, vp in succ[last]:
            ne2, nv2 = ne, nv
            if ep >= ne:
                if ne == nE or order[ne] != f:
                    continue
                ne2 += 1
            if vp >= nv:
                if vp != nv:
                    continue
                nv2 += 1
            nxt.append((f, ne2, nv2))
        moves[last, ne, nv] = nxt
        return nxt

    layer = {(e1, 1, 1 if h1 == v0 else 2): 1}
    for depth in range(1, k_max + 1):
        nxt: dict[tuple[int, int, int], int] = {}
        for key, c in layer.items():
            last, ne, nv = key
            if ne == nE and nv == nV and closing[last]:
                out[depth] += c
            if depth == k_max or nE - ne > k_max - depth:
                continue
            targets = moves.get(key)
            if targets is None:
                targets = moves_from(*key)
            for state in targets:
                nxt[state] = nxt.get(state, 0) + c
        layer = nxt
    return out


def visits_direct(s: OrderedGraph, k: int) -> int:
    """Walks of length ``k`` in ``s`` with first-encountered ordering equal to ``s``'s."""
    return visits_direct_counts(s, k)[k] if k >= 1 else 0


def _multiplicities(lengths: Sequence[int], k: int) -> Iterator[tuple[int, ...]]:
    """All ``m >= 1`` with ``lengths . m == k``."""
    n = len(lengths)
    tail_min = [sum(lengths[i:]) for i in range(n + 1)]
    m = [0] * n

    def rec(i: int, rem: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            if rem == 0:
                yield tuple(m)
            return
        for mi in range(1, (rem - tail_min[i + 1]) // lengths[i] + 1):
            m[i] = mi
            yield from rec(i + 1, rem - mi * lengths[i])

    yield from rec(0, k)


def visits_formula(s: OrderedGraph, k: int) -> int:
    """Sum of ``legal_count(T, m)`` over ``kS . m == k`` for the reduction ``(T, kS)`` of ``s``."""
    red = reduce_ordered(s)
    if not red.lengths:
        return 0
    return sum(legal_count(red.type, m) for m in _multiplicities(red.lengths, k))


def visits_formula_counts(s: OrderedGraph, k_max: int) -> list[int]:
    """``visits_formula(s, k)`` for all ``k <= k_max``, from one table of legal counts."""
    out = [0] * (k_max + 1)
    red = reduce_ordered(s)
    if not red.lengths:
        return out
    for m, c in legal_table(red.type, red.lengths, k_max).items():
        out[sum(a * b for a, b in zip(red.lengths, m))] += c
    return out


def visits_count(s: OrderedGraph, k: int) -> int:
    """Visits computed both directly and via the length-multiplicity sum."""
    a = visits_direct(s, k)
    b = visits_formula(s, k)
    if a != b:
        raise ConsistencyError(f"visits mismatch: direct {a} vs formula {b}")
    return a


# ---------------------------------------------------------------- abstract walk shapes


def _shape_graph(edges: tuple[tuple[int, int, bool], ...], nv: int) -> OrderedGraph:
    recs = []
    for j, (t, h, half) in enumerate(edges):
        if half:
            recs.append((f"e{j}", t, t, f"e{j}"))
        else:
            recs.append((f"e{j}", t, h, f"e{j}'"))
            recs.append((f"e{j}'", h, t, f"e{j}"))
    g = build_graph(range(nv), recs)
    return OrderedGraph(g, Ordering(tuple(range(nv)), tuple(g.eindex[f"e{j}"] for j in range(len(edges)))))


def walk_shapes(max_len: int) -> list[OrderedGraph]:
    """Every ordered graph that is the first-encountered subgraph of an SNBC walk of length ``<= max_len``.

    Walks are grown abstractly: each step follows a known edge or discovers a
    new whole-loop, half-loop or edge to a known or new vertex.  Vertices and
    edges are numbered by discovery, so equal states are equal ordered graphs.
    """
    def head(edges, d):
        t, h, _ = edges[d >> 1]
        return t if d & 1 else h

    def inv(edges, d):
        return d if edges[d >> 1][2] else d ^ 1

    found: set[tuple] = set()
    # state: (edges as (tail, head, half-loop?), last directed edge 2j or 2j+1, #vertices)
    frontier = {(((0, 0, False),), 0, 1), (((0, 1, False),), 0, 2), (((0, 0, True),), 0, 1)}
    for depth in range(1, max_len + 1):
        nxt = set()
        for edges, last, nv in frontier:
            cur = head(edges, last)
            if cur == 0 and last != inv(edges, 0):
                found.add((edges, nv))
            if depth == max_len:
                continue
            back = inv(edges, last)
            for j, (t, h, half) in enumerate(edges):
                if t == cur and 2 * j != back:
                    nxt.add((edges, 2 * j, nv))
                if h == cur and not half and 2 * j + 1 != back:
                    nxt.add((edges, 2 * j + 1, nv))
            fresh = 2 * len(edges)
            for u in range(nv + 1):
                nxt.add((edges + ((cur, u, False),), fresh, max(nv, u + 1)))
            nxt.add((edges + ((cur, cur, True),), fresh, nv))
        frontier = nxt
    return [_shape_graph(edges, nv) for edges, nv in sorted(found)]


# ---------------------------------------------------------------- counting by type


def type_census(g: Graph, k: int, budget: int | None = None) -> tuple[Counter, dict]:
    """Count SNBC walks of length ``k`` by (type key, edge-lengths).

    Returns the counter and a map from type key to a representative ordered
    type graph.
    """
    cache: dict[tuple, tuple] = {}
    census: Counter = Counter()
    reps: dict[tuple, OrderedGraph] = {}
    for w in enumerate_snbc(g, k, budget):
        key = _first_encounter(g, w)
        hit = cache.get(key)
        if hit is None:
            red = reduce_ordered(_ordered_subgraph(g, *key))
            tk = red.type.key
            reps.setdefault(tk, red.type)
            hit = (tk, red.lengths)
            cache[key] = hit
        census[hit] += 1
    return census, reps


def _meets(lengths: Sequence[int], exact: Sequence[int] | None, xi: Sequence[int] | None) -> bool:
    if exact is not None:
        return tuple(lengths) == tuple(exact)
    if xi is not None:
        return all(a >= b for a, b in zip(lengths, xi))
    return True


def snbc_by_type(t: OrderedGraph, g: Graph, k: int, exact: Sequence[int] | None = None,
                 xi: Sequence[int] | None = None, census: Counter | None = None,
                 budget: int | None = None) -> int:
    """SNBC walks of length ``k`` of type ``t`` with edge-lengths ``== exact`` or ``>= xi``."""
    if census is None:
        census = type_census(g, k, budget)[0]
    tk = t.key
    return sum(c for (key, lengths), c in census.items() if key == tk and _meets(lengths, exact, xi))


def per_graph_walk_identity(g: Graph, t: OrderedGraph, xi: Sequence[int], k: int,
                            budget: int | None = None) -> tuple[int, int]:
    """Direct count of ``xi``-certified walks of type ``t`` and its decomposition
    into subgraph counts times legal counts."""
    lhs = snbc_by_type(t, g, k, xi=xi, budget=budget)
    plain = g.base_graph()
    emb: dict[tuple[int, ...], int] = {}
    rhs = 0
    for kv, m in dot_factorizations(xi, k, budget=budget):
        if kv not in emb:
            emb[kv] = count_embeddings(vlg(t, kv), plain)
        if emb[kv]:
            rhs += emb[kv] * legal_count(t, m)
    return lhs, rhs


def count_snbc_min_order(g: Graph, k: int, r: int, budget: int | None = None) -> int:
    """SNBC walks of length ``k`` whose visited subgraph has order at least ``r``."""
    cache: dict[tuple, int] = {}
    total = 0
    for w in enumerate_snbc(g, k, budget):
        key = _first_encounter(g, w)
        if key not in cache:
            cache[key] = len(key[1]) - len(key[0])
        if cache[key] >= r:
            total += 1
    return total
