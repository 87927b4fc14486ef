"""Walk-subgraph pairs, their reductions and pair homotopy types.

A walk-subgraph pair is an SNBC walk ``w`` in a B-graph ``G`` together with
an ordered B-subgraph ``S~`` of ``G``.  Its reduction suppresses the beads of
the visited subgraph ``S`` that are neither the first vertex nor vertices
of ``S~``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterator, Mapping, Sequence

from ._budget import Budget
from .graph_core import (
    Graph,
    GraphError,
    Morphism,
    OrderedGraph,
    Ordering,
    canonical_key,
    count_embeddings,
    iter_embeddings,
    order_of,
)
from .polyexp import dot_factorizations
from .walks_homotopy import (
    _first_encounter,
    _meets,
    _ordered_subgraph,
    beads,
    enumerate_snbc,
    legal_count,
    reduce_ordered,
    reduce_walk,
    suppress_beads,
    type_census,
    vlg,
)


@dataclass(frozen=True, eq=False)
class PairHomotopyType:
    """Union ``X`` with ordered parts ``X1`` (a prefix of ``X``'s ordering) and ``X2`` (B-labelled).

    ``x`` is plain and ordered with ``X1``'s vertices and edges first and
    ``X2``-only ones after them, in ``X2``'s order.  ``x2_edges`` are directed
    edges of ``x`` oriented as ``X2`` orients them.
    """

    x: OrderedGraph
    n1_vertices: int
    n1_edges: int
    x2_vertices: tuple[int, ...]
    x2_edges: tuple[int, ...]
    x2_vertex_labels: tuple
    x2_edge_labels: tuple

    @cached_property
    def key(self) -> tuple:
        g, o = self.x.graph, self.x.ordering
        vpos = {v: i for i, v in enumerate(o.vertex_order)}
        epos = {}
        for i, e in enumerate(o.edge_order):
            epos[e] = (i, True)
            epos[g.inv[e]] = (i, e == g.inv[e])
        return (canonical_key(self.x), self.n1_vertices, self.n1_edges,
                tuple(vpos[v] for v in self.x2_vertices),
                tuple(epos[e] for e in self.x2_edges),
                self.x2_vertex_labels, self.x2_edge_labels)

    def x1(self) -> OrderedGraph:
        o = self.x.ordering
        return _restrict(self.x, o.vertex_order[:self.n1_vertices], o.edge_order[:self.n1_edges])

    def x2(self, base: Graph) -> OrderedGraph:
        og = _restrict(self.x, self.x2_vertices, self.x2_edges)
        from .graph_core import attach_b

        g = og.graph
        elabels = {}
        for e, lab in zip(self.x2_edges, self.x2_edge_labels):
            sub_e = g.eindex[self.x.graph.edge_ids[e]]
            elabels[g.edge_ids[sub_e]] = lab
            elabels[g.edge_ids[g.inv[sub_e]]] = base.edge_ids[base.inv[base.eindex[lab]]]
        vlabels = {self.x.graph.vertex_ids[v]: lab for v, lab in zip(self.x2_vertices, self.x2_vertex_labels)}
        return OrderedGraph(attach_b(g, base, elabels, vlabels), og.ordering)

    @property
    def order(self) -> int:
        return order_of(self.x.graph)

    def to_json(self) -> dict:
        from .graph_core import graph_to_json

        g = self.x.graph
        return {
            "X": graph_to_json(g, self.x.ordering),
            "X1_order": {"vertices": [str(g.vertex_ids[v]) for v in self.x.ordering.vertex_order[:self.n1_vertices]],
                         "edges": [str(g.edge_ids[e]) for e in self.x.ordering.edge_order[:self.n1_edges]]},
            "X2_order": {"vertices": [str(g.vertex_ids[v]) for v in self.x2_vertices],
                         "edges": [str(g.edge_ids[e]) for e in self.x2_edges]},
            "X2_b_labels": {"vertices": [str(x) for x in self.x2_vertex_labels],
                            "edges": [str(x) for x in self.x2_edge_labels]},
        }


def _restrict(og: OrderedGraph, vorder: Sequence[int], eorder: Sequence[int]) -> OrderedGraph:
    return _ordered_subgraph(og.graph, vorder, eorder)


@dataclass(frozen=True, eq=False)
class PairReduction:
    """``lengths`` by position in ``X``'s edge order; ``paths``/``wording`` by directed edge of ``X``."""

    type: PairHomotopyType
    lengths: tuple[int, ...]
    paths: tuple[tuple[int, ...], ...]
    union: OrderedGraph
    wording: dict[int, tuple] | None


def _psi_image(psi: OrderedGraph, emb: Morphism) -> tuple[tuple[int, ...], tuple[int, ...]]:
    o = psi.ordering
    return tuple(emb.vmap[v] for v in o.vertex_order), tuple(emb.emap[e] for e in o.edge_order)


def pair_reduce(g: Graph, w: Sequence[int], psi_vertices: Sequence[int] = (),
                psi_edges: Sequence[int] = ()) -> PairReduction:
    """Reduce the pair ``(w, S~)``; ``S~`` is given by host vertex order and oriented host edge order."""
    vs, es = _first_encounter(g, w)
    vset = set(vs)
    orbit_seen = set(es) | {g.inv[e] for e in es}
    uv = list(vs) + [v for v in psi_vertices if v not in vset]
    ue = list(es) + [e for e in psi_edges if e not in orbit_seen]
    for e in psi_edges:
        if g.tail[e] not in set(psi_vertices) or g.head[e] not in set(psi_vertices):
            raise GraphError("subgraph edge with endpoint outside its vertex set")
    union = _ordered_subgraph(g, uv, ue)
    ug = union.graph
    s = _ordered_subgraph(g, vs, es).graph
    psi_ids = {g.vertex_ids[v] for v in psi_vertices}
    first = g.vertex_ids[vs[0]]
    removed = {ug.vindex[s.vertex_ids[v]] for v in beads(s)
               if s.vertex_ids[v] not in psi_ids and s.vertex_ids[v] != first}
    x, paths = suppress_beads(union, removed)
    xg = x.graph
    start_of = {p[0]: i for i, p in enumerate(paths)}
    n1v = sum(1 for v in vs if ug.vindex[g.vertex_ids[v]] not in removed)
    n1e = _count_x1_edges(x, paths, ug, s)
    x2v = tuple(xg.vindex[g.vertex_ids[v]] for v in psi_vertices)
    x2e = tuple(start_of[ug.eindex[g.edge_ids[e]]] for e in psi_edges)
    lab_v = tuple(g.b.vertex_label(v) for v in psi_vertices) if g.b is not None else (None,) * len(x2v)
    lab_e = tuple(g.b.edge_label(e) for e in psi_edges) if g.b is not None else (None,) * len(x2e)
    ptype = PairHomotopyType(x, n1v, n1e, x2v, x2e, lab_v, lab_e)
    lengths = tuple(len(paths[e]) for e in x.ordering.edge_order)
    wording = None
    if ug.b is not None:
        wording = {i: tuple(ug.b.edge_label(e) for e in p) for i, p in enumerate(paths)}
    return PairReduction(ptype, lengths, paths, union, wording)


def _count_x1_edges(x: OrderedGraph, paths, ug: Graph, s: Graph) -> int:
    s_ids = set(s.edge_ids)
    return sum(1 for e in x.ordering.edge_order if ug.edge_ids[paths[e][0]] in s_ids)


def pair_type_of(g: Graph, w: Sequence[int], psi_vertices: Sequence[int] = (),
                 psi_edges: Sequence[int] = ()) -> PairHomotopyType:
    return pair_reduce(g, w, psi_vertices, psi_edges).type


def x_edges_of_type(ptype: PairHomotopyType) -> tuple[OrderedGraph, list[list[tuple[int, bool]]]]:
    """The walk type ``T`` obtained by reducing ``X1`` further, and for each
    position of ``T``'s edge order the list of ``(X position, same direction)``
    along its path."""
    x1 = ptype.x1()
    red = reduce_ordered(x1)
    xg = ptype.x.graph
    x1g = x1.graph
    xpos = {}
    for i, e in enumerate(ptype.x.ordering.edge_order):
        xpos[xg.edge_ids[e]] = (i, True)
        if xg.inv[e] != e:
            xpos[xg.edge_ids[xg.inv[e]]] = (i, False)
    out = []
    for te in red.type.ordering.edge_order:
        out.append([xpos[x1g.edge_ids[e]] for e in red.paths[te]])
    return red.type, out


@dataclass
class RelationReport:
    lengths_ok: bool
    wording_ok: bool
    partition_ok: bool
    type_ok: bool

    @property
    def ok(self) -> bool:
        return self.lengths_ok and self.wording_ok and self.partition_ok and self.type_ok


def relation_checks(g: Graph, w: Sequence[int], psi_vertices: Sequence[int] = (),
                    psi_edges: Sequence[int] = ()) -> RelationReport:
    """Compare the pair reduction with the walk reduction of ``w`` alone.

    Checks that each type edge's length is the sum of the ``X`` lengths on its
    path, that its word is the concatenation of theirs, and that every
    directed ``X1`` edge lies on exactly one type edge.
    """
    pr = pair_reduce(g, w, psi_vertices, psi_edges)
    wr = reduce_walk(g, w)
    ug, xg = pr.union.graph, pr.type.x.graph
    sg = wr.source.graph
    # host ids are shared between the union and the visited subgraph
    x_of_first = {ug.edge_ids[p[0]]: i for i, p in enumerate(pr.paths)}
    lengths_ok = wording_ok = True
    hits: Counter = Counter()
    for te, tpath in enumerate(wr.paths):
        ids = [sg.edge_ids[e] for e in tpath]
        i = 0
        k_sum = 0
        word: tuple = ()
        while i < len(ids):
            xe = x_of_first.get(ids[i])
            if xe is None:
                lengths_ok = False
                break
            hits[xe] += 1
            seg = [ug.edge_ids[e] for e in pr.paths[xe]]
            if ids[i:i + len(seg)] != seg:
                lengths_ok = False
                break
            k_sum += len(seg)
            if pr.wording is not None:
                word += pr.wording[xe]
            i += len(seg)
        if k_sum != len(tpath):
            lengths_ok = False
        if wr.wording is not None and pr.wording is not None and word != wr.wording[te]:
            wording_ok = False
    s_ids = set(sg.edge_ids)
    x1_dir = [e for e in range(xg.num_dir_edges) if ug.edge_ids[pr.paths[e][0]] in s_ids]
    partition_ok = all(hits[e] == 1 for e in x1_dir) and set(hits) == set(x1_dir)
    t_again, _ = x_edges_of_type(pr.type)
    type_ok = t_again.key == wr.type.key
    return RelationReport(lengths_ok, wording_ok, partition_ok, type_ok)


# ---------------------------------------------------------------- counting


def count_ordered_copies(psi: OrderedGraph, g: Graph) -> int:
    """Ordered subgraphs of ``g`` isomorphic to ``psi`` (one per embedding)."""
    return count_embeddings(psi, g)


def pairs_count(g: Graph, s: OrderedGraph | Graph, psi: OrderedGraph | Graph) -> int:
    return count_embeddings(s, g) * count_embeddings(psi, g)


def psi_images(psi: OrderedGraph, g: Graph) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    return [_psi_image(psi, m) for m in iter_embeddings(psi, g)]


def certified_pairs_direct(g: Graph, t: OrderedGraph, psi: OrderedGraph, xi: Sequence[int], k: int,
                           budget: int | None = None) -> int:
    """Pairs ``(w, S~)`` with ``w`` an SNBC walk of type ``t``, lengths ``>= xi``, and ``S~ ~ psi``,
    enumerated pair by pair."""
    images = psi_images(psi, g)
    if not images:
        return 0
    tk = t.key
    bud = Budget(budget)
    cache: dict[tuple, bool] = {}
    total = 0
    for w in enumerate_snbc(g, k, budget):
        key = _first_encounter(g, w)
        ok = cache.get(key)
        if ok is None:
            red = reduce_ordered(_ordered_subgraph(g, *key))
            ok = red.type.key == tk and _meets(red.lengths, None, xi)
            cache[key] = ok
        if ok:
            for _ in images:
                bud.spend()
                total += 1
    return total


def per_graph_pair_identity(g: Graph, t: OrderedGraph, psi: OrderedGraph, xi: Sequence[int], k: int,
                            budget: int | None = None) -> tuple[int, int, bool]:
    """Direct pair count against its decomposition into pair counts of
    variable-length graphs times legal-walk counts."""
    lhs = certified_pairs_direct(g, t, psi, xi, k, budget)
    plain = g.base_graph()
    n_psi = count_embeddings(psi, g)
    rhs = 0
    emb: dict[tuple[int, ...], int] = {}
    if n_psi:
        for kv, m in dot_factorizations(xi, k, budget=budget):
            if kv not in emb:
                emb[kv] = count_embeddings(vlg(t, kv), plain) * n_psi
            if emb[kv]:
                rhs += emb[kv] * legal_count(t, m)
    return lhs, rhs, lhs == rhs


def pair_census(g: Graph, psi: OrderedGraph, k: int,
                budget: int | None = None) -> tuple[Counter, dict[tuple, PairHomotopyType]]:
    """Count walk-subgraph pairs of walk length ``k`` by (pair type key, lengths)."""
    images = psi_images(psi, g)
    census: Counter = Counter()
    reps: dict[tuple, PairHomotopyType] = {}
    cache: dict[tuple, tuple] = {}
    bud = Budget(budget)
    for w in enumerate_snbc(g, k, budget):
        fe = _first_encounter(g, w)
        for img in images:
            bud.spend()
            ck = (fe, img)
            hit = cache.get(ck)
            if hit is None:
                pr = pair_reduce(g, w, *img)
                reps.setdefault(pr.type.key, pr.type)
                hit = (pr.type.key, pr.lengths)
                cache[ck] = hit
            census[hit] += 1
    return census, reps


def ws_pairs_count(ptype: PairHomotopyType | tuple, census: Counter, exact: Sequence[int] | None = None,
                   at_least: Sequence[int] | None = None) -> int:
    """Pairs of the given type whose lengths equal ``exact`` or dominate ``at_least``.

    Lengths on ``X2`` edges are always 1, so a constraint asking for more there gives 0.
    """
    key = ptype.key if isinstance(ptype, PairHomotopyType) else ptype
    return sum(c for (pk, lengths), c in census.items() if pk == key and _meets(lengths, exact, at_least))


def _psi_positions(ptype: PairHomotopyType) -> set[int]:
    g, o = ptype.x.graph, ptype.x.ordering
    pos = {}
    for i, e in enumerate(o.edge_order):
        pos[e] = pos[g.inv[e]] = i
    return {pos[e] for e in ptype.x2_edges}


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class XiSystem:
    vectors: list[tuple[int, ...]]
    combos: list[tuple[tuple[int, ...], tuple[int, ...], int]]
    t_paths: list[list[int]]


def xi_vectors(ptype: PairHomotopyType, xi: Sequence[int], max_vectors: int = 16) -> XiSystem:
    """Minimal length vectors ``Xi`` on ``X`` meeting ``xi`` along every type edge.

    For each type edge the target is ``max(xi, path size)``; ``X2`` edges are
    pinned at 1 and the other edges take compositions of the rest.  Also
    returns each nonempty subset's componentwise maximum with its sign.
    """
    t, paths = x_edges_of_type(ptype)
    if len(xi) != len(paths):
        raise ValueError("need one xi entry per edge of the walk type")
    n_x = len(ptype.x.ordering.edge_order)
    pinned = _psi_positions(ptype)
    per_edge: list[list[dict[int, int]]] = []
    t_paths = []
    for x_target, path in zip(xi, paths):
        positions = [p for p, _ in path]
        t_paths.append(positions)
        free = [p for p in positions if p not in pinned]
        fixed = len(positions) - len(free)
        target = max(int(x_target), len(positions))
        opts = [dict(zip(free, comp)) for comp in _compositions(target - fixed, len(free))]
        if not free:
            opts = [{}] if len(positions) >= x_target else []
        per_edge.append(opts)
    vectors = []
    for combo in product(*per_edge):
        v = [1] * n_x
        for d in combo:
            for p, val in d.items():
                v[p] = val
        vectors.append(tuple(v))
    if len(vectors) > max_vectors:
        raise ValueError(f"{len(vectors)} Xi vectors exceed the inclusion-exclusion limit {max_vectors}")
    combos = []
    for size in range(1, len(vectors) + 1):
        for sub in combinations(range(len(vectors)), size):
            mx = tuple(max(vectors[i][j] for i in sub) for j in range(n_x))
            combos.append((sub, mx, (-1) ** (1 + size)))
    return XiSystem(vectors, combos, t_paths)


def inclusion_exclusion_count(ptype: PairHomotopyType, census: Counter, xi: Sequence[int],
                              max_vectors: int = 16) -> int:
    sys_ = xi_vectors(ptype, xi, max_vectors)
    return sum(sign * ws_pairs_count(ptype, census, at_least=mx) for _, mx, sign in sys_.combos)


def constrained_count_direct(ptype: PairHomotopyType, census: Counter, xi: Sequence[int]) -> int:
    """Pairs of type ``ptype`` whose lengths satisfy ``xi(e_T) <= sum of K over e_T``."""
    _, paths = x_edges_of_type(ptype)
    key = ptype.key
    total = 0
    for (pk, lengths), c in census.items():
        if pk != key:
            continue
        if all(sum(lengths[p] for p, _ in path) >= x for x, path in zip(xi, paths)):
            total += c
    return total


def pairs_by_walk_type(census: Counter, reps: Mapping[tuple, PairHomotopyType], t: OrderedGraph,
                       xi: Sequence[int]) -> int:
    """Sum over pair types whose ``X1`` reduces to ``t`` of the constrained direct counts."""
    total = 0
    for key, ptype in reps.items():
        tt, _ = x_edges_of_type(ptype)
        if tt.key == t.key:
            total += constrained_count_direct(ptype, census, xi)
    return total


def walk_census_total(g: Graph, t: OrderedGraph, k: int, xi: Sequence[int]) -> int:
    census, _ = type_census(g, k)
    return sum(c for (key, lengths), c in census.items() if key == t.key and _meets(lengths, None, xi))
