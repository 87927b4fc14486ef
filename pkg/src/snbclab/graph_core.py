"""Graphs with half-loops and whole-loops, orderings, B-structures and embeddings.

A graph is a set of vertices and a set of directed edges with head, tail and
an involution ``inv``.  A directed edge fixed by ``inv`` is a half-loop; an
``inv``-orbit of size two at a single vertex is a whole-loop.  Vertices and
directed edges carry external ids but every map is stored as a dense tuple of
integer indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator, Sequence


class GraphError(ValueError):
    """Raised for malformed graph, ordering or morphism data."""


@dataclass(frozen=True, eq=False)
class BStructure:
    """A graph morphism to a base graph ``base`` given by index maps."""

    base: "Graph"
    vmap: tuple[int, ...]
    emap: tuple[int, ...]

    def vertex_label(self, v: int) -> Hashable:
        return self.base.vertex_ids[self.vmap[v]]

    def edge_label(self, e: int) -> Hashable:
        return self.base.edge_ids[self.emap[e]]


@dataclass(frozen=True, eq=False)
class Graph:
    vertex_ids: tuple
    edge_ids: tuple
    tail: tuple[int, ...]
    head: tuple[int, ...]
    inv: tuple[int, ...]
    b: BStructure | None = None

    @cached_property
    def vindex(self) -> dict:
        return {v: i for i, v in enumerate(self.vertex_ids)}

    @cached_property
    def eindex(self) -> dict:
        return {e: i for i, e in enumerate(self.edge_ids)}

    @cached_property
    def out_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in self.vertex_ids]
        for e, t in enumerate(self.tail):
            out[t].append(e)
        return tuple(tuple(x) for x in out)

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def num_dir_edges(self) -> int:
        return len(self.edge_ids)

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """The undirected edges, as sorted ``inv``-orbits."""
        seen = set()
        res = []
        for e in range(len(self.edge_ids)):
            if e in seen:
                continue
            orb = tuple(sorted({e, self.inv[e]}))
            seen.update(orb)
            res.append(orb)
        return tuple(res)

    def is_half_loop(self, e: int) -> bool:
        return self.inv[e] == e

    def is_whole_loop(self, e: int) -> bool:
        return self.inv[e] != e and self.head[e] == self.tail[e]

    def edge_kind(self, e: int) -> str:
        if self.is_half_loop(e):
            return "half-loop"
        if self.is_whole_loop(e):
            return "whole-loop"
        return "plain"

    def degree(self, v: int) -> int:
        return len(self.out_edges[v])

    def has_self_loop(self, v: int) -> bool:
        return any(self.head[e] == v for e in self.out_edges[v])

    def base_graph(self) -> "Graph":
        """The same graph without its B-structure."""
        if self.b is None:
            return self
        return Graph(self.vertex_ids, self.edge_ids, self.tail, self.head, self.inv)

    def with_b(self, b: BStructure | None) -> "Graph":
        g = Graph(self.vertex_ids, self.edge_ids, self.tail, self.head, self.inv, b)
        if b is not None:
            check_morphism(g, b.base, b.vmap, b.emap)
        return g

    def __repr__(self) -> str:
        return f"Graph(|V|={self.num_vertices}, |E_dir|={self.num_dir_edges})"


@dataclass(frozen=True)
class Ordering:
    """Orientation plus total orders on vertices and undirected edges.

    ``edge_order`` lists one directed edge per orbit; those directed edges form
    the orientation.
    """

    vertex_order: tuple[int, ...]
    edge_order: tuple[int, ...]

    @property
    def orientation(self) -> frozenset[int]:
        return frozenset(self.edge_order)


@dataclass(frozen=True, eq=False)
class OrderedGraph:
    graph: Graph
    ordering: Ordering

    def __post_init__(self) -> None:
        check_ordering(self.graph, self.ordering)

    @cached_property
    def key(self) -> tuple:
        return canonical_key(self)


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Graph
    target: Graph
    vmap: tuple[int, ...]
    emap: tuple[int, ...]


# ---------------------------------------------------------------- construction


def build_graph(vertices: Iterable[Hashable],
                dir_edges: Iterable[tuple[Hashable, Hashable, Hashable, Hashable]]) -> Graph:
    """Build and validate a graph from ``(id, tail, head, inv)`` records."""
    vids = tuple(vertices)
    vpos = {v: i for i, v in enumerate(vids)}
    if len(vpos) != len(vids):
        raise GraphError("duplicate vertex id")
    recs = list(dir_edges)
    eids = tuple(r[0] for r in recs)
    epos = {e: i for i, e in enumerate(eids)}
    if len(epos) != len(eids):
        raise GraphError("duplicate edge id")
    tail, head, inv = [], [], []
    for eid, t, h, i in recs:
        if t not in vpos or h not in vpos:
            raise GraphError(f"edge {eid!r} has a dangling endpoint")
        if i not in epos:
            raise GraphError(f"edge {eid!r} has a dangling inverse {i!r}")
        tail.append(vpos[t])
        head.append(vpos[h])
        inv.append(epos[i])
    g = Graph(vids, eids, tuple(tail), tuple(head), tuple(inv))
    check_graph(g)
    return g


def check_graph(g: Graph) -> None:
    n, m = len(g.vertex_ids), len(g.edge_ids)
    if not (len(g.tail) == len(g.head) == len(g.inv) == m):
        raise GraphError("edge maps have inconsistent lengths")
    for e in range(m):
        if not (0 <= g.tail[e] < n and 0 <= g.head[e] < n and 0 <= g.inv[e] < m):
            raise GraphError(f"edge {g.edge_ids[e]!r} has an index out of range")
        if g.inv[g.inv[e]] != e:
            raise GraphError(f"inv is not an involution at {g.edge_ids[e]!r}")
        if g.tail[g.inv[e]] != g.head[e]:
            raise GraphError(f"tail(inv e) != head(e) at {g.edge_ids[e]!r}")


def from_edge_list(vertices: Iterable[Hashable], edges: Iterable[Sequence],
                   half_loops: Iterable[Sequence] = ()) -> Graph:
    """Graph from undirected edges ``(u, v[, name])`` and half-loops ``(v[, name])``.

    An undirected edge named ``a`` gives directed edges ``a`` (u to v) and
    ``a'`` (v to u).
    """
    recs = []
    for i, edge in enumerate(edges):
        u, v = edge[0], edge[1]
        name = edge[2] if len(edge) > 2 else f"e{i}"
        recs.append((name, u, v, f"{name}'"))
        recs.append((f"{name}'", v, u, name))
    for i, hl in enumerate(half_loops):
        v = hl[0]
        name = hl[1] if len(hl) > 1 else f"h{i}"
        recs.append((name, v, v, name))
    return build_graph(vertices, recs)


def _letters(m: int) -> list[str]:
    if m <= 26:
        return [chr(ord("a") + i) for i in range(m)]
    return [f"x{i}" for i in range(m)]


def bouquet(m: int, half_loops: int = 0) -> Graph:
    """One vertex with ``m`` whole-loops and ``half_loops`` half-loops."""
    names = _letters(m + half_loops)
    return from_edge_list(["o"], [("o", "o", x) for x in names[:m]],
                          [("o", x) for x in names[m:]])


def cycle(k: int) -> Graph:
    verts = list(range(k))
    return from_edge_list(verts, [(i, (i + 1) % k, f"c{i}") for i in range(k)])


def path(k: int) -> Graph:
    return from_edge_list(list(range(k + 1)), [(i, i + 1, f"p{i}") for i in range(k)])


def theta() -> Graph:
    """Two vertices joined by three parallel edges."""
    return from_edge_list(["u", "v"], [("u", "v", "a"), ("u", "v", "b"), ("u", "v", "c")])


def complete_graph(n: int) -> Graph:
    verts = list(range(n))
    return from_edge_list(verts, [(i, j, f"k{i}_{j}") for i in range(n) for j in range(i + 1, n)])


def empty_graph() -> Graph:
    return Graph((), (), (), (), ())


def attach_b(g: Graph, base: Graph, edge_labels: dict, vertex_labels: dict | None = None) -> Graph:
    """Attach a B-structure from edge labels (ids of ``base`` directed edges).

    Vertex labels are inferred from edge tails; isolated vertices need
    ``vertex_labels``.
    """
    emap = []
    for eid in g.edge_ids:
        if eid not in edge_labels:
            raise GraphError(f"missing B-label for edge {eid!r}")
        lab = edge_labels[eid]
        if lab not in base.eindex:
            raise GraphError(f"unknown B-edge {lab!r}")
        emap.append(base.eindex[lab])
    vmap: list[int | None] = [None] * g.num_vertices
    if vertex_labels:
        for vid, lab in vertex_labels.items():
            if lab not in base.vindex:
                raise GraphError(f"unknown B-vertex {lab!r}")
            vmap[g.vindex[vid]] = base.vindex[lab]
    for e, fe in enumerate(emap):
        t = base.tail[fe]
        if vmap[g.tail[e]] is None:
            vmap[g.tail[e]] = t
    if any(x is None for x in vmap):
        raise GraphError("isolated vertex without a B-label")
    return g.with_b(BStructure(base, tuple(vmap), tuple(emap)))  # type: ignore[arg-type]


def check_morphism(src: Graph, dst: Graph, vmap: Sequence[int], emap: Sequence[int]) -> None:
    if len(vmap) != src.num_vertices or len(emap) != src.num_dir_edges:
        raise GraphError("morphism maps have wrong length")
    for e, f in enumerate(emap):
        if dst.tail[f] != vmap[src.tail[e]] or dst.head[f] != vmap[src.head[e]]:
            raise GraphError(f"morphism does not respect endpoints at {src.edge_ids[e]!r}")
        if emap[src.inv[e]] != dst.inv[f]:
            raise GraphError(f"morphism does not intertwine inv at {src.edge_ids[e]!r}")


def check_ordering(g: Graph, o: Ordering) -> None:
    if sorted(o.vertex_order) != list(range(g.num_vertices)):
        raise GraphError("vertex order is not a total order on the vertices")
    orbit_of = {}
    for i, orb in enumerate(g.orbits):
        for e in orb:
            orbit_of[e] = i
    if len(o.edge_order) != len(g.orbits):
        raise GraphError("edge order must list exactly one directed edge per orbit")
    if sorted(orbit_of.get(e, -1) for e in o.edge_order) != list(range(len(g.orbits))):
        raise GraphError("edge order must list exactly one directed edge per orbit")


# ---------------------------------------------------------------- JSON


def validate_graph(raw: dict, base: Graph | None = None) -> Graph:
    """Validate a JSON-style graph description.

    ``b_labels`` (and optional ``b_vertex_labels``) are attached when ``base``
    is supplied.
    """
    try:
        vertices = raw["vertices"]
        recs = [(d["id"], d["tail"], d["head"], d["inv"]) for d in raw["dir_edges"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed graph description: {exc}") from exc
    g = build_graph(vertices, recs)
    if base is not None and "b_labels" in raw:
        g = attach_b(g, base, raw["b_labels"], raw.get("b_vertex_labels"))
    return g


def ordering_from_json(raw: dict, g: Graph) -> Ordering:
    o = raw["ordering"]
    orient = set(o["orientation"])
    order = []
    for eid in o["edge_order"]:
        e = g.eindex[eid]
        if eid not in orient:
            e = g.inv[e]
            if g.edge_ids[e] not in orient:
                raise GraphError(f"edge {eid!r} not covered by the orientation")
        order.append(e)
    ordering = Ordering(tuple(g.vindex[v] for v in o["vertex_order"]), tuple(order))
    check_ordering(g, ordering)
    if {g.edge_ids[e] for e in ordering.edge_order} != orient:
        raise GraphError("orientation must contain exactly the ordered edges")
    for e in range(g.num_dir_edges):
        if g.is_half_loop(e) and e not in ordering.orientation:
            raise GraphError("orientation must contain every half-loop")
    return ordering


def load_ordered(raw: dict, base: Graph | None = None) -> OrderedGraph:
    g = validate_graph(raw, base)
    if "ordering" in raw:
        return OrderedGraph(g, ordering_from_json(raw, g))
    return OrderedGraph(g, default_ordering(g))


def graph_to_json(g: Graph, ordering: Ordering | None = None) -> dict:
    out: dict[str, Any] = {
        "vertices": [_jsonable(v) for v in g.vertex_ids],
        "dir_edges": [
            {"id": _jsonable(g.edge_ids[e]), "tail": _jsonable(g.vertex_ids[g.tail[e]]),
             "head": _jsonable(g.vertex_ids[g.head[e]]), "inv": _jsonable(g.edge_ids[g.inv[e]])}
            for e in range(g.num_dir_edges)
        ],
    }
    if g.b is not None:
        out["b_labels"] = {_jsonable(g.edge_ids[e]): _jsonable(g.b.edge_label(e))
                           for e in range(g.num_dir_edges)}
        out["b_vertex_labels"] = {_jsonable(g.vertex_ids[v]): _jsonable(g.b.vertex_label(v))
                                  for v in range(g.num_vertices)}
    if ordering is not None:
        out["ordering"] = {
            "orientation": [_jsonable(g.edge_ids[e]) for e in ordering.edge_order],
            "vertex_order": [_jsonable(g.vertex_ids[v]) for v in ordering.vertex_order],
            "edge_order": [_jsonable(g.edge_ids[e]) for e in ordering.edge_order],
        }
    return out


def _jsonable(x: Any) -> Any:
    if isinstance(x, (str, int)):
        return x
    return str(x)


# ---------------------------------------------------------------- invariants


def order_of(g: Graph) -> int:
    return len(g.orbits) - g.num_vertices


def euler_char(g: Graph) -> Fraction:
    return Fraction(g.num_vertices) - Fraction(g.num_dir_edges, 2)


def half_loop_count(g: Graph) -> int:
    return sum(1 for e in range(g.num_dir_edges) if g.is_half_loop(e))


def is_pruned(g: Graph) -> bool:
    return all(g.degree(v) >= 2 for v in range(g.num_vertices))


def subgraph(g: Graph, vertices: Iterable[int], edges: Iterable[int]) -> Graph:
    """Subgraph on the given vertex and directed-edge indices (closed under inv)."""
    vs = sorted(set(vertices))
    es = set(edges)
    es |= {g.inv[e] for e in es}
    es_sorted = sorted(es)
    vpos = {v: i for i, v in enumerate(vs)}
    epos = {e: i for i, e in enumerate(es_sorted)}
    for e in es_sorted:
        if g.tail[e] not in vpos or g.head[e] not in vpos:
            raise GraphError("subgraph edge with endpoint outside the vertex set")
    sub = Graph(
        tuple(g.vertex_ids[v] for v in vs),
        tuple(g.edge_ids[e] for e in es_sorted),
        tuple(vpos[g.tail[e]] for e in es_sorted),
        tuple(vpos[g.head[e]] for e in es_sorted),
        tuple(epos[g.inv[e]] for e in es_sorted),
    )
    if g.b is not None:
        sub = Graph(sub.vertex_ids, sub.edge_ids, sub.tail, sub.head, sub.inv,
                    BStructure(g.b.base, tuple(g.b.vmap[v] for v in vs),
                               tuple(g.b.emap[e] for e in es_sorted)))
    return sub


def prune(g: Graph) -> Graph:
    alive_v = set(range(g.num_vertices))
    alive_e = set(range(g.num_dir_edges))
    deg = [g.degree(v) for v in range(g.num_vertices)]
    stack = [v for v in alive_v if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v not in alive_v:
            continue
        alive_v.discard(v)
        for e in g.out_edges[v]:
            if e not in alive_e:
                continue
            alive_e.discard(e)
            alive_e.discard(g.inv[e])
            w = g.head[e]
            if w != v and w in alive_v:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    return subgraph(g, alive_v, alive_e)


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.num_vertices
    comps = []
    for s in range(g.num_vertices):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [], deque([s])
        while queue:
            x = queue.popleft()
            comp.append(x)
            for e in g.out_edges[x]:
                y = g.head[e]
                if not seen[y]:
                    seen[y] = True
                    queue.append(y)
        comps.append(sorted(comp))
    return comps


def is_connected(g: Graph) -> bool:
    return g.num_vertices > 0 and len(connected_components(g)) == 1


def is_cycle(g: Graph) -> bool:
    """Connected, every vertex of degree two, and no half-loops."""
    return (is_connected(g) and half_loop_count(g) == 0
            and all(g.degree(v) == 2 for v in range(g.num_vertices)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    recs = [((0, g.edge_ids[e]), (0, g.vertex_ids[g.tail[e]]), (0, g.vertex_ids[g.head[e]]),
             (0, g.edge_ids[g.inv[e]])) for e in range(g.num_dir_edges)]
    recs += [((1, h.edge_ids[e]), (1, h.vertex_ids[h.tail[e]]), (1, h.vertex_ids[h.head[e]]),
              (1, h.edge_ids[h.inv[e]])) for e in range(h.num_dir_edges)]
    verts = [(0, v) for v in g.vertex_ids] + [(1, v) for v in h.vertex_ids]
    return build_graph(verts, recs)


# ---------------------------------------------------------------- morphisms


def _fibre_maps_ok(m: Morphism, bijective: bool) -> bool:
    src, dst = m.source, m.target
    check_morphism(src, dst, m.vmap, m.emap)
    heads_in: list[list[int]] = [[] for _ in range(src.num_vertices)]
    for e in range(src.num_dir_edges):
        heads_in[src.head[e]].append(e)
    dst_heads_in: list[list[int]] = [[] for _ in range(dst.num_vertices)]
    for f in range(dst.num_dir_edges):
        dst_heads_in[dst.head[f]].append(f)
    for v in range(src.num_vertices):
        w = m.vmap[v]
        for fibre, target in ((src.out_edges[v], dst.out_edges[w]), (heads_in[v], dst_heads_in[w])):
            imgs = [m.emap[e] for e in fibre]
            if len(set(imgs)) != len(imgs):
                return False
            if bijective and len(imgs) != len(target):
                return False
    return True


def is_etale(m: Morphism) -> bool:
    return _fibre_maps_ok(m, bijective=False)


def is_covering(m: Morphism) -> bool:
    return _fibre_maps_ok(m, bijective=True)


def projection(g: Graph) -> Morphism:
    """The structure morphism of a B-graph."""
    if g.b is None:
        raise GraphError("graph has no B-structure")
    return Morphism(g, g.b.base, g.b.vmap, g.b.emap)


def identity_morphism(g: Graph) -> Morphism:
    return Morphism(g, g, tuple(range(g.num_vertices)), tuple(range(g.num_dir_edges)))


# ---------------------------------------------------------------- orderings


def default_ordering(g: Graph) -> Ordering:
    """Vertices and orbits in index order, oriented by the smaller index."""
    return Ordering(tuple(range(g.num_vertices)), tuple(orb[0] for orb in g.orbits))


def canonical_key(og: OrderedGraph) -> tuple:
    """Complete invariant of an ordered (B-)graph up to ordered isomorphism."""
    g, o = og.graph, og.ordering
    vpos = {v: i for i, v in enumerate(o.vertex_order)}
    edges = tuple((vpos[g.tail[e]], vpos[g.head[e]], g.is_half_loop(e)) for e in o.edge_order)
    if g.b is None:
        return (len(o.vertex_order), edges)
    vl = tuple(g.b.vertex_label(v) for v in o.vertex_order)
    el = tuple(g.b.edge_label(e) for e in o.edge_order)
    return (len(o.vertex_order), edges, vl, el)


def ordered_iso(a: OrderedGraph, b: OrderedGraph) -> Morphism | None:
    """The unique order-respecting isomorphism ``a -> b``, or None."""
    if canonical_key(a) != canonical_key(b):
        return None
    ga, gb = a.graph, b.graph
    vmap = [0] * ga.num_vertices
    for va, vb in zip(a.ordering.vertex_order, b.ordering.vertex_order):
        vmap[va] = vb
    emap = [0] * ga.num_dir_edges
    for ea, eb in zip(a.ordering.edge_order, b.ordering.edge_order):
        emap[ea] = eb
        emap[ga.inv[ea]] = gb.inv[eb]
    return Morphism(ga, gb, tuple(vmap), tuple(emap))


# ---------------------------------------------------------------- embeddings


def _as_graph(x: Graph | OrderedGraph) -> Graph:
    return x.graph if isinstance(x, OrderedGraph) else x


def _search_plan(s: Graph) -> list[tuple[str, int]]:
    """Roots and edges in an order where each edge's tail is already placed."""
    placed = [False] * s.num_vertices
    done_orbit = set()
    plan: list[tuple[str, int]] = []
    for r in range(s.num_vertices):
        if placed[r]:
            continue
        placed[r] = True
        plan.append(("root", r))
        queue = deque([r])
        while queue:
            x = queue.popleft()
            for e in s.out_edges[x]:
                key = min(e, s.inv[e])
                if key in done_orbit:
                    continue
                done_orbit.add(key)
                plan.append(("edge", e))
                y = s.head[e]
                if not placed[y]:
                    placed[y] = True
                    queue.append(y)
    return plan


def iter_embeddings(S: Graph | OrderedGraph, G: Graph | OrderedGraph,
                    respect_b: bool = True) -> Iterator[Morphism]:
    """All injective morphisms ``S -> G`` (B-morphisms when both carry B-labels)."""
    s, g = _as_graph(S), _as_graph(G)
    use_b = respect_b and s.b is not None and g.b is not None
    plan = _search_plan(s)
    vm = [-1] * s.num_vertices
    em = [-1] * s.num_dir_edges
    used_v: set[int] = set()
    used_e: set[int] = set()

    def vlabel_ok(v: int, w: int) -> bool:
        return not use_b or s.b.vertex_label(v) == g.b.vertex_label(w)  # type: ignore[union-attr]

    def elabel_ok(e: int, f: int) -> bool:
        return not use_b or s.b.edge_label(e) == g.b.edge_label(f)  # type: ignore[union-attr]

    def rec(i: int) -> Iterator[Morphism]:
        if i == len(plan):
            yield Morphism(s, g, tuple(vm), tuple(em))
            return
        kind, x = plan[i]
        if kind == "root":
            for w in range(g.num_vertices):
                if w in used_v or not vlabel_ok(x, w):
                    continue
                vm[x] = w
                used_v.add(w)
                yield from rec(i + 1)
                used_v.discard(w)
                vm[x] = -1
            return
        e = x
        half = s.inv[e] == e
        y = s.head[e]
        for f in g.out_edges[vm[s.tail[e]]]:
            if f in used_e or (g.inv[f] == f) != half or not elabel_ok(e, f):
                continue
            fy = g.head[f]
            new_vertex = vm[y] < 0
            if new_vertex:
                if fy in used_v or not vlabel_ok(y, fy):
                    continue
                vm[y] = fy
                used_v.add(fy)
            elif vm[y] != fy:
                continue
            em[e], em[s.inv[e]] = f, g.inv[f]
            used_e.add(f)
            used_e.add(g.inv[f])
            yield from rec(i + 1)
            used_e.discard(f)
            used_e.discard(g.inv[f])
            em[e] = em[s.inv[e]] = -1
            if new_vertex:
                used_v.discard(fy)
                vm[y] = -1

    yield from rec(0)


def count_embeddings(S: Graph | OrderedGraph, G: Graph | OrderedGraph,
                     respect_b: bool = True) -> int:
    """Number of injective (B-)morphisms from ``S`` to ``G``.

    The ordering on ``S`` plays no role in the count.
    """
    return sum(1 for _ in iter_embeddings(S, G, respect_b))


def aut_count(S: Graph | OrderedGraph) -> int:
    s = _as_graph(S)
    return count_embeddings(s, s)


def fibre_counts(s: Graph) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Fibre sizes ``a`` over directed B-edges and ``b`` over B-vertices."""
    if s.b is None:
        raise GraphError("graph has no B-structure")
    base = s.b.base
    a = [0] * base.num_dir_edges
    bv = [0] * base.num_vertices
    for e in range(s.num_dir_edges):
        a[s.b.emap[e]] += 1
    for v in range(s.num_vertices):
        bv[s.b.vmap[v]] += 1
    return tuple(a), tuple(bv)
