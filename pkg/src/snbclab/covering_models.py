"""Coordinatized degree-n covers of a base graph and the basic random models."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .graph_core import BStructure, Graph, GraphError, Morphism, build_graph

MODEL_NAMES = ("permutation", "cyclic", "permutation-involution", "cyclic-involution")
DEFAULT_ENUM_CAP = 10**7


class ModelError(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class PermutationAssignment:
    """``sigma[e]`` is a permutation of ``range(n)`` in one-line form, per directed B-edge."""

    n: int
    sigma: tuple[tuple[int, ...], ...]

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.sigma]


@dataclass(frozen=True)
class ModelSpec:
    name: str = "permutation"
    parity: str = "any"

    def __post_init__(self) -> None:
        if self.name not in MODEL_NAMES:
            raise ModelError(f"unknown model {self.name!r}; expected one of {MODEL_NAMES}")
        if self.parity not in ("even", "odd", "any"):
            raise ModelError("parity must be 'even', 'odd' or 'any'")

    @property
    def cyclic(self) -> bool:
        return self.name.startswith("cyclic")

    @property
    def allows_half_loops(self) -> bool:
        return self.name.endswith("involution")


def _invert(p: Sequence[int]) -> tuple[int, ...]:
    q = [0] * len(p)
    for i, j in enumerate(p):
        q[j] = i
    return tuple(q)


def check_assignment(B: Graph, a: PermutationAssignment) -> None:
    n = a.n
    if len(a.sigma) != B.num_dir_edges:
        raise ModelError("assignment must give one permutation per directed edge")
    for e, p in enumerate(a.sigma):
        if sorted(p) != list(range(n)):
            raise ModelError(f"sigma({B.edge_ids[e]!r}) is not a permutation of [n]")
        if a.sigma[B.inv[e]] != _invert(p):
            raise ModelError(f"sigma(inv e) != sigma(e)^-1 at {B.edge_ids[e]!r}")
        if B.is_half_loop(e):
            fixed = sum(1 for i in range(n) if p[i] == i)
            if fixed != n % 2:
                raise ModelError(f"half-loop {B.edge_ids[e]!r} needs an involution with {n % 2} fixed points")


def _orientation(B: Graph) -> list[int]:
    return [orb[0] for orb in B.orbits]


def _check_model(B: Graph, model: ModelSpec, n: int) -> None:
    if n < 1:
        raise ModelError("degree must be positive")
    has_half = any(B.is_half_loop(e) for e in range(B.num_dir_edges))
    if has_half and not model.allows_half_loops:
        raise ModelError(f"model {model.name!r} cannot act on half-loops")
    if model.parity == "even" and n % 2:
        raise ModelError("model requires even degree")
    if model.parity == "odd" and n % 2 == 0:
        raise ModelError("model requires odd degree")


def _extend(B: Graph, n: int, chosen: dict[int, tuple[int, ...]]) -> PermutationAssignment:
    sigma: list[tuple[int, ...] | None] = [None] * B.num_dir_edges
    for e, p in chosen.items():
        sigma[e] = p
        sigma[B.inv[e]] = _invert(p)
    return PermutationAssignment(n, tuple(sigma))  # type: ignore[arg-type]


def _rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, index])


def _draw(kind: str, n: int, rng: np.random.Generator) -> tuple[int, ...]:
    if kind == "perm":
        return tuple(rng.permutation(n).tolist())
    order = rng.permutation(n).tolist()
    p = list(range(n))
    if kind == "cycle":
        for i in range(n):
            p[order[i]] = order[(i + 1) % n]
        return tuple(p)
    # random (near-)perfect matching: pair consecutive entries of a uniform shuffle
    for i in range(0, n - 1, 2):
        x, y = order[i], order[i + 1]
        p[x], p[y] = y, x
    return tuple(p)


def _kind(B: Graph, e: int, model: ModelSpec) -> str:
    if B.is_half_loop(e):
        return "match"
    return "cycle" if model.cyclic else "perm"


def sample(B: Graph, model: ModelSpec, n: int, seed: int, index: int = 0) -> PermutationAssignment:
    """Draw the ``index``-th sample of the stream determined by ``seed``."""
    _check_model(B, model, n)
    rng = _rng(seed, index)
    chosen = {e: _draw(_kind(B, e, model), n, rng) for e in _orientation(B)}
    return _extend(B, n, chosen)


def sample_arrays(B: Graph, model: ModelSpec, n: int, seed: int, index: int = 0) -> list[np.ndarray]:
    """Same draw as :func:`sample`, as numpy index arrays (for large ``n``)."""
    _check_model(B, model, n)
    rng = _rng(seed, index)
    out: list[np.ndarray | None] = [None] * B.num_dir_edges
    for e in _orientation(B):
        kind = _kind(B, e, model)
        if kind == "perm":
            p = rng.permutation(n)
        else:
            order = rng.permutation(n)
            p = np.arange(n)
            if kind == "cycle":
                p[order] = np.roll(order, -1)
            else:
                m = n - n % 2
                p[order[0:m:2]] = order[1:m:2]
                p[order[1:m:2]] = order[0:m:2]
        q = np.empty(n, dtype=p.dtype)
        q[p] = np.arange(n)
        out[e] = p
        out[B.inv[e]] = q
    return out  # type: ignore[return-value]


def _matchings(items: list[int]) -> Iterator[list[tuple[int, int]]]:
    """All perfect matchings (even size) or near-perfect matchings (odd size)."""
    if len(items) <= 1:
        yield []
        return
    if len(items) % 2:
        for i, fixed in enumerate(items):
            rest = items[:i] + items[i + 1:]
            yield from _matchings(rest)
        return
    first = items[0]
    for j in range(1, len(items)):
        rest = items[1:j] + items[j + 1:]
        for m in _matchings(rest):
            yield [(first, items[j])] + m


def _choices(kind: str, n: int) -> tuple[int, Iterator[tuple[int, ...]]]:
    if kind == "perm":
        return math.factorial(n), itertools.permutations(range(n))
    if kind == "cycle":
        def cycles() -> Iterator[tuple[int, ...]]:
            for rest in itertools.permutations(range(1, n)):
                order = (0,) + rest
                p = [0] * n
                for i in range(n):
                    p[order[i]] = order[(i + 1) % n]
                yield tuple(p)
        return math.factorial(n - 1), cycles()

    def matchings() -> Iterator[tuple[int, ...]]:
        for m in _matchings(list(range(n))):
            p = list(range(n))
            for x, y in m:
                p[x], p[y] = y, x
            yield tuple(p)
    count = math.prod(range(1, n + 1, 2)) if n % 2 else math.prod(range(1, n, 2))
    return count, matchings()


def atom_count(B: Graph, model: ModelSpec, n: int) -> int:
    _check_model(B, model, n)
    return math.prod(_choices(_kind(B, e, model), n)[0] for e in _orientation(B))


def enumerate_all(B: Graph, model: ModelSpec, n: int,
                  cap: int = DEFAULT_ENUM_CAP) -> Iterator[PermutationAssignment]:
    """Every atom of the model's finite probability space once (uniform weights)."""
    total = atom_count(B, model, n)
    if total > cap:
        raise CapExceeded(f"{total} assignments exceed the enumeration cap {cap}")
    orient = _orientation(B)
    lists = [list(_choices(_kind(B, e, model), n)[1]) for e in orient]
    for combo in itertools.product(*lists):
        yield _extend(B, n, dict(zip(orient, combo)))


def assemble_cover(B: Graph, a: PermutationAssignment) -> Graph:
    """The coordinatized cover as a B-graph; vertex ``(v, i)`` has id ``f"{v}:{i+1}"``."""
    check_assignment(B, a)
    n = a.n
    vids = [f"{v}:{i + 1}" for v in B.vertex_ids for i in range(n)]
    recs = []
    for e, eid in enumerate(B.edge_ids):
        s = a.sigma[e]
        ieid = B.edge_ids[B.inv[e]]
        tv, hv = B.vertex_ids[B.tail[e]], B.vertex_ids[B.head[e]]
        for i in range(n):
            j = s[i]
            recs.append((f"{eid}:{i + 1}", f"{tv}:{i + 1}", f"{hv}:{j + 1}", f"{ieid}:{j + 1}"))
    g = build_graph(vids, recs)
    vmap = tuple(v for v in range(B.num_vertices) for _ in range(n))
    emap = tuple(e for e in range(B.num_dir_edges) for _ in range(n))
    return g.with_b(BStructure(B, vmap, emap))


def cover_projection(G: Graph) -> Morphism:
    if G.b is None:
        raise GraphError("not a B-graph")
    return Morphism(G, G.b.base, G.b.vmap, G.b.emap)
