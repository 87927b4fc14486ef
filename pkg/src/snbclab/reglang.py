"""Regular languages over directed-edge alphabets.

Letters are directed-edge ids of a base graph.  Counts are taken over
accepting runs, which equals counting words for unambiguous (e.g.
deterministic) automata.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .graph_core import Graph, OrderedGraph

JET_ORDER_CAP = 6

Monomial = tuple[tuple[Hashable, int], ...]


class DegreeCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Automaton:
    states: tuple
    initial: Hashable
    accepting: frozenset
    transitions: tuple[tuple[Hashable, Hashable, Hashable, object], ...]

    def __post_init__(self) -> None:
        sset = set(self.states)
        if self.initial not in sset:
            raise ValueError("initial state is not a state")
        if not set(self.accepting) <= sset:
            raise ValueError("accepting states must be states")
        for src, _, dst, _ in self.transitions:
            if src not in sset or dst not in sset:
                raise ValueError(f"transition {src!r} -> {dst!r} uses an unknown state")

    @classmethod
    def build(cls, states: Sequence, initial, accepting, transitions) -> "Automaton":
        trans = []
        for t in transitions:
            trans.append(tuple(t) if len(t) == 4 else (t[0], t[1], t[2], 1))
        return cls(tuple(states), initial, frozenset(accepting), tuple(trans))

    @property
    def letters(self) -> list:
        return sorted({t[1] for t in self.transitions}, key=str)

    @property
    def deterministic(self) -> bool:
        seen = set()
        for src, a, _, _ in self.transitions:
            if (src, a) in seen:
                return False
            seen.add((src, a))
        return True

    def step(self, current: Mapping, letter) -> dict:
        """Advance a state -> weight map by one letter."""
        out: dict = {}
        for src, a, dst, w in self.transitions:
            if a == letter and src in current:
                out[dst] = out.get(dst, 0) + current[src] * w
        return out

    def accepts(self, word: Sequence) -> bool:
        cur = {self.initial: 1}
        for a in word:
            cur = {q: 1 for q in self.step(cur, a)}
            if not cur:
                return False
        return any(q in self.accepting for q in cur)

    def to_json(self) -> dict:
        return {
            "states": [str(s) for s in self.states],
            "initial": str(self.initial),
            "accepting": sorted(str(s) for s in self.accepting),
            "transitions": [
                {"from": str(s), "letter": str(a), "to": str(d), **({} if w == 1 else {"weight": _num_json(w)})}
                for s, a, d, w in self.transitions
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Automaton":
        try:
            trans = [(t["from"], t["letter"], t["to"], _num_from_json(t.get("weight", 1)))
                     for t in data["transitions"]]
            return cls.build(data["states"], data["initial"], data["accepting"], trans)
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed automaton: {exc}") from exc


def _num_json(x):
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return str(x)
    z = complex(x)
    return [z.real, z.imag]


def _num_from_json(x):
    if isinstance(x, list):
        return complex(*x)
    if isinstance(x, str):
        return Fraction(x)
    return x


def _state_index(a: Automaton) -> dict:
    return {s: i for i, s in enumerate(a.states)}


def _weight(beta: Mapping | None, letter, w):
    return w if beta is None else w * beta.get(letter, 1)


def transfer_matrix(a: Automaton, beta: Mapping | None = None) -> np.ndarray:
    """``M[s1, s2]`` = sum of letter weights over transitions ``s1 -> s2`` (object dtype, exact)."""
    idx = _state_index(a)
    n = len(a.states)
    m = np.zeros((n, n), dtype=object)
    for src, letter, dst, w in a.transitions:
        m[idx[src], idx[dst]] += _weight(beta, letter, w)
    return m


def weighted_count(a: Automaton, beta: Mapping | None = None, k: int = 0) -> object:
    """``sum over accepted runs of length k`` of the product of letter weights."""
    if k < 0:
        raise ValueError("k must be non-negative")
    m = transfer_matrix(a, beta)
    idx = _state_index(a)
    vec = np.zeros(len(a.states), dtype=object)
    vec[idx[a.initial]] = 1
    for _ in range(k):
        vec = vec.dot(m)
    return sum((vec[idx[q]] for q in a.accepting), 0)


def iter_words(a: Automaton, k: int) -> Iterator[tuple[tuple, dict]]:
    """Words of length ``k`` with at least one run, with their state -> run-weight map.

    Prefixes that admit no run are pruned.
    """
    letters = a.letters

    def rec(prefix: tuple, cur: dict) -> Iterator[tuple[tuple, dict]]:
        if len(prefix) == k:
            yield prefix, cur
            return
        for x in letters:
            nxt = a.step(cur, x)
            if nxt:
                yield from rec(prefix + (x,), nxt)

    yield from rec((), {a.initial: 1})


def language_words(a: Automaton, k: int) -> list[tuple]:
    return [w for w, cur in iter_words(a, k) if any(q in a.accepting for q in cur)]


def weighted_count_brute(a: Automaton, beta: Mapping | None = None, k: int = 0) -> object:
    """Word-by-word oracle for :func:`weighted_count`."""
    total: object = 0
    for w, cur in iter_words(a, k):
        runs = sum((v for q, v in cur.items() if q in a.accepting), 0)
        if runs:
            wt: object = 1
            for x in w:
                wt = wt * (1 if beta is None else beta.get(x, 1))
            total = total + runs * wt
    return total


# ---------------------------------------------------------------- jets and occurrence polynomials


def _jet_mul(p: dict, q: dict, order: int) -> dict:
    out: dict = {}
    for a, x in p.items():
        da = sum(a)
        for b, y in q.items():
            if da + sum(b) > order:
                continue
            key = tuple(i + j for i, j in zip(a, b))
            out[key] = out.get(key, 0) + x * y
    return out


def _jet_add(p: dict, q: dict) -> dict:
    out = dict(p)
    for key, v in q.items():
        out[key] = out.get(key, 0) + v
    return out


def _stirling2(n: int, k: int) -> int:
    return sum((-1) ** (k - j) * math.comb(k, j) * j**n for j in range(k + 1)) // math.factorial(k)


def _normalize_poly(poly) -> dict[Monomial, object]:
    """Accept a constant, or a mapping from monomials to coefficients.

    A monomial is a mapping or tuple of ``(variable, exponent)`` pairs.
    """
    if not isinstance(poly, Mapping):
        return {(): poly}
    out: dict[Monomial, object] = {}
    for mono, c in poly.items():
        items = mono.items() if isinstance(mono, Mapping) else mono
        key = tuple(sorted(((v, e) for v, e in items if e), key=lambda t: str(t[0])))
        out[key] = out.get(key, 0) + c
    return out


def _poly_degree(poly: Mapping[Monomial, object]) -> int:
    return max((sum(e for _, e in mono) for mono in poly), default=0)


def occurrence_poly_sum(a: Automaton, poly, k: int, beta: Mapping | None = None,
                        variables: Mapping | None = None) -> object:
    """``sum over accepted words w of length k`` of ``beta^occur(w) * P(occur(w))``.

    ``variables`` groups letters into occurrence variables (default: one
    variable per letter).  The sum is read off from transfer-matrix powers
    over truncated jets, with powers rewritten in falling factorials.
    """
    poly = _normalize_poly(poly)
    deg = _poly_degree(poly)
    if deg > JET_ORDER_CAP:
        raise DegreeCapExceeded(f"total degree {deg} exceeds the jet order cap {JET_ORDER_CAP}")
    var_of = dict(variables) if variables is not None else {x: x for x in a.letters}
    names = sorted({v for mono in poly for v, _ in mono} | set(var_of.values()), key=str)
    pos = {v: i for i, v in enumerate(names)}
    nv = len(names)
    zero = (0,) * nv

    def letter_jet(letter, w) -> dict:
        base = _weight(beta, letter, w)
        v = var_of.get(letter)
        if v is None or deg == 0:
            return {zero: base}
        unit = [0] * nv
        unit[pos[v]] = 1
        return {zero: base, tuple(unit): base}

    idx = _state_index(a)
    cur: list[dict] = [dict() for _ in a.states]
    cur[idx[a.initial]] = {zero: 1}
    for _ in range(k):
        nxt: list[dict] = [dict() for _ in a.states]
        for src, letter, dst, w in a.transitions:
            j = cur[idx[src]]
            if j:
                nxt[idx[dst]] = _jet_add(nxt[idx[dst]], _jet_mul(j, letter_jet(letter, w), deg))
        cur = nxt
    jet: dict = {}
    for q in a.accepting:
        jet = _jet_add(jet, cur[idx[q]])
    # x^e = sum_j S(e, j) j! C(x, j); the jet coefficient at multi-index J is sum beta^w prod C(occ, J)
    total: object = 0
    for mono, c in poly.items():
        per_var = [[(j, _stirling2(e, j) * math.factorial(j)) for j in range(e + 1) if _stirling2(e, j)]
                   for _, e in mono]
        for combo in product(*per_var):
            key = [0] * nv
            coef: object = c
            for (v, _), (j, s) in zip(mono, combo):
                key[pos[v]] += j
                coef = coef * s
            total = total + coef * jet.get(tuple(key), 0)
    return total


def eval_poly(poly, values: Mapping) -> object:
    total: object = 0
    for mono, c in _normalize_poly(poly).items():
        t: object = c
        for v, e in mono:
            t = t * values.get(v, 0) ** e
        total = total + t
    return total


def occurrence_poly_sum_brute(a: Automaton, poly, k: int, beta: Mapping | None = None,
                              variables: Mapping | None = None) -> object:
    var_of = dict(variables) if variables is not None else {x: x for x in a.letters}
    total: object = 0
    for w, cur in iter_words(a, k):
        runs = sum((v for q, v in cur.items() if q in a.accepting), 0)
        if not runs:
            continue
        occ: dict = {}
        wt: object = 1
        for x in w:
            if x in var_of:
                occ[var_of[x]] = occ.get(var_of[x], 0) + 1
            wt = wt * (1 if beta is None else beta.get(x, 1))
        total = total + runs * wt * eval_poly(poly, occ)
    return total


# ---------------------------------------------------------------- B-types


def nb_automaton(base: Graph, accept_all: bool = True) -> Automaton:
    """Deterministic automaton of non-backtracking walks in ``base``: state = last edge."""
    ids = base.edge_ids
    states = ("^",) + tuple(ids)
    trans = [("^", ids[e], ids[e], 1) for e in range(base.num_dir_edges)]
    for e in range(base.num_dir_edges):
        for f in base.out_edges[base.head[e]]:
            if f != base.inv[e]:
                trans.append((ids[e], ids[f], ids[f], 1))
    return Automaton.build(states, "^", ids if accept_all else (), trans)


def single_word_automaton(word: Sequence) -> Automaton:
    states = tuple(range(len(word) + 1))
    trans = [(i, x, i + 1, 1) for i, x in enumerate(word)]
    return Automaton.build(states, 0, [len(word)], trans)


@dataclass
class BType:
    """A type graph with one automaton per directed edge; letters are base edge ids."""

    type_graph: Graph
    base: Graph
    languages: dict[int, Automaton]
    ordering: OrderedGraph | None = None

    def __post_init__(self) -> None:
        missing = set(range(self.type_graph.num_dir_edges)) - set(self.languages)
        if missing:
            raise ValueError(f"no language for type edges {sorted(missing)}")

    @classmethod
    def of(cls, t: Graph | OrderedGraph, base: Graph, languages: Mapping) -> "BType":
        og = t if isinstance(t, OrderedGraph) else None
        g = t.graph if isinstance(t, OrderedGraph) else t
        langs = {}
        for key, aut in languages.items():
            e = key if isinstance(key, int) else g.eindex[key]
            langs[e] = aut
        return cls(g, base, langs, og)


def full_nb_btype(t: Graph | OrderedGraph, base: Graph) -> BType:
    """Every type edge may carry any nonempty non-backtracking word; half-loops any half-loop letter."""
    g = t.graph if isinstance(t, OrderedGraph) else t
    nb = nb_automaton(base)
    halves = [base.edge_ids[e] for e in range(base.num_dir_edges) if base.is_half_loop(e)]
    half_aut = Automaton.build((0, 1), 0, [1], [(0, x, 1, 1) for x in halves])
    langs = {e: (half_aut if g.is_half_loop(e) else nb) for e in range(g.num_dir_edges)}
    return BType.of(t, base, langs)


def _reachable(a: Automaton) -> set:
    seen = {a.initial}
    todo = [a.initial]
    while todo:
        q = todo.pop()
        for src, _, dst, _ in a.transitions:
            if src == q and dst not in seen:
                seen.add(dst)
                todo.append(dst)
    return seen


def _coreachable(a: Automaton) -> set:
    seen = set(a.accepting)
    todo = list(seen)
    while todo:
        q = todo.pop()
        for src, _, dst, _ in a.transitions:
            if dst == q and src not in seen:
                seen.add(src)
                todo.append(src)
    return seen


def trim(a: Automaton) -> Automaton:
    """Keep only states that are reachable and co-reachable (the initial state always stays)."""
    keep = (_reachable(a) & _coreachable(a)) | {a.initial}
    trans = [t for t in a.transitions if t[0] in keep and t[2] in keep]
    return Automaton.build([s for s in a.states if s in keep], a.initial,
                           [s for s in a.accepting if s in keep], trans)


def _determinize(a: Automaton, alphabet: Sequence) -> tuple[frozenset, dict, set]:
    start = frozenset([a.initial])
    delta: dict = {}
    accept = set()
    todo = deque([start])
    seen = {start}
    while todo:
        cur = todo.popleft()
        if cur & a.accepting:
            accept.add(cur)
        for x in alphabet:
            nxt = frozenset(d for s, y, d, _ in a.transitions if y == x and s in cur)
            delta[cur, x] = nxt
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return start, delta, accept


def languages_equal(a1: Automaton, a2: Automaton) -> bool:
    alphabet = sorted(set(a1.letters) | set(a2.letters), key=str)
    s1, d1, f1 = _determinize(a1, alphabet)
    s2, d2, f2 = _determinize(a2, alphabet)
    seen = {(s1, s2)}
    todo = [(s1, s2)]
    while todo:
        p, q = todo.pop()
        if (p in f1) != (q in f2):
            return False
        for x in alphabet:
            nxt = (d1[p, x], d2[q, x])
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return True


def reverse_automaton(a: Automaton, base: Graph) -> Automaton:
    """Accepts the walk reversals ``inv(x_k) ... inv(x_1)`` of accepted words."""
    inv_id = {base.edge_ids[e]: base.edge_ids[base.inv[e]] for e in range(base.num_dir_edges)}
    start = ("rev-start",)
    states = (start,) + tuple(("rev", s) for s in a.states)
    trans = [(("rev", d), inv_id[x], ("rev", s), w) for s, x, d, w in a.transitions]
    for s, x, d, w in a.transitions:
        if d in a.accepting:
            trans.append((start, inv_id[x], ("rev", s), w))
    accepting = [("rev", a.initial)]
    if a.initial in a.accepting:
        accepting.append(start)
    return Automaton.build(states, start, accepting, trans)


def _escapes_nb(a: Automaton, base: Graph) -> bool:
    """True if some accepted word is not a non-backtracking walk of ``base``."""
    nb = nb_automaton(base)
    nb_next: dict = {}
    for s, x, d, _ in nb.transitions:
        nb_next[s, x] = d
    sink = ("sink",)
    start = (a.initial, nb.initial)
    seen = {start}
    todo = [start]
    while todo:
        q, r = todo.pop()
        if r == sink and q in a.accepting:
            return True
        for s, x, d, _ in a.transitions:
            if s != q:
                continue
            r2 = sink if r == sink else nb_next.get((r, x), sink)
            nxt = (d, r2)
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return False


def _half_loop_violation(a: Automaton, base: Graph) -> bool:
    halves = {base.edge_ids[e] for e in range(base.num_dir_edges) if base.is_half_loop(e)}
    live = _coreachable(a)
    if a.initial in a.accepting:
        return True
    for s, x, d, _ in a.transitions:
        if s == a.initial and d in live:
            if x not in halves or any(s2 == d and d2 in live for s2, _, d2, _ in a.transitions):
                return True
    return False


@dataclass
class BTypeReport:
    nb_violations: list = field(default_factory=list)
    empty_word: list = field(default_factory=list)
    reversal_violations: list = field(default_factory=list)
    half_loop_violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.nb_violations or self.empty_word or self.reversal_violations
                    or self.half_loop_violations)

    def to_json(self) -> dict:
        return {"valid": self.valid, "nb_violations": self.nb_violations, "empty_word": self.empty_word,
                "reversal_violations": self.reversal_violations,
                "half_loop_violations": self.half_loop_violations}


def validate_btype(bt: BType) -> BTypeReport:
    t = bt.type_graph
    rep = BTypeReport()
    for e in range(t.num_dir_edges):
        a = bt.languages[e]
        eid = t.edge_ids[e]
        if a.initial in a.accepting:
            rep.empty_word.append(eid)
        if _escapes_nb(a, bt.base):
            rep.nb_violations.append(eid)
        if t.is_half_loop(e) and _half_loop_violation(a, bt.base):
            rep.half_loop_violations.append(eid)
        ie = t.inv[e]
        if e <= ie and not languages_equal(reverse_automaton(a, bt.base), bt.languages[ie]):
            rep.reversal_violations.append([eid, t.edge_ids[ie]])
    return rep


def wording_in_type(wording: Mapping, bt: BType) -> bool:
    """``wording`` maps type edges (index or id) to words; checks membership and reversal."""
    t = bt.type_graph
    words = {(k if isinstance(k, int) else t.eindex[k]): tuple(w) for k, w in wording.items()}
    inv_id = {bt.base.edge_ids[e]: bt.base.edge_ids[bt.base.inv[e]] for e in range(bt.base.num_dir_edges)}
    for e in range(t.num_dir_edges):
        if e not in words or not words[e] or not bt.languages[e].accepts(words[e]):
            return False
        ie = t.inv[e]
        if ie in words and words[ie] != tuple(inv_id[x] for x in reversed(words[e])):
            return False
    return True


def eigenvalues_of_type(bt: BType, tol: float = 1e-9) -> list[complex]:
    """Union (as a set) of transfer-matrix eigenvalues of the supplied automata."""
    out: list[complex] = []
    for e in range(bt.type_graph.num_dir_edges):
        a = bt.languages[e]
        if not a.states:
            continue
        m = transfer_matrix(a).astype(complex)
        for z in np.linalg.eigvals(m):
            if abs(z) < tol:
                z = 0j
            if not any(abs(z - y) <= 1e-7 * max(1.0, abs(z)) for y in out):
                out.append(complex(z))
    return sorted(out, key=lambda z: (-abs(z), z.real, z.imag))


def _orientation(bt: BType) -> list[int]:
    if bt.ordering is not None:
        return list(bt.ordering.ordering.edge_order)
    return [orb[0] for orb in bt.type_graph.orbits]


def _orbit_rep(base: Graph) -> dict:
    """Maps each directed base edge id to the id of its orbit's first edge."""
    return {base.edge_ids[e]: base.edge_ids[orb[0]] for orb in base.orbits for e in orb}


def _normalize_wording_poly(bt: BType, poly) -> dict[Monomial, object]:
    """Variables are pairs ``(base edge, type edge)`` given by id or index; normalized to
    (orbit-representative base id, oriented type edge index)."""
    t, b = bt.type_graph, bt.base
    rep_b = _orbit_rep(b)
    oriented = {}
    for e in _orientation(bt):
        oriented[e] = e
        oriented[t.inv[e]] = e
    out: dict[Monomial, object] = {}
    for mono, c in _normalize_poly(poly).items():
        items: dict = {}
        for (vb, vt), ex in mono:
            bid = b.edge_ids[vb] if isinstance(vb, int) else vb
            te = vt if isinstance(vt, int) else t.eindex[vt]
            key = (rep_b[bid], oriented[te])
            items[key] = items.get(key, 0) + ex
        mk = tuple(sorted(items.items(), key=lambda kv: str(kv[0])))
        out[mk] = out.get(mk, 0) + c
    return out


def _lengths_by_edge(bt: BType, lengths) -> dict[int, int]:
    t = bt.type_graph
    if isinstance(lengths, Mapping):
        out = {}
        for key, v in lengths.items():
            e = key if isinstance(key, int) else t.eindex[key]
            out[e] = int(v)
            out[t.inv[e]] = int(v)
        return out
    orient = _orientation(bt)
    if len(lengths) != len(orient):
        raise ValueError("need one length per oriented type edge")
    out = {}
    for e, v in zip(orient, lengths):
        out[e] = out[t.inv[e]] = int(v)
    return out


def wording_summation(bt: BType, poly, lengths) -> object:
    """``sum over B-wordings W with |W(e)| = k(e)`` of ``P(X(W))`` as a product over oriented edges.

    ``X(e_B, e_T)`` counts occurrences of the orbit of ``e_B`` in the word on ``e_T``.
    """
    k = _lengths_by_edge(bt, lengths)
    poly_n = _normalize_wording_poly(bt, poly)
    rep_b = _orbit_rep(bt.base)
    total: object = 0
    for mono, c in poly_n.items():
        term: object = c
        for e in _orientation(bt):
            sub = {((vb, e), ex) for (vb, te), ex in mono if te == e}
            var_of = {x: (rep_b[x], e) for x in rep_b}
            sub_poly = {tuple(sorted(sub, key=str)): 1}
            term = term * occurrence_poly_sum(bt.languages[e], sub_poly, k[e], variables=var_of)
            if term == 0:
                break
        total = total + term
    return total


def iter_wordings(bt: BType, lengths) -> Iterator[dict[int, tuple]]:
    """All wordings with the given lengths: one accepted word per oriented edge, reversals on the rest."""
    t, b = bt.type_graph, bt.base
    k = _lengths_by_edge(bt, lengths)
    inv_id = {b.edge_ids[e]: b.edge_ids[b.inv[e]] for e in range(b.num_dir_edges)}
    orient = _orientation(bt)
    choices = []
    for e in orient:
        ws = []
        for w in language_words(bt.languages[e], k[e]):
            rw = tuple(inv_id[x] for x in reversed(w))
            if t.inv[e] == e and rw != w:
                continue
            if bt.languages[t.inv[e]].accepts(rw):
                ws.append((w, rw))
        choices.append(ws)
    for combo in product(*choices):
        out = {}
        for e, (w, rw) in zip(orient, combo):
            out[e] = w
            out[t.inv[e]] = rw if t.inv[e] != e else w
        yield out


def wording_summation_brute(bt: BType, poly, lengths) -> object:
    poly_n = _normalize_wording_poly(bt, poly)
    rep_b = _orbit_rep(bt.base)
    orient = _orientation(bt)
    total: object = 0
    for wd in iter_wordings(bt, lengths):
        x: dict = {}
        for e in orient:
            for letter in wd[e]:
                key = (rep_b[letter], e)
                x[key] = x.get(key, 0) + 1
        total = total + eval_poly(poly_n, x)
    return total


def count_wordings(bt: BType, lengths) -> int:
    k = _lengths_by_edge(bt, lengths)
    return math.prod(len(language_words(bt.languages[e], k[e])) for e in _orientation(bt))
