"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 a budget or enumeration cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from contextlib import contextmanager
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from ._budget import BUDGET_ENV, BudgetExceeded, default_budget
from .covering_models import CapExceeded, ModelError, ModelSpec, assemble_cover, enumerate_all, sample
from .graph_core import GraphError, euler_char, graph_to_json, is_connected, is_pruned, load_ordered, order_of, validate_graph
from .spectral import ConvergenceError, hashimoto, mu1

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3


class CliError(ValueError):
    pass


# ---------------------------------------------------------------- argument helpers


def int_range(text: str) -> list[int]:
    """``"3..8"``, ``"1,2,5"`` or ``"4"``."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer range {text!r}") from exc
    if not out:
        raise argparse.ArgumentTypeError("empty range")
    return out


def int_vector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer vector {text!r}") from exc


def positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc


def _load_graph(path: str, base=None):
    return validate_graph(_read_json(path), base)


def _load_ordered(path: str, base=None):
    return load_ordered(_read_json(path), base)


def _emit(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_text(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_json_default)


def _json_default(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return str(x)


def _model(args) -> ModelSpec:
    return ModelSpec(args.model, args.parity)


@contextmanager
def _budget_env(value: int | None) -> Iterator[None]:
    if value is None:
        yield
        return
    old = os.environ.get(BUDGET_ENV)
    os.environ[BUDGET_ENV] = str(value)
    try:
        yield
    finally:
        if old is None:
            os.environ.pop(BUDGET_ENV, None)
        else:
            os.environ[BUDGET_ENV] = old


# ---------------------------------------------------------------- commands


def cmd_graph_info(args) -> int:
    g = _load_graph(args.graph)
    info = {
        "vertices": g.num_vertices,
        "dir_edges": g.num_dir_edges,
        "order": order_of(g),
        "euler_char": str(euler_char(g)),
        "connected": is_connected(g),
        "pruned": is_pruned(g),
        "mu1": mu1(g, tol=args.tol),
    }
    _emit(args, _json_text(info))
    return EXIT_OK


def cmd_mu1(args) -> int:
    _emit(args, f"{mu1(_load_graph(args.graph), tol=args.tol):.12g}")
    return EXIT_OK


def cmd_hashimoto(args) -> int:
    _emit(args, hashimoto(_load_graph(args.graph)).to_csv())
    return EXIT_OK


def cmd_cover_sample(args) -> int:
    base = _load_graph(args.base)
    a = sample(base, _model(args), args.n, args.seed, args.index)
    g = assemble_cover(base, a)
    _emit(args, _json_text({"sigma": {str(base.edge_ids[e]): list(p) for e, p in enumerate(a.sigma)},
                            "cover": graph_to_json(g)}))
    return EXIT_OK


def cmd_cover_enumerate(args) -> int:
    base = _load_graph(args.base)
    cap = args.budget if args.budget is not None else default_budget()
    lines = [json.dumps({str(base.edge_ids[e]): list(p) for e, p in enumerate(a.sigma)}, sort_keys=True)
             for a in enumerate_all(base, _model(args), args.n, cap)]
    _emit(args, "\n".join(lines))
    return EXIT_OK


def cmd_walks_count(args) -> int:
    from .walks_homotopy import count_snbc, count_snbc_enumerated

    g = _load_graph(args.graph)
    value = count_snbc_enumerated(g, args.k) if args.enumerate else count_snbc(g, args.k)
    _emit(args, str(value))
    return EXIT_OK


def _parse_walk(g, text: str) -> tuple[int, ...]:
    try:
        return tuple(g.eindex[x.strip()] for x in text.split(",") if x.strip())
    except KeyError as exc:
        raise CliError(f"unknown edge {exc.args[0]!r} in walk") from exc


def cmd_homotopy_reduce(args) -> int:
    from .walks_homotopy import is_snbc, reduce_walk

    base = _load_graph(args.base) if args.base else None
    g = _load_graph(args.graph, base)
    w = _parse_walk(g, args.walk)
    if not is_snbc(g, w):
        raise CliError("the walk is not strictly non-backtracking closed")
    red = reduce_walk(g, w)
    out = red.to_json()
    out["multiplicities"] = list(red.multiplicities or ())
    _emit(args, _json_text(out))
    return EXIT_OK


def cmd_legal_count(args) -> int:
    from .walks_homotopy import legal_count

    t = _load_ordered(args.type)
    _emit(args, str(legal_count(t, args.m)))
    return EXIT_OK


def _load_polyexp(path: str):
    from .polyexp import Polyexponential

    return Polyexponential.from_json(_read_json(path))


def _load_g(spec: str):
    """``const:<value>`` or a polyexponential JSON file."""
    if spec.startswith("const:"):
        value = Fraction(spec[6:])
        value = int(value) if value.denominator == 1 else value
        return lambda m: value
    return _load_polyexp(spec)


def cmd_convolve(args) -> int:
    from .polyexp import certified_dot_convolve, certified_dot_convolve_numeric

    f = _load_polyexp(args.f)
    g = _load_g(args.g)
    xi = args.xi or [1] * f.dim
    if args.mode == "numeric":
        rows = [(k, certified_dot_convolve_numeric(f, g, xi, k)) for k in args.k]
        _emit(args, "k,value\n" + "\n".join(f"{k},{_num_text(v)}" for k, v in rows))
        return EXIT_OK
    res = certified_dot_convolve(f, g, xi, max(args.k))
    out = {"principal": res.principal.to_json(), "rate": res.rate, "horizon": res.horizon,
           "residual": {str(k): _num_text(res.residual(k)) for k in args.k if k >= 1}}
    _emit(args, _json_text(out))
    return EXIT_OK


def _num_text(v) -> str:
    if isinstance(v, complex):
        return repr(v.real) if v.imag == 0 else repr(v)
    return str(v)


def _parse_beta(text: str | None):
    if not text:
        return None
    raw = json.loads(text)
    return {k: Fraction(str(v)) if isinstance(v, (int, float, str)) else complex(*v) for k, v in raw.items()}


def cmd_reglang_count(args) -> int:
    from .reglang import Automaton, weighted_count

    a = Automaton.from_json(_read_json(args.automaton))
    beta = _parse_beta(args.beta)
    rows = [(k, weighted_count(a, beta, k)) for k in args.k]
    _emit(args, "k,value\n" + "\n".join(f"{k},{_num_text(_tidy(v))}" for k, v in rows))
    return EXIT_OK


def _tidy(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    return v


def _load_btype(args):
    from .reglang import Automaton, BType, full_nb_btype

    base = _load_graph(args.base)
    t = _load_ordered(args.type)
    if args.languages:
        raw = _read_json(args.languages)
        langs = {eid: Automaton.from_json(a) for eid, a in raw.items()}
        return BType.of(t, base, langs)
    return full_nb_btype(t, base)


def _parse_poly(text: str | None):
    """JSON list of ``{"coeff": c, "vars": [[base_edge, type_edge, exponent], ...]}``."""
    if not text:
        return 1
    poly = {}
    for term in json.loads(text):
        mono = tuple(((b, t), int(e)) for b, t, e in term.get("vars", []))
        poly[mono] = poly.get(mono, 0) + Fraction(str(term.get("coeff", 1)))
    return poly


def cmd_btype_sum(args) -> int:
    from .reglang import validate_btype, wording_summation

    bt = _load_btype(args)
    report = validate_btype(bt)
    if not report.valid:
        raise CliError(f"invalid B-type: {report.to_json()}")
    value = wording_summation(bt, _parse_poly(args.poly), args.lengths)
    _emit(args, _num_text(_tidy(value)))
    return EXIT_OK


def cmd_pairs_identity(args) -> int:
    from .graph_core import Ordering, OrderedGraph, empty_graph
    from .pairs import per_graph_pair_identity

    base = _load_graph(args.base)
    g = _load_graph(args.graph, base)
    t = _load_ordered(args.type)
    psi = _load_ordered(args.psi, base) if args.psi else OrderedGraph(empty_graph(), Ordering((), ()))
    xi = args.xi or [1] * len(t.ordering.edge_order)
    lhs, rhs, ok = per_graph_pair_identity(g, t, psi, xi, args.k)
    _emit(args, _json_text({"lhs": lhs, "rhs": rhs, "equal": ok}))
    return EXIT_OK if ok else 1


def _statistic(args, base):
    from . import expansion_harness as eh

    if args.stat == "snbc":
        return eh.snbc_total_statistic(args.k, base)
    if args.stat == "type":
        if not args.type:
            raise CliError("--stat type needs --type")
        t = _load_ordered(args.type)
        return eh.snbc_type_statistic(t, args.k, xi=args.xi)
    if args.stat == "embeddings":
        if not args.graph:
            raise CliError("--stat embeddings needs --graph (a B-graph over --base)")
        s = _load_graph(args.graph, base)
        inner = eh.embedding_statistic(s)
        # independent of k; repeated so the CSV keeps one row per k
        width = len(args.k)
        batch = (lambda perms: np.repeat(inner.batch(perms)[:, None], width, axis=1)) if inner.batch else None
        return eh.Statistic("embeddings", lambda g: (inner(g),) * width, batch)
    if args.stat == "min-order":
        return eh.min_order_statistic(args.k, args.min_order)
    raise CliError(f"unknown statistic {args.stat!r}")


def cmd_expansion_fit(args) -> int:
    from .expansion_harness import fit_expansion

    base = _load_graph(args.base)
    if args.r > len(args.n):
        raise CliError("need at least r values of n")
    fit = fit_expansion(_statistic(args, base), base, _model(args), args.n, args.k, args.r, args.mode,
                        args.samples, args.seed, args.workers, args.window_c,
                        args.budget if args.budget is not None else default_budget())
    _emit(args, fit.to_csv())
    return EXIT_OK


def _verify_config(args):
    from .expansion_harness import VerifyConfig

    return VerifyConfig(n_grid=tuple(args.n), ks=tuple(args.k), mode=args.mode, samples=args.samples,
                        seed=args.seed, workers=args.workers, window_c=args.window_c,
                        vanish_tol=args.tol, cap=args.budget if args.budget is not None else default_budget())


def cmd_verify_walks(args) -> int:
    from .expansion_harness import report_json, verify_theorem_walks

    base = _load_graph(args.base)
    t = _load_ordered(args.type)
    xi = args.xi or [1] * len(t.ordering.edge_order)
    rep = verify_theorem_walks(base, _model(args), t, xi, args.r, _verify_config(args))
    _emit(args, report_json(rep))
    return EXIT_OK


def cmd_verify_pairs(args) -> int:
    from .expansion_harness import report_json, verify_theorem_pairs
    from .graph_core import Ordering, OrderedGraph, empty_graph

    base = _load_graph(args.base)
    t = _load_ordered(args.type)
    psi = _load_ordered(args.psi, base) if args.psi else OrderedGraph(empty_graph(), Ordering((), ()))
    xi = args.xi or [1] * len(t.ordering.edge_order)
    rep = verify_theorem_pairs(base, _model(args), t, xi, psi, args.r, _verify_config(args))
    _emit(args, report_json(rep))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--budget", type=positive, help="step / enumeration cap (overrides SNBCLAB_BUDGET)")
    p.add_argument("--workers", type=positive, default=1)
    p.add_argument("--tol", type=float, default=1e-10)


def _model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model", default="permutation",
                   choices=["permutation", "cyclic", "permutation-involution", "cyclic-involution"])
    p.add_argument("--parity", default="any", choices=["any", "even", "odd"])


def _expansion_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--base", required=True)
    _model_flags(p)
    p.add_argument("--n", "--n-grid", dest="n", type=int_range, required=True)
    p.add_argument("--k", type=int_range, required=True)
    p.add_argument("--r", type=positive, required=True)
    p.add_argument("--xi", type=int_vector)
    p.add_argument("--type")
    p.add_argument("--mode", choices=["exact", "mc"], default="exact")
    p.add_argument("--samples", type=positive, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window-c", type=float, default=4.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="snbclab", description="Non-backtracking walks in random covers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def leaf(parent, name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = parent.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(func=func)
        return p

    def group(name: str, help_text: str):
        p = sub.add_parser(name, help=help_text)
        return p.add_subparsers(dest="action", required=True)

    g = group("graph", "graph summaries")
    p = leaf(g, "info", cmd_graph_info, "sizes, order, Euler characteristic, mu1")
    p.add_argument("--graph", required=True)

    p = leaf(sub, "mu1", cmd_mu1, "Hashimoto spectral radius")
    p.add_argument("--graph", required=True)
    s = group("spectral", "Hashimoto matrix and spectral radius")
    p = leaf(s, "mu1", cmd_mu1, "Hashimoto spectral radius")
    p.add_argument("--graph", required=True)
    p = leaf(s, "hashimoto", cmd_hashimoto, "Hashimoto matrix as CSV")
    p.add_argument("--graph", required=True)

    c = group("cover", "random covers")
    p = leaf(c, "sample", cmd_cover_sample, "draw one cover")
    p.add_argument("--base", required=True)
    _model_flags(p)
    p.add_argument("--n", type=positive, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--index", type=int, default=0)
    p = leaf(c, "enumerate", cmd_cover_enumerate, "list every permutation assignment")
    p.add_argument("--base", required=True)
    _model_flags(p)
    p.add_argument("--n", type=positive, required=True)

    w = group("walks", "SNBC walk counts")
    p = leaf(w, "count", cmd_walks_count, "number of SNBC walks of length k")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=positive, required=True)
    p.add_argument("--enumerate", action="store_true", help="count by explicit enumeration")

    h = group("homotopy", "homotopy reduction")
    p = leaf(h, "reduce", cmd_homotopy_reduce, "reduce a walk given as comma-separated edge ids")
    p.add_argument("--graph", required=True)
    p.add_argument("--walk", required=True)
    p.add_argument("--base")

    lg = group("legal", "legal walks")
    p = leaf(lg, "count", cmd_legal_count, "legal walks with given multiplicities")
    p.add_argument("--type", required=True)
    p.add_argument("--m", type=int_vector, required=True)

    p = leaf(sub, "convolve", cmd_convolve, "certified dot convolution")
    p.add_argument("mode", choices=["numeric", "symbolic"])
    p.add_argument("--f", required=True, help="polyexponential JSON")
    p.add_argument("--g", required=True, help="polyexponential JSON or const:<value>")
    p.add_argument("--xi", type=int_vector)
    p.add_argument("--k", type=int_range, required=True)

    r = group("reglang", "regular languages")
    p = leaf(r, "count", cmd_reglang_count, "weighted word counts")
    p.add_argument("--automaton", required=True)
    p.add_argument("--k", type=int_range, required=True)
    p.add_argument("--beta", help='letter weights as JSON, e.g. {"a": 2}')

    b = group("btype", "B-types")
    p = leaf(b, "sum", cmd_btype_sum, "wording summation")
    p.add_argument("--type", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--languages", help="JSON map from type edge id to automaton (default: all NB words)")
    p.add_argument("--lengths", type=int_vector, required=True)
    p.add_argument("--poly", help="occurrence polynomial as JSON")

    pr = group("pairs", "walk-subgraph pairs")
    p = leaf(pr, "identity", cmd_pairs_identity, "per-graph pair identity")
    p.add_argument("--graph", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--psi")
    p.add_argument("--xi", type=int_vector)
    p.add_argument("--k", type=positive, required=True)

    e = group("expansion", "1/n expansions")
    p = leaf(e, "fit", cmd_expansion_fit, "fit expansion coefficients (CSV)")
    _expansion_flags(p)
    p.add_argument("--stat", choices=["snbc", "type", "embeddings", "min-order"], default="snbc")
    p.add_argument("--graph", help="B-graph for --stat embeddings")
    p.add_argument("--min-order", type=int, default=1)

    v = group("verify", "theorem verification reports")
    p = leaf(v, "walks", cmd_verify_walks, "walk expansion report (JSON)")
    _expansion_flags(p)
    p = leaf(v, "pairs", cmd_verify_pairs, "pair expansion report (JSON)")
    _expansion_flags(p)
    p.add_argument("--psi")
    for p in (v.choices["walks"], v.choices["pairs"]):
        p.set_defaults(tol=1e-6)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INVALID
    if args.command in ("verify",) and not args.type:
        print("error: --type is required", file=sys.stderr)
        return EXIT_INVALID
    try:
        with _budget_env(args.budget):
            return args.func(args)
    except (BudgetExceeded, CapExceeded, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, GraphError, ModelError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
