"""Polyexponential functions, their convolutions, and growth-rate estimates.

A polyexponential in ``m`` variables is a finite sum of ``beta^k p_beta(k)``
with ``beta^k = beta_1^k_1 ... beta_m^k_m``, plus a finitely supported
exceptional part standing in for zero bases.  Coefficients and bases stay
exact (``int``/``Fraction``) whenever the inputs are.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterator, Mapping, Sequence

import numpy as np

from ._budget import Budget

BASE_TOL = 1e-9
EPS_GRID = (0.05, 0.1, 0.2)

Number = int | Fraction | float | complex


def _exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def _pow(b, k: int):
    if k < 0 and _exact(b):
        return Fraction(b) ** k
    return b**k


def _is_zero(x) -> bool:
    if _exact(x):
        return x == 0
    return abs(x) == 0


def _same_base(a: tuple, b: tuple) -> bool:
    if all(_exact(x) for x in a + b):
        return a == b
    return max(abs(complex(x) - complex(y)) for x, y in zip(a, b)) <= BASE_TOL


class _BaseTable:
    """Interns base vectors, merging inexact ones within ``BASE_TOL``."""

    def __init__(self) -> None:
        self.keys: list[tuple] = []

    def intern(self, base: tuple) -> tuple:
        for k in self.keys:
            if _same_base(k, base):
                return k
        self.keys.append(base)
        return base


# ---------------------------------------------------------------- univariate polynomials


def _padd(p: list, q: list) -> list:
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)]


def _pscale(p: list, c) -> list:
    return [c * x for x in p]


def _pmul(p: list, q: list) -> list:
    if not p or not q:
        return []
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if _is_zero(a):
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _pshift(p: list, h) -> list:
    """Coefficients of ``x -> p(x + h)``."""
    out = [0] * len(p)
    for d, c in enumerate(p):
        if _is_zero(c):
            continue
        for j in range(d + 1):
            out[j] += c * math.comb(d, j) * _pow(h, d - j)
    return out


def _peval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _ptrim(p: list) -> list:
    p = list(p)
    while p and _is_zero(p[-1]):
        p.pop()
    return p


def _binom_poly(s: int) -> list:
    """Coefficients in ``x`` of ``C(x + s - 1, s - 1)``."""
    p: list = [Fraction(1)]
    for j in range(1, s):
        p = _pmul(p, [Fraction(j), Fraction(1)])
    return _pscale(p, Fraction(1, math.factorial(s - 1)))


def _to_binomial_basis(p: list) -> list:
    """``c`` with ``p(x) = sum_s c[s-1] C(x + s - 1, s - 1)``."""
    p = _ptrim(p)
    c = [0] * len(p)
    for d in range(len(p) - 1, -1, -1):
        if d >= len(p) or _is_zero(p[d]):
            continue
        coef = p[d] * math.factorial(d)
        c[d] = coef
        p = _ptrim(_padd(p, _pscale(_binom_poly(d + 1), -coef)))
    return c


def _from_binomial_basis(c: Sequence) -> list:
    out: list = []
    for s, coef in enumerate(c, start=1):
        if not _is_zero(coef):
            out = _padd(out, _pscale(_binom_poly(s), coef))
    return _ptrim(out)


# ---------------------------------------------------------------- the class


class Polyexponential:
    """``sum_beta beta^k p_beta(k) + exceptional(k)`` in ``dim`` variables.

    ``terms`` maps a base (a number, or a tuple in several variables) to a
    polynomial: a coefficient list for one variable, or a dict from exponent
    tuples to coefficients.
    """

    def __init__(self, terms: Mapping | None = None, exceptional: Mapping | None = None, dim: int = 1):
        self.dim = dim
        table = _BaseTable()
        merged: dict[tuple, dict[tuple, Number]] = {}
        for base, poly in (terms or {}).items():
            bt = base if isinstance(base, tuple) else (base,)
            if len(bt) != dim:
                raise ValueError("base vector has the wrong dimension")
            if any(_is_zero(b) for b in bt):
                raise ValueError("zero bases belong in the exceptional part")
            if isinstance(poly, Mapping):
                items = [(tuple(k) if isinstance(k, tuple) else (k,), v) for k, v in poly.items()]
            else:
                if dim != 1:
                    raise ValueError("coefficient lists are only for one variable")
                items = [((d,), c) for d, c in enumerate(poly)]
            key = table.intern(bt)
            slot = merged.setdefault(key, {})
            for ex, c in items:
                slot[ex] = slot.get(ex, 0) + c
        self.terms: dict[tuple, dict[tuple, Number]] = {}
        for key, poly in merged.items():
            poly = {ex: c for ex, c in poly.items() if not _is_zero(c)}
            if poly:
                self.terms[key] = poly
        self.exceptional: dict[tuple, Number] = {}
        for k, v in (exceptional or {}).items():
            kt = k if isinstance(k, tuple) else (k,)
            if not _is_zero(v):
                self.exceptional[kt] = self.exceptional.get(kt, 0) + v

    # -- constructors

    @classmethod
    def monomial(cls, base, degree: int = 0, coeff: Number = 1) -> "Polyexponential":
        return cls({base: [0] * degree + [coeff]})

    @classmethod
    def delta(cls, at: int, value: Number = 1) -> "Polyexponential":
        return cls({}, {at: value})

    @classmethod
    def zero(cls, dim: int = 1) -> "Polyexponential":
        return cls({}, {}, dim)

    # -- evaluation

    def _key(self, k) -> tuple:
        kt = tuple(k) if isinstance(k, (tuple, list)) else (k,)
        if len(kt) != self.dim:
            raise ValueError("argument has the wrong dimension")
        return kt

    def eval_terms(self, k) -> Number:
        """The base-term part only, valid at every integer argument."""
        kt = self._key(k)
        total: Number = 0
        for base, poly in self.terms.items():
            bk: Number = 1
            for b, ki in zip(base, kt):
                bk = bk * _pow(b, ki)
            p: Number = 0
            for ex, c in poly.items():
                mono: Number = c
                for ki, a in zip(kt, ex):
                    mono = mono * ki**a
                p = p + mono
            total = total + bk * p
        return total

    def eval(self, k) -> Number:
        kt = self._key(k)
        return self.eval_terms(kt) + self.exceptional.get(kt, 0)

    __call__ = eval

    @property
    def bases(self) -> list[tuple]:
        return list(self.terms)

    def is_zero(self) -> bool:
        return not self.terms and not self.exceptional

    def univariate_terms(self) -> Iterator[tuple[Number, list]]:
        if self.dim != 1:
            raise ValueError("not univariate")
        for base, poly in self.terms.items():
            deg = max(ex[0] for ex in poly)
            coeffs = [0] * (deg + 1)
            for ex, c in poly.items():
                coeffs[ex[0]] = c
            yield base[0], coeffs

    def __add__(self, other: "Polyexponential") -> "Polyexponential":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        terms: dict = {}
        table = _BaseTable()
        for src in (self, other):
            for base, poly in src.terms.items():
                key = table.intern(base)
                slot = terms.setdefault(key, {})
                for ex, c in poly.items():
                    slot[ex] = slot.get(ex, 0) + c
        exc = dict(self.exceptional)
        for k, v in other.exceptional.items():
            exc[k] = exc.get(k, 0) + v
        return Polyexponential(terms, exc, self.dim)

    def scale(self, c: Number) -> "Polyexponential":
        return Polyexponential({b: {ex: c * v for ex, v in p.items()} for b, p in self.terms.items()},
                               {k: c * v for k, v in self.exceptional.items()}, self.dim)

    def __repr__(self) -> str:
        return f"Polyexponential(dim={self.dim}, bases={self.bases}, exceptional={self.exceptional})"

    # -- serialization

    def to_json(self) -> dict:
        def num(x):
            z = complex(x)
            return [z.real, z.imag]

        terms = []
        for base, poly in self.terms.items():
            terms.append({
                "base": [c for b in base for c in num(b)],
                "poly": [{"exponent": list(ex), "coeff": num(c)} for ex, c in sorted(poly.items())],
            })
        return {"terms": terms,
                "exceptional": {",".join(map(str, k)): num(v) for k, v in sorted(self.exceptional.items())},
                "dim": self.dim}

    @classmethod
    def from_json(cls, data: dict) -> "Polyexponential":
        def num(pair):
            re, im = pair
            if im == 0 and float(re).is_integer():
                return int(re)
            return complex(re, im)

        dim = data.get("dim", 1)
        terms = {}
        for t in data.get("terms", []):
            flat = t["base"]
            base = tuple(num(flat[i:i + 2]) for i in range(0, len(flat), 2))
            terms[base] = {tuple(m["exponent"]): num(m["coeff"]) for m in t["poly"]}
        exc = {tuple(int(x) for x in k.split(",")): num(v) for k, v in data.get("exceptional", {}).items()}
        return cls(terms, exc, dim)


# ---------------------------------------------------------------- shifts


def shift_left(p: Polyexponential, h: int) -> Polyexponential:
    """``k -> p(k + h)`` on ``k >= 0``."""
    terms = {}
    for base, coeffs in p.univariate_terms():
        terms[base] = _pscale(_pshift(coeffs, h), _pow(base, h))
    exc = {k[0] - h: v for k, v in p.exceptional.items() if k[0] - h >= 0}
    return Polyexponential(terms, exc)


def delay(p: Polyexponential, c: int) -> Polyexponential:
    """``k -> p(k - c)`` for ``k >= c`` and ``0`` for ``0 <= k < c``."""
    terms = {}
    for base, coeffs in p.univariate_terms():
        terms[base] = _pscale(_pshift(coeffs, -c), _pow(base, -c))
    exc = {k[0] + c: v for k, v in p.exceptional.items()}
    out = Polyexponential(terms, exc)
    fix = {k: -out.eval_terms(k) for k in range(c)}
    return out + Polyexponential({}, fix)


# ---------------------------------------------------------------- additive convolution


@dataclass
class _Gen:
    """Rational generating function: poles ``c/(1 - beta z)^s`` plus a polynomial."""

    poles: dict[Number, dict[int, Number]] = field(default_factory=dict)
    poly: dict[int, Number] = field(default_factory=dict)

    def add_pole(self, table: _BaseTable, base, s: int, c) -> None:
        if _is_zero(c):
            return
        key = table.intern((base,))[0]
        slot = self.poles.setdefault(key, {})
        slot[s] = slot.get(s, 0) + c

    def add_poly(self, a: int, c) -> None:
        if not _is_zero(c):
            self.poly[a] = self.poly.get(a, 0) + c


def _gen_of(p: Polyexponential, table: _BaseTable) -> _Gen:
    g = _Gen()
    for base, coeffs in p.univariate_terms():
        for s, c in enumerate(_to_binomial_basis(coeffs), start=1):
            g.add_pole(table, base, s, c)
    for k, v in p.exceptional.items():
        if k[0] < 0:
            raise ValueError("additive convolution lives on k >= 0")
        g.add_poly(k[0], v)
    return g


def _pole_times_pole(out: _Gen, table: _BaseTable, b, s: int, cb, g, t: int, cg) -> None:
    if _same_base((b,), (g,)):
        out.add_pole(table, b, s + t, cb * cg)
        return
    for (x, sx, y, ty) in ((b, s, g, t), (g, t, b, s)):
        # principal part at z = 1/x of (1 - x z)^-sx (1 - y z)^-ty
        d = x - y
        lead = _pow(Fraction(x) / d if _exact(x) and _exact(d) else x / d, ty)
        ratio = -(Fraction(y) / d if _exact(y) and _exact(d) else y / d)
        for l in range(sx):
            coef = lead * math.comb(ty + l - 1, l) * _pow(ratio, l)
            out.add_pole(table, x, sx - l, cb * cg * coef)


def _pole_times_monomial(out: _Gen, table: _BaseTable, b, s: int, cb, a: int, ca) -> None:
    # z^a = b^-a (1 - u)^a with u = 1 - b z
    scale = cb * ca * _pow(b, -a)
    for l in range(a + 1):
        coef = scale * math.comb(a, l) * (-1) ** l
        if l < s:
            out.add_pole(table, b, s - l, coef)
        else:
            e = l - s
            for r in range(e + 1):
                out.add_poly(r, coef * math.comb(e, r) * _pow(-b, r))


def _gen_product(p: _Gen, q: _Gen, table: _BaseTable) -> _Gen:
    out = _Gen()
    for b, sp in p.poles.items():
        for s, cb in sp.items():
            for g, tq in q.poles.items():
                for t, cg in tq.items():
                    _pole_times_pole(out, table, b, s, cb, g, t, cg)
            for a, ca in q.poly.items():
                _pole_times_monomial(out, table, b, s, cb, a, ca)
    for g, tq in q.poles.items():
        for t, cg in tq.items():
            for a, ca in p.poly.items():
                _pole_times_monomial(out, table, g, t, cg, a, ca)
    for a, ca in p.poly.items():
        for c, cc in q.poly.items():
            out.add_poly(a + c, ca * cc)
    return out


def _from_gen(g: _Gen) -> Polyexponential:
    terms = {}
    for base, orders in g.poles.items():
        top = max(orders)
        c = [orders.get(s, 0) for s in range(1, top + 1)]
        terms[base] = _from_binomial_basis(c)
    return Polyexponential(terms, dict(g.poly))


def additive_convolve(p: Polyexponential, q: Polyexponential) -> Polyexponential:
    """Closed form of ``k -> sum_{i=0}^k p(i) q(k - i)`` via partial fractions."""
    if p.dim != 1 or q.dim != 1:
        raise ValueError("additive convolution needs univariate inputs")
    table = _BaseTable()
    return _from_gen(_gen_product(_gen_of(p, table), _gen_of(q, table), table))


def gen_series(p: Polyexponential, order: int) -> list:
    """Truncated generating-function coefficients ``p(0), ..., p(order - 1)``."""
    return [p.eval(k) for k in range(order)]


def series_product(a: Sequence, b: Sequence, order: int) -> list:
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(order)]


# ---------------------------------------------------------------- dot convolution


def dot_factorizations(xi: Sequence[int], k: int, m_min: int = 1,
                       budget: int | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All ``(kvec, m)`` with ``kvec >= xi``, ``m >= m_min`` and ``kvec . m == k``."""
    s = len(xi)
    bud = Budget(budget)
    kv = [0] * s
    mv = [0] * s
    suffix_min = [0] * (s + 1)
    for i in range(s - 1, -1, -1):
        suffix_min[i] = suffix_min[i + 1] + max(1, xi[i]) * m_min

    def rec(i: int, rem: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
        if i == s:
            if rem == 0:
                yield tuple(kv), tuple(mv)
            return
        for ki in range(max(1, xi[i]), rem + 1):
            if ki * m_min + suffix_min[i + 1] > rem:
                break
            for mi in range(m_min, rem // ki + 1):
                used = ki * mi
                if used + suffix_min[i + 1] > rem:
                    break
                bud.spend()
                kv[i], mv[i] = ki, mi
                yield from rec(i + 1, rem - used)

    yield from rec(0, k)


def _as_callable(f) -> Callable:
    if isinstance(f, Polyexponential):
        return f.eval
    return f


def certified_dot_convolve_numeric(f, g, xi: Sequence[int], k: int, m_min: int = 1,
                                   budget: int | None = None) -> Number:
    """``sum over kvec . m == k, kvec >= xi, m >= m_min`` of ``f(kvec) g(m)``."""
    if not xi or min(xi) < 1:
        raise ValueError("need s >= 1 and xi >= 1")
    fc, gc = _as_callable(f), _as_callable(g)
    total: Number = 0
    for kv, m in dot_factorizations(xi, k, m_min, budget):
        total = total + fc(kv) * gc(m)
    return total


def restricted_sum_m_ge_2(f, g, xi: Sequence[int], k: int, budget: int | None = None) -> Number:
    """The dot convolution restricted to ``m_i >= 2`` for every ``i``."""
    return certified_dot_convolve_numeric(f, g, xi, k, m_min=2, budget=budget)


def restricted_growth_bound(f: Polyexponential, g, xi: Sequence[int], k_max: int, rho: float) -> tuple[float, list[float]]:
    """Ratios ``|P(k)| / (k^(2s) lam^k)`` with ``lam = max(sqrt(beta), rho, 1)``; returns the fitted
    constant (their maximum) and the ratios."""
    beta = max((abs(complex(b)) for base in f.bases for b in base), default=0.0)
    lam = max(math.sqrt(beta), rho, 1.0)
    s = len(xi)
    ratios = []
    for k in range(1, k_max + 1):
        val = restricted_sum_m_ge_2(f, g, xi, k)
        ratios.append(math.exp(_logabs(val) - 2 * s * math.log(k) - k * math.log(lam)) if not _is_zero(val) else 0.0)
    return max(ratios, default=0.0), ratios


def _separable_terms(f: Polyexponential) -> list[tuple[Number, list[Polyexponential]]]:
    out = []
    for base, poly in f.terms.items():
        for ex, c in poly.items():
            out.append((c, [Polyexponential.monomial(b, a) for b, a in zip(base, ex)]))
    for kv, v in f.exceptional.items():
        out.append((v, [Polyexponential.delta(ki) for ki in kv]))
    return out


@dataclass
class CertifiedConvolution:
    principal: Polyexponential
    residual_values: dict[int, Number]
    rate: float
    horizon: int
    decomposition: dict[int, Number]

    def residual(self, k: int) -> Number:
        return self.residual_values[k]


def omega_values(g, xi: Sequence[int], horizon: int) -> dict[int, float]:
    """``omega(M) = max |g(m)|`` over ``m >= 1`` with ``xi . m == M``."""
    gc = _as_callable(g)
    out: dict[int, float] = {M: 0.0 for M in range(1, horizon + 1)}
    s = len(xi)
    m = [0] * s

    def rec(i: int, total: int) -> None:
        if i == s:
            if 1 <= total <= horizon:
                out[total] = max(out[total], abs(complex(gc(tuple(m)))))
            return
        mi = 1
        while total + xi[i] * mi + sum(xi[i + 1:]) <= horizon:
            m[i] = mi
            rec(i + 1, total + xi[i] * mi)
            mi += 1

    rec(0, 0)
    return out


def certified_dot_convolve(f: Polyexponential, g, xi: Sequence[int], horizon: int,
                           omega_rate: float | None = None) -> CertifiedConvolution:
    """Split ``f *_{>=xi} g`` into a polyexponential principal part and a residual.

    The sum is split by the set ``N`` of indices with ``m_i = 1``.  On ``N``
    the factor is an additive convolution of shifted univariate polyexponentials
    (closed form); the complement, where every ``m_i >= 2``, is summed
    numerically up to ``horizon``.  The principal part collects the base terms
    of the closed-form factor convolved with the numeric factor; the residual
    is the exact remainder on ``1..horizon``.
    """
    s = len(xi)
    if f.dim != s:
        raise ValueError("f must have one variable per entry of xi")
    if s < 1 or min(xi) < 1:
        raise ValueError("need s >= 1 and xi >= 1")
    gc = _as_callable(g)
    terms = _separable_terms(f)
    principal = Polyexponential.zero()
    decomposition: dict[int, Number] = {k: 0 for k in range(horizon + 1)}
    for size in range(s + 1):
        for N in combinations(range(s), size):
            rest = [i for i in range(s) if i not in N]
            for coef, factors in terms:
                f1 = Polyexponential.delta(0)
                for i in N:
                    f1 = additive_convolve(f1, shift_left(factors[i], xi[i]))
                f1 = delay(f1, sum(xi[i] for i in N))
                f2: list[Number] = [0] * (horizon + 1)
                if not rest:
                    f2[0] = gc(tuple(1 for _ in range(s)))
                else:
                    xr = [xi[i] for i in rest]
                    for K2 in range(1, horizon + 1):
                        acc: Number = 0
                        for kv, mv in dot_factorizations(xr, K2, m_min=2):
                            full_m = [1] * s
                            prod: Number = 1
                            for j, i in enumerate(rest):
                                full_m[i] = mv[j]
                                prod = prod * factors[i].eval(kv[j])
                            if not _is_zero(prod):
                                acc = acc + prod * gc(tuple(full_m))
                        f2[K2] = acc
                for k in range(horizon + 1):
                    val: Number = 0
                    for j in range(k + 1):
                        if not _is_zero(f2[j]):
                            val = val + f2[j] * f1.eval(k - j)
                    decomposition[k] = decomposition[k] + coef * val
                terms_p = {}
                for base, coeffs in f1.univariate_terms():
                    poly: list = []
                    for j, w in enumerate(f2):
                        if _is_zero(w):
                            continue
                        poly = _padd(poly, _pscale(_pshift(coeffs, -j), w * _pow(base, -j)))
                    terms_p[base] = _pscale(poly, coef)
                principal = principal + Polyexponential(terms_p)
    residual = {k: decomposition[k] - principal.eval(k) for k in range(1, horizon + 1)}
    beta = max((abs(complex(b)) for base in f.bases for b in base), default=0.0)
    if omega_rate is None:
        om = omega_values(gc, xi, horizon)
        omega_rate = growth_estimate(om).rate if len(om) >= 8 else 1.0
    rate = max(math.sqrt(beta), omega_rate, 1.0)
    return CertifiedConvolution(principal, residual, rate, horizon, decomposition)


# ---------------------------------------------------------------- fitting and growth


def _logabs(x) -> float:
    if isinstance(x, int):
        return math.log(abs(x))
    if isinstance(x, Fraction):
        return math.log(abs(x.numerator)) - math.log(x.denominator)
    return math.log(abs(complex(x)))


@dataclass
class GrowthCertificate:
    rate: float
    eps_grid: tuple[float, ...] = EPS_GRID
    constants: dict[float, float] = field(default_factory=dict)

    def holds(self, samples: Mapping[int, Number]) -> bool:
        for eps in self.eps_grid:
            c = self.constants.get(eps, math.inf)
            for k, v in samples.items():
                if not _is_zero(v) and _logabs(v) > math.log(c) + k * math.log(self.rate + eps) + 1e-9:
                    return False
        return True


def _upper_hull(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    hull: list[tuple[float, float]] = []
    for p in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1) >= 0:
                hull.pop()
            else:
                break
        hull.append(p)
    return hull


def growth_estimate(samples: Mapping[int, Number] | Sequence[Number]) -> GrowthCertificate:
    """Growth rate from the upper log-envelope of the samples.

    The rate is ``exp`` of the mean slope of the concave majorant of
    ``log |f(k)|`` over the later half of the sampled range; ``C(eps)`` is the
    smallest constant with ``|f(k)| <= C (rate + eps)^k`` on the samples.
    """
    if not isinstance(samples, Mapping):
        samples = {k: v for k, v in enumerate(samples, start=1)}
    pts = sorted((k, _logabs(v)) for k, v in samples.items() if not _is_zero(v))
    if not pts:
        return GrowthCertificate(0.0, EPS_GRID, {eps: 0.0 for eps in EPS_GRID})
    ks = sorted(samples)
    lo, hi = max(ks[len(ks) // 2], pts[0][0]), pts[-1][0]
    hull = _upper_hull(pts)
    if hi > lo:
        slope = (_hull_at(hull, hi) - _hull_at(hull, lo)) / (hi - lo)
    else:
        slope = 0.0
    rate = math.exp(slope)
    consts = {}
    for eps in EPS_GRID:
        lr = math.log(rate + eps)
        consts[eps] = math.exp(max(y - k * lr for k, y in pts))
    return GrowthCertificate(rate, EPS_GRID, consts)


def _hull_at(hull: list[tuple[float, float]], x: float) -> float:
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        if x1 <= x <= x2:
            return y1 + (y2 - y1) * (x - x1) / (x2 - x1)
    return hull[-1][1] if x >= hull[-1][0] else hull[0][1]


@dataclass
class FitResult:
    poly: Polyexponential
    residuals: dict[int, complex]
    residual_max: float
    residual_rel: float
    condition: float
    residual_growth: GrowthCertificate | None


def fit_polyexp(samples: Mapping[int, Number], bases: Sequence[Number],
                max_degree: int | Mapping = 0) -> FitResult:
    """Least-squares fit of ``sum beta^k p_beta(k)`` to the samples.

    A zero base stands for exceptional values at ``k = 0..degree``.
    ``max_degree`` is one degree for every base or a per-base mapping.
    """
    ks = sorted(samples)
    y = np.array([complex(samples[k]) for k in ks])
    table = _BaseTable()
    distinct: list = []
    for b in bases:
        key = table.intern((b,))[0]
        if key not in distinct:
            distinct.append(key)
    cols, labels = [], []
    for b in distinct:
        deg = max_degree.get(b, 0) if isinstance(max_degree, Mapping) else max_degree
        if _is_zero(b):
            for j in range(deg + 1):
                cols.append(np.array([1.0 if k == j else 0.0 for k in ks], dtype=complex))
                labels.append((0, j))
        else:
            for d in range(deg + 1):
                cols.append(np.array([complex(b) ** k * float(k) ** d for k in ks]))
                labels.append((b, d))
    if not cols:
        res = {k: complex(samples[k]) for k in ks}
        mx = max((abs(v) for v in res.values()), default=0.0)
        return FitResult(Polyexponential.zero(), res, mx, mx / max(1.0, mx), 1.0,
                         growth_estimate(samples) if len(ks) >= 8 else None)
    a = np.column_stack(cols)
    norms = np.linalg.norm(a, axis=0)
    norms[norms == 0] = 1.0
    scaled = a / norms
    coef, *_ = np.linalg.lstsq(scaled, y, rcond=None)
    coef = coef / norms
    cond = float(np.linalg.cond(scaled))
    fitted = a @ coef
    resid = y - fitted
    terms: dict = {}
    exc: dict = {}
    for (b, d), c in zip(labels, coef):
        if _is_zero(b):
            exc[d] = complex(c)
        else:
            terms.setdefault(b, {})[(d,)] = complex(c)
    res = {k: complex(r) for k, r in zip(ks, resid)}
    mx = float(np.max(np.abs(resid))) if len(resid) else 0.0
    scale = float(np.max(np.abs(y))) if len(y) else 0.0
    growth = growth_estimate({k: abs(v) for k, v in res.items()}) if len(ks) >= 8 else None
    return FitResult(Polyexponential(terms, exc), res, mx, mx / max(1.0, scale), cond, growth)
