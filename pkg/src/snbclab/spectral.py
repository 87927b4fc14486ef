"""Adjacency and Hashimoto (non-backtracking) matrices and their spectra."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components as sparse_components

from .graph_core import Graph, is_connected, order_of

DEFAULT_TOL = 1e-10
MAX_ITER = 100_000
DENSE_LIMIT = 512
EIG_LIMIT = 4096


class ConvergenceError(RuntimeError):
    def __init__(self, lower: float, upper: float):
        super().__init__(f"power iteration did not converge; spectral radius in [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper


@dataclass(frozen=True)
class HashimotoMatrix:
    index: tuple
    entries: np.ndarray

    def support(self) -> list[tuple[int, int]]:
        """Arcs of the oriented line graph."""
        rows, cols = np.nonzero(self.entries)
        return list(zip(rows.tolist(), cols.tolist()))

    def to_csv(self) -> str:
        return matrix_to_csv(self.entries, self.index)


def hashimoto(g: Graph) -> HashimotoMatrix:
    m = g.num_dir_edges
    h = np.zeros((m, m), dtype=np.int64)
    for e1 in range(m):
        for e2 in g.out_edges[g.head[e1]]:
            if e2 != g.inv[e1]:
                h[e1, e2] = 1
    return HashimotoMatrix(g.edge_ids, h)


def adjacency(g: Graph) -> np.ndarray:
    a = np.zeros((g.num_vertices, g.num_vertices), dtype=np.int64)
    for e in range(g.num_dir_edges):
        a[g.tail[e], g.head[e]] += 1
    return a


def matrix_to_csv(m: np.ndarray, labels) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + [str(x) for x in labels])
    for lab, row in zip(labels, m.tolist()):
        w.writerow([str(lab)] + [str(x) for x in row])
    return buf.getvalue()


def _power_radius(block: csr_matrix, tol: float, max_iter: int) -> float:
    """Perron value of an irreducible nonnegative block via I + H iteration.

    The shift makes the block primitive; Collatz-Wielandt ratios bracket the
    spectral radius at every step.
    """
    n = block.shape[0]
    x = np.ones(n)
    lo, hi = 0.0, np.inf
    for _ in range(max_iter):
        y = block @ x + x
        ratios = y / x
        lo, hi = ratios.min() - 1.0, ratios.max() - 1.0
        if hi - lo <= tol * max(1.0, abs(hi)):
            return 0.5 * (lo + hi)
        x = y / y.max()
    raise ConvergenceError(lo, hi)


def spectral_radius(m: np.ndarray, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Spectral radius of a nonnegative square matrix, component by component."""
    n = m.shape[0]
    if n == 0:
        return 0.0
    sp = csr_matrix(m.astype(float))
    ncomp, labels = sparse_components(sp, directed=True, connection="strong")
    best = 0.0
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        block = sp[idx][:, idx]
        if block.nnz == 0:
            continue
        try:
            r = _power_radius(block, tol, max_iter)
        except ConvergenceError:
            if len(idx) > DENSE_LIMIT:
                raise
            r = float(np.max(np.abs(np.linalg.eigvals(block.toarray()))))
        best = max(best, r)
    return best


def mu1(g: Graph, tol: float = DEFAULT_TOL, max_iter: int = MAX_ITER) -> float:
    """Perron-Frobenius eigenvalue of the Hashimoto matrix (0 without edges)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return spectral_radius(hashimoto(g).entries, tol, max_iter)


def eigenvalues(m) -> np.ndarray:
    """All eigenvalues with multiplicity, via the dense solver."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] > EIG_LIMIT:
        raise ValueError(f"dimension {a.shape[0]} exceeds the dense eigensolver limit {EIG_LIMIT}")
    if a.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    return np.linalg.eigvals(a)


def is_tangle(g: Graph, nu: float, r: int, tol: float = 1e-9) -> bool:
    """Connected, Hashimoto spectral radius at least ``nu`` and order below ``r``."""
    if nu < 0 or r < 1:
        raise ValueError("need nu >= 0 and r >= 1")
    return is_connected(g) and mu1(g) >= nu - tol and order_of(g) < r
