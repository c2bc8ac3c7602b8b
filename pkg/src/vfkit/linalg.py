"""Linear algebra helpers: exact over Fraction, tolerance-based over floats."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

__all__ = [
    "exact_rank",
    "exact_solve",
    "exact_nullspace",
    "exact_pivot_columns",
    "svd_rank",
    "span_rank",
    "in_span",
]


def _elim(rows, ncols):
    """Row-reduce in place; returns list of (pivot_row, pivot_col)."""
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    return pivots


def exact_rank(matrix):
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    return len(_elim(rows, len(rows[0])))


def exact_pivot_columns(matrix):
    """Column indices of a maximal independent subset, in elimination order."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return []
    return [c for _, c in _elim(rows, len(rows[0]))]


def exact_solve(A, b):
    """One exact solution of A x = b (free variables 0), or None if none exists."""
    rows = [[Fraction(x) for x in row] + [Fraction(v)] for row, v in zip(A, b)]
    if not rows:
        return []
    ncols = len(rows[0]) - 1
    pivots = _elim(rows, ncols)
    for i, row in enumerate(rows):
        if row[-1] != 0 and all(x == 0 for x in row[:-1]):
            return None
    x = [Fraction(0)] * ncols
    for r, c in pivots:
        x[c] = rows[r][-1]
    return x


def exact_nullspace(A):
    """Basis of the kernel of A (rows = equations), as Fraction vectors."""
    rows = [[Fraction(x) for x in row] for row in A]
    if not rows:
        return []
    ncols = len(rows[0])
    pivots = _elim(rows, ncols)
    pivot_cols = {c for _, c in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, c in pivots:
            v[c] = -rows[r][free]
        basis.append(v)
    return basis


def svd_rank(matrix, rel_tol=1e-9):
    m = np.asarray(matrix, dtype=float)
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


def _all_exact(vectors):
    return all(
        isinstance(x, (int, Fraction)) and not isinstance(x, bool)
        for v in vectors
        for x in v
    )


def span_rank(vectors, rel_tol=1e-9):
    """Rank of the span of the given vectors; exact when all entries rational."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return 0
    if _all_exact(vectors):
        return exact_rank(vectors)
    return svd_rank(vectors, rel_tol)


def in_span(vectors, v, rel_tol=1e-9):
    """True when v lies in the span of the vectors (exactness as available)."""
    base = [tuple(w) for w in vectors]
    return span_rank(base + [tuple(v)], rel_tol) == span_rank(base, rel_tol)
