"""Exact linear algebra: generic Gaussian elimination plus mod-q numpy helpers.

The generic routines work over any exact field type supporting +, -, *,
equality with 0, and either .inverse() or true division (Fraction, Cyclotomic,
FFElem all qualify). The mod-q routines are vectorized numpy int64 elimination
used by the character-table eigenvector search, where q is a machine-size
prime.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .errors import DimensionMismatch


def _inv(x):
    if hasattr(x, "inverse"):
        return x.inverse()
    return 1 / x


def _is_zero(x) -> bool:
    if hasattr(x, "is_zero"):
        return x.is_zero()
    return x == 0


def rref(matrix: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form (copy) and pivot column indices."""
    rows = [list(r) for r in matrix]
    if not rows:
        return [], []
    ncols = len(rows[0])
    if any(len(r) != ncols for r in rows):
        raise DimensionMismatch("ragged matrix")
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        pivot_row = None
        for i in range(rank, len(rows)):
            if not _is_zero(rows[i][col]):
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = _inv(rows[rank][col])
        rows[rank] = [inv * v for v in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not _is_zero(rows[i][col]):
                factor = rows[i][col]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(rows):
            break
    return rows, pivots


def rank(matrix: Sequence[Sequence]) -> int:
    return len(rref(matrix)[1])


def kernel(matrix: Sequence[Sequence], one=None) -> list[list]:
    """Canonical basis (reduced echelon over the free variables) of the right kernel."""
    rows = [list(r) for r in matrix]
    if not rows:
        return []
    ncols = len(rows[0])
    red, pivots = rref(rows)
    if one is None:
        probe = next((v for r in matrix for v in r if not _is_zero(v)), None)
        if probe is None:
            raise ValueError("cannot infer the field's 1 from a zero matrix; pass one=")
        one = probe * _inv(probe)
    zero = one - one
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for row_i, p in enumerate(pivots):
            vec[p] = zero - red[row_i][f]
        basis.append(vec)
    return basis


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> Optional[list]:
    """One solution of M x = rhs, or None if inconsistent."""
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    if len(rows) != len(matrix) or (matrix and len(rhs) != len(matrix)):
        raise DimensionMismatch("rhs length mismatch")
    ncols = len(matrix[0]) if matrix else 0
    red, pivots = rref(rows)
    if ncols in pivots:
        return None
    probe = next((v for r in matrix for v in r if not _is_zero(v)), None)
    if probe is None:
        return None if any(not _is_zero(b) for b in rhs) else [b - b for b in rhs[:ncols]]
    one = probe * _inv(probe)
    zero = one - one
    out = [zero] * ncols
    for row_i, p in enumerate(pivots):
        out[p] = red[row_i][ncols]
    return out


# mod-q helpers (q a prime fitting comfortably in int64)


def modq_rref(a: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    m = a.astype(np.int64) % q
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        nz = np.nonzero(m[r:, col])[0]
        if len(nz) == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * pow(int(m[r, col]), -1, q)) % q
        other = np.nonzero(m[:, col])[0]
        other = other[other != r]
        if len(other):
            m[other] = (m[other] - np.outer(m[other, col], m[r])) % q
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return m, pivots


def modq_rank(a: np.ndarray, q: int) -> int:
    return len(modq_rref(a, q)[1])


def modq_kernel(a: np.ndarray, q: int) -> np.ndarray:
    """Right-kernel basis as rows of the returned matrix."""
    red, pivots = modq_rref(a, q)
    ncols = a.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for row_i, p in enumerate(pivots):
            basis[k, p] = (-red[row_i, f]) % q
    return basis


def modq_solve_matrix(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    """Solve A X = B for X, with A of full column rank."""
    n, d = a.shape
    aug = np.concatenate([a, b], axis=1) % q
    red, pivots = modq_rref(aug, q)
    if pivots[:d] != list(range(d)) or len(pivots) != d:
        raise DimensionMismatch("system not uniquely solvable")
    return red[:d, d:]
