"""Dense GF(2) linear algebra on numpy uint8 matrices.

Row reduction, rank, solving, and kernel bases over the two-element field.
Matrices are numpy arrays with entries in {0, 1}; dtype uint8 keeps XOR row
operations cheap at the sizes this package meets (dimensions up to a few
hundred rows/columns).
"""

from __future__ import annotations

import numpy as np


def as_gf2(mat) -> np.ndarray:
    """Coerce input to a 2-D uint8 matrix with entries reduced mod 2."""
    arr = np.asarray(mat, dtype=np.int64) % 2
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={arr.ndim}")
    return arr.astype(np.uint8)


def row_echelon(mat) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(2).

    Args:
        mat: 2-D array-like with 0/1 entries.

    Returns:
        (rref, pivot_cols): the reduced matrix (same shape, zero rows sink to
        the bottom) and the list of pivot column indices in order.
    """
    r = as_gf2(mat).copy()
    n_rows, n_cols = r.shape
    pivot_cols: list[int] = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        hits = np.nonzero(r[row:, col])[0]
        if hits.size == 0:
            continue
        pivot = row + int(hits[0])
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        # eliminate the column everywhere else (reduced form)
        others = np.nonzero(r[:, col])[0]
        for other in others:
            if other != row:
                r[other] ^= r[row]
        pivot_cols.append(col)
        row += 1
    return r, pivot_cols


def rank(mat) -> int:
    """GF(2) rank."""
    _, pivots = row_echelon(mat)
    return len(pivots)


def residue(vec, rref: np.ndarray, pivot_cols: list[int]) -> np.ndarray:
    """Reduce a vector against a row-reduced basis; zero iff in the row space."""
    v = as_gf2(vec).ravel().copy()
    for row_idx, col in enumerate(pivot_cols):
        if v[col]:
            v ^= rref[row_idx]
    return v


def in_rowspace(vec, rref: np.ndarray, pivot_cols: list[int]) -> bool:
    return not residue(vec, rref, pivot_cols).any()


def solve(mat, rhs) -> np.ndarray | None:
    """One solution x of ``mat @ x = rhs`` over GF(2), or None if inconsistent.

    Args:
        mat: (m, n) coefficient matrix.
        rhs: length-m right-hand side.

    Returns:
        A length-n uint8 solution vector (free variables set to 0), or None.
    """
    a = as_gf2(mat)
    b = as_gf2(rhs).ravel()
    m, n = a.shape
    if b.shape[0] != m:
        raise ValueError(f"rhs length {b.shape[0]} does not match {m} rows")
    aug = np.concatenate([a, b.reshape(-1, 1)], axis=1)
    red, pivots = row_echelon(aug)
    x = np.zeros(n, dtype=np.uint8)
    for row_idx, col in enumerate(pivots):
        if col == n:
            return None  # pivot in the augmented column: inconsistent
        x[col] = red[row_idx, n]
    return x


def kernel_basis(mat) -> np.ndarray:
    """Rows spanning the right null space {x : mat @ x = 0} over GF(2).

    Returns a (dim, n) uint8 matrix; dim = n - rank(mat). The basis follows
    the standard free-variable construction and is deterministic.
    """
    a = as_gf2(mat)
    _, n = a.shape
    red, pivots = row_echelon(a)
    pivot_set = set(pivots)
    free_cols = [c for c in range(n) if c not in pivot_set]
    basis = np.zeros((len(free_cols), n), dtype=np.uint8)
    for k, free in enumerate(free_cols):
        basis[k, free] = 1
        for row_idx, col in enumerate(pivots):
            if red[row_idx, free]:
                basis[k, col] = 1
    return basis
