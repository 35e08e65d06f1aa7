"""Small dense GF(2) linear algebra used for parity-bit embedding."""

from __future__ import annotations

import numpy as np


class SingularMatrixError(ValueError):
    """The GF(2) system has no solution or its columns are dependent."""


def solve(A, b) -> np.ndarray:
    """Solve A @ x = b over GF(2) by Gaussian elimination.

    A may be rectangular (m rows, k <= m columns) but must have full column
    rank, and b must lie in its column space; SingularMatrixError otherwise.
    """
    M = (np.asarray(A, dtype=np.uint8) & 1).copy()
    v = (np.asarray(b, dtype=np.uint8) & 1).copy()
    if M.ndim != 2 or v.shape != (M.shape[0],):
        raise ValueError("expected a matrix and a matching right-hand side")
    m, k = M.shape
    if k > m:
        raise ValueError("system has more unknowns than equations")
    aug = np.concatenate([M, v[:, None]], axis=1)
    for col in range(k):
        rows = np.flatnonzero(aug[col:, col])
        if rows.size == 0:
            raise SingularMatrixError(f"no pivot in column {col}")
        pivot = col + int(rows[0])
        if pivot != col:
            aug[[col, pivot]] = aug[[pivot, col]]
        hits = np.flatnonzero(aug[:, col])
        hits = hits[hits != col]
        aug[hits] ^= aug[col]
    if np.any(aug[k:, k]):
        raise SingularMatrixError("right-hand side outside the column space")
    return aug[:k, k].copy()
