"""Brute-force references for small block lengths.

Everything here enumerates all 2^N transform inputs, so block lengths are
capped hard at n <= 4 (table size 65536).  These functions define what the
fast recursions must reproduce; they are deliberately naive.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import numpy as np

from .core import CodeSpec, bit_reverse
from .parametrization import ThetaFlags
from .sc_decoder import _frozen_arrays

MAX_ORACLE_N = 4


def _check_n(n: int) -> None:
    if n > MAX_ORACLE_N:
        raise ValueError(f"oracle supports n <= {MAX_ORACLE_N}, got n={n}")
    if n < 1:
        raise ValueError("n must be >= 1")


def transform_matrix(n: int) -> np.ndarray:
    """The N x N transform matrix built from Kronecker powers of [[1,0],[1,1]]
    followed by the bit-reversal column permutation."""
    _check_n(n)
    F = np.array([[1, 0], [1, 1]], dtype=np.uint8)
    M = np.array([[1]], dtype=np.uint8)
    for _ in range(n):
        M = np.kron(M, F)
    N = 1 << n
    out = np.zeros_like(M)
    for j in range(N):
        out[:, j] = M[:, bit_reverse(j, n)]
    return out


def all_inputs(n: int) -> np.ndarray:
    """All 2^N length-N bit vectors as rows, in increasing integer order."""
    _check_n(n)
    N = 1 << n
    v = np.arange(1 << N, dtype=np.int64)
    return ((v[:, None] >> (N - 1 - np.arange(N))) & 1).astype(np.uint8)


class JointTable:
    """Exact joint pmf of U = X * G for independent per-position priors on X.

    ``probs[i]`` is the probability of the bit string of integer i (leftmost
    bit most significant), i.e. prod_c P_c(x_c) with x the transform of u.
    """

    def __init__(self, priors):
        pri = np.asarray(priors, dtype=np.float64)
        N = pri.shape[0]
        n = N.bit_length() - 1
        if 1 << n != N:
            raise ValueError(f"prior length {N} is not a power of two")
        _check_n(n)
        if np.abs(pri).max() > 1.0:
            raise ValueError("priors must lie in [-1, 1]")
        self.n = n
        self.N = N
        self.u = all_inputs(n)
        x = (self.u @ transform_matrix(n)) % 2
        self.x = x.astype(np.uint8)
        self.probs = np.prod((1.0 + (1.0 - 2.0 * x) * pri) / 2.0, axis=1)

    def normalization(self) -> float:
        return float(self.probs.sum())


def brute_conditional_theta(
    priors,
    prefix: Sequence[int],
    b: int,
    flags: ThetaFlags | None = None,
    table: JointTable | None = None,
) -> float:
    """Exact theta of U_b given U_0..U_{b-1} = prefix, by marginalization.

    A probability-zero prefix yields theta = 0 with ``flags.zero_denominator``
    bumped, matching the decoder's degenerate-conditioning convention.
    """
    t = table if table is not None else JointTable(priors)
    prefix = np.asarray(prefix, dtype=np.uint8)
    if len(prefix) != b:
        raise ValueError("prefix length must equal the step index b")
    if not 0 <= b < t.N:
        raise ValueError(f"step index {b} out of range")
    sel = np.all(t.u[:, :b] == prefix, axis=1)
    p0 = float(t.probs[sel & (t.u[:, b] == 0)].sum())
    p1 = float(t.probs[sel & (t.u[:, b] == 1)].sum())
    tot = p0 + p1
    if tot == 0.0:
        if flags is not None:
            flags.zero_denominator += 1
        return 0.0
    return (p0 - p1) / tot


def brute_map_sequence(
    spec: CodeSpec,
    priors,
    frozen_values: Mapping[int, int] | Sequence[int],
    table: JointTable | None = None,
) -> tuple[np.ndarray, float]:
    """Exhaustive maximizer of the joint pmf over all u consistent with the
    frozen values; ties go to the lexicographically smallest sequence."""
    _check_n(spec.n)
    t = table if table is not None else JointTable(priors)
    if t.N != spec.N:
        raise ValueError("prior length does not match the spec")
    fmask, fvals = _frozen_arrays(spec, frozen_values)
    keep = np.all(t.u[:, fmask == 1] == fvals[fmask == 1], axis=1)
    cand = np.flatnonzero(keep)
    # rows are in increasing integer order, so argmax picks the lex-smallest tie
    best = cand[int(np.argmax(t.probs[cand]))]
    return t.u[best].copy(), float(t.probs[best])
