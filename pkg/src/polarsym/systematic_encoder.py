"""Systematic channel encoding.

Given message bits at the bit-reversed unfrozen positions and frozen values
in the transform domain, solve for the remaining channel-input bits so that
the transform of the result matches the frozen constraints.  The solver is a
divide-and-conquer sweep over a working array V: descend into the right half,
XOR the unfrozen left cells, descend into the left half, XOR unconditionally.
It runs in O(N log N) bit operations and accepts batches of inputs.
"""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .core import CodeSpec, bit_reverse, bit_reverse_permutation


def _calc_v(V: np.ndarray, X: np.ndarray, fmask: np.ndarray, k: int, prefix: int):
    if k == 0:
        if fmask[prefix]:
            V[..., prefix] = X[..., prefix]
        return
    half = 1 << (k - 1)
    lo = prefix << k
    _calc_v(V, X, fmask, k - 1, (prefix << 1) | 1)
    left = V[..., lo : lo + half]
    right = V[..., lo + half : lo + 2 * half]
    keep = fmask[lo : lo + half] == 0
    left[..., keep] ^= right[..., keep]
    _calc_v(V, X, fmask, k - 1, prefix << 1)
    left ^= right


def systematic_encode_batch(spec: CodeSpec, messages, frozen_u) -> np.ndarray:
    """Vectorized systematic encode over leading batch dimensions.

    ``messages`` has shape (..., |unfrozen|) with columns in ascending order
    of the systematic (bit-reversed) positions; ``frozen_u`` has shape
    (..., |frozen|) with columns in ascending frozen-index order.  Returns the
    channel inputs with shape (..., N).
    """
    msg = np.asarray(messages, dtype=np.uint8) & 1
    frz = np.asarray(frozen_u, dtype=np.uint8) & 1
    K = len(spec.unfrozen)
    if msg.shape[-1] != K:
        raise ValueError(f"expected {K} message bits, got {msg.shape[-1]}")
    if frz.shape[-1] != spec.N - K:
        raise ValueError(
            f"expected {spec.N - K} frozen bits, got {frz.shape[-1]}"
        )
    batch = np.broadcast_shapes(msg.shape[:-1], frz.shape[:-1])
    V = np.zeros(batch + (spec.N,), dtype=np.uint8)
    X = np.zeros(batch + (spec.N,), dtype=np.uint8)
    # V is indexed in the transform domain: the message bit at systematic
    # position p seeds cell reverse(p)
    for col, p in enumerate(spec.systematic_unfrozen_sorted):
        V[..., bit_reverse(p, spec.n)] = msg[..., col]
    for col, b in enumerate(spec.frozen_sorted):
        X[..., b] = frz[..., col]
    fmask = spec.frozen_mask()
    _calc_v(V, X, fmask, spec.n, 0)
    perm = bit_reverse_permutation(spec.n)
    x = np.zeros_like(V)
    x[..., perm] = V
    return x


def systematic_encode(
    spec: CodeSpec,
    message: Mapping[int, int],
    frozen_u: Mapping[int, int],
) -> np.ndarray:
    """Encode one block.

    ``message`` maps every systematic (bit-reversed unfrozen) position to its
    bit; ``frozen_u`` maps every frozen transform-domain index to its bit.
    The returned x carries the message verbatim at the systematic positions
    and satisfies the frozen constraints after the transform.
    """
    if set(message) != set(spec.systematic_unfrozen):
        raise ValueError("message must cover exactly the systematic positions")
    if set(frozen_u) != set(spec.frozen):
        raise ValueError("frozen_u must cover exactly the frozen set")
    msg = np.array(
        [message[p] for p in spec.systematic_unfrozen_sorted], dtype=np.uint8
    )
    frz = np.array([frozen_u[b] for b in spec.frozen_sorted], dtype=np.uint8)
    return systematic_encode_batch(spec, msg, frz)
