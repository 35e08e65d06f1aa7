"""Numba kernels shared by the SC and SCL decoders.

Memory layout: the triangular level arrays are flattened.  Level k occupies
``off[k] .. off[k]+2**(n-k)`` where ``off`` is the prefix-sum of level sizes;
the bit array stores two bits per cell at ``2*cell + b``.  All kernels use the
b0-MSB index convention of :mod:`polarsym.core`.

Flag bits returned by the theta kernels:
  1 - a zero denominator was replaced by theta = 0
  2 - a clamp exceeded the 1e-9 numerical-trouble tolerance
"""

from __future__ import annotations

import numpy as np
from numba import njit

FLAG_ZERO_DEN = 1
FLAG_CLAMP = 2

CLAMP_TOL = 1e-9


def level_offsets(n: int) -> np.ndarray:
    off = np.zeros(n + 2, dtype=np.int64)
    for k in range(n + 1):
        off[k + 1] = off[k] + (1 << (n - k))
    return off


@njit(cache=True)
def _update_theta(theta, u, n, off, k, b):
    if k == 0:
        return 0
    flags = 0
    if b & 1 == 0:
        flags |= _update_theta(theta, u, n, off, k - 1, b >> 1)
    m = 1 << (n - k)
    o = off[k]
    op = off[k - 1]
    if b & 1 == 0:
        for c in range(m):
            theta[o + c] = theta[op + 2 * c + 1] * theta[op + 2 * c]
    else:
        for c in range(m):
            s = 1.0 - 2.0 * u[2 * (o + c)]
            num = theta[op + 2 * c + 1] + s * theta[op + 2 * c]
            den = 1.0 + s * theta[o + c]
            if den == 0.0:
                theta[o + c] = 0.0
                flags |= FLAG_ZERO_DEN
            else:
                v = num / den
                if v > 1.0:
                    if v > 1.0 + CLAMP_TOL:
                        flags |= FLAG_CLAMP
                    v = 1.0
                elif v < -1.0:
                    if v < -1.0 - CLAMP_TOL:
                        flags |= FLAG_CLAMP
                    v = -1.0
                theta[o + c] = v
    return flags


@njit(cache=True)
def _update_theta_ternary(theta, u, n, off, k, b):
    # theta holds int8 values in {-1, 0, 1}; the bit rule saturates, no division
    if k == 0:
        return 0
    if b & 1 == 0:
        _update_theta_ternary(theta, u, n, off, k - 1, b >> 1)
    m = 1 << (n - k)
    o = off[k]
    op = off[k - 1]
    if b & 1 == 0:
        for c in range(m):
            theta[o + c] = theta[op + 2 * c + 1] * theta[op + 2 * c]
    else:
        for c in range(m):
            s = 1 - 2 * np.int8(u[2 * (o + c)])
            v = theta[op + 2 * c + 1] + s * theta[op + 2 * c]
            if v > 0:
                theta[o + c] = 1
            elif v < 0:
                theta[o + c] = -1
            else:
                theta[o + c] = 0
    return 0


@njit(cache=True)
def _update_u(u, n, off, k, b):
    # b is the decoded-prefix of length k-1; recursion unrolled into a loop
    while True:
        m = 1 << (n - k)
        o = off[k]
        op = off[k - 1]
        slot = (b & 1) if k >= 2 else 0
        for c in range(m):
            x0 = u[2 * (o + c)]
            x1 = u[2 * (o + c) + 1]
            u[2 * (op + 2 * c) + slot] = x0 ^ x1
            u[2 * (op + 2 * c + 1) + slot] = x1
        if k >= 2 and (b & 1) == 1:
            k -= 1
            b >>= 1
        else:
            return


@njit(cache=True)
def sc_kernel(n, off, priors, fmask, fvals, theta, u, u_hat, step_thetas):
    N = 1 << n
    on = off[n]
    for c in range(N):
        theta[c] = priors[c]
    flags = 0
    for b in range(N):
        flags |= _update_theta(theta, u, n, off, n, b)
        th = theta[on]
        step_thetas[b] = th
        if fmask[b] == 1:
            d = fvals[b]
        else:
            # compare the two candidate path weights rather than sign(th) so
            # that sub-epsilon magnitudes resolve exactly like the list
            # decoder's tie rule (lower branch wins)
            d = 1 if (1.0 - th) > (1.0 + th) else 0
        u_hat[b] = d
        u[2 * on + (b & 1)] = d
        if b & 1 == 1:
            _update_u(u, n, off, n, b >> 1)
    return flags


@njit(cache=True)
def sc_kernel_ternary(n, off, priors, fmask, fvals, theta, u, u_hat, step_thetas):
    N = 1 << n
    on = off[n]
    for c in range(N):
        theta[c] = priors[c]
    for b in range(N):
        _update_theta_ternary(theta, u, n, off, n, b)
        th = theta[on]
        step_thetas[b] = th
        if fmask[b] == 1:
            d = fvals[b]
        else:
            d = 1 if th < 0 else 0
        u_hat[b] = d
        u[2 * on + (b & 1)] = d
        if b & 1 == 1:
            _update_u(u, n, off, n, b >> 1)
    return 0


@njit(cache=True)
def genie_kernel(n, off, priors, true_u, theta, u, errors):
    """SC schedule with every decision corrected to the true value afterwards."""
    N = 1 << n
    on = off[n]
    for c in range(N):
        theta[c] = priors[c]
    flags = 0
    for b in range(N):
        flags |= _update_theta(theta, u, n, off, n, b)
        d = 1 if (1.0 - theta[on]) > (1.0 + theta[on]) else 0
        errors[b] = 1 if d != true_u[b] else 0
        u[2 * on + (b & 1)] = true_u[b]
        if b & 1 == 1:
            _update_u(u, n, off, n, b >> 1)
    return flags


# --- path selection (quickselect over an index permutation) -----------------


@njit(cache=True)
def _rng_next(state):
    # small LCG; pivot randomness only affects running time, not results
    return (state * 1103515245 + 12345) % 2147483648


@njit(cache=True)
def _ranks_before(P, a, b):
    # descending weight order with the deterministic tie rule: lower slot wins
    if P[a] > P[b]:
        return True
    if P[a] < P[b]:
        return False
    return a < b


@njit(cache=True)
def _swap_index(index, i, j):
    t = index[i]
    index[i] = index[j]
    index[j] = t


@njit(cache=True)
def _partition(P, index, left, right, state):
    state = _rng_next(state)
    pivot_pos = left + state % (right - left + 1)
    _swap_index(index, pivot_pos, right)
    pivot = index[right]
    store = left
    for i in range(left, right):
        if _ranks_before(P, index[i], pivot):
            _swap_index(index, i, store)
            store += 1
    _swap_index(index, store, right)
    return store, state


@njit(cache=True)
def _select_top(P, index, left, right, top, state):
    # afterwards index[0:top] holds the `top` highest-ranked slots (unordered)
    while left < right:
        pos, state = _partition(P, index, left, right, state)
        if pos > top - 1:
            right = pos - 1
        elif pos < top - 1:
            left = pos + 1
        else:
            break
    return state


@njit(cache=True)
def mark_top(P, index, active, lam2, top, state):
    for i in range(lam2):
        index[i] = i
        active[i] = 0
    if top >= lam2:
        for i in range(lam2):
            active[i] = 1
        return state
    state = _select_top(P, index, 0, lam2 - 1, top, state)
    for i in range(top):
        active[index[i]] = 1
    return state


# --- path-pool operations ----------------------------------------------------


@njit(cache=True)
def copy_path(theta2, u2, uhist2, dst, src):
    theta2[dst] = theta2[src]
    u2[dst] = u2[src]
    uhist2[dst] = uhist2[src]


@njit(cache=True)
def extend_paths(P, theta2, u2, uhist2, lam, on, bslot, b, uval, update_weight):
    s = 1.0 - 2.0 * uval
    for l in range(lam):
        if update_weight:
            P[l] = P[l] * (1.0 + s * theta2[l, on])
        u2[l, 2 * on + bslot] = uval
        uhist2[l, b] = uval


@njit(cache=True)
def split_paths(P, theta2, u2, uhist2, lam, on, bslot, b):
    for l in range(lam):
        th = theta2[l, on]
        P[lam + l] = P[l] * (1.0 - th)
        P[l] = P[l] * (1.0 + th)
        copy_path(theta2, u2, uhist2, lam + l, l)
        u2[l, 2 * on + bslot] = 0
        u2[lam + l, 2 * on + bslot] = 1
        uhist2[l, b] = 0
        uhist2[lam + l, b] = 1


@njit(cache=True)
def prune_paths(P, active, index, theta2, u2, uhist2, lam, top, on, bslot, b, state):
    for l in range(lam):
        th = theta2[l, on]
        P[lam + l] = P[l] * (1.0 - th)
        P[l] = P[l] * (1.0 + th)
    state = mark_top(P, index, active, 2 * lam, top, state)
    # survivors in the lower half keep their slot with bit 0; a surviving
    # sibling is cloned into its own slot when that slot exists
    for l in range(lam):
        if active[l] == 1:
            u2[l, 2 * on + bslot] = 0
            uhist2[l, b] = 0
            if active[lam + l] == 1 and lam + l < top:
                copy_path(theta2, u2, uhist2, lam + l, l)
                u2[lam + l, 2 * on + bslot] = 1
                uhist2[lam + l, b] = 1
        elif active[lam + l] == 1:
            P[l] = P[lam + l]
            u2[l, 2 * on + bslot] = 1
            uhist2[l, b] = 1
            active[l] = 1
            active[lam + l] = 0
    # compact the remaining upper-half survivors into free lower slots,
    # ascending scan; their parent state lives at slot (l - lam)
    free = 0
    for l in range(top, 2 * lam):
        if active[l] == 1:
            while active[free] == 1:
                free += 1
            P[free] = P[l]
            copy_path(theta2, u2, uhist2, free, l - lam)
            u2[free, 2 * on + bslot] = 1
            uhist2[free, b] = 1
            active[free] = 1
            active[l] = 0
    return state


@njit(cache=True)
def magnify_weights(P, lam):
    maxP = 0.0
    for l in range(lam):
        if maxP < P[l]:
            maxP = P[l]
    if maxP <= 0.0:
        return 0.0
    for l in range(lam):
        P[l] = P[l] / maxP
    return maxP


@njit(cache=True)
def scl_kernel(
    n,
    off,
    top,
    priors,
    fmask,
    fvals,
    theta2,
    u2,
    uhist2,
    P,
    active,
    index,
    skip_leading,
    record,
    P_hist,
    lam_hist,
    scale_hist,
    uhist_hist,
    seed,
):
    N = 1 << n
    on = off[n]
    lam = 1
    for c in range(N):
        theta2[0, c] = priors[c]
    P[0] = 1.0
    log2_scale = 0.0
    flags = 0
    leading = True
    state = seed
    for b in range(N):
        bslot = b & 1
        for l in range(lam):
            flags |= _update_theta(theta2[l], u2[l], n, off, n, b)
        if fmask[b] == 1:
            skip_now = skip_leading == 1 and leading
            extend_paths(
                P, theta2, u2, uhist2, lam, on, bslot, b, fvals[b], not skip_now
            )
            if skip_now:
                # while the prefix is all-frozen there is a single path whose
                # weight would be normalized straight back to 1; account for
                # the factor in the scale instead of touching P
                f = 1.0 + (1.0 - 2.0 * fvals[b]) * theta2[0, on]
                if f <= 0.0:
                    # frozen value conditions on an event whose probability
                    # rounded to zero; keep going like the plain decoder does
                    flags |= FLAG_ZERO_DEN
                else:
                    log2_scale += np.log2(f)
            do_norm = not skip_now
        else:
            leading = False
            if 2 * lam <= top:
                split_paths(P, theta2, u2, uhist2, lam, on, bslot, b)
                lam = 2 * lam
            else:
                state = prune_paths(
                    P, active, index, theta2, u2, uhist2, lam, top, on, bslot, b, state
                )
                lam = top
            do_norm = True
        if do_norm:
            maxP = magnify_weights(P, lam)
            if maxP <= 0.0:
                # every weight underflowed to zero (a frozen value against a
                # theta that rounded to +-1); the ranking information is gone,
                # so reset to uniform weights and continue like the plain
                # decoder rather than aborting
                for l in range(lam):
                    P[l] = 1.0
                flags |= FLAG_ZERO_DEN
            else:
                log2_scale += np.log2(maxP)
        if bslot == 1:
            for l in range(lam):
                _update_u(u2[l], n, off, n, b >> 1)
        if record == 1:
            lam_hist[b] = lam
            scale_hist[b] = log2_scale
            for l in range(lam):
                P_hist[b, l] = P[l]
                for c in range(N):
                    uhist_hist[b, l, c] = uhist2[l, c]
    return lam, log2_scale, flags
