"""Successive-cancellation list decoding over a fixed-address path pool.

Up to L decoder memories live side by side; unfrozen steps fork every path
(doubling the path count while capacity allows) or weigh all 2*Lambda
candidate extensions and keep the L heaviest, selected by a quickselect over
an index permutation.  Weights are renormalized once per outer step so that
the running maximum stays at 1; the accumulated scale is tracked so the true
joint path probabilities can still be reported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _kernels
from .core import CodeSpec
from .parametrization import ThetaFlags
from .sc_decoder import DecoderMemory, _frozen_arrays, sc_decode, DecodeResult

DEFAULT_PIVOT_SEED = 0x5DEECE66D % 2147483648


class DegeneratePoolError(RuntimeError):
    """All path weights are zero, so magnification has no defined scale."""


class PathPool:
    """L decoder memories plus 2L weights, active flags and index slots."""

    def __init__(self, n: int, L: int):
        if L < 1:
            raise ValueError("list size must be >= 1")
        self.n = n
        self.N = 1 << n
        self.L = L
        self.offsets = _kernels.level_offsets(n)
        self.theta = np.zeros((L, 2 * self.N - 1), dtype=np.float64)
        self.u = np.zeros((L, 2 * (2 * self.N - 1)), dtype=np.uint8)
        self.u_hist = np.zeros((L, self.N), dtype=np.uint8)
        self.weights = np.zeros(2 * L, dtype=np.float64)
        self.active = np.zeros(2 * L, dtype=np.uint8)
        self.index = np.zeros(2 * L, dtype=np.int64)
        self.lambda_count = 1
        self.log2_scale = 0.0
        self._pivot_state = DEFAULT_PIVOT_SEED

    @property
    def on(self) -> int:
        # flat offset of the single top-level theta cell
        return int(self.offsets[self.n])

    def path_memory(self, slot: int) -> DecoderMemory:
        """A DecoderMemory view aliasing one path's buffers (for inspection)."""
        mem = DecoderMemory.__new__(DecoderMemory)
        mem.n = self.n
        mem.N = self.N
        mem.ternary = False
        mem.offsets = self.offsets
        mem.theta = self.theta[slot]
        mem.u = self.u[slot]
        mem.flags = ThetaFlags()
        return mem


def extend_path(pool: PathPool, b: int, u: int) -> None:
    """Multiply every live path's weight by (1 -+_u theta) and record bit u."""
    _kernels.extend_paths(
        pool.weights,
        pool.theta,
        pool.u,
        pool.u_hist,
        pool.lambda_count,
        pool.on,
        b & 1,
        b,
        float(u),
        True,
    )


def split_path(pool: PathPool, b: int) -> None:
    """Fork every live path into a 0-child (in place) and a 1-child (clone)."""
    if 2 * pool.lambda_count > pool.L:
        raise ValueError("split would exceed the pool capacity")
    _kernels.split_paths(
        pool.weights,
        pool.theta,
        pool.u,
        pool.u_hist,
        pool.lambda_count,
        pool.on,
        b & 1,
        b,
    )
    pool.lambda_count *= 2


def prune_path(pool: PathPool, b: int) -> None:
    """Weigh all 2*Lambda candidate extensions, keep the L heaviest compacted
    into slots 0..L-1, and set Lambda = L."""
    pool._pivot_state = _kernels.prune_paths(
        pool.weights,
        pool.active,
        pool.index,
        pool.theta,
        pool.u,
        pool.u_hist,
        pool.lambda_count,
        pool.L,
        pool.on,
        b & 1,
        b,
        pool._pivot_state,
    )
    pool.lambda_count = pool.L


def copy_path(pool: PathPool, dst: int, src: int) -> None:
    """Deep-copy all theta/bit state (and the decision history) of one path."""
    if dst == src:
        raise ValueError("dst must differ from src")
    _kernels.copy_path(pool.theta, pool.u, pool.u_hist, dst, src)


def magnify_p(pool: PathPool) -> None:
    """Divide all live weights by their maximum so the largest becomes 1."""
    maxP = _kernels.magnify_weights(pool.weights, pool.lambda_count)
    if maxP <= 0.0:
        raise DegeneratePoolError("all path weights are zero")
    pool.log2_scale += float(np.log2(maxP))


def mark_top_L(weights, L: int, seed: int = DEFAULT_PIVOT_SEED) -> np.ndarray:
    """Flags marking the min(L, len(weights)) largest weights.

    Ties are broken toward the lower slot index.  Selection runs as a
    randomized quickselect over an index permutation; the pivot choice only
    affects running time, never the marked set.
    """
    P = np.asarray(weights, dtype=np.float64)
    lam2 = P.shape[0]
    index = np.zeros(lam2, dtype=np.int64)
    active = np.zeros(lam2, dtype=np.uint8)
    _kernels.mark_top(P, index, active, lam2, L, seed)
    return active


@dataclass
class SclPath:
    """One surviving path with its reported joint probability."""

    slot: int
    u_hat: np.ndarray
    x_hat: np.ndarray
    weight: float
    probability: float
    unfrozen: tuple[int, ...] = field(default=(), repr=False)

    @cached_property
    def message_bits(self) -> dict[int, int]:
        return {b: int(self.u_hat[b]) for b in self.unfrozen}


@dataclass
class SclSteps:
    """Per-step snapshots recorded when ``record_steps`` is set."""

    lambda_count: np.ndarray
    weights: np.ndarray
    log2_scale: np.ndarray
    u_hist: np.ndarray


@dataclass
class SclResult:
    paths: list[SclPath]
    selected: SclPath
    parity_failed: bool
    flags: ThetaFlags
    log2_scale: float
    steps: SclSteps | None = None


def scl_decode(
    spec: CodeSpec,
    priors,
    frozen_values: Mapping[int, int] | Sequence[int],
    L: int,
    parity: Callable[[np.ndarray], bool] | None = None,
    *,
    skip_leading_frozen: bool = True,
    record_steps: bool = False,
    pivot_seed: int = DEFAULT_PIVOT_SEED,
) -> SclResult:
    """Run the successive-cancellation list decoder.

    Returns all surviving paths ranked by probability (ties toward the lower
    slot).  Without ``parity`` the ranked-first path is selected; with it, the
    best path whose reproduction satisfies the check is selected, falling back
    to the ranked-first path with ``parity_failed`` set when none passes.
    ``path.probability`` is the joint probability of the path's full bit
    sequence under the prior product distribution.

    A frozen value that conditions on an event whose probability rounds to
    zero does not abort the decode: the weights are reset and the
    ``zero_denominator`` flag is raised, mirroring the plain decoder's
    convention.
    """
    if L < 1:
        raise ValueError("list size must be >= 1")
    fmask, fvals = _frozen_arrays(spec, frozen_values)
    pri = np.asarray(priors, dtype=np.float64)
    if pri.shape != (spec.N,):
        raise ValueError(f"expected {spec.N} priors, got {pri.shape}")
    if np.abs(pri).max(initial=0.0) > 1.0:
        raise ValueError("priors must lie in [-1, 1]")

    pool = PathPool(spec.n, L)
    N = spec.N
    if record_steps:
        P_hist = np.zeros((N, L), dtype=np.float64)
        lam_hist = np.zeros(N, dtype=np.int64)
        scale_hist = np.zeros(N, dtype=np.float64)
        uhist_hist = np.zeros((N, L, N), dtype=np.uint8)
    else:
        P_hist = np.zeros((1, 1), dtype=np.float64)
        lam_hist = np.zeros(1, dtype=np.int64)
        scale_hist = np.zeros(1, dtype=np.float64)
        uhist_hist = np.zeros((1, 1, 1), dtype=np.uint8)

    lam, log2_scale, raw = _kernels.scl_kernel(
        spec.n,
        pool.offsets,
        L,
        pri,
        fmask,
        fvals,
        pool.theta,
        pool.u,
        pool.u_hist,
        pool.weights,
        pool.active,
        pool.index,
        1 if skip_leading_frozen else 0,
        1 if record_steps else 0,
        P_hist,
        lam_hist,
        scale_hist,
        uhist_hist,
        pivot_seed,
    )
    pool.lambda_count = lam
    pool.log2_scale = log2_scale

    flags = ThetaFlags()
    if raw & _kernels.FLAG_ZERO_DEN:
        flags.zero_denominator += 1
    if raw & _kernels.FLAG_CLAMP:
        flags.clamp_excess += 1

    paths = []
    for slot in range(lam):
        u_hat = pool.u_hist[slot].copy()
        x_hat = pool.u[slot, 0 : 2 * N : 2].copy()
        weight = float(pool.weights[slot])
        prob = weight * 2.0 ** (log2_scale - N)
        paths.append(
            SclPath(
                slot=slot,
                u_hat=u_hat,
                x_hat=x_hat,
                weight=weight,
                probability=prob,
                unfrozen=spec.unfrozen_sorted,
            )
        )
    paths.sort(key=lambda p: (-p.weight, p.slot))

    parity_failed = False
    selected = paths[0]
    if parity is not None:
        for p in paths:
            if parity(p.x_hat):
                selected = p
                break
        else:
            parity_failed = True

    steps = None
    if record_steps:
        steps = SclSteps(
            lambda_count=lam_hist,
            weights=P_hist,
            log2_scale=scale_hist,
            u_hist=uhist_hist,
        )
    return SclResult(
        paths=paths,
        selected=selected,
        parity_failed=parity_failed,
        flags=flags,
        log2_scale=float(log2_scale),
        steps=steps,
    )


def scl_matches_sc(spec: CodeSpec, priors, frozen_values) -> bool:
    """SCL with L=1 must reproduce the SC decoder bit for bit."""
    sc: DecodeResult = sc_decode(spec, priors, frozen_values)
    scl = scl_decode(spec, priors, frozen_values, L=1)
    return bool(
        np.array_equal(sc.u_hat, scl.selected.u_hat)
        and np.array_equal(sc.x_hat, scl.selected.x_hat)
    )
