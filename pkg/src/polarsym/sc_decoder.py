"""Successive-cancellation decoding with fixed-address triangular memory.

The decoder keeps one theta cell per (level, suffix) pair - 2N-1 cells in
total - and two bit cells per pair (4N-2 cells).  Each outer step refreshes
the theta column down to the levels whose trailing bits are zero, makes one
MAP (or frozen) decision, and propagates decided bits back down whenever the
step index ends in a one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .core import CodeSpec, polar_transform
from .parametrization import ThetaFlags


class DecoderMemory:
    """Triangular theta/bit arrays for one decode.

    Parameters
    ----------
    n : int
        Transform depth; the block length is N = 2**n.
    ternary : bool
        Use the erasure-channel integer representation of theta.
    """

    def __init__(self, n: int, ternary: bool = False):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.N = 1 << n
        self.ternary = ternary
        self.offsets = _kernels.level_offsets(n)
        dtype = np.int8 if ternary else np.float64
        self.theta = np.zeros(2 * self.N - 1, dtype=dtype)
        self.u = np.zeros(2 * (2 * self.N - 1), dtype=np.uint8)
        self.flags = ThetaFlags()
        assert self.theta_cell_count == 2 * self.N - 1
        assert self.u_cell_count == 4 * self.N - 2

    @property
    def theta_cell_count(self) -> int:
        return self.theta.size

    @property
    def u_cell_count(self) -> int:
        return self.u.size

    def theta_at(self, k: int, c: int) -> float:
        return self.theta[self.offsets[k] + c]

    def set_theta(self, k: int, c: int, value) -> None:
        self.theta[self.offsets[k] + c] = value

    def u_at(self, k: int, c: int, b: int) -> int:
        return int(self.u[2 * (self.offsets[k] + c) + b])

    def set_u(self, k: int, c: int, b: int, value: int) -> None:
        self.u[2 * (self.offsets[k] + c) + b] = value

    def level_thetas(self, k: int) -> np.ndarray:
        return self.theta[self.offsets[k] : self.offsets[k + 1]]

    def init_priors(self, priors) -> None:
        priors = np.asarray(priors)
        if priors.shape != (self.N,):
            raise ValueError(f"expected {self.N} priors, got {priors.shape}")
        self.theta[: self.N] = priors


def update_theta(mem: DecoderMemory, k: int, b: int) -> None:
    """Refresh theta level k (and deeper levels as needed) for step prefix b."""
    if mem.ternary:
        _kernels._update_theta_ternary(mem.theta, mem.u, mem.n, mem.offsets, k, b)
        return
    raw = _kernels._update_theta(mem.theta, mem.u, mem.n, mem.offsets, k, b)
    if raw & _kernels.FLAG_ZERO_DEN:
        mem.flags.zero_denominator += 1
    if raw & _kernels.FLAG_CLAMP:
        mem.flags.clamp_excess += 1


def update_u(mem: DecoderMemory, k: int, b_prefix: int) -> None:
    """Propagate the decided bit pair at level k down; b_prefix has length k-1."""
    _kernels._update_u(mem.u, mem.n, mem.offsets, k, b_prefix)


@dataclass
class DecodeResult:
    """Outcome of one SC decode."""

    u_hat: np.ndarray
    x_hat: np.ndarray
    step_thetas: np.ndarray
    flags: ThetaFlags
    memory: DecoderMemory
    unfrozen: tuple[int, ...] = field(default=(), repr=False)

    @cached_property
    def message_bits(self) -> dict[int, int]:
        return {b: int(self.u_hat[b]) for b in self.unfrozen}


def _frozen_arrays(
    spec: CodeSpec, frozen_values: Mapping[int, int] | Sequence[int]
) -> tuple[np.ndarray, np.ndarray]:
    fmask = spec.frozen_mask()
    fvals = np.zeros(spec.N, dtype=np.uint8)
    if isinstance(frozen_values, Mapping):
        if set(frozen_values) != set(spec.frozen):
            raise ValueError("frozen_values must cover exactly the frozen set")
        for b, v in frozen_values.items():
            fvals[b] = v & 1
    else:
        vals = np.asarray(frozen_values)
        if vals.shape != (len(spec.frozen),):
            raise ValueError(
                f"expected {len(spec.frozen)} frozen values, got {vals.shape}"
            )
        for b, v in zip(spec.frozen_sorted, vals):
            fvals[b] = int(v) & 1
    return fmask, fvals


def sc_decode(
    spec: CodeSpec,
    priors,
    frozen_values: Mapping[int, int] | Sequence[int],
    ternary: bool = False,
) -> DecodeResult:
    """Run the successive-cancellation decoder.

    ``priors`` are per-position theta values of the level-0 distributions;
    with ``ternary`` they must lie in {-1, 0, +1} and the erasure-channel
    update rule is used.  ``frozen_values`` maps every frozen index to its
    known bit (or lists the values in ascending index order).
    """
    fmask, fvals = _frozen_arrays(spec, frozen_values)
    mem = DecoderMemory(spec.n, ternary=ternary)
    if ternary:
        priors = np.asarray(priors)
        if priors.shape != (spec.N,):
            raise ValueError(f"expected {spec.N} priors, got {priors.shape}")
        pri = np.asarray(priors, dtype=np.int8)
        if not np.isin(pri, (-1, 0, 1)).all():
            raise ValueError("ternary priors must lie in {-1, 0, 1}")
        step = np.zeros(spec.N, dtype=np.int8)
        u_hat = np.zeros(spec.N, dtype=np.uint8)
        _kernels.sc_kernel_ternary(
            spec.n, mem.offsets, pri, fmask, fvals, mem.theta, mem.u, u_hat, step
        )
    else:
        pri = np.asarray(priors, dtype=np.float64)
        if pri.shape != (spec.N,):
            raise ValueError(f"expected {spec.N} priors, got {pri.shape}")
        if np.abs(pri).max(initial=0.0) > 1.0:
            raise ValueError("priors must lie in [-1, 1]")
        step = np.zeros(spec.N, dtype=np.float64)
        u_hat = np.zeros(spec.N, dtype=np.uint8)
        raw = _kernels.sc_kernel(
            spec.n, mem.offsets, pri, fmask, fvals, mem.theta, mem.u, u_hat, step
        )
        if raw & _kernels.FLAG_ZERO_DEN:
            mem.flags.zero_denominator += 1
        if raw & _kernels.FLAG_CLAMP:
            mem.flags.clamp_excess += 1
    x_hat = mem.u[0 : 2 * spec.N : 2].copy()
    return DecodeResult(
        u_hat=u_hat,
        x_hat=x_hat,
        step_thetas=step,
        flags=mem.flags,
        memory=mem,
        unfrozen=spec.unfrozen_sorted,
    )


def genie_error_profile(priors, true_u) -> np.ndarray:
    """Per-index decision errors of an SC decode whose decisions are corrected
    to ``true_u`` after being recorded (genie-aided decoding)."""
    pri = np.asarray(priors, dtype=np.float64)
    N = pri.shape[0]
    n = N.bit_length() - 1
    if 1 << n != N:
        raise ValueError(f"prior length {N} is not a power of two")
    mem = DecoderMemory(n)
    truth = np.asarray(true_u, dtype=np.uint8)
    if truth.shape != (N,):
        raise ValueError("true_u length mismatch")
    errors = np.zeros(N, dtype=np.uint8)
    _kernels.genie_kernel(n, mem.offsets, pri, truth, mem.theta, mem.u, errors)
    return errors


def sc_decode_noiseless_check(spec: CodeSpec, x) -> bool:
    """Convenience: decode with perfect priors and consistent frozen bits,
    return whether the reproduction equals x."""
    x = np.asarray(x, dtype=np.uint8)
    u = polar_transform(x, spec.n)
    priors = 1.0 - 2.0 * x.astype(np.float64)
    frozen = {b: int(u[b]) for b in spec.frozen}
    res = sc_decode(spec, priors, frozen)
    return bool(np.array_equal(res.x_hat, x))
