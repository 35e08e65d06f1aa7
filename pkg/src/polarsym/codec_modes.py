"""End-to-end codec configurations.

Three modes share the same decoder core and differ only in what is known and
what is read out:

* source coding with decoder side information - the transform of the source
  block restricted to the frozen set is the codeword; the decoder
  reconstructs the full block from the codeword and per-position priors;
* non-systematic channel coding - the message occupies the unfrozen
  transform-domain positions and is read back from the decided bits;
* systematic channel coding - the message appears verbatim in the channel
  input and is read back from the reproduction.

An optional outer CRC either extends a source codeword or is embedded into
the last unfrozen positions of a channel code; list decoding then prefers
the most probable path that satisfies the check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import gf2
from .core import CodeSpec, polar_transform
from .sc_decoder import sc_decode
from .scl_decoder import scl_decode
from .systematic_encoder import systematic_encode_batch


@dataclass(frozen=True)
class OuterParity:
    """A CRC configuration: bit width, polynomial mask (top bit implied),
    and the remainder value a valid block must produce."""

    width: int
    generator: int
    check_value: int = 0

    def __post_init__(self):
        if not 1 <= self.width <= 32:
            raise ValueError("CRC width must lie in [1, 32]")
        if not 0 <= self.generator < (1 << self.width):
            raise ValueError("generator mask must fit in `width` bits")
        if not 0 <= self.check_value < (1 << self.width):
            raise ValueError("check value must fit in `width` bits")


def crc_value(bits, cfg: OuterParity) -> int:
    """CRC remainder of a bit sequence: MSB-first long division, zero initial
    register, no final xor.  Linear over GF(2) in the input bits."""
    reg = 0
    mask = (1 << cfg.width) - 1
    for b in np.asarray(bits, dtype=np.uint8).ravel():
        fb = ((reg >> (cfg.width - 1)) & 1) ^ int(b)
        reg = (reg << 1) & mask
        if fb:
            reg ^= cfg.generator
    return reg


def crc_parity(bits, cfg: OuterParity) -> np.ndarray:
    """The remainder of :func:`crc_value` as a bit vector, MSB first."""
    v = crc_value(bits, cfg)
    return np.array(
        [(v >> (cfg.width - 1 - i)) & 1 for i in range(cfg.width)], dtype=np.uint8
    )


def _as_bit_values(values, positions: tuple[int, ...], what: str) -> np.ndarray:
    if isinstance(values, Mapping):
        if set(values) != set(positions):
            raise ValueError(f"{what} must cover exactly its index set")
        return np.array([values[p] & 1 for p in positions], dtype=np.uint8)
    arr = np.asarray(values, dtype=np.uint8) & 1
    if arr.shape != (len(positions),):
        raise ValueError(f"expected {len(positions)} {what} bits, got {arr.shape}")
    return arr


def _run_decoder(spec, priors, frozen_values, L, ternary, parity_check):
    if L == 1:
        res = sc_decode(spec, priors, frozen_values, ternary=ternary)
        failed = parity_check is not None and not parity_check(res.x_hat)
        return res.u_hat, res.x_hat, failed
    if ternary:
        raise ValueError("ternary arithmetic is only available with L=1")
    res = scl_decode(spec, priors, frozen_values, L, parity=parity_check)
    return res.selected.u_hat, res.selected.x_hat, res.parity_failed


# --- source coding with side information -------------------------------------


def source_encode(spec: CodeSpec, x) -> np.ndarray:
    """Compress a block: the transform restricted to the frozen set, in
    ascending index order, is the codeword."""
    u = polar_transform(np.asarray(x, dtype=np.uint8), spec.n)
    return u[list(spec.frozen_sorted)].copy()


def source_extension(x, parity: OuterParity) -> np.ndarray:
    """The parity bits a source encoder appends to its codeword."""
    return crc_parity(np.asarray(x, dtype=np.uint8) & 1, parity)


@dataclass
class SourceDecodeResult:
    x_hat: np.ndarray
    u_hat: np.ndarray
    parity_failed: bool = False


def source_decode(
    spec: CodeSpec,
    codeword,
    priors,
    L: int = 1,
    *,
    ternary: bool = False,
    parity: OuterParity | None = None,
    extension=None,
) -> SourceDecodeResult:
    """Reconstruct a source block from its codeword and side-information
    priors.  With ``parity``/``extension``, list paths failing the appended
    check are skipped (best failing path returned when none passes)."""
    frozen_values = _as_bit_values(codeword, spec.frozen_sorted, "codeword")
    check = None
    if parity is not None:
        if extension is None:
            raise ValueError("parity given without its extension bits")
        want = int(
            np.asarray(extension, dtype=np.uint8) @ (1 << np.arange(parity.width)[::-1])
        )
        check = lambda xh: crc_value(xh, parity) == want
    u_hat, x_hat, failed = _run_decoder(spec, priors, frozen_values, L, ternary, check)
    return SourceDecodeResult(x_hat=x_hat, u_hat=u_hat, parity_failed=failed)


# --- channel coding -----------------------------------------------------------


@dataclass
class ChannelDecodeResult:
    message: np.ndarray
    u_hat: np.ndarray
    x_hat: np.ndarray
    parity_failed: bool = False


def channel_encode_nonsystematic(spec: CodeSpec, message, frozen_u) -> np.ndarray:
    """Channel input for a message placed at the unfrozen transform-domain
    positions (ascending order) with shared frozen values."""
    u = np.zeros(spec.N, dtype=np.uint8)
    u[list(spec.unfrozen_sorted)] = _as_bit_values(
        message, spec.unfrozen_sorted, "message"
    )
    u[list(spec.frozen_sorted)] = _as_bit_values(frozen_u, spec.frozen_sorted, "frozen")
    return polar_transform(u, spec.n)


def channel_decode_nonsystematic(
    spec: CodeSpec,
    priors,
    frozen_u,
    L: int = 1,
    *,
    ternary: bool = False,
) -> ChannelDecodeResult:
    frozen_values = _as_bit_values(frozen_u, spec.frozen_sorted, "frozen")
    u_hat, x_hat, failed = _run_decoder(spec, priors, frozen_values, L, ternary, None)
    msg = u_hat[list(spec.unfrozen_sorted)].copy()
    return ChannelDecodeResult(message=msg, u_hat=u_hat, x_hat=x_hat)


def channel_encode_systematic(spec: CodeSpec, message, frozen_u) -> np.ndarray:
    """Channel input carrying the message verbatim at the systematic
    (bit-reversed unfrozen) positions."""
    msg = _as_bit_values(message, spec.systematic_unfrozen_sorted, "message")
    frz = _as_bit_values(frozen_u, spec.frozen_sorted, "frozen")
    return systematic_encode_batch(spec, msg, frz)


def channel_decode_systematic(
    spec: CodeSpec,
    priors,
    frozen_u,
    L: int = 1,
    *,
    ternary: bool = False,
) -> ChannelDecodeResult:
    frozen_values = _as_bit_values(frozen_u, spec.frozen_sorted, "frozen")
    u_hat, x_hat, failed = _run_decoder(spec, priors, frozen_values, L, ternary, None)
    msg = x_hat[list(spec.systematic_unfrozen_sorted)].copy()
    return ChannelDecodeResult(message=msg, u_hat=u_hat, x_hat=x_hat)


class CrcChannelCode:
    """A channel code with a CRC embedded in its last unfrozen positions.

    The CRC is computed over the channel input x.  Because both the encoder
    map and the CRC are linear over GF(2), the parity cells are found by
    solving a width-sized linear system so that crc(x) equals the configured
    check value; the decoder then prefers list paths whose reproduction
    passes that check.

    The parity cells are taken from the tail of the unfrozen positions,
    scanning backwards and skipping any position whose parity column is
    linearly dependent on those already chosen (a fixed "last w" placement
    is singular for many frozen sets); the scan is deterministic.  When the
    reachable remainders span fewer than ``width`` dimensions - e.g. a
    generator divisible by (x + 1) together with a frozen overall-parity bit
    pins one remainder bit - only that many cells are consumed, and encoding
    fails if the requested check value is unreachable.

    Parameters
    ----------
    spec : CodeSpec
        Code definition; must have more unfrozen positions than CRC bits.
    parity : OuterParity
        CRC width, polynomial and expected remainder.
    systematic : bool
        Place the payload verbatim in x (systematic mode) instead of in the
        transform domain.
    """

    def __init__(self, spec: CodeSpec, parity: OuterParity, systematic: bool = False):
        K = len(spec.unfrozen)
        if parity.width >= K:
            raise ValueError("CRC width must be smaller than the unfrozen count")
        self.spec = spec
        self.parity = parity
        self.systematic = systematic
        positions = (
            spec.systematic_unfrozen_sorted if systematic else spec.unfrozen_sorted
        )
        zero_frozen = np.zeros(spec.N - K, dtype=np.uint8)

        def x_column(p: int) -> np.ndarray:
            # x-domain effect of setting one unfrozen cell, everything else zero
            msg = np.zeros(K, dtype=np.uint8)
            msg[positions.index(p)] = 1
            return self._raw_encode(msg, zero_frozen)

        chosen: list[int] = []
        basis: dict[int, int] = {}  # leading-bit position -> reduced column
        for p in reversed(positions):
            v = crc_value(x_column(p), parity)
            while v:
                hb = v.bit_length() - 1
                if hb not in basis:
                    basis[hb] = v
                    chosen.append(p)
                    break
                v ^= basis[hb]
            if len(chosen) == parity.width:
                break
        if not chosen:
            raise ValueError("no unfrozen position can influence this CRC")
        self.crc_positions = tuple(sorted(chosen))
        self.payload_positions = tuple(
            p for p in positions if p not in self.crc_positions
        )
        self.payload_size = K - len(chosen)
        self._payload_index = np.array(
            [positions.index(p) for p in self.payload_positions], dtype=np.int64
        )
        cols = [x_column(p) for p in self.crc_positions]
        self._columns = np.stack(cols, axis=0)
        self._matrix = np.stack([crc_parity(col, parity) for col in cols], axis=1)

    def _raw_encode(self, message: np.ndarray, frozen_u: np.ndarray) -> np.ndarray:
        if self.systematic:
            return channel_encode_systematic(self.spec, message, frozen_u)
        return channel_encode_nonsystematic(self.spec, message, frozen_u)

    def _check(self, x_hat) -> bool:
        return crc_value(x_hat, self.parity) == self.parity.check_value

    def encode(self, payload, frozen_u=None) -> np.ndarray:
        """Channel input carrying ``payload`` with the parity cells solved so
        the whole block passes the CRC."""
        pay = np.asarray(payload, dtype=np.uint8) & 1
        if pay.shape != (self.payload_size,):
            raise ValueError(f"expected {self.payload_size} payload bits")
        spec = self.spec
        if frozen_u is None:
            frozen_u = np.zeros(spec.N - len(spec.unfrozen), dtype=np.uint8)
        msg = np.zeros(len(spec.unfrozen), dtype=np.uint8)
        msg[self._payload_index] = pay
        base = self._raw_encode(msg, np.asarray(frozen_u, dtype=np.uint8) & 1)
        target = crc_parity(base, self.parity) ^ np.array(
            [
                (self.parity.check_value >> (self.parity.width - 1 - i)) & 1
                for i in range(self.parity.width)
            ],
            dtype=np.uint8,
        )
        c = gf2.solve(self._matrix, target)
        x = base ^ (c[:, None] * self._columns).sum(axis=0) % 2
        return x.astype(np.uint8)

    def decode(
        self, priors, frozen_u=None, L: int = 1, *, ternary: bool = False
    ) -> ChannelDecodeResult:
        spec = self.spec
        if frozen_u is None:
            frozen_u = np.zeros(spec.N - len(spec.unfrozen), dtype=np.uint8)
        frozen_values = _as_bit_values(frozen_u, spec.frozen_sorted, "frozen")
        u_hat, x_hat, failed = _run_decoder(
            spec, priors, frozen_values, L, ternary, self._check
        )
        if self.systematic:
            msg = x_hat[list(self.payload_positions)].copy()
        else:
            msg = u_hat[list(self.payload_positions)].copy()
        return ChannelDecodeResult(
            message=msg, u_hat=u_hat, x_hat=x_hat, parity_failed=failed
        )
