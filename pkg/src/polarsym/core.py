"""Bit-string index arithmetic, the self-inverse polar transform, and code specs.

Indexing convention used throughout the package: an index is an n-bit string
(b0, ..., b_{n-1}) where b0 is the *most significant* bit of the corresponding
integer in [0, 2^n).  Recursions append fresh bits on the right, i.e. at the
least significant end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

SPEC_MAGIC = "polar-spec v1"


class SpecFormatError(ValueError):
    """Raised when a code-spec file does not follow the v1 text format."""


def bits_of(index: int, n: int) -> tuple[int, ...]:
    """Expand an integer index into its n-bit string (b0, ..., b_{n-1}), b0 MSB."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for n={n}")
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def index_of(bits: Iterable[int]) -> int:
    """Inverse of :func:`bits_of`: collapse a bit string back into an integer."""
    v = 0
    for b in bits:
        v = (v << 1) | (b & 1)
    return v


def bit_reverse(index: int, n: int) -> int:
    """Reverse the n-bit string of ``index``: (b0,...,b_{n-1}) -> (b_{n-1},...,b0)."""
    if not 0 <= index < (1 << n):
        raise ValueError(f"index {index} out of range for n={n}")
    r = 0
    for _ in range(n):
        r = (r << 1) | (index & 1)
        index >>= 1
    return r


def bit_reverse_permutation(n: int) -> np.ndarray:
    """Permutation array p with p[i] = bit_reverse(i, n)."""
    return np.array([bit_reverse(i, n) for i in range(1 << n)], dtype=np.int64)


def _as_bits(v, n: int | None = None) -> np.ndarray:
    out = np.asarray(v)
    if out.ndim != 1:
        raise ValueError("expected a one-dimensional bit vector")
    N = out.shape[0]
    if N == 0 or N & (N - 1):
        raise ValueError(f"length {N} is not a power of two")
    if n is not None and N != (1 << n):
        raise ValueError(f"length {N} does not match n={n}")
    return out.astype(np.uint8) & 1


def polar_transform(v, n: int | None = None) -> np.ndarray:
    """Apply the polar transform u = v*G over GF(2), with G self-inverse.

    The butterfly runs over two alternating full-length buffers; level k maps
    cell (c, i, b) of the previous buffer to (c, b, i) patterns:

        new[c b 0] = old[c 0 b] xor old[c 1 b]
        new[c b 1] = old[c 1 b]

    Applying the function twice returns the input.
    """
    x = _as_bits(v, n)
    N = x.shape[0]
    depth = N.bit_length() - 1
    bufs = [x.copy(), np.empty_like(x)]
    for k in range(depth):
        old = bufs[k % 2].reshape(-1, 2, 1 << k)
        new = bufs[(k + 1) % 2].reshape(-1, 1 << k, 2)
        np.bitwise_xor(old[:, 0, :], old[:, 1, :], out=new[:, :, 0])
        new[:, :, 1] = old[:, 1, :]
    return bufs[depth % 2]


@dataclass(frozen=True)
class CodeSpec:
    """A block-length exponent n and the frozen index set.

    The unfrozen set is the complement; the systematic index sets are the
    bit-reversed images of the frozen/unfrozen sets.
    """

    n: int
    frozen: frozenset[int]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "frozen", frozenset(int(i) for i in self.frozen))
        for i in self.frozen:
            if not 0 <= i < self.N:
                raise ValueError(f"frozen index {i} out of range for n={self.n}")

    @property
    def N(self) -> int:
        return 1 << self.n

    @cached_property
    def unfrozen(self) -> frozenset[int]:
        return frozenset(range(self.N)) - self.frozen

    @cached_property
    def systematic_unfrozen(self) -> frozenset[int]:
        return frozenset(bit_reverse(b, self.n) for b in self.unfrozen)

    @cached_property
    def systematic_frozen(self) -> frozenset[int]:
        return frozenset(bit_reverse(b, self.n) for b in self.frozen)

    @cached_property
    def frozen_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.frozen))

    @cached_property
    def unfrozen_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.unfrozen))

    @cached_property
    def systematic_unfrozen_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.systematic_unfrozen))

    @property
    def rate(self) -> float:
        return len(self.unfrozen) / self.N

    def frozen_mask(self) -> np.ndarray:
        mask = np.zeros(self.N, dtype=np.uint8)
        for i in self.frozen:
            mask[i] = 1
        return mask

    def save(self, path) -> None:
        """Write the versioned text format: magic line, n, frozen indices ascending."""
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"{SPEC_MAGIC}\n")
            fh.write(f"n={self.n}\n")
            for i in self.frozen_sorted:
                fh.write(f"{i}\n")

    @classmethod
    def load(cls, path) -> "CodeSpec":
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
        if not lines or lines[0] != SPEC_MAGIC:
            raise SpecFormatError(f"missing magic line {SPEC_MAGIC!r}")
        if len(lines) < 2 or not lines[1].startswith("n="):
            raise SpecFormatError("second line must be n=<int>")
        try:
            n = int(lines[1][2:])
        except ValueError as exc:
            raise SpecFormatError("second line must be n=<int>") from exc
        try:
            frozen = [int(ln) for ln in lines[2:]]
        except ValueError as exc:
            raise SpecFormatError("frozen indices must be decimal integers") from exc
        if frozen != sorted(frozen):
            raise SpecFormatError("frozen indices must be sorted ascending")
        return cls(n=n, frozen=frozenset(frozen))


def derive_systematic_sets(spec: CodeSpec) -> tuple[frozenset[int], frozenset[int]]:
    """Return the systematic (unfrozen, frozen) index sets of ``spec``.

    These are the bit-reversed images of the unfrozen/frozen sets; the same
    values are available as ``spec.systematic_unfrozen`` / ``systematic_frozen``.
    """
    return spec.systematic_unfrozen, spec.systematic_frozen
