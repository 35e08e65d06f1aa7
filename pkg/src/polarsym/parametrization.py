"""Arithmetic on the symmetric parameter theta = P(0) - P(1).

A binary distribution is represented by a single real in [-1, 1].  The two
combination rules below are the check-node and bit-node updates of the polar
recursion expressed in this parametrization; the ternary variants specialize
them to erasure-channel values {-1, 0, +1} without any division.
"""

from __future__ import annotations

from dataclasses import dataclass

CLAMP_TOL = 1e-9


@dataclass
class ThetaFlags:
    """Recoverable diagnostics accumulated during theta arithmetic."""

    zero_denominator: int = 0
    clamp_excess: int = 0


def theta_from_prior(p0: float) -> float:
    """Convert P(U=0) into theta = P(0) - P(1) = 2*p0 - 1."""
    if not 0.0 <= p0 <= 1.0:
        raise ValueError(f"probability {p0} outside [0, 1]")
    return 2.0 * p0 - 1.0


def _sign(u: int) -> float:
    # bipolar-binary conversion: + for u=0, - for u=1
    if u not in (0, 1):
        raise ValueError(f"bit must be 0 or 1, got {u}")
    return 1.0 - 2.0 * u


def combine_check(th0: float, th1: float) -> float:
    """Parameter of U0 xor U1 for independent inputs: the product th1*th0."""
    return th1 * th0


def combine_bit(
    th0: float,
    th1: float,
    u: int,
    th_check: float,
    flags: ThetaFlags | None = None,
) -> float:
    """Parameter of U1 given the decided check bit u of U0 xor U1.

    Computes (th1 -+_u th0) / (1 -+_u th_check), clamped to [-1, 1].  A zero
    denominator means the conditioning event has probability zero; the result
    is then 0 (maximal uncertainty) and ``flags.zero_denominator`` is bumped.
    """
    s = _sign(u)
    den = 1.0 + s * th_check
    if den == 0.0:
        if flags is not None:
            flags.zero_denominator += 1
        return 0.0
    v = (th1 + s * th0) / den
    if v > 1.0:
        if flags is not None and v > 1.0 + CLAMP_TOL:
            flags.clamp_excess += 1
        v = 1.0
    elif v < -1.0:
        if flags is not None and v < -1.0 - CLAMP_TOL:
            flags.clamp_excess += 1
        v = -1.0
    return v


def combine_check_ternary(t0: int, t1: int) -> int:
    """Erasure-channel check rule: plain product over {-1, 0, +1}."""
    return int(t1) * int(t0)


def combine_bit_ternary(t0: int, t1: int, u: int) -> int:
    """Erasure-channel bit rule: the undivided numerator with sign saturation."""
    s = int(_sign(u))
    v = int(t1) + s * int(t0)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0


def map_decision(th: float) -> int:
    """MAP bit decision: 0 if th > 0, 1 if th < 0, 0 on a tie.

    The tie test compares the candidate weights ``1 - th`` and ``1 + th`` in
    floating point, so magnitudes below one ulp of 1.0 count as ties; this is
    exactly how the list decoder ranks the two extensions of a single path.
    """
    return 1 if (1.0 - th) > (1.0 + th) else 0
