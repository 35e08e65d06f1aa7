"""Frozen-set construction.

Two constructors are provided: an exact one for the binary erasure channel,
where the per-position reliability recursion is closed-form, and a seeded
Monte-Carlo one that ranks positions by genie-aided decision error counts on
an arbitrary channel.  The decoder itself accepts any frozen set; these are
conveniences for producing sensible ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CodeSpec, polar_transform
from .sc_decoder import genie_error_profile
from .harness import ChannelModel, channel_emit, rng_for_trial


def bec_bhattacharyya(n: int, epsilon: float) -> np.ndarray:
    """Exact per-position erasure probabilities Z for a BEC(epsilon).

    Level k consumes index bit b_{k-1} (most significant first): bit 0 maps
    Z to 2Z - Z^2, bit 1 to Z^2.  Adjacent outputs of one input stay adjacent,
    so the array doubles in place each level.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"erasure probability {epsilon} outside [0, 1]")
    Z = np.array([epsilon], dtype=np.float64)
    for _ in range(n):
        Z = np.stack([2.0 * Z - Z * Z, Z * Z], axis=1).ravel()
    return Z


def _freeze_worst(scores: np.ndarray, unfrozen_count: int, n: int) -> CodeSpec:
    # reliable first: ascending score, ties resolved toward the higher index
    order = sorted(range(len(scores)), key=lambda i: (scores[i], -i))
    unfrozen = set(order[:unfrozen_count])
    frozen = frozenset(i for i in range(len(scores)) if i not in unfrozen)
    return CodeSpec(n=n, frozen=frozen)


def _unfrozen_count(N: int, rate: float) -> int:
    if not 0.0 < rate < 1.0:
        raise ValueError(f"rate {rate} outside (0, 1)")
    return math.ceil(rate * N)


def construct_bec(
    n: int,
    epsilon: float,
    rate: float | None = None,
    threshold: float | None = None,
    beta: float | None = None,
) -> CodeSpec:
    """Frozen set for a BEC(epsilon), exact.

    Exactly one of ``rate`` (keep the ceil(rate*N) most reliable positions),
    ``threshold`` (keep positions with Z <= threshold) or ``beta`` (threshold
    2^(-2^(n*beta))) must be given.
    """
    given = sum(v is not None for v in (rate, threshold, beta))
    if given != 1:
        raise ValueError("give exactly one of rate, threshold, beta")
    Z = bec_bhattacharyya(n, epsilon)
    N = 1 << n
    if rate is not None:
        return _freeze_worst(Z, _unfrozen_count(N, rate), n)
    if beta is not None:
        threshold = 2.0 ** -(2.0 ** (n * beta))
    frozen = frozenset(int(i) for i in np.flatnonzero(Z > threshold))
    return CodeSpec(n=n, frozen=frozen)


@dataclass
class ConstructionConfig:
    """Inputs of the Monte-Carlo constructor."""

    n: int
    channel: ChannelModel
    rate: float | None = None
    threshold: float | None = None
    trials: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if (self.rate is None) == (self.threshold is None):
            raise ValueError("give exactly one of rate, threshold")


def monte_carlo_error_counts(cfg: ConstructionConfig) -> np.ndarray:
    """Genie-aided per-position decision error counts over cfg.trials runs."""
    N = 1 << cfg.n
    counts = np.zeros(N, dtype=np.int64)
    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        x = rng.integers(0, 2, size=N, dtype=np.uint8)
        priors = channel_emit(cfg.channel, x, rng)
        # the genie decodes with every decision corrected to the truth, so
        # the per-position error indicators are exactly the synthetic-channel
        # decision errors
        true_u = polar_transform(x, cfg.n)
        counts += genie_error_profile(priors, true_u)
    return counts


def construct_monte_carlo(cfg: ConstructionConfig) -> CodeSpec:
    """Freeze the positions with the highest genie-aided error counts."""
    counts = monte_carlo_error_counts(cfg)
    N = 1 << cfg.n
    if cfg.rate is not None:
        return _freeze_worst(
            counts.astype(np.float64), _unfrozen_count(N, cfg.rate), cfg.n
        )
    rates = counts / cfg.trials
    frozen = frozenset(int(i) for i in np.flatnonzero(rates > cfg.threshold))
    return CodeSpec(n=cfg.n, frozen=frozen)
