"""Simulation engine: channel models, Monte-Carlo FER/BER runs, benchmarks.

Every trial derives its own counter-based random stream from (seed, trial
index), so results are reproducible bit for bit and independent of execution
order.  Within a trial the data bits are always drawn before the channel
noise, which keeps noise realizations common across decoder configurations
sharing a seed.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .codec_modes import (
    CrcChannelCode,
    OuterParity,
    channel_decode_nonsystematic,
    channel_decode_systematic,
    channel_encode_nonsystematic,
    channel_encode_systematic,
    source_decode,
    source_encode,
    source_extension,
)
from .core import CodeSpec, polar_transform

CSV_HEADER = "n,rate,channel,param,decoder,L,trials,fer,ber,avg_decode_us,seed"

MODES = ("source", "systematic", "nonsystematic")
DECODERS = ("sc", "scl")


@dataclass(frozen=True)
class ChannelModel:
    """A memoryless binary-input channel: bsc(p), bec(epsilon) or awgn(sigma)."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind == "bsc":
            if not 0.0 <= self.param <= 0.5:
                raise ValueError("bsc crossover must lie in [0, 0.5]")
        elif self.kind == "bec":
            if not 0.0 <= self.param <= 1.0:
                raise ValueError("bec erasure rate must lie in [0, 1]")
        elif self.kind == "awgn":
            if not self.param > 0.0:
                raise ValueError("awgn noise deviation must be positive")
        else:
            raise ValueError(f"unknown channel kind {self.kind!r}")


def parse_channel(text: str) -> ChannelModel:
    """Parse 'kind:param' channel descriptions, e.g. 'bec:0.3'."""
    kind, sep, param = text.partition(":")
    if not sep:
        raise ValueError(f"channel must look like 'bec:0.3', got {text!r}")
    try:
        value = float(param)
    except ValueError as exc:
        raise ValueError(f"bad channel parameter {param!r}") from exc
    return ChannelModel(kind=kind.lower(), param=value)


def rng_for_trial(seed: int, trial: int) -> np.random.Generator:
    """The counter-based random stream of one trial, derived from the run
    seed and the trial index."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def channel_emit(ch: ChannelModel, x, rng: np.random.Generator) -> np.ndarray:
    """Transmit x, draw the noise, and return per-position posteriors as
    theta values (uniform input prior assumed)."""
    xb = np.asarray(x, dtype=np.uint8) & 1
    N = xb.shape[0]
    if ch.kind == "bsc":
        flips = rng.random(N) < ch.param
        y = xb ^ flips
        return (1.0 - 2.0 * ch.param) * (1.0 - 2.0 * y)
    if ch.kind == "bec":
        erased = rng.random(N) < ch.param
        return np.where(erased, 0.0, 1.0 - 2.0 * xb.astype(np.float64))
    # biawgn: bit 0 maps to +1; posterior balance is tanh of the scaled output
    s = 1.0 - 2.0 * xb.astype(np.float64)
    y = s + ch.param * rng.standard_normal(N)
    return np.tanh(y / (ch.param * ch.param))


@dataclass
class SimConfig:
    """One Monte-Carlo run definition."""

    spec: CodeSpec
    channel: ChannelModel
    mode: str = "source"
    decoder: str = "sc"
    L: int = 1
    ternary: bool = False
    trials: int = 100
    seed: int = 0
    crc: OuterParity | None = None
    include_timing: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {DECODERS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.L < 1:
            raise ValueError("list size must be >= 1")
        if self.ternary:
            if self.channel.kind != "bec":
                raise ValueError("ternary arithmetic requires a bec channel")
            if self.effective_L != 1:
                raise ValueError("ternary arithmetic requires the plain decoder")

    @property
    def effective_L(self) -> int:
        return self.L if self.decoder == "scl" else 1


@dataclass
class SimResult:
    trials: int
    frame_errors: int
    bit_errors: int
    bits_per_frame: int
    decode_seconds: float = 0.0

    @property
    def fer(self) -> float:
        return self.frame_errors / self.trials

    @property
    def ber(self) -> float:
        return self.bit_errors / (self.trials * self.bits_per_frame)

    @property
    def avg_decode_us(self) -> float:
        return 1e6 * self.decode_seconds / self.trials


def _maybe_ternary(priors: np.ndarray, ternary: bool):
    if not ternary:
        return priors
    return priors.astype(np.int8)


def simulate(cfg: SimConfig) -> SimResult:
    """Run cfg.trials encode -> channel -> decode rounds and tally errors.

    A frame error is a full-block mismatch of the reproduction (source and
    systematic modes) or any wrong decided bit at an unfrozen position
    (non-systematic mode); bit errors count the mismatching positions of the
    same comparison.
    """
    spec = cfg.spec
    N = spec.N
    K = len(spec.unfrozen)
    L = cfg.effective_L
    frame_errors = 0
    bit_errors = 0
    decode_seconds = 0.0

    crc_code = None
    if cfg.crc is not None and cfg.mode in ("systematic", "nonsystematic"):
        crc_code = CrcChannelCode(
            spec, cfg.crc, systematic=(cfg.mode == "systematic")
        )
    zero_frozen = np.zeros(N - K, dtype=np.uint8)

    for trial in range(cfg.trials):
        rng = rng_for_trial(cfg.seed, trial)
        if cfg.mode == "source":
            x = rng.integers(0, 2, size=N, dtype=np.uint8)
            codeword = source_encode(spec, x)
            extension = source_extension(x, cfg.crc) if cfg.crc else None
            priors = _maybe_ternary(channel_emit(cfg.channel, x, rng), cfg.ternary)
            t0 = time.perf_counter()
            out = source_decode(
                spec,
                codeword,
                priors,
                L,
                ternary=cfg.ternary,
                parity=cfg.crc,
                extension=extension,
            )
            decode_seconds += time.perf_counter() - t0
            diff = int(np.count_nonzero(out.x_hat != x))
        else:
            if crc_code is not None:
                payload = rng.integers(
                    0, 2, size=crc_code.payload_size, dtype=np.uint8
                )
                x = crc_code.encode(payload, zero_frozen)
            else:
                msg = rng.integers(0, 2, size=K, dtype=np.uint8)
                if cfg.mode == "systematic":
                    x = channel_encode_systematic(spec, msg, zero_frozen)
                else:
                    x = channel_encode_nonsystematic(spec, msg, zero_frozen)
            priors = _maybe_ternary(channel_emit(cfg.channel, x, rng), cfg.ternary)
            t0 = time.perf_counter()
            if crc_code is not None:
                out = crc_code.decode(priors, zero_frozen, L, ternary=cfg.ternary)
            elif cfg.mode == "systematic":
                out = channel_decode_systematic(
                    spec, priors, zero_frozen, L, ternary=cfg.ternary
                )
            else:
                out = channel_decode_nonsystematic(
                    spec, priors, zero_frozen, L, ternary=cfg.ternary
                )
            decode_seconds += time.perf_counter() - t0
            if cfg.mode == "systematic":
                diff = int(np.count_nonzero(out.x_hat != x))
            else:
                true_u = polar_transform(x, spec.n)
                idx = list(spec.unfrozen_sorted)
                diff = int(np.count_nonzero(out.u_hat[idx] != true_u[idx]))
        if diff:
            frame_errors += 1
            bit_errors += diff

    bits_per_frame = N if cfg.mode != "nonsystematic" else K
    return SimResult(
        trials=cfg.trials,
        frame_errors=frame_errors,
        bit_errors=bit_errors,
        bits_per_frame=bits_per_frame,
        decode_seconds=decode_seconds,
    )


def csv_row(cfg: SimConfig, result: SimResult) -> str:
    """One CSV line for a finished run; the timing column is written as 0
    unless cfg.include_timing is set, keeping equal-seed runs byte-identical."""
    timing = f"{result.avg_decode_us:.3f}" if cfg.include_timing else "0"
    return ",".join(
        [
            str(cfg.spec.n),
            f"{cfg.spec.rate:.12g}",
            cfg.channel.kind,
            f"{cfg.channel.param:.12g}",
            cfg.decoder,
            str(cfg.effective_L),
            str(cfg.trials),
            f"{result.fer:.12g}",
            f"{result.ber:.12g}",
            timing,
            str(cfg.seed),
        ]
    )


def write_csv(fh: IO[str], cfg: SimConfig, result: SimResult) -> None:
    fh.write(CSV_HEADER + "\n")
    fh.write(csv_row(cfg, result) + "\n")


def result_json(cfg: SimConfig, result: SimResult) -> dict:
    return {
        "n": cfg.spec.n,
        "rate": cfg.spec.rate,
        "channel": cfg.channel.kind,
        "param": cfg.channel.param,
        "decoder": cfg.decoder,
        "L": cfg.effective_L,
        "trials": cfg.trials,
        "fer": result.fer,
        "ber": result.ber,
        "frame_errors": result.frame_errors,
        "bit_errors": result.bit_errors,
        "avg_decode_us": result.avg_decode_us if cfg.include_timing else 0,
        "seed": cfg.seed,
    }


@dataclass
class BenchRow:
    decoder: str
    n: int
    L: int
    mean_us: float
    normalized_us: float = field(init=False)

    def __post_init__(self):
        N = 1 << self.n
        self.normalized_us = self.mean_us / (self.L * N * self.n)


def _timed_runs(cfg: SimConfig) -> float:
    res = simulate(cfg)
    return res.avg_decode_us


def bench_scaling(
    sc_n_values=(11, 12),
    scl_L_values=(4, 8),
    scl_n: int = 8,
    channel: ChannelModel | None = None,
    trials: int = 20,
    seed: int = 0,
) -> list[BenchRow]:
    """Mean decode wall time across block lengths (plain decoder) and list
    sizes (list decoder), with per-(L * N log N) normalized columns."""
    from .construction import construct_bec

    ch = channel if channel is not None else ChannelModel("bec", 0.3)
    rows = []
    for n in sc_n_values:
        spec = construct_bec(n, 0.3, rate=0.5)
        cfg = SimConfig(
            spec=spec, channel=ch, mode="source", decoder="sc",
            trials=trials, seed=seed, include_timing=True,
        )
        simulate(cfg)  # warm-up: compile and fault in caches
        rows.append(BenchRow(decoder="sc", n=n, L=1, mean_us=_timed_runs(cfg)))
    for L in scl_L_values:
        spec = construct_bec(scl_n, 0.3, rate=0.5)
        cfg = SimConfig(
            spec=spec, channel=ch, mode="source", decoder="scl", L=L,
            trials=trials, seed=seed, include_timing=True,
        )
        simulate(cfg)
        rows.append(BenchRow(decoder="scl", n=scl_n, L=L, mean_us=_timed_runs(cfg)))
    return rows


def bench_json(rows: list[BenchRow]) -> str:
    return json.dumps(
        [
            {
                "decoder": r.decoder,
                "n": r.n,
                "L": r.L,
                "mean_us": r.mean_us,
                "normalized_us": r.normalized_us,
            }
            for r in rows
        ],
        indent=2,
    )
