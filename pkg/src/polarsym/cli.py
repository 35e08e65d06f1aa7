"""Command-line interface: construct, encode, decode, simulate, bench."""

from __future__ import annotations

import argparse
import json
import sys

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
from .construction import ConstructionConfig, construct_bec, construct_monte_carlo
from .core import CodeSpec
from .harness import (
    CSV_HEADER,
    SimConfig,
    bench_json,
    bench_scaling,
    csv_row,
    parse_channel,
    result_json,
    simulate,
)

DEFAULT_CONSTRUCTION_TRIALS = 2000


def _parse_crc(text: str) -> OuterParity:
    width, sep, poly = text.partition(":")
    if not sep:
        raise ValueError(f"crc must look like '8:0x07', got {text!r}")
    return OuterParity(width=int(width), generator=int(poly, 0))


def _parse_bits(text: str) -> np.ndarray:
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"expected a 0/1 string, got {text!r}")
    return np.array([int(c) for c in text], dtype=np.uint8)


def _bits_str(bits) -> str:
    return "".join(str(int(b)) for b in bits)


def _load_or_build_spec(args) -> CodeSpec:
    if args.spec:
        return CodeSpec.load(args.spec)
    if args.n is None or args.rate is None:
        raise ValueError("give --spec or both --n and --rate")
    channel = parse_channel(args.channel)
    if channel.kind == "bec":
        return construct_bec(args.n, channel.param, rate=args.rate)
    cfg = ConstructionConfig(
        n=args.n,
        channel=channel,
        rate=args.rate,
        trials=DEFAULT_CONSTRUCTION_TRIALS,
        seed=args.seed,
    )
    return construct_monte_carlo(cfg)


def _out_stream(args):
    if args.out:
        return open(args.out, "w", encoding="ascii")
    return sys.stdout


def cmd_construct(args) -> int:
    channel = parse_channel(args.channel)
    if args.trials is not None:
        cfg = ConstructionConfig(
            n=args.n, channel=channel, rate=args.rate,
            trials=args.trials, seed=args.seed,
        )
        spec = construct_monte_carlo(cfg)
    elif channel.kind == "bec":
        spec = construct_bec(args.n, channel.param, rate=args.rate)
    else:
        raise ValueError("exact construction needs a bec channel; give --trials")
    if args.out:
        spec.save(args.out)
    else:
        sys.stdout.write(f"polar-spec v1\nn={spec.n}\n")
        for i in spec.frozen_sorted:
            sys.stdout.write(f"{i}\n")
    return 0


def cmd_encode(args) -> int:
    spec = CodeSpec.load(args.spec)
    message = _parse_bits(args.message)
    crc = _parse_crc(args.crc) if args.crc else None
    if args.mode == "source":
        codeword = source_encode(spec, message)
        out = {"codeword": _bits_str(codeword)}
        if crc:
            out["extension"] = _bits_str(source_extension(message, crc))
    else:
        systematic = args.mode == "systematic"
        if crc:
            code = CrcChannelCode(spec, crc, systematic=systematic)
            x = code.encode(message)
        elif systematic:
            x = channel_encode_systematic(spec, message, _zero_frozen(spec))
        else:
            x = channel_encode_nonsystematic(spec, message, _zero_frozen(spec))
        out = {"x": _bits_str(x)}
    if args.json:
        print(json.dumps(out))
    else:
        for v in out.values():
            print(v)
    return 0


def _zero_frozen(spec: CodeSpec) -> np.ndarray:
    return np.zeros(len(spec.frozen), dtype=np.uint8)


def cmd_decode(args) -> int:
    spec = CodeSpec.load(args.spec)
    priors = np.array([float(v) for v in args.priors.split(",")])
    crc = _parse_crc(args.crc) if args.crc else None
    L = args.list_size if args.decoder == "scl" else 1
    if args.mode == "source":
        if args.codeword is None:
            raise ValueError("source mode needs --codeword")
        extension = _parse_bits(args.extension) if args.extension else None
        res = source_decode(
            spec, _parse_bits(args.codeword), priors, L,
            ternary=args.ternary, parity=crc, extension=extension,
        )
        out = {"x_hat": _bits_str(res.x_hat), "parity_failed": res.parity_failed}
    else:
        systematic = args.mode == "systematic"
        if crc:
            code = CrcChannelCode(spec, crc, systematic=systematic)
            res = code.decode(priors, L=L, ternary=args.ternary)
        elif systematic:
            res = channel_decode_systematic(
                spec, priors, _zero_frozen(spec), L, ternary=args.ternary
            )
        else:
            res = channel_decode_nonsystematic(
                spec, priors, _zero_frozen(spec), L, ternary=args.ternary
            )
        out = {
            "message": _bits_str(res.message),
            "x_hat": _bits_str(res.x_hat),
            "parity_failed": res.parity_failed,
        }
    if args.json:
        print(json.dumps(out))
    else:
        for k, v in out.items():
            print(f"{k}={v}")
    return 0


def cmd_simulate(args) -> int:
    spec = _load_or_build_spec(args)
    cfg = SimConfig(
        spec=spec,
        channel=parse_channel(args.channel),
        mode=args.mode,
        decoder=args.decoder,
        L=args.list_size,
        ternary=args.ternary,
        trials=args.trials,
        seed=args.seed,
        crc=_parse_crc(args.crc) if args.crc else None,
        include_timing=args.timing,
    )
    result = simulate(cfg)
    fh = _out_stream(args)
    try:
        if args.json:
            fh.write(json.dumps(result_json(cfg, result)) + "\n")
        else:
            fh.write(CSV_HEADER + "\n")
            fh.write(csv_row(cfg, result) + "\n")
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_bench(args) -> int:
    rows = bench_scaling(trials=args.trials, seed=args.seed)
    fh = _out_stream(args)
    try:
        if args.json:
            fh.write(bench_json(rows) + "\n")
        else:
            fh.write("decoder,n,L,mean_us,normalized_us\n")
            for r in rows:
                fh.write(
                    f"{r.decoder},{r.n},{r.L},{r.mean_us:.3f},{r.normalized_us:.6f}\n"
                )
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="polarsym",
        description="Polar-coding library: construction, codecs, simulation.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="emit a code-spec file")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--rate", type=float, required=True)
    c.add_argument("--channel", default="bec:0.5")
    c.add_argument("--trials", type=int, default=None,
                   help="use the Monte-Carlo constructor with this many trials")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("encode", help="encode one block")
    e.add_argument("--spec", required=True)
    e.add_argument("--mode", choices=("source", "systematic", "nonsystematic"),
                   default="nonsystematic")
    e.add_argument("--message", required=True, help="payload as a 0/1 string")
    e.add_argument("--crc", default=None, help="width:poly, e.g. 8:0x07")
    e.add_argument("--json", action="store_true")
    e.set_defaults(func=cmd_encode)

    d = sub.add_parser("decode", help="decode one block from priors")
    d.add_argument("--spec", required=True)
    d.add_argument("--mode", choices=("source", "systematic", "nonsystematic"),
                   default="nonsystematic")
    d.add_argument("--decoder", choices=("sc", "scl"), default="sc")
    d.add_argument("--list-size", type=int, default=8)
    d.add_argument("--ternary", action="store_true")
    d.add_argument("--priors", required=True,
                   help="comma-separated theta values, one per position; "
                        "use --priors=... when the first value is negative")
    d.add_argument("--codeword", default=None, help="source-mode codeword bits")
    d.add_argument("--extension", default=None, help="source-mode parity bits")
    d.add_argument("--crc", default=None)
    d.add_argument("--json", action="store_true")
    d.set_defaults(func=cmd_decode)

    s = sub.add_parser("simulate", help="Monte-Carlo FER/BER run")
    s.add_argument("--spec", default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--rate", type=float, default=None)
    s.add_argument("--channel", default="bec:0.3")
    s.add_argument("--decoder", choices=("sc", "scl"), default="sc")
    s.add_argument("--list-size", type=int, default=8)
    s.add_argument("--ternary", action="store_true")
    s.add_argument("--mode", choices=("source", "systematic", "nonsystematic"),
                   default="source")
    s.add_argument("--crc", default=None)
    s.add_argument("--trials", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default=None)
    s.add_argument("--json", action="store_true")
    s.add_argument("--timing", action="store_true",
                   help="report real decode timing (breaks byte determinism)")
    s.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", help="decode-time scaling benchmark")
    b.add_argument("--trials", type=int, default=20)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", default=None)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
