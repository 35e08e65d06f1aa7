import json

import numpy as np
import pytest

from polarsym import (
    ChannelModel,
    CodeSpec,
    SimConfig,
    bench_scaling,
    channel_emit,
    construct_bec,
    parse_channel,
    rng_for_trial,
    simulate,
)
from polarsym.cli import main as cli_main
from polarsym.harness import CSV_HEADER, csv_row, result_json


def test_channel_validation():
    with pytest.raises(ValueError):
        ChannelModel("bsc", 0.6)
    with pytest.raises(ValueError):
        ChannelModel("bec", -0.1)
    with pytest.raises(ValueError):
        ChannelModel("awgn", 0.0)
    with pytest.raises(ValueError):
        ChannelModel("laplace", 0.3)


def test_parse_channel():
    assert parse_channel("bec:0.3") == ChannelModel("bec", 0.3)
    assert parse_channel("BSC:0.1") == ChannelModel("bsc", 0.1)
    with pytest.raises(ValueError):
        parse_channel("bec")
    with pytest.raises(ValueError):
        parse_channel("bec:lots")


def test_bsc_emit_values(rng):
    x = np.array([0, 1, 0, 1], dtype=np.uint8)
    pri = channel_emit(ChannelModel("bsc", 0.1), x, rng_for_trial(0, 0))
    assert np.isin(np.abs(pri), [0.8]).all()
    # a prior of +0.8 means the received symbol was 0
    noiseless = channel_emit(ChannelModel("bsc", 0.0), x, rng_for_trial(0, 0))
    assert np.array_equal(noiseless, 1.0 - 2.0 * x.astype(float))


def test_bec_emit_values(rng):
    x = np.array([0, 1] * 50, dtype=np.uint8)
    pri = channel_emit(ChannelModel("bec", 0.5), x, rng_for_trial(0, 1))
    assert set(np.unique(pri)) <= {-1.0, 0.0, 1.0}
    kept = pri != 0
    assert np.array_equal(pri[kept], 1.0 - 2.0 * x[kept].astype(float))
    assert (pri == 0).any()


def test_awgn_emit_values():
    x = np.zeros(2000, dtype=np.uint8)
    pri = channel_emit(ChannelModel("awgn", 0.5), x, rng_for_trial(0, 2))
    assert (np.abs(pri) <= 1.0).all()
    # bit 0 maps to +1, so posteriors should overwhelmingly lean positive
    assert (pri > 0).mean() > 0.9


def test_sim_config_validation():
    spec = construct_bec(3, 0.3, rate=0.5)
    ch = ChannelModel("bec", 0.3)
    with pytest.raises(ValueError):
        SimConfig(spec=spec, channel=ch, mode="magic")
    with pytest.raises(ValueError):
        SimConfig(spec=spec, channel=ch, decoder="viterbi")
    with pytest.raises(ValueError):
        SimConfig(spec=spec, channel=ch, trials=0)
    with pytest.raises(ValueError):
        SimConfig(spec=spec, channel=ChannelModel("bsc", 0.1), ternary=True)
    with pytest.raises(ValueError):
        SimConfig(spec=spec, channel=ch, ternary=True, decoder="scl", L=2)


def test_fer_zero_on_perfect_channel():
    spec = construct_bec(4, 0.3, rate=0.5)
    for mode in ("source", "systematic", "nonsystematic"):
        cfg = SimConfig(
            spec=spec, channel=ChannelModel("bec", 0.0), mode=mode,
            trials=30, seed=1,
        )
        assert simulate(cfg).fer == 0.0


def test_fer_one_on_fully_erased_channel():
    spec = construct_bec(4, 0.3, rate=0.5)  # 8 unfrozen positions
    cfg = SimConfig(
        spec=spec, channel=ChannelModel("bec", 1.0), mode="source",
        trials=100, seed=2,
    )
    assert simulate(cfg).fer >= 0.9


def test_determinism():
    spec = construct_bec(6, 0.3, rate=0.5)
    cfg = SimConfig(
        spec=spec, channel=ChannelModel("bec", 0.3), mode="source",
        decoder="scl", L=4, trials=60, seed=11,
    )
    a, b = simulate(cfg), simulate(cfg)
    assert (a.frame_errors, a.bit_errors) == (b.frame_errors, b.bit_errors)
    assert csv_row(cfg, a) == csv_row(cfg, b)


def test_fer_monotone_in_erasure_rate():
    spec = construct_bec(7, 0.3, rate=0.5)
    fers = []
    for eps in (0.1, 0.2, 0.3, 0.4, 0.5):
        cfg = SimConfig(
            spec=spec, channel=ChannelModel("bec", eps), mode="source",
            trials=400, seed=21,
        )
        fers.append(simulate(cfg).fer)
    for lo, hi in zip(fers, fers[1:]):
        sigma = np.sqrt(max(lo * (1 - lo), 1e-9) / 400)
        assert hi >= lo - 2 * sigma


def test_csv_row_shape():
    spec = construct_bec(4, 0.3, rate=0.5)
    cfg = SimConfig(
        spec=spec, channel=ChannelModel("bec", 0.3), trials=10, seed=0
    )
    res = simulate(cfg)
    row = csv_row(cfg, res)
    fields = row.split(",")
    assert len(fields) == len(CSV_HEADER.split(","))
    assert fields[0] == "4" and fields[2] == "bec" and fields[9] == "0"
    data = result_json(cfg, res)
    assert data["fer"] == res.fer and data["seed"] == 0


def test_bench_scaling_smoke():
    rows = bench_scaling(
        sc_n_values=(3, 4), scl_L_values=(2,), scl_n=3, trials=3, seed=0
    )
    assert {(r.decoder, r.n, r.L) for r in rows} == {
        ("sc", 3, 1), ("sc", 4, 1), ("scl", 3, 2)
    }
    assert all(r.mean_us > 0 and r.normalized_us > 0 for r in rows)


# --- command-line interface ---------------------------------------------------


def test_cli_construct_and_load(tmp_path):
    out = tmp_path / "code.spec"
    assert cli_main(
        ["construct", "--n", "4", "--rate", "0.5", "--channel", "bec:0.3",
         "--out", str(out)]
    ) == 0
    spec = CodeSpec.load(out)
    assert spec.n == 4 and len(spec.unfrozen) == 8
    assert spec == construct_bec(4, 0.3, rate=0.5)


def test_cli_construct_monte_carlo(tmp_path):
    out = tmp_path / "mc.spec"
    rc = cli_main(
        ["construct", "--n", "3", "--rate", "0.5", "--channel", "bsc:0.1",
         "--trials", "50", "--seed", "4", "--out", str(out)]
    )
    assert rc == 0
    assert len(CodeSpec.load(out).unfrozen) == 4


def test_cli_encode_decode_round_trip(tmp_path, capsys):
    spec_path = tmp_path / "code.spec"
    construct_bec(3, 0.3, rate=0.5).save(spec_path)
    assert cli_main(
        ["encode", "--spec", str(spec_path), "--mode", "nonsystematic",
         "--message", "1011", "--json"]
    ) == 0
    x = json.loads(capsys.readouterr().out)["x"]
    priors = ",".join("1" if c == "0" else "-1" for c in x)
    assert cli_main(
        ["decode", "--spec", str(spec_path), "--mode", "nonsystematic",
         f"--priors={priors}", "--json"]
    ) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["message"] == "1011"
    assert out["x_hat"] == x


def test_cli_simulate_csv(tmp_path):
    spec_path = tmp_path / "code.spec"
    construct_bec(4, 0.3, rate=0.5).save(spec_path)
    out = tmp_path / "run.csv"
    rc = cli_main(
        ["simulate", "--spec", str(spec_path), "--channel", "bec:0.3",
         "--trials", "20", "--seed", "5", "--out", str(out)]
    )
    assert rc == 0
    lines = out.read_text().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1].split(",")[6] == "20"


def test_cli_config_errors_exit_2(tmp_path):
    assert cli_main(["simulate", "--channel", "bsc:0.9", "--n", "3",
                     "--rate", "0.5"]) == 2
    assert cli_main(["simulate", "--channel", "bec:0.3"]) == 2  # no spec/n
    assert cli_main(["decode", "--spec", str(tmp_path / "missing.spec"),
                     "--priors", "1,1"]) == 2
