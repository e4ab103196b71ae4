import json

import numpy as np
import pytest

from siml.cli import build_parser, main


def small_config(tmp_path, **extra):
    cfg = {"n-list": [64, 128], "reps": 6, "m-rule": {"m": 4}}
    cfg.update(extra)
    p = tmp_path / "cfg.json"
    p.write_text(json.dumps(cfg))
    return str(p)


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--help"])
    out = capsys.readouterr().out
    for cmd in ("kernel-check", "simulate", "estimate", "mc-consistency", "mc-normality", "mc-noise"):
        assert cmd in out


def test_kernel_check(tmp_path, capsys):
    assert main(["kernel-check", "--quick", "--out", str(tmp_path), "--no-timing"]) == 0
    doc = json.loads((tmp_path / "kernel-check.json").read_text())
    assert doc["results"]["passed"] == doc["results"]["total"]
    assert doc["runtime-seconds"] is None
    assert "PASS" in capsys.readouterr().out


def test_simulate_then_estimate(tmp_path, capsys):
    out = tmp_path / "sim"
    assert main(["simulate", "--n", "256", "--seed", "1", "--out", str(out)]) == 0
    ticks = out / "ticks.csv"
    assert ticks.read_text().splitlines()[0] == "time,asset,price"
    est = tmp_path / "est"
    assert main(["estimate", str(ticks), "--m-grid", "4,8", "--scheme", "ksss", "--out", str(est), "--no-timing"]) == 0
    rows = (est / "estimate.csv").read_text().splitlines()
    assert rows[0] == "m,asset,asset0" and len(rows) == 3
    doc = json.loads((est / "estimate.json").read_text())
    assert [e["m"] for e in doc["results"]["estimates"]] == [4, 8]
    v = doc["results"]["estimates"][1]["V"][0][0]
    assert 0.01 < v < 0.08


def test_estimate_default_m_rule(tmp_path):
    main(["simulate", "--n", "512", "--out", str(tmp_path)])
    assert main(["estimate", str(tmp_path / "ticks.csv"), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "estimate.json").read_text())
    assert doc["config"]["m-values"] == [12]
    assert doc["runtime-seconds"] >= 0


def test_estimate_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,asset,price\n0,a,1\n1,a,x\n")
    assert main(["estimate", str(bad), "--out", str(tmp_path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_estimate_missing_input(tmp_path, capsys):
    assert main(["estimate", str(tmp_path / "none.csv"), "--out", str(tmp_path)]) == 2
    assert "cannot read" in capsys.readouterr().err


@pytest.mark.parametrize("cmd, table", [("mc-consistency", "consistency.csv"), ("mc-noise", "noise.csv"),
                                        ("mc-normality", "normality.csv")])
def test_experiments(tmp_path, cmd, table):
    out = tmp_path / "o"
    assert main([cmd, "--config", small_config(tmp_path), "--out", str(out), "--no-timing"]) == 0
    assert (out / table).exists() and (out / "curves.csv").exists()
    doc = json.loads((out / "report.json").read_text())
    assert doc["runtime-seconds"] is None


def test_flags_override_config(tmp_path):
    out = tmp_path / "o"
    main(["mc-consistency", "--config", small_config(tmp_path), "--seed", "9", "--reps", "3", "--out", str(out)])
    doc = json.loads((out / "report.json").read_text())
    assert doc["config"]["seed"] == 9 and doc["config"]["experiment"]["reps"] == 3


def test_workers_give_identical_bytes(tmp_path):
    cfg = small_config(tmp_path)
    for w in ("1", "3"):
        main(["mc-consistency", "--config", cfg, "--workers", w, "--out", str(tmp_path / w), "--no-timing"])
    for name in ("consistency.csv", "curves.csv", "report.json"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "3" / name).read_bytes()


def test_bad_config_exit_code(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text('{"reps": -1, "colour": "red"}')
    assert main(["mc-consistency", "--config", str(p), "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "colour" in err


def test_normality_refusal_exit_code(tmp_path, capsys):
    cfg = small_config(tmp_path, model={"sigma": 0.2, "stochastic-vol": {}})
    assert main(["mc-normality", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "mixed normal" in capsys.readouterr().err
