import json
import math
from dataclasses import replace

import pytest

from hybridtele.averaging import QuadratureSpec
from hybridtele.cli import main
from hybridtele.sweep import (CSV_COLUMNS, PRESETS, SweepConfig, preset_config,
                              records_to_csv, run_sweep, write_csv)
from hybridtele.teleport import Direction

SMALL = SweepConfig((Direction.S2C, Direction.C2S), (0.5, 1.0), r_steps=5, r_max=0.9)


def test_config_validation():
    with pytest.raises(ValueError):
        SweepConfig((), (1.0,))
    with pytest.raises(ValueError):
        SweepConfig((Direction.S2C,), (0.0,))
    with pytest.raises(ValueError):
        SweepConfig((Direction.S2C,), (1.0,), r_max=1.0)
    with pytest.raises(ValueError):
        SweepConfig((Direction.S2C,), (1.0,), r_steps=1)
    with pytest.raises(ValueError):
        SweepConfig((Direction.S2C,), (10.0,), backend="numeric")


def test_small_sweep_structure():
    records = run_sweep(SMALL)
    assert len(records) == 2 * 2 * 5
    assert all(rec.t == pytest.approx(math.sqrt(1.0 - rec.r ** 2), abs=1e-12) for rec in records)
    s2c = [rec for rec in records if rec.direction == "s2c"]
    assert all(rec.success_probability == 0.5 for rec in s2c)
    assert all(rec.avg_fidelity_closed_printed is None for rec in s2c)
    c2s = [rec for rec in records if rec.direction == "c2s"]
    assert all(rec.avg_fidelity_closed_corrected is not None for rec in c2s)


def test_c2s_success_value_at_origin():
    records = run_sweep(SweepConfig((Direction.C2S,), (1.0,), r_steps=2, r_max=0.5))
    first = records[0]
    assert first.r == 0.0
    assert first.success_probability == pytest.approx(0.43233235838169365, abs=1e-9)


def test_csv_schema_and_format():
    text = records_to_csv(run_sweep(SMALL))
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 20
    assert "\r" not in text
    assert text.endswith("\n")
    # empty cells for the directions without closed forms
    assert lines[1].startswith("s2c,0.5,0,1,1,,,0.5,analytic,ok")


def test_numeric_backend_sweep_matches_analytic():
    base = SweepConfig((Direction.C2S,), (1.0,), r_steps=3, r_max=0.8,
                       quad=QuadratureSpec(n_theta=16, n_phi=16, tolerance=1e-8))
    analytic = run_sweep(base)
    numeric = run_sweep(replace(base, backend="numeric"))
    both = run_sweep(replace(base, backend="both"))
    for ra, rn, rb in zip(analytic, numeric, both):
        assert rn.backend == "numeric"
        assert rn.avg_fidelity == pytest.approx(ra.avg_fidelity, abs=1e-8)
        assert rb.backend == "both"
        assert rb.convergence_flag == "ok"


def test_preset_shapes():
    fig1 = PRESETS["fig1"]
    assert fig1.r_steps == 201
    assert fig1.alphas == (0.5, 1.0, 2.0, 10.0)
    assert [d.value for d in fig1.directions] == ["s2c", "c2s"]
    assert [d.value for d in PRESETS["fig3"].directions] == ["p2c", "s2c", "c2s", "c2p"]
    with pytest.raises(ValueError):
        preset_config("fig9")


def test_cli_sweep_and_point(tmp_path, capsys):
    out = tmp_path / "mini.csv"
    code = main(["sweep", "--direction", "s2c,c2s", "--alpha", "0.5,1",
                 "--r-min", "0", "--r-max", "0.9", "--r-steps", "3",
                 "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 1 + 12
    capsys.readouterr()

    code = main(["point", "--direction", "s2c", "--theta", "0", "--phi", "0",
                 "--alpha", "1", "--r", "0"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["fidelity"] == pytest.approx(1.0, abs=1e-12)
    assert payload["success_probability"] == 0.5

    code = main(["point", "--direction", "c2s", "--theta", str(math.pi), "--phi", "0",
                 "--alpha", "1", "--r", "0"])
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["fidelity"] == pytest.approx(1.0, abs=1e-12)

    code = main(["point", "--direction", "c2s", "--theta", str(math.pi / 2.0), "--phi", "0",
                 "--alpha", "1", "--r", "0.6"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["fidelity"] == pytest.approx(0.6947009023839887, abs=1e-12)
    kinds = [d["kind"] for d in payload["outcome_breakdown"]]
    assert kinds == ["B1", "B2", "B3", "B4", "FAIL"]


def test_cli_point_comparison_directions(capsys):
    code = main(["point", "--direction", "c2p", "--theta", "1.0", "--phi", "0.2",
                 "--alpha", "1", "--r", "0.5"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert "fidelity_printed" in payload["variants"]
    assert "fidelity_corrected" in payload["variants"]
    assert payload["fidelity"] == pytest.approx(payload["variants"]["fidelity_corrected"])


def test_cli_validation_exit_codes(tmp_path, capsys):
    # unknown direction -> argparse validation -> 1
    assert main(["point", "--direction", "x2y", "--theta", "0", "--phi", "0",
                 "--alpha", "1", "--r", "0"]) == 1
    capsys.readouterr()
    # sweep without preset or grid -> 1
    assert main(["sweep", "--out", str(tmp_path / "x.csv")]) == 1
    capsys.readouterr()
    # numeric backend with alpha > 3 -> 1
    assert main(["sweep", "--direction", "s2c", "--alpha", "10", "--backend", "numeric",
                 "--out", str(tmp_path / "y.csv")]) == 1
    capsys.readouterr()
    # verify with invalid r -> 1
    assert main(["verify", "--r", "1.0"]) == 1
    capsys.readouterr()


def test_write_csv_roundtrip(tmp_path):
    records = run_sweep(SweepConfig((Direction.C2P,), (1.0,), r_steps=3, r_max=0.6))
    path = tmp_path / "c2p.csv"
    write_csv(records, path)
    body = path.read_bytes()
    assert body == records_to_csv(records).encode()
    # c2p closed columns both carry the consistent closed form
    line = body.decode().splitlines()[1].split(",")
    assert line[5] == line[6] != ""
