import hashlib
import json

import numpy as np
import pytest

from oscillint.cli import compare_runs, main
from oscillint.grid import load_field

SMALL = {
    "kernel": {"ladder": [8], "n_points": 10},
    "lemma1": {"ladder": [16, 32], "n_r": 16, "n_theta": 16},
    "statphase": {"ladder": [8, 16]},
    "parallelepiped": {"ladder": [8], "n": [3, 2, 2]},
    "opnorm": {"ladder": [8, 16, 32]},
    "besov": {"ladder": [16, 32, 64], "dilations": [2.0], "random_spectra": 50},
    "seq_ineq": {"A": [2.0], "trials": 500, "max_len": 8},
}


def write(tmp_path, doc, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_missing_config_names_the_path(tmp_path, capsys):
    missing = tmp_path / "nope.json"
    assert main(["seq-ineq", "--config", str(missing), "--out", str(tmp_path / "o")]) == 1
    assert str(missing) in capsys.readouterr().err


@pytest.mark.parametrize("doc", [{"seed": -1}, {"kernel": {"tolerance": "small"}}, {"bogus": 1},
                                 {"opnorm": {"ps": [0.5]}}])
def test_invalid_config_exits_1(tmp_path, capsys, doc):
    assert main(["seq-ineq", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 1
    assert "config error" in capsys.readouterr().err


def test_malformed_json_exits_1(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["seq-ineq", "--config", str(p), "--out", str(tmp_path / "o")]) == 1


def test_resolution_error_exits_2(tmp_path, capsys):
    cfg = write(tmp_path, {"symbol": {"box_half_side": 1.0}})
    assert main(["symbol", "--config", cfg, "--out", str(tmp_path / "o")]) == 2
    assert "oscillint:" in capsys.readouterr().err


def test_bad_thread_env_exits_1(tmp_path, monkeypatch):
    monkeypatch.setenv("OSCILLINT_THREADS", "many")
    assert main(["seq-ineq", "--A", "2", "--trials", "10", "--out", str(tmp_path / "o")]) == 1


def test_seq_ineq_command(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["seq-ineq", "--A", "2", "--trials", "2000", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["2"]["holds"] and summary["single_spike_exact"]
    assert (out / "seq_ineq.json").exists()


def test_manifest_hashes_every_file(tmp_path):
    out = tmp_path / "o"
    assert main(["symbol", "--lambda", "4", "--out", str(out), "--seed", "7"]) == 0
    man = json.loads((out / "manifest.json").read_text())
    assert man["seed"] == 7 and man["command"] == "symbol" and len(man["config_hash"]) == 64
    assert set(man["files"]) == {p.name for p in out.iterdir() if p.name != "manifest.json"}
    for name, digest in man["files"].items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest


def test_symbol_field_loads_back(tmp_path):
    out = tmp_path / "o"
    assert main(["symbol", "--lambda", "4", "--out", str(out)]) == 0
    fld = load_field(out / "symbol.gfld")
    assert fld.lam == 4.0 and fld.grid.points_per_axis == 128
    assert np.max(np.abs(fld.samples)) <= 2.0
    assert main(["symbol", "--lambda", "2", "--dimension", "3", "--out", str(tmp_path / "d3")]) == 0
    assert load_field(tmp_path / "d3" / "symbol.gfld").grid.dimension == 3


def test_lemma1_command(tmp_path, capsys):
    out = tmp_path / "o"
    assert main(["lemma1", "--ladder", "16,32", "--n-r", "16", "--n-theta", "16", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert set(summary["sups"]) == {"16", "32"}
    assert any(p.suffix == ".csv" for p in out.iterdir())


def test_small_all_and_determinism(tmp_path):
    cfg = write(tmp_path, SMALL)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["all", "--config", cfg, "--out", str(a)]) == 0
    assert main(["all", "--config", cfg, "--out", str(b)]) == 0
    assert compare_runs(a, b) == []
    res = json.loads((a / "acceptance.json").read_text())
    assert set(res) == {str(i) for i in range(1, 10)}


def test_compare_runs_notices_changes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["seq-ineq", "--A", "2", "--trials", "100", "--out", str(d)]) == 0
    assert compare_runs(a, b) == []
    (b / "seq_ineq.json").write_text("{}\n")
    assert compare_runs(a, b) == ["seq_ineq.json"]


def test_failed_criterion_exits_3(tmp_path, capsys):
    doc = dict(SMALL)
    doc["kernel"] = {"ladder": [8], "n_points": 10, "tolerance": 1e-30}
    assert main(["all", "--config", write(tmp_path, doc), "--out", str(tmp_path / "o")]) == 3
    assert "2" in capsys.readouterr().err


def test_module_entry_point():
    import subprocess
    import sys
    res = subprocess.run([sys.executable, "-m", "oscillint", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip()
