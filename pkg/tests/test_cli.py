from __future__ import annotations

import csv
import json
from importlib import resources as ir

import numpy as np
import pytest

from floquetsim.cli import fmt, main


def _run(tmp_path, cmd, cfg, *extra, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    out = tmp_path / f"out_{cmd}_{name}"
    return main([cmd, "--config", str(p), "--out", str(out), *extra]), out


def _read_csv(path):
    with path.open() as fh:
        return list(csv.reader(fh))


QUBIT = {"preset": "DrivenQubit", "t": 1.0, "epsilon": 1e-3, "psi0": "random", "seed": 3}


def test_simulate_outputs(tmp_path):
    code, out = _run(tmp_path, "simulate", QUBIT)
    assert code == 0
    rows = _read_csv(out / "state.csv")
    assert rows[0] == ["index", "re", "im"] and len(rows) == 3
    psi = np.array([float(r[1]) + 1j * float(r[2]) for r in rows[1:]])
    assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-3)
    summ = dict(_read_csv(out / "summary.csv")[1:])
    assert float(summ["deviation"]) <= 1e-3
    assert "wall_time_s" in summ
    res = json.loads((out / "result.json").read_text())
    assert res["command"] == "simulate" and "timestamp" in res


def test_simulate_deterministic(tmp_path):
    _, a = _run(tmp_path, "simulate", QUBIT, name="a.json")
    _, b = _run(tmp_path, "simulate", QUBIT, name="b.json")
    ja, jb = (json.loads((d / "result.json").read_text()) for d in (a, b))
    ja.pop("timestamp"), jb.pop("timestamp")
    assert ja == jb
    assert (a / "state.csv").read_text() == (b / "state.csv").read_text()


def test_simulate_t_periods(tmp_path):
    code, out = _run(tmp_path, "simulate", {"preset": "DrivenQubit", "t_periods": 1, "epsilon": 1e-3,
                                            "regime": "LongTime"})
    assert code == 0


@pytest.mark.parametrize("cfg, code", [
    ({"preset": "DrivenQubit", "t": 1.0, "epsilon": 2.0}, "InvalidEpsilon"),
    ({"preset": "DrivenQubit", "t": 1.0, "epsilon": 0.0}, "InvalidEpsilon"),
    ({"preset": "DrivenQubit", "epsilon": 1e-3}, None),
    ({"preset": "Nope", "t": 1.0, "epsilon": 1e-3}, None),
    ({"preset": "DrivenQubit", "t": 0.5, "epsilon": 1e-3, "regime": "LongTime"}, None),
    ({"preset": "DrivenQubit", "t": 1.0, "epsilon": 1e-3, "params": {"bogus": 1}}, None),
])
def test_simulate_validation(tmp_path, capsys, cfg, code):
    rc, out = _run(tmp_path, "simulate", cfg)
    assert rc == 2
    assert not out.exists()
    rec = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert rec["exit_code"] == 2
    if code:
        assert rec["error"] == code


def test_bad_json(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert main(["simulate", "--config", str(p), "--out", str(tmp_path / "o")]) == 2


def _interleave(M):
    M = np.asarray(M, dtype=complex)
    return np.stack([M.real, M.imag], axis=-1).ravel().tolist()


def test_verify_custom_nonhermitian(tmp_path, capsys):
    cfg = {"preset": "Custom", "custom": {"omega": 1.0, "dim": 2,
                                          "components": {"0": _interleave([[1, 1], [0, -1]])}}}
    rc, out = _run(tmp_path, "verify", cfg, "--suite", "amplification")
    assert rc == 2 and not out.exists()
    assert json.loads(capsys.readouterr().err.splitlines()[-1])["error"] == "NonHermitianPair"


def test_verify_custom_from_file(tmp_path):
    M = np.array([[0.5, 0.2j], [-0.2j, -0.5]])
    np.asarray(_interleave(M), dtype="<f8").tofile(tmp_path / "h0.bin")
    cfg = {"preset": "Custom", "custom": {"omega": 1.0, "dim": 2, "components": {"0": {"file": "h0.bin"}}}}
    rc, out = _run(tmp_path, "verify", cfg, "--suite", "amplification")
    assert rc == 0


@pytest.mark.parametrize("suite", ["encodings", "amplification"])
def test_verify_suite(tmp_path, suite):
    out = tmp_path / suite
    assert main(["verify", "--suite", suite, "--out", str(out), "--threads", "2"]) == 0
    rows = _read_csv(out / "reports.csv")
    assert rows[0] == ["suite", "name", "bound", "measured", "slack", "ok", "context"]
    assert all(r[5] == "1" for r in rows[1:])
    res = json.loads((out / "result.json").read_text())
    assert res["n_violations"] == 0 and res["n_reports"] == len(rows) - 1


def test_verify_unknown_suite(tmp_path):
    assert main(["verify", "--suite", "nope", "--out", str(tmp_path / "o")]) == 2


def test_resources_table(tmp_path):
    cfg = {"alpha": 100, "gamma": 100, "omega": 1, "t": [10, 100], "epsilon": 1e-3}
    rc, out = _run(tmp_path, "resources", cfg)
    assert rc == 0
    rows = _read_csv(out / "resources.csv")
    assert len(rows) == 1 + 2 * 5
    q = {(r[0], float(r[4])): float(r[7]) for r in rows[1:]}
    assert q[("LongTime", 100.0)] < q[("TruncatedDyson", 100.0)]
    assert q[("Adiabatic", 100.0)] > q[("Adiabatic", 10.0)]


def test_resources_validation(tmp_path):
    rc, _ = _run(tmp_path, "resources", {"alpha": 1, "gamma": 1, "omega": 1, "t": 1})
    assert rc == 2
    rc, _ = _run(tmp_path, "resources", {"alpha": -1, "gamma": 1, "omega": 1, "t": 1, "epsilon": 0.1})
    assert rc == 2


def test_float_format():
    x = 0.1 + 0.2
    assert float(fmt(x)) == x
    assert fmt(True) == "1" and fmt(3) == "3"


def test_schema_shipped():
    schema = json.loads(ir.files("floquetsim").joinpath("csv_schema.json").read_text())
    assert {"state.csv", "summary.csv", "reports.csv", "resources.csv"} <= set(schema["files"])
