import json

import numpy as np
import pytest

from pypinv import __version__, cli
from pypinv._errors import RestrictedSystemError
from pypinv.cli import build_parser, main


DIAG_123 = {"rows": 3, "cols": 3,
            "entries": [[1, 0], [0, 0], [0, 0], [0, 0], [2, 0], [0, 0], [0, 0], [0, 0], [3, 0]]}


def _write_json(path, obj) -> str:
    path.write_text(json.dumps(obj), encoding="utf-8")
    return str(path)

def _write_csv(path, rows) -> str:
    path.write_text("\n".join(",".join(str(x) for x in row) for row in rows) + "\n", encoding="utf-8")
    return str(path)

def _entries(obj) -> np.ndarray:
    pairs = np.array(obj["entries"], dtype=float)
    return (pairs[:, 0] + 1j * pairs[:, 1]).reshape(obj["rows"], obj["cols"])


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.strip() == f"pypinv {__version__}"

def test_usage_errors():
    assert main([]) == 2
    assert main(["verify", "--tol", "-1"]) == 2
    assert main(["verify", "--trials", "x"]) == 2
    assert main(["verify", "--dims", "2by2"]) == 2
    assert main(["converge", "--n-list", "8,4"]) == 2
    assert main(["perturb", "only-one.json"]) == 2

def test_parser_defaults():
    args = build_parser().parse_args(["converge"])
    assert args.family == "diag-unbounded"
    assert args.n_list == (4, 8, 16, 32)
    assert args.format == "json"
    assert build_parser().parse_args(["verify", "--dims", "2x2,3x5"]).dims == ((2, 2), (3, 5))

def test_verify(capsys):
    assert main(["verify", "--seed", "42", "--trials", "2", "--dims", "2x2,3x5"]) == 0
    reports = json.loads(capsys.readouterr().out)
    assert len(reports) >= 25
    assert all(r["pass"] and r["seed"] == 42 and r["trials"] == 2 for r in reports)
    assert all(r["dims"] and all(d in ([2, 2], [3, 5]) for d in r["dims"]) for r in reports)

def test_verify_is_reproducible(capsys):
    main(["verify", "--seed", "9", "--trials", "1"])
    first = capsys.readouterr().out
    main(["verify", "--seed", "9", "--trials", "1"])
    assert capsys.readouterr().out == first

def test_verify_without_trials(capsys, caplog):
    assert main(["verify", "--trials", "0"]) == 0
    assert json.loads(capsys.readouterr().out) == []
    assert "vacuous" in caplog.text

def test_verify_csv_to_file(tmp_path):
    out = tmp_path / "report.csv"
    assert main(["verify", "--trials", "1", "--dims", "2x3", "--format", "csv", "-o", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "id,trials,dims,max_residual,tol,pass,seed"
    assert len(lines) >= 26
    assert all(",2x3," in line for line in lines[1:])

def test_converge(capsys):
    assert main(["converge", "--family", "diag-unbounded", "--n-list", "4,8,16"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["n"] for r in rows] == [4, 8, 16]
    assert rows[0]["residual"] > rows[1]["residual"] > rows[2]["residual"]

    assert main(["converge", "--family", "diag-kernel", "--probe", "finite", "--n-list", "3"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["residual"] == pytest.approx(0.0, abs=1e-15)

    assert main(["converge", "--family", "mult-phi", "--n-list", "8,16", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,residual,tail"
    assert [line.split(",")[0] for line in lines[1:]] == ["8", "16"]

def test_converge_errors(caplog):
    assert main(["converge", "--family", "diag-imaginary"]) == 2
    assert "diag-imaginary" in caplog.text
    assert main(["converge", "--family", "mult-phi", "--probe", "harmonic"]) == 2

def test_pinv_json(tmp_path, capsys):
    assert main(["pinv", _write_json(tmp_path / "a.json", DIAG_123)]) == 0
    data = json.loads(capsys.readouterr().out)
    assert np.allclose(_entries(data["pinv"]), np.diag([1, 1 / 2, 1 / 3]))
    assert data["rank"] == 3
    assert data["gamma"] == pytest.approx(1.0)
    assert data["sigma"] == pytest.approx([3.0, 2.0, 1.0])

def test_pinv_of_zero_has_no_gamma(tmp_path, capsys):
    assert main(["pinv", _write_csv(tmp_path / "zero.csv", [[0, 0, 0], [0, 0, 0]])]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["rank"] == 0
    assert "gamma" not in data
    assert (data["pinv"]["rows"], data["pinv"]["cols"]) == (3, 2)
    assert np.array_equal(_entries(data["pinv"]), np.zeros((3, 2)))

def test_pinv_csv(tmp_path, capsys):
    assert main(["pinv", _write_csv(tmp_path / "a.csv", [[1, 1], [0, 0]]), "--format", "csv"]) == 0
    captured = capsys.readouterr()
    rows = [[float(x) for x in line.split(",")] for line in captured.out.splitlines()]
    assert np.allclose(rows, [[0.5, 0], [0.5, 0]])
    assert "rank: 1" in captured.err

def test_pinv_bad_input(tmp_path):
    assert main(["pinv", _write_csv(tmp_path / "nan.csv", [[1, "nan"], [0, 1]])]) == 2
    assert main(["pinv", _write_csv(tmp_path / "ragged.csv", [[1, 2], [3]])]) == 2
    assert main(["pinv", _write_json(tmp_path / "short.json", {"rows": 2, "cols": 2, "entries": [[1, 0]]})]) == 2
    assert main(["pinv", str(tmp_path / "missing.json")]) == 2

def test_perturb(tmp_path, capsys):
    t = _write_csv(tmp_path / "t.csv", [[2, 0], [0, 0]])
    s = _write_csv(tmp_path / "s.csv", [[0.5, 0], [0, 0]])
    assert main(["perturb", t, s]) == 0
    data = json.loads(capsys.readouterr().out)
    assert np.allclose(_entries(data["pinv"]), np.diag([0.4, 0.0]))
    assert data["check"]["admissible"] is True
    assert data["check"]["t_dagger_s_norm"] == pytest.approx(0.25)
    assert data["residual"] <= 1e-12

def test_perturb_inadmissible(tmp_path, capsys):
    t = _write_csv(tmp_path / "t.csv", [[1, 0], [0, 0]])
    s = _write_csv(tmp_path / "s.csv", [[0, 0], [0, 0.5]])
    assert main(["perturb", t, s]) == 1
    data = json.loads(capsys.readouterr().out)
    assert "pinv" not in data
    assert data["check"]["null_inclusion"] is False

def test_perturb_shape_mismatch(tmp_path):
    t = _write_csv(tmp_path / "t.csv", [[2, 0], [0, 0]])
    s = _write_csv(tmp_path / "s.csv", [[1, 0, 0]])
    assert main(["perturb", t, s]) == 2

def test_verify_at_full_scale(tmp_path):
    first, second = tmp_path / "first.json", tmp_path / "second.json"
    assert main(["verify", "--seed", "42", "--trials", "50", "--tol", "1e-9", "-o", str(first)]) == 0
    reports = json.loads(first.read_text(encoding="utf-8"))
    assert len(reports) >= 25
    assert all(r["pass"] for r in reports), [r["id"] for r in reports if not r["pass"]]
    assert main(["verify", "--seed", "42", "--trials", "50", "--tol", "1e-9", "-o", str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()

def test_verify_stress_keeps_dims(capsys):
    assert main(["verify", "--stress", "--trials", "1", "--dims", "2x3"]) in (0, 1)
    reports = json.loads(capsys.readouterr().out)
    assert all(r["dims"] == [[2, 3]] for r in reports)

def test_pinv_of_rectangular_direct_sum(tmp_path, capsys):
    wide = np.arange(1.0, 16.0).reshape(3, 5)
    block = np.zeros((8, 8))
    block[:3, :5] = wide
    block[3:, 5:] = wide.T
    assert main(["pinv", _write_csv(tmp_path / "block.csv", block.tolist())]) == 0
    data = json.loads(capsys.readouterr().out)
    expected = np.zeros((8, 8))
    expected[:5, :3] = np.linalg.pinv(wide)
    expected[5:, 3:] = np.linalg.pinv(wide.T)
    assert data["rank"] == 4
    assert np.allclose(_entries(data["pinv"]), expected, atol=1e-10)

def test_computation_failure_exits_one(tmp_path, monkeypatch, caplog):
    def singular(t, s, tol=None):
        raise RestrictedSystemError("I + T^+ S is singular")

    monkeypatch.setattr(cli, "perturbed_pinv", singular)
    t = _write_csv(tmp_path / "t.csv", [[2, 0], [0, 0]])
    s = _write_csv(tmp_path / "s.csv", [[0.5, 0], [0, 0]])
    assert main(["perturb", t, s]) == 1
    assert "singular" in caplog.text
