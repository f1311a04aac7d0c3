import json

import pytest

from khovsolve.cli import main
from khovsolve.fields import GF, QQ
from khovsolve.sysfile import (
    SystemFileError,
    dump_system,
    load_system,
    parse_field,
)

FAILING_SYSTEM = json.dumps(
    {
        "field": "QQ",
        "vars": ["t1", "t2"],
        "weight": [-1, 0],
        "phi": ["t1 + t2", "t1*t2", "t1*t2^2"],
        "equations": [],
    }
)


@pytest.fixture()
def duffing_file(tmp_path):
    path = tmp_path / "duffing.json"
    assert main(["catalog", "duffing", "--out", str(path)]) == 0
    return str(path)


def test_parse_field():
    assert parse_field("QQ") == QQ
    assert parse_field("Fp:101") == GF(101)
    assert parse_field({"Fp": 101}) == GF(101)
    with pytest.raises(SystemFileError):
        parse_field("GF(4)")


def test_system_file_round_trip():
    from khovsolve import catalog

    sys = catalog.duffing().sys
    text = dump_system(sys.par, sys)
    par2, sys2 = load_system(text)
    assert par2.A == sys.par.A
    assert [e.f for e in sys2.equations] == [e.f for e in sys.equations]


def test_load_system_rejects_garbage():
    with pytest.raises(SystemFileError):
        load_system("not json {")
    with pytest.raises(SystemFileError):
        load_system(json.dumps({"field": "QQ"}))
    with pytest.raises(SystemFileError):
        load_system(
            json.dumps(
                {
                    "field": "QQ",
                    "vars": ["t1"],
                    "weight": [-1, -2],
                    "phi": ["t1"],
                }
            )
        )


def test_check_command(duffing_file, capsys):
    assert main(["check", duffing_file, "--dmax", "3"]) == 0
    out = capsys.readouterr().out
    assert "verified through degree 3" in out


def test_check_command_detects_failure(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(FAILING_SYSTEM)
    assert main(["check", str(path), "--dmax", "3"]) == 2
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_basis_command(duffing_file, capsys):
    assert main(["basis", duffing_file, "-d", "2"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 14


def test_hilbert_command(tmp_path, capsys):
    path = tmp_path / "gr24.json"
    assert main(["catalog", "grassmannian:2,4", "--out", str(path)]) == 0
    assert main(["hilbert", str(path), "--dmax", "7"]) == 0
    out = capsys.readouterr().out
    assert "HF: 1 6 20 50 105 196 336" in out
    assert "hreg: -3" in out
    assert "degree: 2" in out
    assert "certified: yes" in out


def test_km_command_with_csv(duffing_file, tmp_path, capsys):
    out_csv = tmp_path / "km.csv"
    assert main(["km", duffing_file, "-d", "2", "--out", str(out_csv)]) == 0
    assert "shape: 10 x 14" in capsys.readouterr().out
    lines = out_csv.read_text().strip().splitlines()
    assert len(lines) == 11  # header + 10 rows
    assert lines[0].startswith("i,gamma,")


def test_km_command_reduce(duffing_file, capsys):
    assert main(["km", duffing_file, "-d", "3", "--reduce"]) == 0
    assert "shape: 23 x 28 (unreduced 28 x 28)" in capsys.readouterr().out


def test_solve_command(duffing_file, tmp_path):
    out_json = tmp_path / "sols.json"
    rc = main(
        ["solve", duffing_file, "--dreg", "3", "--out", str(out_json)]
    )
    assert rc == 0
    data = json.loads(out_json.read_text())
    assert data["delta"] == 5
    assert data["dreg"] == 3
    assert len(data["solutions"]) == 5
    for sol in data["solutions"]:
        assert sol["residual"] < 1e-8
        assert len(sol["coords"]) == 5


def test_solve_command_deterministic(duffing_file, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for out in (a, b):
        assert main(
            ["solve", duffing_file, "--dreg", "3", "--seed", "4",
             "--out", str(out)]
        ) == 0
    assert a.read_bytes() == b.read_bytes()


def test_solve_command_stdin(duffing_file, capsys, monkeypatch):
    import io

    text = open(duffing_file).read()
    monkeypatch.setattr("sys.stdin", io.StringIO(text))
    assert main(["solve", "-", "--dreg", "3"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["delta"] == 5


def test_exit_code_input_errors(tmp_path, capsys):
    assert main(["check", str(tmp_path / "missing.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["solve", str(bad), "--dreg", "3"]) == 1
    assert main(["catalog", "unknown-instance"]) == 1


def test_exit_code_math_error(tmp_path, capsys):
    # no equations: nothing to solve
    path = tmp_path / "noeq.json"
    path.write_text(FAILING_SYSTEM)
    assert main(["solve", str(path), "--dreg", "2"]) == 2


def test_exit_code_unsupported_field(tmp_path):
    path = tmp_path / "fp.json"
    assert main(
        ["catalog", "duffing", "--field", "Fp:101", "--out", str(path)]
    ) == 0
    assert main(["solve", str(path), "--dreg", "3"]) == 3


def test_schubert_command_over_fp(tmp_path):
    out = tmp_path / "schubert.json"
    rc = main(
        [
            "schubert", "--k", "3", "--m", "6",
            "--conditions", "2,4,6;2,4,6;2,4,6",
            "--field", "Fp:9716633", "--dreg", "2",
            "--out", str(out),
        ]
    )
    assert rc == 0
    data = json.loads(out.read_text())
    assert data["delta"] == 2
    assert data["dreg"] == 2


def test_schubert_command_needs_matching_osculating_count(capsys):
    rc = main(
        [
            "schubert", "--k", "2", "--m", "5",
            "--conditions", "3,5;3,5",
            "--osculating", "1",
        ]
    )
    assert rc == 1
