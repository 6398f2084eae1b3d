import json
import subprocess
import sys

import pytest

from qforge.cli import main, verify_report
from qforge.jsonio import dump_json, load_lattice_file


def run_cli(capsys, args) -> tuple[int, dict]:
    rc = main(args)
    out = capsys.readouterr().out
    return rc, json.loads(out)


def test_invariants_of_u(capsys):
    rc, obj = run_cli(capsys, ["invariants", "--lattice", "catalog:U"])
    assert rc == 0
    assert obj["triple"]["signature"] == [1, 1]
    assert obj["triple"]["disc_squarefree"] == -1
    assert obj["triple"]["minus_places"] == []


def test_equiv(capsys):
    rc, obj = run_cli(
        capsys,
        ["equiv", "--lattice", "catalog:diag(1,1)", "--other", "catalog:diag(2,2)"],
    )
    assert rc == 0 and obj["equivalent"] is True


def test_classify_command(tmp_path, capsys):
    matrix = tmp_path / "m.json"
    matrix.write_text(json.dumps([[3, 4], [2, 3]]))
    rc, obj = run_cli(
        capsys,
        ["classify", "--lattice", "catalog:diag(1,-2)", "--matrix", str(matrix)],
    )
    assert rc == 0
    assert obj["classification"]["tag"] == "hyperbolic"


def test_saturate_command(tmp_path, capsys):
    basis = tmp_path / "b.json"
    basis.write_text(json.dumps([[2, 0], [0, 1]]))
    rc, obj = run_cli(
        capsys,
        ["saturate", "--lattice", "catalog:diag(1,1)", "--basis", str(basis)],
    )
    assert rc == 0
    assert obj["index"] == 2
    assert obj["basis"] == [[1, 0], [0, 1]]


def test_extend_command(capsys):
    rc, obj = run_cli(
        capsys,
        ["extend", "--lattice", "catalog:<2>", "--target-signature", "4,0"],
    )
    assert rc == 0
    assert obj["triples_equal"] is True


def test_glue_command(capsys):
    rc, obj = run_cli(
        capsys,
        ["glue", "--lattice", "catalog:diag(5,-5)", "--target-signature", "3,3"],
    )
    assert rc == 0
    assert abs(obj["overlattice_det"]) == 1


def test_isotropic_command(capsys):
    rc, obj = run_cli(capsys, ["isotropic", "--lattice", "catalog:U"])
    assert rc == 0 and obj["vector"] == [1, 0]


def test_certify_command(tmp_path, capsys):
    cert = tmp_path / "c.json"
    cert.write_text(json.dumps({"p": 5, "alpha": [30, -10], "beta": [6, -2], "n": [0, 0]}))
    rc, obj = run_cli(capsys, ["certify", "--certificate", str(cert), "--n-bound", "4"])
    assert rc == 0 and obj["valid"] is True
    rc, obj = run_cli(capsys, ["certify", "--certificate", str(cert), "--n-bound", "5"])
    assert rc == 0 and obj["valid"] is False


def test_enumerate_command(capsys):
    rc, obj = run_cli(
        capsys, ["enumerate", "--lattice", "catalog:U", "--height-bound", "1"]
    )
    assert rc == 0
    assert set(obj["values"]) == {"-2", "0", "2"}


def test_hyperbolic_report(capsys):
    rc, obj = run_cli(
        capsys,
        ["hyperbolic", "--lattice", "catalog:U+U+<2>", "--n-bound", "4", "--verify"],
    )
    assert rc == 0
    assert obj["verified"] is True
    assert obj["sublattice"]["certificate"]["p"] == 5
    assert obj["oracle"]["min_nonzero_abs"] >= 5
    assert obj["isometry"]["classification"]["tag"] == "hyperbolic"


def test_hyperbolic_rejects_small_rank(capsys):
    rc, obj = run_cli(
        capsys, ["hyperbolic", "--lattice", "catalog:diag(1,-1,-1,1)", "--n-bound", "2"]
    )
    assert rc == 2
    assert "error" in obj


def test_parabolic_rejects_small_rank(capsys):
    rc, obj = run_cli(
        capsys,
        ["parabolic", "--lattice", "catalog:diag(1,1,1,-1^10)", "--n-bound", "2"],
    )
    assert rc == 2


def test_parabolic_report(capsys):
    rc, obj = run_cli(
        capsys,
        [
            "parabolic",
            "--lattice",
            "catalog:diag(1,1,1,-1^11)",
            "--n-bound",
            "3",
            "--verify",
        ],
    )
    assert rc == 0
    assert obj["verified"] is True
    assert obj["certificate_level"] is False
    assert obj["sublattice"]["signature"] == [1, 4]
    assert obj["isometry"]["classification"]["tag"] == "parabolic"


def test_lattice_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "latt.json"
    path.write_text(json.dumps({"label": "mine", "gram": [[0, 1], [1, 0]]}))
    latt = load_lattice_file(str(path))
    assert latt.label == "mine"
    rc, obj = run_cli(capsys, ["invariants", "--lattice", str(path)])
    assert rc == 0


def test_big_integer_serialization():
    from qforge.jsonio import decode_int, encode_int

    big = 2**80 + 7
    assert encode_int(big) == str(big)
    assert decode_int(encode_int(big)) == big
    assert encode_int(42) == 42


def test_missing_file_exit_code(capsys):
    rc, obj = run_cli(capsys, ["invariants", "--lattice", "/nonexistent.json"])
    assert rc == 2


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "qforge.cli", "invariants", "--lattice", "catalog:U"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["triple"]["signature"] == [1, 1]


def test_report_determinism(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    for out in (out1, out2):
        rc = main(
            [
                "hyperbolic",
                "--lattice",
                "catalog:U+U+<2>",
                "--n-bound",
                "4",
                "--seed",
                "7",
                "--out",
                str(out),
            ]
        )
        capsys.readouterr()
        assert rc == 0
    a = json.loads(out1.read_text())
    b = json.loads(out2.read_text())
    a.pop("timings")
    b.pop("timings")
    assert dump_json(a) == dump_json(b)


def test_verify_report_catches_tampering(capsys):
    rc, obj = run_cli(
        capsys,
        ["hyperbolic", "--lattice", "catalog:U+U+<2>", "--n-bound", "4"],
    )
    assert rc == 0
    obj["isometry"]["matrix"][0][0] += 1
    assert verify_report(obj)


def test_search_exhausted_exit_code(capsys):
    rc, obj = run_cli(
        capsys,
        ["isotropic", "--lattice", "catalog:diag(5,-15)", "--budget", "500"],
    )
    assert rc == 3 and "error" in obj


def test_budget_exceeded_exit_code(capsys):
    rc, obj = run_cli(
        capsys,
        [
            "enumerate",
            "--lattice",
            "catalog:diag(1,1,1,1,1,1,1,1)",
            "--height-bound",
            "50",
            "--budget",
            "1000",
        ],
    )
    assert rc == 3


def test_catalog_env_override(tmp_path, monkeypatch, capsys):
    extra = tmp_path / "cat.json"
    extra.write_text(json.dumps({"mine": {"label": "mine", "gram": [[6]]}}))
    monkeypatch.setenv("QFORGE_CATALOG", str(extra))
    rc, obj = run_cli(capsys, ["invariants", "--lattice", "catalog:mine"])
    assert rc == 0
    assert obj["triple"]["disc_squarefree"] == 6
