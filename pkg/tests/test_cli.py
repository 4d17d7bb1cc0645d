from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import algchains
from algchains.cli import main

GOLDEN = Path(algchains.__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_invariants_text(capsys):
    code, out, _ = run(capsys, "invariants", "U6 A2 A1 T1", "--char", "0")
    assert code == 0
    assert "dim     18" in out and "length  17" in out


def test_invariants_json(capsys):
    code, out, _ = run(capsys, "invariants", "E8", "--char", "2", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["schema"] == "algchains.invariants/1"
    assert (data["length"], data["depth"]["lower"], data["cd"]["lower"]) == (136, 9, 127)
    assert data["depth"]["exact"] is True


def test_invariants_interval(capsys):
    code, out, _ = run(capsys, "invariants", "C6", "--char", "2", "--json")
    d = json.loads(out)["depth"]
    assert code == 0 and not d["exact"] and d["lower"] < d["upper"]


@pytest.mark.parametrize("expr", ["X9", "A1 Q", "D1"])
def test_bad_expression_exit_2(capsys, expr):
    code, _, err = run(capsys, "invariants", expr, "--char", "0")
    assert code == 2 and "algchains:" in err


def test_bad_characteristic_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["invariants", "A1", "--char", "4"])
    assert exc.value.code == 2


@pytest.mark.parametrize("name", ["depth-lowrank", "depth-exceptional", "depth-char0"])
def test_tables_are_byte_stable(capsys, name):
    code, first, _ = run(capsys, "table", name)
    code2, second, _ = run(capsys, "table", name)
    assert code == code2 == 0 and first == second


def test_lowrank_table_layout(capsys):
    _, out, _ = run(capsys, "table", "depth-lowrank")
    lines = out.splitlines()
    assert lines[0].split() == ["p", "A1", "A2", "B2", "G2", "A3", "B3", "C3", "A4", "B4", "C4", "D4", "F4"]
    assert lines[1].split() == ["2", "3", "6", "5", "5", "6", "6", "6", "9", "7", "7", "7", "8"]
    assert lines[-1].startswith("cells: 42;")


def test_exceptional_table_json(capsys):
    code, out, _ = run(capsys, "table", "depth-exceptional", "--json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "algchains.table/1"
    first = data["rows"][0]
    assert first["p"] == "2" and first["cells"]["E8"] == 9
    assert data["rows"][-1]["p"] == ">19"


def test_chain_and_verify(tmp_path, capsys):
    path = tmp_path / "f4.cert"
    code, out, _ = run(capsys, "chain", "F4", "--char", "2", "--shortest", "-o", str(path))
    assert code == 0 and "known-optimal" in out
    code, out, _ = run(capsys, "verify", str(path), "--json")
    data = json.loads(out)
    assert code == 0 and data["verdict"] == "Certified" and data["length"] == 8


def test_longest_chain(capsys):
    code, out, _ = run(capsys, "chain", "G2", "--char", "3", "--longest", "--json")
    data = json.loads(out)
    assert code == 0 and data["length"] == 10 and data["nodes"][-1] == "1"


def test_chain_rejects_products(capsys):
    code, _, _ = run(capsys, "chain", "A1 A2", "--char", "0", "--shortest")
    assert code == 4


@pytest.mark.parametrize("path", sorted(GOLDEN.glob("*.cert")), ids=lambda p: p.stem)
def test_verify_golden(capsys, path):
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and "verdict: Certified" in out


def test_verify_refuted_exit_6(tmp_path, capsys):
    p = tmp_path / "bad.cert"
    p.write_text("# algchains chain certificate\nformat 1\nchar 0\nnode B3\nnode A1\nnode U1 T1\nnode T1\nnode 1\n")
    code, out, _ = run(capsys, "verify", str(p))
    assert code == 6 and "Refuted" in out


def test_verify_uncertifiable_exit_5(tmp_path, capsys):
    p = tmp_path / "open.cert"
    p.write_text("# algchains chain certificate\nformat 1\nchar 5\nnode C5\nnode A1\nnode U1 T1\nnode T1\nnode 1\n")
    code, _, _ = run(capsys, "verify", str(p))
    assert code == 5


@pytest.mark.parametrize(
    "text",
    ["garbage\n", "# algchains chain certificate\nchar 0\nnode A1\nnode A2\nnode 1\n", "# algchains chain certificate\nchar 0\nnode Q7\n"],
)
def test_verify_malformed_exit_2(tmp_path, capsys, text):
    p = tmp_path / "m.cert"
    p.write_text(text)
    code, _, err = run(capsys, "verify", str(p))
    assert code == 2 and err


def test_verify_missing_file(tmp_path, capsys):
    code, _, _ = run(capsys, "verify", str(tmp_path / "nope.cert"))
    assert code == 2


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "all", "--max-rank", "5", "--max-p", "7", "--json")
    data = json.loads(out)
    assert code == 0 and data["violations"] == []
    assert set(data["counts"]) == {"cd-bound", "simple-cd", "power-cd", "cr-simple", "sum-dims"}


def test_module_entry_point_and_env_db(tmp_path):
    db = tmp_path / "tiny.dat"
    db.write_text("@nosmall | B2 | all | test fact\n")
    env = dict(os.environ, ALGCHAINS_MAXSUBDB=str(db))
    proc = subprocess.run(
        [sys.executable, "-m", "algchains", "invariants", "A1", "--char", "0", "--json"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["length"] == 3
