import json
import subprocess
import sys

import pytest

from scalingwindow.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def test_validate_pass(capsys):
    assert run("validate", "--family", "mixed13", "--n", 100000, "--q-target", 0, "--zeta", 0.05) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["all_pass"] and out["pass_a"]


def test_validate_failures(tmp_path, capsys):
    assert run("validate", "--family", "mixed13", "--n", 1000) == 1
    assert json.loads(capsys.readouterr().out)["pass_a"] is False
    p = tmp_path / "twos.txt"
    p.write_text("\n".join(["2"] * 50) + "\n")
    assert run("validate", "--degrees", p) == 1
    assert json.loads(capsys.readouterr().out)["pass_c"] is False


def test_malformed_input(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("1\nx\n")
    assert run("validate", "--degrees", p) == 2
    p.write_text("1\n0\n1\n")
    assert run("validate", "--degrees", p) == 2
    assert run("validate", "--family", "mixed13") == 2


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        run("validate", "--bogus")
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run("validate", "--degrees", "a", "--family", "mixed13", "--n", 10)
    assert exc.value.code == 2


def test_help_lists_flags(capsys):
    with pytest.raises(SystemExit):
        run("experiment", "--help")
    text = capsys.readouterr().out
    for flag in ("--preset", "--n-list", "--replicates", "--seed", "--out-dir", "--workers"):
        assert flag in text


def test_sample(tmp_path):
    deg = tmp_path / "d.txt"
    deg.write_text("1\n1\n")
    assert run("sample", "--degrees", deg, "--seed", 1, "--out", tmp_path / "e.txt") == 0
    assert (tmp_path / "e.txt").read_text() == "0 1\n"
    for name in ("a", "b"):
        assert run("sample", "--family", "mixed13", "--n", 500, "--seed", 9, "--out", tmp_path / name) == 0
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
    loop = tmp_path / "loop.txt"
    loop.write_text("2\n")
    assert run("sample", "--degrees", loop, "--seed", 1, "--simple", "--out", tmp_path / "x") == 1


def test_explore(tmp_path):
    deg = tmp_path / "d.txt"
    deg.write_text("1\n1\n")
    assert run("explore", "--degrees", deg, "--seed", 1, "--census", tmp_path / "c.csv") == 0
    rows = (tmp_path / "c.csv").read_text().splitlines()
    assert rows[1:] == ["0,2,1,-1,tree"]

    deg.write_text("1\n1\n1\n3\n")
    assert run("explore", "--degrees", deg, "--seed", 2, "--start-vertex", 3,
               "--census", tmp_path / "c.csv", "--trace", tmp_path / "t.csv") == 0
    first = (tmp_path / "t.csv").read_text().splitlines()[1].split(",")
    assert float(first[3]) == pytest.approx(-1.4)

    assert run("explore", "--family", "mixed13", "--n", 1000, "--seed", 3, "--census", tmp_path / "m.csv") == 0
    body = [r.split(",") for r in (tmp_path / "m.csv").read_text().splitlines()[1:]]
    assert sum(int(r[1]) for r in body) == 1000
    assert sum(int(r[2]) for r in body) == 750


def test_experiment_reproducible(tmp_path):
    args = ["experiment", "--preset", "below", "--n-list", 500, 1000, 2000, "--replicates", 5, "--seed", 4]
    assert run(*args, "--out-dir", tmp_path / "a") == 0
    assert run(*args, "--workers", 3, "--out-dir", tmp_path / "b") == 0
    for f in ("replicates.csv", "summary.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert len(summary["complex_census"]) == 3
    assert "median_cmax" in summary["slopes"]


def test_oracle(tmp_path, capsys):
    deg = tmp_path / "d.txt"
    deg.write_text("1\n1\n1\n1\n")
    assert run("oracle", "--degrees", deg, "--check", "pairjoin") == 0
    assert json.loads(capsys.readouterr().out)["single_pair_probability"] == "1/3"
    assert run("oracle", "--degrees", deg, "--check", "uniformity", "--seed", 1, "--samples", 20000) == 0
    assert json.loads(capsys.readouterr().out)["pass"]
    deg.write_text("1\n1\n1\n3\n")
    assert run("oracle", "--degrees", deg, "--check", "expectation", "--start-vertex", 3) == 0
    assert json.loads(capsys.readouterr().out)["mean"] == "-7/5"


def test_module_entry_point(tmp_path):
    deg = tmp_path / "d.txt"
    deg.write_text("1\n1\n")
    proc = subprocess.run([sys.executable, "-m", "scalingwindow", "validate", "--degrees", str(deg)],
                          capture_output=True, text=True)
    assert proc.returncode in (0, 1)
    assert json.loads(proc.stdout)["n"] == 2
