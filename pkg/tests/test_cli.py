import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from plumbpoly.cli import main, parse_id_list, run

FIX = Path(__file__).resolve().parents[1] / "src" / "plumbpoly" / "fixtures"


def fx(name):
    return str(FIX / f"{name}.txt")


def test_parse_id_list():
    assert parse_id_list("1..4,7") == [1, 2, 3, 4, 7]
    assert parse_id_list("3, 5,") == [3, 5]


def test_validate(tmp_path):
    assert run(["validate", fx("ex2")]).exit_code == 0
    bad = tmp_path / "pos.txt"
    bad.write_text("vertices: 1:-2 2:1\nedges: 1-2\n")
    rep = run(["validate", str(bad)])
    assert rep.exit_code == 2 and "NotNegativeDefinite" in rep.error
    bad.write_text("vertices: 1:-2 2:-2\nedges: 1-2 2~3\n")
    rep = run(["validate", str(bad)])
    assert rep.exit_code == 2 and "line 2" in rep.error


def test_info_values():
    res = run(["info", fx("g1")]).results
    assert res["det"] == 2 and res["Z_K"] == ["0"] and res["classification"] == "Rational"
    res = run(["info", fx("ex2")]).results
    assert res["Z_K"] == ["2", "4", "2", "4", "2", "2", "2", "1", "1", "1"]
    assert res["classification"] == "Elliptic"
    assert run(["info", fx("fig1")]).results["numerically_gorenstein"] is False


def test_sw_and_poly():
    rep = run(["sw", fx("fig2_12")])
    assert rep.results["sw0_norm"] == 2 and rep.exit_code == 0
    rep = run(["poly", fx("ex2"), "--reduce", "1..6"])
    assert rep.results["terms"] == 2


def test_ellseq_single_level():
    rep = run(["ellseq", fx("me6")])
    assert rep.results["m"] == 0 and rep.exit_code == 0
    rep = run(["ellseq", fx("a2")])
    assert rep.exit_code == 2 and "NotElliptic" in rep.error


def test_extend():
    rep = run(["extend", fx("fig2_12"), "--sub", "1..10"])
    assert rep.results["good"] and rep.results["identity_holds"] and rep.exit_code == 0
    rep = run(["extend", fx("fig2"), "--sub", "1..16"])
    assert not rep.results["good"] and rep.exit_code == 0
    assert any("E*7+E*11+E*14+6E*15" in line for line in rep.lines)
    rep = run(["extend", fx("fig2_12"), "--sub", "1..9"])
    assert rep.exit_code == 2 and "BoundaryNotEndVertices" in rep.error


def test_check_corrupted_dir(tmp_path):
    shutil.copy(FIX / "me6.txt", tmp_path / "me6.txt")
    # a -3 on the first node makes the minimally elliptic graph rational
    (tmp_path / "broken.txt").write_text((FIX / "me6.txt").read_text().replace("2:-2", "2:-3"))
    rep = run(["check", str(tmp_path)])
    assert rep.exit_code == 0
    assert rep.results["files"]["broken.txt"]["classification"] == "Rational"
    assert rep.results["summary"]["skipped"] > 0
    assert "[SKIP]" in rep.render(False)


def test_exit_one_on_failed_check(monkeypatch):
    import plumbpoly.cli as cli

    monkeypatch.setattr(cli, "evaluate_at_one", lambda p: 99)
    assert run(["sw", fx("ex2")]).exit_code == 1


@pytest.mark.parametrize("args", [["info", fx("fig1")], ["exponents", fx("ex2")], ["extend", fx("ex2"), "--sub", "1..6"]])
def test_output_is_byte_stable(capsys, args):
    outs = []
    for flag in ([], ["--json"]):
        for _ in range(2):
            main(args + flag)
            outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1] and outs[2] == outs[3]
    js = json.loads(outs[2])
    assert js["exit_code"] == 0 and js["command"] == args[0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "plumbpoly", "sw", fx("me6")], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "1"
