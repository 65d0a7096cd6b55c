import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from artifact.cli import main, parse_caps, parse_window
from artifact.errors import ArtifactError

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def machine(capsys, *argv):
    code, out = run(capsys, "--format", "machine", *argv)
    return code, json.loads(out)


@pytest.mark.parametrize("name,kind,expected", [
    ("abelian_linfty.txt", "linfty", 0),
    ("sl2_linfty.txt", "linfty", 0),
    ("broken_differential.txt", "linfty", 1),
    ("path_category.txt", "ainfty", 0),
    ("broken_mu1.txt", "ainfty", 1),
    ("derivation_co.txt", "co", 0),
    ("broken_co.txt", "co", 1),
    ("malformed.txt", "linfty", 2),
    ("abelian_linfty.txt", "ainfty", 2),
])
def test_verify_exit_codes(capsys, name, kind, expected):
    code, _ = run(capsys, "verify", DATA / name, "--kind", kind)
    assert code == expected


def test_broken_report_carries_counterexample(capsys):
    code, rep = machine(capsys, "verify", DATA / "broken_differential.txt", "--kind", "linfty")
    assert code == 1 and rep["status"] == "fail"
    failed = [c for c in rep["checks"] if c["status"] == "fail"]
    assert failed[0]["counterexample"]["tuple"] == ["a"]


def test_co_forms_reported_together(capsys):
    _, rep = machine(capsys, "verify", DATA / "broken_co.txt", "--kind", "co", "--caps", "d=2", "k=3")
    assert rep["relation_forms_agree"] is True
    names = [c["check"] for c in rep["checks"] if c["status"] == "fail"]
    assert "closed-open relations" in names and "L-infinity morphism relations" in names


def test_missing_file_is_input_error(capsys):
    code, out = run(capsys, "verify", DATA / "nope.txt", "--kind", "linfty")
    assert code == 2 and "ERROR" in out


def test_trees_command(capsys):
    code, rep = machine(capsys, "trees", "--kind", "ordered", "--leaves", "3")
    assert code == 0 and rep["trees"]["count"] == 3
    _, rep = machine(capsys, "trees", "--kind", "ordered", "--leaves", "2")
    assert rep["trees"]["count"] == 1
    _, rep = machine(capsys, "trees", "--kind", "unordered", "--leaves", "3")
    row = [r for r in rep["splits"] if (r["d_plus"], r["d_minus"]) == (2, 2)][0]
    assert row["count"] == 3
    _, rep = machine(capsys, "trees", "--kind", "flavoured", "--leaves", "2", "--flavours", "f:1", "--list")
    assert rep["trees"]["count"] == len(rep["listing"]) == 3
    code, _ = run(capsys, "trees", "--kind", "unordered", "--leaves", "3", "--flavours", "f:1")
    assert code == 2


def test_homology_complex(capsys):
    code, rep = machine(capsys, "homology", DATA / "times_two.txt", "--mode", "complex")
    assert code == 0
    by_deg = {r["degree"]: r for r in rep["homology"]}
    assert by_deg[1]["torsion"] == [2] and by_deg[0]["rank"] == 0


def test_homology_telescope(capsys):
    _, rep = machine(capsys, "homology", DATA / "identity_system.txt", "--mode", "telescope")
    assert rep["comparison"]["equal"] is True
    _, rep = machine(capsys, "homology", DATA / "zero_kappa_system.txt", "--mode", "telescope")
    assert rep["comparison"]["equal"] is False


def test_homology_hochschild(capsys):
    code, rep = machine(capsys, "homology", DATA / "ground_ring.txt", "--mode", "hochschild", "--window", "0..2")
    assert code == 0 and rep["homology"][0] == {"degree": 0, "rank": 1, "torsion": []}
    code, rep = machine(capsys, "homology", DATA / "exterior_category.txt", "--mode", "hochschild",
                        "--window", "0..2")
    assert code == 2 and "certify" in rep["error"]
    code, _ = run(capsys, "homology", DATA / "ground_ring.txt", "--mode", "hochschild")
    assert code == 2


def test_snf(capsys):
    code, rep = machine(capsys, "snf", DATA / "matrix.txt")
    assert code == 0 and rep["invariant_factors"] == [2, 6, 12]


def test_reports_are_deterministic(capsys):
    args = ["verify", DATA / "derivation_co.txt", "--kind", "co"]
    _, a = run(capsys, "--format", "machine", *args)
    _, b = run(capsys, "--format", "machine", "--jobs", "4", *args)
    assert a == b
    _, c = run(capsys, *args)
    _, d = run(capsys, *args)
    assert c == d


def test_caps_and_window_parsing():
    assert parse_caps(["d=3", "k=2", "length=4"]) == {"d": 3, "k": 2, "length": 4}
    assert parse_window("-1..2") == (-1, 2)
    with pytest.raises(ArtifactError):
        parse_caps(["q=1"])
    with pytest.raises(ArtifactError):
        parse_window("1-2")


def test_console_script_entry_point():
    env = dict(os.environ, ARTIFACT_JOBS="2")
    out = subprocess.run([sys.executable, "-m", "artifact.cli", "trees", "--kind", "ordered", "--leaves", "4"],
                         capture_output=True, text=True, env=env)
    assert out.returncode == 0 and "count: 11" in out.stdout
