import json
from pathlib import Path

import pytest

from coherence_nogo.cli import main

ROOT = Path(__file__).resolve().parent.parent
CIRC = ROOT / "circuits"


def test_analyze(capsys):
    assert main(["analyze", str(CIRC / "t_msi.circ")]) == 0
    assert "k = 0" in capsys.readouterr().out
    assert main(["analyze", str(CIRC / "hadamard_gadget_a.circ")]) == 0
    assert "k = 1" in capsys.readouterr().out


def test_analyze_errors(tmp_path, capsys):
    bad = tmp_path / "bad.circ"
    bad.write_text("qubits 1\ngate H 0\ngate Q 0\n")
    assert main(["analyze", str(bad)]) == 2
    assert "line 3" in capsys.readouterr().err
    coherent = tmp_path / "c.circ"
    coherent.write_text("qubits 1\ngate U2:1,0,0,0.6+0.8i 0\ngate U2:0.6,0.8,-0.8,0.6 0\n")
    out = tmp_path / "a.json"
    assert main(["analyze", str(coherent), "--out", str(out)]) == 1
    assert "error" in json.loads(out.read_text())


def test_verify_gadget(tmp_path, capsys):
    assert main(["verify-gadget", "t_msi"]) == 0
    assert main(["verify-gadget", "hadamard_gadget_b"]) == 0
    assert main(["verify-gadget", "t_msi", "--ancilla", "0"]) == 1
    assert main(["verify-gadget", "no_such_gadget"]) == 2
    out = tmp_path / "g.csv"
    assert main(["verify-gadget", "diagonal_uk(3)", "--out", str(out), "--format", "csv"]) == 0
    assert out.read_text().startswith("key,value\n")


def test_nogo_writes_identical_reports(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["nogo", "approx", "--n", "2", "--trials", "10", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["seed"] == 7 and doc["verdict"] == "pass"
    assert all(r["values"]["bound"] >= 0.75 - 1e-9 for r in doc["records"])
    summary = capsys.readouterr().out
    assert "verdict pass" in summary and "records" not in summary


def test_nogo_kton_and_usage(tmp_path):
    out = tmp_path / "k.csv"
    assert main(["nogo", "kton", "--k", "1", "--n", "2", "--trials", "10",
                 "--out", str(out), "--format", "csv"]) == 0
    assert out.read_text().splitlines()[0].startswith("lemma,seed,index,status")
    assert main(["nogo", "kton", "--k", "2", "--n", "2", "--out", str(out)]) == 2
    with pytest.raises(SystemExit) as err:
        main(["nogo", "bogus"])
    assert err.value.code == 2


@pytest.mark.parametrize("spec,target,value,bound", [
    ("depolarize2.json", "hadamard:2", 0.75, 0.75),
    ("identity1.json", "hadamard:1", 1.0, 0.5),
    ("hadamard1.json", "hadamard:1", 0.0, None),
])
def test_distance(tmp_path, spec, target, value, bound):
    out = tmp_path / "d.json"
    assert main(["distance", str(CIRC / spec), "--target", target, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert abs(doc["induced_distance_lower"] - value) <= 1e-6
    if bound is None:
        assert doc["certified_bound"] is None
    else:
        assert abs(doc["certified_bound"] - bound) <= 1e-9


def test_distance_spec_errors(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text('{"unitary": "CNOT"}')
    assert main(["distance", str(spec)]) == 2
    spec.write_text("{not json")
    assert main(["distance", str(spec)]) == 2
    spec.write_text('{"unitary": "SWAP", "ancilla": "+"}')
    assert main(["distance", str(spec), "--target", "hadamard:x"]) == 2
    assert main(["distance", str(spec), "--budget", "200"]) == 0
