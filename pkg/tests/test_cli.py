import json
import subprocess
import sys

import pytest

from arraybound.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_types(capsys):
    code, out, _ = run(capsys, "types", "--gen", "matching:2", "--k", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "arraybound/1" and doc["count"] == 3


@pytest.mark.parametrize("argv", [
    ["types", "--gen", "matching:2", "--k", "0"],
    ["types", "--gen", "matching:1", "--D", "0,9"],
    ["bogus"],
    [],
    ["types"],
    ["types", "--gen", "nosuch:3"],
    ["uba", "--gen", "matching:3"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_budget_exit(capsys):
    assert run(capsys, "types", "--gen", "matching:40", "--k", "4")[0] == 3


def test_ma(capsys):
    code, out, _ = run(capsys, "ma", "--gen", "halfgraph:20", "--formula", "E(z1,z2)", "--format", "json")
    assert code == 0 and json.loads(out)["k"] == 20
    code, out, _ = run(capsys, "ma", "--gen", "halfgraph:5", "--formula", "E(z1,z2)", "--sizes", "5,10,20",
                       "--format", "csv")
    assert out.splitlines() == ["size,k", "5,5", "10,10", "20,20"]


def test_uba(capsys):
    code, out, _ = run(capsys, "uba", "--gen", "matching:25", "--m", "2", "--exhaustive-D", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["reports"][0]["verdicts"]["1"]["verdict"] == "bounded-so-far"
    assert doc["params"]["m"] == 2 and "non-conclusive" in doc["reports"][0]["note"]


def test_uba_local_equals_plain_on_one_relation(capsys):
    args = ["uba", "--gen", "matching:6", "--exhaustive-D", "1", "--format", "json"]
    plain = json.loads(run(capsys, *args)[1])["reports"][0]
    local = json.loads(run(capsys, *args, "--local")[1])["reports"][0]
    local.pop("relation")
    assert plain == local


def test_uba_chain_csv(capsys):
    code, out, _ = run(capsys, "uba", "--gen", "halfgraph:12", "--chain", "13;13,15;13,15,17", "--format", "csv")
    rows = out.splitlines()
    assert code == 0 and rows[0] == "relation,k,m,D,count" and len(rows) == 4


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--gen", "matching:10", "--tuple", "0,1,4", "--kappa", "1")
    assert code == 0 and "[{z1,z2} | {z3}]" in out
    code, out, _ = run(capsys, "decompose", "--gen", "matching:10", "--tuple", "0,1", "--D", "1")
    assert code == 2


def test_scheme(capsys):
    code, out, _ = run(capsys, "scheme", "--gen", "cycle:24", "--formula", "S(z1,z2)", "--theta", "S(z1,z3)",
                       "--y", "z3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["agreement"]["agree"] == doc["agreement"]["total"] == 24


def test_freeproduct(capsys):
    code, out, _ = run(capsys, "freeproduct", "--gen", "matching:20", "--p", "0,1", "--q", "0,1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["product"]["cross_check"] == "pass"


def test_basis(capsys):
    code, out, _ = run(capsys, "basis", "--gen", "matching:10", "--B", "E(z1,z2)", "--kappa", "1")
    assert code == 4 and "E(z1,z2)" in out


def test_gen_round_trip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "--gen", "random:5:0.4:3")
    path = tmp_path / "s.txt"
    path.write_text("\n".join(out.splitlines()) + "\n")
    code2, out2, _ = run(capsys, "gen", "--file", str(path))
    assert code == code2 == 0 and out == out2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "arraybound", "ma", "--gen", "matching:5", "--formula", "E(z1,z2)"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "k=1" in proc.stdout
