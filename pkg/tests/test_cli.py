import io
import json
import subprocess
import sys

import pytest

from tautring.cli import run
from tautring.exact import Poly


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_phi_text():
    assert call("phi", "-a", "4", "-b", "0", "--format", "text") == (0, "609*x^3 + 81*y^2\n", "")


def test_global_format_before_subcommand():
    code, out, _ = call("--format", "json", "phi", "-a", "2", "-b", "0")
    assert code == 0
    assert Poly.from_json(json.loads(out)).render() == "21*x"


def test_phi_csv():
    code, out, _ = call("phi", "-a", "4", "-b", "0", "--format", "csv")
    assert out.splitlines() == ["coeff,x,y", "609,3,0", "81,0,2"]


def test_relations_csv():
    code, out, _ = call("relations", "--degree", "6", "--source", "phi", "--format", "csv")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "p1^6,p1^4 e^2,p1^2 e^4,e^6"
    assert len(lines) == 3 and "0,4,-41,100" in lines


def test_relations_signature_json():
    code, out, _ = call("relations", "--degree", "5", "--source", "signature", "--format", "json")
    data = json.loads(out)
    assert data["relations"][0]["coeffs"] == [10, -83, 127]


def test_kappa_json():
    code, out, _ = call("kappa", "-n", "2", "-a", "1", "-b", "1", "--choice-i", "2", "--format", "json")
    data = json.loads(out)
    assert data["choice_i"] == 2 and data["n"] == 2
    assert Poly.from_json(data["poly"]).render() == "27*D_1_2^2 + 27*D_2_1^2"


def test_kappa_default_choice_and_n1():
    code, out, _ = call("kappa", "-n", "1", "-a", "4", "-b", "0")
    assert out == "609*B^3 + 81*C^2\n"
    code, out, _ = call("kappa", "-n", "2", "-a", "0", "-b", "1", "--format", "json")
    assert json.loads(out)["choice_i"] == 1


def test_ring_table_and_obstructions():
    code, out, _ = call("ring", "-n", "1")
    assert "x1*x1 = (1/2*B) + (1)*nu" in out.splitlines()
    code, out, _ = call("ring", "-n", "2", "--obstructions", "--format", "json")
    data = json.loads(out)
    assert len(data["obstructions"]) == 27
    code, out, _ = call("ring", "-n", "3", "--mode", "free", "--obstructions", "--format", "csv")
    assert out.splitlines()[0] == "product,c0,x1,x2,x3,nu"


def test_lgenus():
    assert call("lgenus", "-k", "2")[1] == "-1/45*p1^2 + 7/45*p2\n"


def test_verify_single_check():
    code, out, _ = call("verify", "--check", "cp2-pointed-relation", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["failed"] == 0
    assert [c["id"] for c in data["checks"]] == ["cp2-pointed-relation"]


def test_output_file(tmp_path):
    target = tmp_path / "phi.json"
    code, out, _ = call("phi", "-a", "3", "-b", "0", "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert Poly.from_json(json.loads(target.read_text())).render() == "117*x^2"


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["phi", "-a", "1"],
        ["phi", "-a", "1", "-b", "0", "--wat"],
        ["kappa", "-n", "2", "-a", "1", "-b", "2", "--choice-i", "1"],
        ["kappa", "-n", "2", "-a", "1", "-b", "1", "--choice-i", "3"],
        ["kappa", "-n", "0", "-a", "1", "-b", "0"],
        ["verify", "--check", "no-such-check"],
        ["phi", "-a", "-1", "-b", "0"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    code, out, err = call(*argv)
    assert code == 2
    assert out == ""


def test_deterministic_output():
    first = call("kappa", "-n", "3", "-a", "2", "-b", "2", "--format", "json")
    second = call("kappa", "-n", "3", "-a", "2", "-b", "2", "--format", "json")
    assert first == second


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tautring.cli", "phi", "-a", "0", "-b", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and proc.stdout == "3*x\n"


def test_verify_all_json_report():
    code, out, _ = call("verify", "--all", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["failed"] == 0
    ids = [c["id"] for c in data["checks"]]
    assert ids == sorted(ids)
    assert "phi-three-way-agreement" in ids and "erratum-bici-I2-coefficient" in ids
