import json
import subprocess
import sys
from importlib import resources

import pytest

from resurf.cli import main
from resurf.conic_bundle import TypeD, template


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def model_file(tmp_path):
    path = tmp_path / "model.json"
    path.write_text(json.dumps({"a6": ["0", "1"]}))
    return str(path)


def test_classify_weierstrass(capsys, model_file):
    code, out, _ = run(capsys, "classify-weierstrass", model_file, "--places", "0,inf")
    assert code == 0 and out.strip() == "t=0: II, t=inf: II*"
    code, out, _ = run(capsys, "classify-weierstrass", model_file, "--places", "0,∞", "--all")
    assert code == 0 and "euler_sum=12" in out


def test_gaps(capsys):
    code, out, _ = run(capsys, "gaps", "--case", "43", "--max-k", "20")
    assert code == 0
    gaps = out.strip().splitlines()[-1]
    assert gaps.startswith("gaps=1,4,")
    assert "k=1 verdict=gap rule=r1-criterion" in out


def test_fiber_info(capsys):
    code, out, _ = run(capsys, "fiber-info", "IV*")
    assert code == 0
    assert "components=7" in out and "t_lattice=E6" in out and "base_change=IV" in out


def test_case_info(capsys):
    code, out, _ = run(capsys, "--json", "case-info", "--case", "59")
    data = json.loads(out)
    assert code == 0 and data["delta"] == "13/6" and data["mu"] == "1/12"


def test_density(capsys):
    code, out, _ = run(capsys, "density", "--case", "43", "--n", "100")
    assert code == 0 and out.startswith("N=100 ")


def test_one_gap_report(capsys):
    code, out, _ = run(capsys, "one-gap-report")
    assert code == 0 and out.strip().endswith("one_gap=43")


def test_conic_admissible(capsys):
    code, out, _ = run(capsys, "conic-admissible", "II*,II", "--rank", "0")
    assert code == 0 and "admissible=0,D_m(m>=4)" in out
    code, out, _ = run(capsys, "conic-admissible", "I2*,2II", "--rank", "1")
    assert code == 0 and "rnrf=1" in out
    code, _, err = run(capsys, "conic-admissible", "II*,III")
    assert code == 1
    code, _, err = run(capsys, "conic-admissible", "III*,III", "--case", "45")
    assert code == 1 and "case 45" in err
    code, out, _ = run(capsys, "conic-admissible", "III*,II,I1", "--case", "43")
    assert code == 0 and "A2" not in out


def test_conic_classify(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps(template(TypeD(5)).to_json()))
    code, out, _ = run(capsys, "conic-classify", str(path))
    assert code == 0 and out.strip() == "conic_class=true type=D5"
    path.write_text(json.dumps({"nodes": [{"kind": "section"}, {"kind": "section"}], "edges": []}))
    code, out, _ = run(capsys, "conic-classify", str(path))
    assert code == 1 and "conic_class=false" in out


def test_verify_tables(capsys):
    code, out, _ = run(capsys, "verify-tables")
    assert code == 0
    summary = out.strip().splitlines()[-1]
    assert summary.startswith("checked=") and "failed=0" in summary


def test_usage_errors_exit_1(capsys):
    assert run(capsys, "gaps")[0] == 1
    assert run(capsys, "no-such-command")[0] == 1
    assert run(capsys, "fiber-info", "V*")[0] == 1
    assert run(capsys, "case-info", "--case", "999")[0] == 1
    assert run(capsys, "conic-admissible")[0] == 1


def test_corrupt_dataset_exits_2(capsys, tmp_path):
    doc = json.loads(resources.files("resurf.data").joinpath("mwl_cases.json").read_text())
    doc["cases"][4]["EK_narrow"]["gram"][0][0] = "3"
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, _, err = run(capsys, "--data", str(path), "case-info", "--case", "1")
    assert code == 2 and "row 5" in err
    code, _, _ = run(capsys, "case-info", "--case", "1", "--data", str(path))
    assert code == 2


def test_data_override_is_used(capsys, tmp_path):
    doc = json.loads(resources.files("resurf.data").joinpath("mwl_cases.json").read_text())
    doc["cases"] = [r for r in doc["cases"] if r["case"] == 43]
    path = tmp_path / "one.json"
    path.write_text(json.dumps(doc))
    assert run(capsys, "--data", str(path), "case-info", "--case", "43")[0] == 0
    assert run(capsys, "--data", str(path), "case-info", "--case", "44")[0] == 1


@pytest.mark.parametrize("argv", [
    ["gaps", "--case", "59", "--max-k", "12"],
    ["one-gap-report"],
    ["verify-tables"],
    ["case-info", "--case", "27"],
])
def test_json_is_deterministic(capsys, argv):
    first = run(capsys, "--json", *argv)[1]
    second = run(capsys, *argv, "--json")[1]
    assert first == second
    json.loads(first)


def test_console_entry_point(model_file):
    proc = subprocess.run([sys.executable, "-m", "resurf.cli", "classify-weierstrass", model_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "t=0: II, t=inf: II*"
