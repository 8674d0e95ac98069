import json
import subprocess
import sys

import pytest

from singclass.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(argv, capsys):
    code, out, err = run(argv + ["--json"], capsys)
    return code, json.loads(out) if out.strip() else None


def test_classify_example(capsys):
    code, rep = run_json(["classify", "--char", "2", "--vars", "x,y", "y^2+x^3*y"], capsys)
    assert code == 0
    assert rep["schema"] == "singclass/1"
    assert rep["tau"] == {"finite": True, "value": 5}
    assert rep["mu"]["finite"] is False
    assert rep["label"] == "A_5" and rep["simple_contact"] is True
    assert rep["determinacy"]["contact"]["example_reading"] == 6
    assert "error" in rep["determinacy"]["right"]


def test_classify_separation(capsys):
    _, a = run_json(["classify", "--char", "2", "y^2+x^3*y"], capsys)
    _, b = run_json(["classify", "--char", "2", "y^2+x^3*y+x^5"], capsys)
    assert a["contact_label"]["name"] != b["contact_label"]["name"]


def test_determinacy_example(capsys):
    code, rep = run_json(["determinacy", "--char", "3", "--vars", "x,y", "y^8+x^8*y^4+x^23"], capsys)
    assert code == 0
    c = rep["determinacy"]["contact"]
    assert c["highcorner"] == "x22y2" and c["example_reading"] == 40


def test_zero_polynomial_is_input_error(capsys):
    code, out, err = run(["invariants", "--char", "0", "--vars", "x", "0"], capsys)
    assert code == 1 and "zero polynomial" in err


def test_syntax_error_exit_code(capsys):
    code, _, err = run(["parse", "x^2+(y"], capsys)
    assert code == 1 and "PolySyntaxError" in err


def test_bad_characteristic_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["classify", "--char", "4", "x^2"])
    assert exc.value.code == 1


def test_not_isolated_exit_code(capsys):
    code, rep = run_json(["determinacy", "x^2*y^2"], capsys)
    assert code == 2 and rep["error"]["type"] == "NotIsolated"


def test_truncate_flag(capsys):
    code, rep = run_json(["invariants", "--truncate", "20", "--vars", "x,y", "x^2"], capsys)
    assert code == 0 and rep["mu"] == {"finite": False, "bound": 20}


def test_univariate_and_split(capsys):
    _, rep = run_json(["univariate", "--char", "3", "x^3+x^4"], capsys)
    assert rep["univariate"]["determinacy"] == 4 and rep["univariate"]["modality"] == 1
    _, rep = run_json(["split", "x^2+2*x*y^2+y^3+y^4"], capsys)
    assert rep["split"]["residual"] == "y^3" and rep["split"]["corank"] == 1


def test_classify_univariate_block(capsys):
    _, rep = run_json(["classify", "--char", "7", "x^5"], capsys)
    assert rep["univariate"]["simple"] is True and rep["right_label"]["name"] == "A_4"


def test_deform_scan_is_deterministic(capsys):
    argv = ["deform-scan", "--char", "5", "--samples", "15", "--seed", "4", "x^3+y^4"]
    _, a, _ = run(argv + ["--json"], capsys)
    _, b, _ = run(argv + ["--json"], capsys)
    assert a == b and json.loads(a)["violations"] == []


def test_oracle_fixture(capsys):
    code, out, _ = run(["oracle", "--char", "2", "--nvars", "1", "--k", "3", "--action", "right"], capsys)
    rep = json.loads(out)
    assert code == 0 and len(rep["orbits"]) == 4
    assert main(["oracle", "--char", "5"]) == 1


def test_batch_mode(tmp_path, capsys):
    src = tmp_path / "in.txt"
    src.write_text("# corpus\nx^2+y^3\nx^2*y^2\n0\n")
    code, out, _ = run(["invariants", "--file", str(src)], capsys)
    lines = [json.loads(ln) for ln in out.splitlines()]
    assert [ln["exit"] for ln in lines] == [0, 0, 1]
    assert lines[1]["mu"]["finite"] is False
    assert code == 1


def test_text_output(capsys):
    code, out, _ = run(["invariants", "x^2+y^3"], capsys)
    assert code == 0 and "schema: singclass/1" in out and "value: 2" in out


def test_variables_inferred(capsys):
    _, rep = run_json(["parse", "b^2 + a^3"], capsys)
    assert rep["input"]["vars"] == ["a", "b"]


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "singclass.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and "singclass" in proc.stdout
