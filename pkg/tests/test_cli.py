import io
import json

import pytest

from res_kernel.cli import EXIT_BUDGET, EXIT_FAILURE, EXIT_OK, EXIT_PARSE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_order(capsys):
    code, out, _ = run(capsys, "order", "--vars", "x,y", "--ideal", "x*y")
    assert code == EXIT_OK
    assert out == "maxord 2\nt_ideal (x, y)\n"


def test_order_json_and_mark(capsys):
    code, out, _ = run(capsys, "order", "--vars", "x,y", "--ideal", "y^2 - x^3", "--mark", "1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["maxord"] == 2 and data["mark"] == 1
    assert data["t_ideal"] == ["x^3 - y^2"]


def test_principalize_text(capsys):
    code, out, _ = run(capsys, "principalize", "--vars", "x,y", "--ideal", "y^2 - x^3")
    assert code == EXIT_OK
    assert "outcome: principalized" in out
    assert "blow-ups: 4" in out


def test_resolve_curve_json_then_check(capsys, tmp_path):
    path = tmp_path / "cusp.json"
    code, _, _ = run(capsys, "resolve-curve", "--vars", "x,y", "--ideal", "y^2 - x^3", "--format", "json", "--out", str(path))
    assert code == EXIT_OK
    data = json.loads(path.read_text())
    assert data["outcome"] == "embedded-resolution-detected"
    assert data["embedded_stage"] == 4
    code, out, _ = run(capsys, "check-trace", str(path))
    assert (code, out) == (EXIT_OK, "ok\n")
    data["nodes"][0]["center"] = ["x"]
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-trace", str(path))
    assert code == EXIT_FAILURE
    assert out.startswith("violation:")


def test_input_file(capsys, tmp_path):
    src = tmp_path / "ideal.txt"
    src.write_text("# two generators\nx^2\ny^2\n")
    code, out, _ = run(capsys, "principalize", "--vars", "x,y", "--input", str(src))
    assert code == EXIT_OK
    assert "blow-ups: 1" in out


def test_budget_exit(capsys):
    code, _, err = run(capsys, "principalize", "--vars", "x,y", "--ideal", "y^2 - x^5", "--budget", "2")
    assert code == EXIT_BUDGET
    assert "budget" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["order", "--vars", "x,y", "--ideal", "x +"],
        ["order", "--vars", "x,y", "--ideal", "t"],
        ["order", "--ideal", "x"],
        ["order", "--vars", "x,y"],
        ["order", "--vars", "x,y", "--ideal", "0"],
        ["principalize", "--vars", "x,y", "--ideal", "0"],
        ["principalize", "--vars", "x,y", "--ideal", "x", "--budget", "-1"],
        ["principalize", "--vars", "x,x", "--ideal", "x"],
        ["principalize", "--vars", "x", "--input", "/nonexistent/file"],
    ],
)
def test_parse_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_PARSE
    assert err.startswith("error:")


@pytest.mark.parametrize("argv", [["frobnicate"], ["order", "--bogus"], []])
def test_argparse_errors(argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == EXIT_PARSE


def test_toric_resolve_stdin(capsys, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO("dim 2\n1,0; 1,3\n"))
    code, out, _ = run(capsys, "toric-resolve", "-")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "dim 2"
    assert set(out.splitlines()[1:]) == {"1,0; 1,1", "1,1; 1,2", "1,2; 1,3"}


def test_toric_resolve_json(capsys, tmp_path):
    fan = tmp_path / "fan.txt"
    fan.write_text("dim 2\n1,0; 1,2\n")
    code, out, _ = run(capsys, "toric-resolve", str(fan), "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["inserted"] == [[1, 1]]


def test_toric_resolve_errors(capsys, tmp_path):
    fan = tmp_path / "fan.txt"
    fan.write_text("dim 3\n1,0,0\n")
    assert run(capsys, "toric-resolve", str(fan))[0] == EXIT_FAILURE
    fan.write_text("dim 2\n1,0; 1\n")
    code, _, err = run(capsys, "toric-resolve", str(fan))
    assert code == EXIT_PARSE and "line 2" in err


def test_check_trace_bad_json(capsys, tmp_path):
    path = tmp_path / "t.json"
    path.write_text("{")
    assert run(capsys, "check-trace", str(path))[0] == EXIT_PARSE
