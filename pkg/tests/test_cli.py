import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from fpure import cli
from fpure.cartier import InvariantViolation

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
EX1 = ["--field", "2", "--vars", "x,y", "--u", "x*y", "--e", "1"]
EX3 = ["--field", "5", "--vars", "x,y,z", "--u", "(x^4+y^4+z^4)^4", "--e", "1"]


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    try:
        code = cli.run(list(argv), out=out, err=err)
    except SystemExit as ex:  # argparse usage errors
        code = ex.code
    return code, out.getvalue(), err.getvalue()


def test_enumerate_json_schema():
    code, out, _ = call("enumerate", *EX1, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert set(data) == {"field", "vars", "u", "e", "ideals", "count", "stats", "complete"}
    assert data["count"] == 6 and data["complete"] is True
    assert sorted(map(tuple, data["ideals"])) == sorted(
        [("1",), ("x", "y"), ("x",), ("y",), ("x*y",), ()])


def test_golden_example1():
    gold = json.loads((CORPUS / "example1.json").read_text())
    code, out, _ = call(*gold["args"], "--format", "json")
    assert code == 0
    data = json.loads(out)
    data.pop("stats")
    assert data == gold["expected"]


def test_enumerate_text_summary():
    code, out, _ = call("enumerate", *EX1)
    assert code == 0
    assert "6 fixed ideals, complete" in out
    assert "unit ideal: 1" in out and "zero ideal: 1" in out
    assert "2 minimal generators: 1" in out and "1 minimal generator: 3" in out


def test_check_fixed():
    assert call("check-fixed", *EX1, "x")[:2] == (0, "fixed\n")
    assert call("check-fixed", "--field", "2", "--vars", "x,y", "--u", "x^3*y", "x")[1] == "compatible\n"
    assert call("check-fixed", *EX1, "x^2*y", "x*y^2")[1] == "neither\n"


def test_eth_root_and_hash():
    assert call("eth-root", "--field", "2", "--vars", "x,y", "--e", "1", "0")[:2] == (0, "<0>\n")
    assert call("eth-root", "--field", "2", "--vars", "x,y", "x^3*y")[1] == "<x>\n"
    assert call("hash", *EX1, "x^2", "x*y", "x+y")[1] == "<x*y>\n"
    code, out, _ = call("hash", *EX1, "x", "y^2", "--format", "json")
    assert json.loads(out)["ideal"] == ["x"]


@pytest.mark.parametrize("argv", [
    ["check-fixed", *EX1, "x+"],
    ["enumerate", "--field", "6", "--vars", "x", "--u", "x"],
    ["enumerate", "--field", "2", "--vars", "x", "--u", "y"],
    ["enumerate", *EX1[:-1], "0"],
    ["frobnicate", *EX1],
    ["enumerate", "--vars", "x", "--u", "x"],
    ["enumerate", *EX1, "--jobs", "0"],
])
def test_usage_errors_exit_1(argv):
    assert call(*argv)[0] == 1


def test_limits_exit_2_with_partial_json():
    code, out, err = call("enumerate", *EX3, "--max-nodes", "2", "--format", "json")
    assert code == 2
    data = json.loads(out)
    assert data["complete"] is False
    assert [] in data["ideals"]
    assert "incomplete" in err


def test_limits_from_environment(monkeypatch):
    monkeypatch.setenv("FPURE_MAX_NODES", "2")
    assert call("enumerate", *EX3)[0] == 2
    monkeypatch.setenv("FPURE_MAX_NODES", "lots")
    assert call("enumerate", *EX3)[0] == 1


def test_invariant_violation_exit_3(monkeypatch):
    def broken(*a, **k):
        raise InvariantViolation("emitted ideal is not fixed")

    monkeypatch.setattr(cli, "enumerate_fixed", broken)
    code, _, err = call("enumerate", *EX1)
    assert code == 3 and "internal error" in err


def test_trace_goes_to_stderr():
    code, out, err = call("enumerate", *EX1, "--trace", "--format", "json")
    assert code == 0
    events = [json.loads(line) for line in err.splitlines()]
    assert events and all("event" in e for e in events)
    assert json.loads(out)["count"] == 6


def test_output_is_deterministic_apart_from_timing():
    runs = []
    for _ in range(2):
        data = json.loads(call("enumerate", *EX1, "--format", "json")[1])
        data["stats"].pop("seconds")
        runs.append(data)
    assert runs[0] == runs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fpure", "check-fixed", *EX1, "x"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout == "fixed\n"
    proc = subprocess.run([sys.executable, "-m", "fpure", "enumerate", *EX1, "--max-nodes", "x"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 1
