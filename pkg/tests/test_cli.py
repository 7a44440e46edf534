import json

import pytest

from kspm.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_fixedpoint_formats(capsys, tmp_path):
    rc, out, _ = run(capsys, "fixedpoint", "--d", "3", "--n", "3")
    assert rc == 0 and json.loads(out)["slopes"] == [0, 0, 1]
    rc, out, _ = run(capsys, "fixedpoint", "--n", "10", "--format", "csv")
    assert out.startswith("column,slope,height")
    path = tmp_path / "p.svg"
    rc, out, _ = run(capsys, "fixedpoint", "--n", "10", "--format", "svg", "--out", str(path))
    assert rc == 0 and out == "" and path.read_text().startswith("<svg")


def test_bad_d_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["fixedpoint", "--d", "1", "--n", "3"])
    assert exc.value.code == 2


def test_bad_letter_is_an_input_error(capsys):
    rc, _, err = run(capsys, "transducer", "run", "--input", "abc")
    assert rc == 2 and "error" in err
    rc, _, err = run(capsys, "transducer", "run", "--input", "ab", "--from", "x1")
    assert rc == 2


def test_transducer_commands(capsys):
    rc, out, _ = run(capsys, "transducer", "run", "--input", "abaaaaab", "--ab")
    assert json.loads(out)["output"] == "abaab"
    rc, out, _ = run(capsys, "transducer", "run", "--input", "bbbb", "--from", "21", "--ab")
    assert json.loads(out) == {"input": "bbbb", "output": "abbab", "end_state": "21"}
    rc, out, _ = run(capsys, "transducer", "build", "--d", "4", "--format", "json")
    data = json.loads(out)
    assert len(data["states"]) == 37 and len(data["edges"]) == 37 * 3
    rc, out, _ = run(capsys, "transducer", "build", "--mode", "figure-suppressed")
    assert out.startswith("digraph")
    rc, out, _ = run(capsys, "transducer", "steps", "--input", "ababab")
    assert json.loads(out)["steps"] == 0


def test_avalanches_sweep_pipeline(capsys):
    rc, out, _ = run(capsys, "avalanches", "--d", "4", "--n", "500")
    assert rc == 0 and out.splitlines()[0].endswith("L")
    rc, out, _ = run(capsys, "avalanches", "--n", "20", "--format", "jsonl")
    assert len(out.splitlines()) == 20
    rc, out, _ = run(capsys, "sweep", "--n-max", "50")
    assert out.splitlines()[0] == "N,i_N,L,width,match_mode" and len(out.splitlines()) == 52
    rc, out, _ = run(capsys, "sweep", "--n-max", "5", "--format", "json")
    assert len(json.loads(out)) == 6
    rc, out, _ = run(capsys, "pipeline", "--n", "300")
    assert json.loads(out)["disagreements"] == 0


def test_verify_exit_status(capsys):
    rc, out, _ = run(capsys, "verify", "--suite", "core-laws", "--samples", "200",
                     "--d", "3", "--format", "json")
    rep = json.loads(out)
    assert rc == 0 and rep["passed"] and rep["params"]["samples"] == 200
    rc, out, _ = run(capsys, "verify", "--suite", "conjectureD", "--n-max", "300")
    assert rc == 0 and "=> PASS" in out


def test_kspm_threads_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("KSPM_THREADS", "zero")
    rc, _, err = run(capsys, "verify", "--suite", "conjectureD", "--n-max", "50")
    assert rc == 2 and "KSPM_THREADS" in err
