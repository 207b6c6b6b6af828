import json
import subprocess
import sys

import pytest

from boxramsey.cli import BUDGET, FOUND, INVALID, NOT_FOUND, main
from boxramsey.io import read_instance, write_instance
from boxramsey import NumericArray


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert run(capsys, "gen", "colouring", "--d", 2, "--side", 5, "--seed", 7, "--out", p)[0] == FOUND
    assert a.read_bytes() == b.read_bytes()
    obj, prov = read_instance(a)
    assert obj.dims == (5, 5) and prov == {"generator": "random", "seed": 7}


def test_gen_needs_a_seed_for_random(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "array", "--d", 2, "--side", 3, "--out", tmp_path / "x.json")
    assert code == INVALID and "--seed" in err
    assert run(capsys, "gen", "array", "--d", 2, "--side", 3, "--generator", "lex",
               "--out", tmp_path / "x.json")[0] == FOUND


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == INVALID
    assert run(capsys, "number", "R", "--d", 1)[0] == INVALID
    assert run(capsys, "--help")[0] == 0


def test_search_and_verify(tmp_path, capsys):
    inst, cert = tmp_path / "i.json", tmp_path / "c.json"
    run(capsys, "gen", "colouring", "--d", 2, "--side", 4, "--generator", "direction", "--out", inst)
    code, out, _ = run(capsys, "search", "mono-box", "--n", 3, "--in", inst, "--cert-out", cert)
    assert code == FOUND and json.loads(out)["found"]
    code, out, _ = run(capsys, "verify", "--in", inst, "--cert", cert)
    assert code == FOUND and out.strip() == "valid"


def test_verify_against_another_instance(tmp_path, capsys):
    a, b, cert = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    run(capsys, "gen", "array", "--d", 2, "--side", 4, "--generator", "lex", "--out", a)
    run(capsys, "gen", "array", "--d", 2, "--side", 4, "--seed", 1, "--out", b)
    assert run(capsys, "search", "monotone", "--n", 2, "--in", a, "--cert-out", cert)[0] == FOUND
    code, _, err = run(capsys, "verify", "--in", b, "--cert", cert)
    assert code == NOT_FOUND and "different instance" in err


def test_not_found_and_traces(tmp_path, capsys):
    inst, trace = tmp_path / "i.json", tmp_path / "t.json"
    write_instance(inst, NumericArray([[1, 2], [4, 3]]))
    assert run(capsys, "search", "monotone", "--n", 2, "--in", inst)[0] == NOT_FOUND
    code, _, err = run(capsys, "search", "monotone", "--n", 2, "--strategy", "pipeline", "--seed", 0,
                       "--in", inst, "--trace-out", trace)
    assert code == NOT_FOUND and "not found" in err
    log = json.loads(trace.read_text())
    assert isinstance(log, dict) and log


def test_search_strategy_errors(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(capsys, "gen", "colouring", "--d", 2, "--side", 4, "--seed", 3, "--out", inst)
    assert run(capsys, "search", "mono-box", "--n", 2, "--strategy", "pipeline", "--in", inst)[0] == INVALID
    assert run(capsys, "search", "monotone", "--n", 2, "--in", inst)[0] == INVALID
    assert run(capsys, "search", "mono-box", "--n", 0, "--in", inst)[0] == INVALID
    assert run(capsys, "search", "mono-box", "--n", 2, "--in", tmp_path / "none.json")[0] == INVALID
    code, _, _ = run(capsys, "search", "mono-box", "--n", 2, "--strategy", "pipeline2d", "--seed", 1,
                     "--in", inst)
    assert code in (FOUND, NOT_FOUND)


def test_budget_exit(tmp_path, capsys):
    inst = tmp_path / "i.json"
    run(capsys, "gen", "colouring", "--d", 3, "--side", 4, "--colours", 3, "--seed", 2, "--out", inst)
    code, _, err = run(capsys, "search", "mono-box", "--n", 3, "--budget", 5, "--in", inst)
    assert code == BUDGET and "budget" in err


def test_number(tmp_path, capsys):
    code, out, _ = run(capsys, "number", "R", "--d", 1, "--n", 3, "--colours", 2, "--max-side", 6)
    assert code == FOUND and out.strip() == "6"
    w, j = tmp_path / "w.json", tmp_path / "n.json"
    code, out, _ = run(capsys, "number", "M", "--d", 1, "--n", 3, "--max-side", 4,
                       "--witness-out", w, "--json-out", j)
    assert code == NOT_FOUND and out.startswith("> 4")
    assert json.loads(j.read_text())["status"] == "lower_bound"
    assert read_instance(w)[0].dims == (4,)
    code, _, err = run(capsys, "number", "R", "--d", 2, "--n", 2, "--max-side", 4, "--budget", 10000)
    assert code == BUDGET and "proven: > 3" in err
    assert run(capsys, "number", "M", "--d", 1, "--n", 3, "--max-side", 2)[0] == INVALID


def test_selftest_subset(capsys):
    code, out, _ = run(capsys, "selftest", "--only", 9)
    assert code == FOUND and "[PASS] criterion 9" in out


@pytest.mark.parametrize("argv", [["-m", "boxramsey", "--help"]])
def test_module_entry_point(argv):
    res = subprocess.run([sys.executable, *argv], capture_output=True, text=True)
    assert res.returncode == 0 and "number" in res.stdout
