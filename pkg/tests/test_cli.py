import json
import os
import subprocess
import sys

import numpy as np
import pytest

from latpoly.cli import main

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


def run(*argv, cwd=GOLDEN):
    """The CLI as a separate process, exactly as a user would call it."""
    proc = subprocess.run(
        [sys.executable, "-m", "latpoly.cli", *argv],
        cwd=cwd, capture_output=True, text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def golden(name):
    with open(os.path.join(GOLDEN, name)) as fh:
        return fh.read()


def call(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_meet3_golden():
    code, out, _ = run("assoc", "classify", "--lattice", "chain3.json", "--poly", "meet3.json", "--threads", "1")
    assert code == 0
    assert out == golden("classify_meet3.out")


def test_eval_median_golden():
    code, out, _ = run("poly", "eval", "--lattice", "chain3.json", "--expr", "med(x1,x2,x3)", "--args", "c1,0,1", "--threads", "1")
    assert code == 0
    assert out == golden("eval_med.out")


def test_verify_t5_golden():
    code, out, _ = run("verify", "T5", "--lattice", "chain2.json", "--max-arity", "3", "--threads", "1")
    assert code == 0
    assert out == golden("verify_t5.out")
    code, out, _ = run("verify", "T5", "--lattice", "chain2.json", "--max-arity", "3", "--threads", "1", "--format", "json")
    assert out == golden("verify_t5.json.out")
    assert json.loads(out)["reports"][0]["outcome"] == "pass"


def test_threads_do_not_change_output(capsys):
    args = ("assoc", "classify", "--lattice", "chain:4", "--expr", "x1 /\\ x2 \\/ 'c1' /\\ x2", "--arity", "2")
    outs = {call(capsys, *args, "--threads", t)[1] for t in ("1", "3")}
    assert len(outs) == 1


def test_non_associative_exits_one(capsys):
    code, out, _ = call(capsys, "assoc", "classify", "--lattice", "chain:2", "--expr", "med(x1,x2,x3)", "--arity", "3")
    assert code == 1
    payload = json.loads(out)
    assert payload == {"associative": False, "witness": {"string": ["0", "0", "0", "1", "1"], "i": 0, "j": 1}}


def test_usage_errors_exit_two(capsys):
    code, _, err = call(capsys, "verify", "C2", "--lattice", "boolean:2")
    assert code == 2 and "chain" in err
    code, _, err = call(capsys, "poly", "eval", "--lattice", "chain:3", "--expr", "x1 /\\", "--args", "0")
    assert code == 2
    code, _, _ = call(capsys, "poly", "eval", "--lattice", "chain:3", "--expr", "x1", "--args", "q")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["poly", "frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_lattice_commands(capsys, tmp_path):
    path = tmp_path / "b2.json"
    assert call(capsys, "lattice", "new", "boolean:2", "-o", str(path))[0] == 0
    code, out, _ = call(capsys, "lattice", "show", "--lattice", str(path), "--format", "json")
    shown = json.loads(out)
    assert shown["size"] == 4 and shown["bottom"] == "0" and not shown["chain"]
    pentagon = tmp_path / "n5.json"
    pentagon.write_text(json.dumps({
        "elements": ["0", "a", "b", "c", "1"],
        "covers": [[0, 1], [1, 2], [2, 4], [0, 3], [3, 4]],
    }))
    code, out, _ = call(capsys, "lattice", "check", "--lattice", str(pentagon))
    assert code == 1 and json.loads(out)["valid"] is False
    code, out, _ = call(capsys, "lattice", "check", "--lattice", str(path))
    assert code == 0 and json.loads(out)["valid"] is True


def test_parse_pretty(capsys):
    code, out, _ = call(capsys, "poly", "parse", "--expr", "(x1 /\\ x2) \\/ (x3)")
    assert code == 0 and out == "x1 /\\ x2 \\/ x3\n"
    code, out, _ = call(capsys, "poly", "parse", "--expr", "x1 /\\ x2", "--format", "json")
    assert json.loads(out)["ast"] == {"meet": [{"var": 1}, {"var": 2}]}


def test_canon_round_trips_through_eval(capsys, tmp_path):
    src = "med(x1, 'c1', x2) \\/ x1 /\\ x3"
    code, out, _ = call(capsys, "poly", "canon", "--lattice", "chain:4", "--expr", src, "--arity", "3")
    assert code == 0
    path = tmp_path / "canon.json"
    path.write_text(out)
    rng = np.random.default_rng(5)
    names = ["0", "c1", "c2", "1"]
    for _ in range(20):
        args = ",".join(names[int(i)] for i in rng.integers(0, 4, 3))
        a = call(capsys, "poly", "eval", "--lattice", "chain:4", "--expr", src, "--args", args)[1]
        b = call(capsys, "poly", "eval", "--lattice", "chain:4", "--poly", str(path), "--args", args)[1]
        assert a == b


def test_minimize_and_is_poly(capsys, tmp_path):
    code, out, _ = call(capsys, "poly", "minimize", "--lattice", "chain:2", "--expr", "x1 \\/ x1 /\\ x2", "--arity", "2")
    assert json.loads(out)["alpha"] == {"": "0", "1": "1", "2": "0", "12": "0"}
    xor = tmp_path / "xor.json"
    xor.write_text(json.dumps({"arity": 2, "values": ["0", "1", "1", "0"]}))
    code, out, _ = call(capsys, "poly", "is-poly", "--lattice", "chain:2", "--table", str(xor))
    assert code == 1
    assert json.loads(out)["polynomial"] is False


def test_assoc_subcommands(capsys, tmp_path):
    code, out, _ = call(capsys, "assoc", "construct", "--lattice", "chain:3", "--arity", "2", "--params", "0,0,0,1")
    assert json.loads(out)["alpha"]["12"] == "1"
    code, out, _ = call(capsys, "assoc", "enumerate", "--lattice", "chain:3", "--arity", "2")
    assert code == 0 and len(json.loads(out)) == 20
    code, out, _ = call(capsys, "assoc", "extend", "--lattice", "chain:3", "--expr", "x1 /\\ x2", "--arity", "2")
    g = json.loads(out)
    assert (g["a1"], g["d1"], g["a2"], g["d2"]) == ("0", "1", "0", "1")
    fam = tmp_path / "g.json"
    fam.write_text(out)
    code, out, _ = call(capsys, "assoc", "check", "--lattice", "chain:3", "--variadic", str(fam), "--maxlen", "4")
    assert code == 0 and json.loads(out) == {"associative": True, "maxlen": 4}
    bad = dict(g, a1="1", d1="1", a2="0")
    fam.write_text(json.dumps(bad))
    code, out, err = call(capsys, "assoc", "check", "--lattice", "chain:3", "--variadic", str(fam))
    assert code == 2


def test_verify_pass_exits_zero(capsys):
    code, out, _ = call(capsys, "verify", "L2", "--lattice", "chain:2", "--maxlen", "3")
    assert code == 0 and out.endswith("1/1 passed\n")
