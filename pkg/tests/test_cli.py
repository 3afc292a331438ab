import json
import math
import subprocess
import sys

import jsonschema
import pytest

from mahler import cli
from mahler.special import named_constant

FAST = ["--nodes", "65536"]


def run(*argv):
    return cli.run(list(argv))


def validate(report):
    jsonschema.validate(json.loads(cli.dumps(report)), cli.report_schema())


def test_measure_examples():
    code, rep, lines = run("measure", "x+y+1")
    assert code == 0 and abs(rep["results"][0]["value"] - 0.32306595) < 1e-8
    validate(rep)
    code, rep, _ = run("measure", "5")
    assert rep["results"][0]["value"] == math.log(5)
    code, rep, _ = run("measure", "(1-x)/(1+x)")
    assert code == 0 and abs(rep["results"][0]["value"]) < 1e-12


def test_parse_error_exit_2():
    code, rep, lines = run("measure", "2x+1")
    assert code == cli.EXIT_USAGE and "error" in rep
    assert any("^" in ln for ln in lines)
    validate(rep)


def test_numeric_failure_exit_3():
    code, rep, _ = run("measure", "x-x")
    assert code == cli.EXIT_NUMERIC
    validate(rep)


def test_bad_flag_is_usage_error():
    with pytest.raises(SystemExit) as info:
        run("measure", "x", "--method", "simpson")
    assert info.value.code == 2
    code, _, _ = run("measure", "x+1", "--nodes", "3")
    assert code == cli.EXIT_USAGE


def test_transform_examples():
    code, rep, lines = run("transform", "x+1+(x-1)*(y+z)", "--g", "x+2", "--k", "2")
    assert code == 0
    validate(rep)
    text = json.dumps(rep)
    assert "correction" in text
    assert any("0.693147" in ln for ln in lines)
    code, rep, lines = run("transform", "x+1+(x-1)*(y+z)", "--g", "x+2", "--k", "1")
    assert code == cli.EXIT_SPEC and "k_not_greater_than_degree" in rep["error"]
    code, _, _ = run("transform", "x+y", "--g", "2*x+1", "--k", "3")
    assert code == cli.EXIT_SPEC


def test_transform_l21_shape():
    code, rep, lines = run("transform", "1+(x-1)*y+(x+1)*z", "--g", "x^2-2*x+2", "--k", "4")
    assert code == 0
    validate(rep)


def test_verify_catalog_entries():
    for key in ("condon", "eq5"):
        code, rep, _ = run("verify", key, *FAST)
        assert code == 0 and rep["passed"], rep
        validate(rep)


def test_verify_conjectural_reports_only():
    code, rep, lines = run("verify", "l21", "--rhs-value", "0.27629", *FAST)
    assert code == 0
    assert any("conjectural" in ln for ln in lines)
    assert "0.27629" in json.dumps(rep)
    validate(rep)


def test_verify_lhs_rhs_failure_exit_5():
    code, rep, _ = run("verify", "--lhs", "x+y+1", "--rhs-value", "0.5", *FAST)
    assert code == cli.EXIT_VERIFY and not rep["passed"]
    validate(rep)
    ok = named_constant("smyth2").value
    code, _, _ = run("verify", "--lhs", "x+y+1", "--rhs-value", repr(ok), *FAST)
    assert code == 0


def test_verify_spec_invariance():
    code, rep, _ = run("verify", "--lhs", "x+1+(x-1)*(y+z)", "--spec", "x,x+2,2", *FAST)
    assert code == 0
    validate(rep)
    code, _, _ = run("verify", "--lhs", "x+y", "--spec", "x,x+2,1")
    assert code == cli.EXIT_SPEC


def test_closed_form():
    code, rep, lines = run("closed-form", "S", "2")
    assert code == 0
    validate(rep)
    assert abs(rep["closed_form"] - 93 * 1.0369277551433699 / math.pi ** 4) < 1e-12
    assert rep["results"] == []
    code, rep, _ = run("closed-form", "R", "2", "--check")
    assert code == 0 and rep["comparisons"][0]["passed"]
    validate(rep)
    code, _, _ = run("closed-form", "R", "0")
    assert code == cli.EXIT_USAGE


def test_catalog_lists_13():
    code, rep, lines = run("catalog")
    assert code == 0 and len(rep["catalog"]) == 13
    validate(rep)


def test_suite_small():
    code, rep, _ = run("suite", "roots-lemma", "--count", "50", "--seed", "3")
    assert code == 0
    validate(rep)


def test_seed_reproducible_and_thread_invariant():
    base = ["measure", "x+y+z+1", "--method", "qmc", "--nodes", "5000", "--seed", "11"]
    outs = []
    for threads in ("1", "4", "16"):
        _, rep, _ = run(*base, "--threads", threads)
        rep.pop("wall_time")
        rep["argv"] = None
        rep["config"]["threads"] = None
        outs.append(cli.dumps(rep))
    assert outs[0] == outs[1] == outs[2]


def test_config_file_and_precedence(tmp_path, monkeypatch):
    cfg = tmp_path / "m.toml"
    cfg.write_text('method = "qmc"\nnodes = 4000\nseed = 5  # comment\n')
    _, rep, _ = run("measure", "x+y+z+1", "--config", str(cfg))
    assert rep["seed"] == 5 and rep["config"]["method"] == "lattice_qmc"
    _, rep, _ = run("measure", "x+y+z+1", "--config", str(cfg), "--seed", "9")
    assert rep["seed"] == 9
    bad = tmp_path / "bad.toml"
    bad.write_text("colour = 3\n")
    assert run("measure", "x", "--config", str(bad))[0] == cli.EXIT_USAGE
    monkeypatch.setenv("MAHLER_SEED", "42")
    assert run("measure", "x+y+1")[1]["seed"] == 42
    assert run("measure", "x+y+1", "--config", str(cfg))[1]["seed"] == 5
    monkeypatch.setenv("MAHLER_SEED", "abc")
    assert run("measure", "x+y+1")[0] == cli.EXIT_USAGE


def test_console_script_json():
    out = subprocess.run([sys.executable, "-m", "mahler.cli", "measure", "x+1", "--json"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    rep = json.loads(out.stdout)
    jsonschema.validate(rep, cli.report_schema())
    assert rep["command"] == "measure" and rep["exit_code"] == 0
    out = subprocess.run([sys.executable, "-m", "mahler.cli", "transform", "x", "--g", "x+2", "--k", "1"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 4 and out.stderr
