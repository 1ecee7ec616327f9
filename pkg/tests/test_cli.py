import io
import subprocess
import sys

import pytest

from oracles import PROBLEMS
from sygus_forge.cli import main


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_cegis_max():
    code, out, _ = run(PROBLEMS / "max.sl", "--mode", "cegis")
    assert code == 0
    assert out.startswith("(define-fun f ((x Int) (y Int)) Int ")


def test_si_max_exact_output():
    code, out, _ = run(PROBLEMS / "max.sl", "--mode", "si", "--simplify")
    assert code == 0
    assert out == "(define-fun f ((x Int) (y Int)) Int (ite (>= x y) x y))\n"


def test_no_simplify_shows_chain():
    code, out, _ = run(PROBLEMS / "max_plain.sl", "--mode", "si", "--no-simplify")
    assert code == 0
    assert out.startswith("(define-fun f ((x Int) (y Int)) Int (ite (and (>= x x)")


def test_nullary_infeasible():
    code, out, _ = run(PROBLEMS / "max_nullary.sl")
    assert (code, out) == (1, "infeasible\n")


def test_unknown_on_cap():
    code, out, err = run(PROBLEMS / "max.sl", "--mode", "cegis", "--max-size", "1")
    assert (code, out) == (2, "unknown\n")
    assert "size cap" in err


def test_si_on_grammar_without_ite_is_unknown():
    code, out, err = run(PROBLEMS / "max_nullary.sl", "--mode", "si")
    assert (code, out) == (2, "unknown\n")
    assert "GrammarNotIteCapable" in err


@pytest.mark.parametrize("name", ["two_synth.sl", "undeclared.sl"])
def test_parse_errors(name):
    code, out, err = run(PROBLEMS / "bad" / name)
    assert code == 3 and out == ""
    assert name in err


def test_missing_file():
    assert run(PROBLEMS / "nope.sl")[0] == 3


def test_trace_tables():
    _, _, err = run(PROBLEMS / "max.sl", "--mode", "cegis", "--trace")
    assert err.splitlines()[0].split(" | ")[0].strip() == "Step"
    assert "G => P(e," in err and "not P(" in err
    _, _, err = run(PROBLEMS / "max.sl", "--mode", "si", "--trace")
    lines = err.splitlines()
    assert lines[0].startswith("Model")
    assert "not Q(k1, k1, k2)" in err and "not Q(k2, k1, k2)" in err
    assert lines[-1].startswith("none")


def test_stats_record_mode_choice():
    _, _, err = run(PROBLEMS / "max.sl", "--stats")
    assert "selected: si" in err
    _, _, err = run(PROBLEMS / "max_nullary.sl", "--stats")
    assert "selected: cegis" in err and "examined: 4" in err


def test_seed_warns():
    code, _, err = run(PROBLEMS / "ident.sl", "--seed", "3")
    assert code == 0 and "ignored" in err


def test_module_entry_point():
    r = subprocess.run(
        [sys.executable, "-m", "sygus_forge", str(PROBLEMS / "ident.sl")],
        capture_output=True, text=True, check=False,
    )
    assert r.returncode == 0
    assert r.stdout == "(define-fun f ((x Int) (y Int)) Int x)\n"


def test_internal_error_exit(monkeypatch):
    from sygus_forge import cli
    from sygus_forge.lia import InternalError

    def broken(*a, **k):
        raise InternalError("model does not satisfy formula")

    monkeypatch.setattr(cli, "solve", broken)
    code, out, err = run(PROBLEMS / "max.sl")
    assert code == 4 and out == "" and "internal" in err
