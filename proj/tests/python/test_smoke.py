import os
import subprocess
from pathlib import Path

import pytest

import twist

ROOT = Path(__file__).resolve().parents[2]
CORPUS = ROOT / "tests" / "corpus"


def test_evaluate_running_example():
    r = twist.evaluate("def main = mul (1 + 2) (inc 1)")
    assert r["status"] == "value"
    assert r["value"] == "6"
    assert r["steps"] == 3


def test_print_order_and_output():
    r = twist.evaluate("data f\ndef main = f (print 1) (print 2)")
    assert r["output"] == "2\n1\n"
    assert r["value"] == "(f nop nop)"


def test_uncaught_and_step_limit():
    assert twist.evaluate("def main = throw 9")["status"] == "uncaught"
    r = twist.evaluate("def loop = loop\ndef main = loop", step_limit=50)
    assert r["status"] == "step-limit"
    assert r["steps"] == 50


def test_compile_error():
    with pytest.raises(twist.CompileError):
        twist.evaluate("def main = (1")


def test_run_file_matches_corpus():
    code, out, err = twist.run_file(CORPUS / "fib.eg")
    assert (code, out, err) == (0, "8\n", "")
    code, out, err = twist.run_file(CORPUS / "uncaught.eg")
    assert code == 1
    assert "9" in err


def test_trace_and_check():
    src = "def main = mul (1 + 2) (inc 1)"
    dots = twist.trace(src)
    assert len(dots) == 4
    assert dots[0] == (ROOT / "tests" / "golden" / "running-step-0.dot").read_text()
    reports = twist.check_trace(src)
    assert [r["thunks"] for r in reports] == [3, 2, 1, 0]
    assert all(r["acyclic"] and r["chain_linear"] and r["reduced_pure"] for r in reports)
    assert "@" in twist.trace(src, style="standard")[0]


def test_session():
    s = twist.Session()
    assert s.eval("1 + 2") == (True, "3", "")
    assert s.eval("def d = [X -> X X]")[0]
    assert s.eval("d 5")[1] == "(5 5)"
    assert s.eval("using List")[0]
    assert s.eval("cons 1 nil")[1] == "(cons 1 nil)"
    assert not s.eval("def = 1")[0]
    assert s.eval("d 1")[1] == "(1 1)"


def test_live_nodes_baseline():
    twist.evaluate("def main = 1")
    before = twist.live_nodes()
    twist.evaluate("def main = try 1 + throw 7 catch [ E -> E + 1 ]")
    assert twist.live_nodes() == before


def test_cli_binary():
    cli = os.environ.get("TWIST_CLI")
    if not cli:
        pytest.skip("TWIST_CLI not set")
    done = subprocess.run([cli, "run", str(CORPUS / "fib.eg")], capture_output=True, text=True)
    assert done.returncode == 0
    assert done.stdout == "8\n"
    done = subprocess.run([cli, "repl"], input="1 + 2\n", capture_output=True, text=True)
    assert "3" in done.stdout
