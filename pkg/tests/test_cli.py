import io
import json
import subprocess
import sys

import pytest

from selfsim.cli import main

DEFS = """\
automata:
  grig: |
    a = (1 2)(e, e)
    b = (a, c)
    c = (a, d)
    d = (e, b)
contexts:
  ex:
    p: 2
    s: 1+t
    pi: 1+t
    S: [inf, t, 1+t+t^2]
agl:
  ex_group:
    context: ex
    elements:
      a: (1; 1)
      b: (t; 0)
      c: (1+t+t^2; 0)
  ex_t3:
    context: ex
    persist: true
    elements:
      a: (1; 1)
      b: (t; 0)
      c: (1+t+t^2; 0)
rover:
  f:
    group: grigorchuk_t3
    element: "[1,2,3 ; 1 2 3 ; a,e,e ; 1,2,3]"
"""


@pytest.fixture
def defs(tmp_path):
    path = tmp_path / "defs.yaml"
    path.write_text(DEFS)
    return str(path)


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run(*argv, "--out", "json")
    return code, json.loads(out)


class TestStates:
    def test_grigorchuk(self, defs):
        code, data = run_json("--defs", defs, "--cmd", "states", "grig")
        assert code == 0 and data["count"] == 5 and data["schema"] == 1

    def test_identity(self):
        code, data = run_json("--cmd", "states", "grigorchuk", "e")
        assert code == 0 and data["count"] == 1

    def test_example_c(self, defs):
        code, data = run_json("--defs", defs, "--cmd", "states", "ex_group", "c")
        assert code == 0 and data["count"] == 4

    def test_dot(self):
        code, out, _ = run("--cmd", "states", "grigorchuk", "--out", "dot")
        assert code == 0 and out.startswith("digraph")


class TestEval:
    def test_grigorchuk(self):
        assert run("--cmd", "eval", "grigorchuk", "a", "122")[:2] == (0, "222\n")
        assert run("--cmd", "eval", "grigorchuk", "e", "1211")[:2] == (0, "1211\n")

    def test_affine_consistency(self, defs):
        code, data = run_json("--defs", defs, "--cmd", "eval", "ex_group", "b*a*b^-1*c", "1212211")
        assert code == 0 and data["output"] == data["affine"]


class TestCheck:
    def test_persistent_extension(self):
        code, out, _ = run("--cmd", "check", "grigorchuk_t3", "persistent")
        assert code == 0 and out.strip() == "yes (3)"

    def test_coarsely_diagonal(self):
        code, out, _ = run("--cmd", "check", "grigorchuk", "coarsely-diagonal", "--max-order", "32")
        assert code == 0

    def test_violation_exits_one(self, defs):
        code, out, _ = run("--defs", defs, "--cmd", "check", "ex_group", "persistent")
        assert code == 1 and out.strip() == "no"

    def test_other_properties(self):
        assert run("--cmd", "check", "example", "self-similar")[0] == 0
        assert run("--cmd", "check", "example", "finite-state")[0] == 0


class TestPersistCompile:
    def test_persist(self):
        code, out, _ = run("--cmd", "persist", "grigorchuk")
        assert code == 0
        assert out.splitlines() == ["a = (1 2)(e, e, a)", "b = (a, c, b)", "c = (a, d, c)", "d = (e, b, d)"]

    def test_persist_at_one(self):
        code, data = run_json("--cmd", "persist", "grigorchuk", "1")
        assert code == 0 and data["persistent_at"] == 1

    def test_compile_agl(self, defs):
        code, out, _ = run("--defs", defs, "--cmd", "compile-agl", "ex_group")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "a = (1 2)(e, e)" and lines[1].startswith("b = (b, ")


class TestRover:
    def test_retract_of_iota(self):
        assert run("--cmd", "rover", "grigorchuk_t3", "retract", "iota(-,b)")[:2] == (0, "b\n")

    def test_eq_with_expansion(self, defs):
        code, out, _ = run("--defs", defs, "--cmd", "rover", "grigorchuk_t3", "eq", "f", "iota(1,a)")
        assert (code, out) == (0, "true\n")

    def test_abelianize(self, defs):
        code, out, _ = run("--defs", defs, "--cmd", "rover", "ex_t3", "abelianize", "iota(1,a)")
        assert (code, out) == (0, "2 0 0\n")

    def test_mul_inv(self):
        code, out, _ = run("--cmd", "rover", "grigorchuk_t3", "mul", "iota(2,b)", "iota(2,c)")
        assert code == 0 and "d" in out
        code, out, _ = run("--cmd", "rover", "grigorchuk_t3", "inv", "iota(2,b)")
        assert code == 0

    def test_not_persistent(self):
        assert run("--cmd", "rover", "grigorchuk", "retract", "iota(-,b)")[0] == 1


class TestComplex:
    def test_report(self):
        code, data = run_json("--cmd", "complex", "6", "2")
        assert code == 0 and data["vertices"] == 30 and data["components"] == 1

    def test_with_group(self):
        code, data = run_json("--cmd", "complex", "4", "2", "order_two")
        assert code == 0 and data["group_order"] == 2


class TestErrors:
    def test_parse_errors(self, tmp_path):
        assert run("--cmd", "eval", "grigorchuk", "a")[0] == 2
        assert run("--cmd", "states", "nosuchgroup")[0] == 2
        bad = tmp_path / "bad.yaml"
        bad.write_text("automata:\n  g: 'a = (1 2)(e, zz)'\n")
        assert run("--defs", str(bad), "--cmd", "states", "g")[0] == 2
        assert run("--cmd", "nope")[0] == 2

    def test_budget(self):
        assert run("--cmd", "complex", "4", "2", "grigorchuk", "--max-order", "8")[0] == 3


def test_deterministic_module_entry():
    cmd = [sys.executable, "-m", "selfsim", "--cmd", "complex", "5", "2", "--out", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["schema"] == 1
