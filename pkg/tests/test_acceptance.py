"""One test per acceptance criterion, each with its runtime bound.

Every test prints a single PASS/FAIL line; the lines are repeated in the
terminal summary.
"""

import subprocess
import sys
import time

from conftest import ACCEPTANCE_LINES
from selfsim import suite

SEED = 0


def record(number, title, bound, fn):
    start = time.perf_counter()
    result = fn()
    elapsed = time.perf_counter() - start
    ok = bool(result["pass"]) and elapsed < bound
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s, bound {bound:g}s)"
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok, result


def test_criterion_1_example_compilation():
    ok, res = record(1, "p=2 affine example compiles to the printed recursions", 1,
                     suite.check_example_compilation)
    assert ok, res


def test_criterion_2_grigorchuk():
    ok, res = record(2, "Grigorchuk fixtures, closure, coarse diagonality, persistence", 1,
                     suite.check_grigorchuk)
    assert ok, res


def test_criterion_3_quasi_retraction():
    ok, res = record(3, "quasi-retraction: clone stability, r.iota = id, Lipschitz (500 each)", 60,
                     lambda: suite.check_quasi_retraction(SEED, 500))
    assert ok, res


def test_criterion_4_group_axioms():
    ok, res = record(4, "V_d(G) axioms on 100 triples per group, boundary cross-check", 120,
                     lambda: suite.check_group_axioms(SEED, 100))
    assert ok, res


def test_criterion_5_abelianization():
    ok, res = record(5, "abelianization table, expansion invariance, additivity (200)", 30,
                     lambda: suite.check_abelianization(SEED, 200))
    assert ok, res


def test_criterion_6_arithmetic():
    ok, res = record(6, "series round trip (500), tail S-integrality (200), compiled states", 60,
                     lambda: suite.check_arithmetic(SEED, 500, 200))
    assert ok, res


def test_criterion_7_compilation_soundness():
    ok, res = record(7, "automaton vs affine digit action, all words of length <= 10", 30,
                     lambda: suite.check_compilation_soundness(10, SEED))
    assert ok, res


def test_criterion_8_complexes():
    ok, res = record(8, "complexes: counts, grounding, components, morphism cross-check", 120,
                     suite.check_complexes)
    assert ok, res


def test_criterion_9_determinism():
    cmd = [sys.executable, "-m", "selfsim", "--cmd", "suite", "--out", "json",
           "--seed", str(SEED), "--samples", "500"]

    def twice():
        a = subprocess.run(cmd, capture_output=True)
        b = subprocess.run(cmd, capture_output=True)
        same = a.returncode == b.returncode == 0 and a.stdout == b.stdout and a.stdout
        return {"pass": same, "bytes": len(a.stdout)}

    ok, res = record(9, "two full suite runs with the same seed are byte-identical", float("inf"), twice)
    assert ok, res
