"""The twelve acceptance criteria, one PASS/FAIL line each.

Criteria 1-11 read the verification suites (run once, single-threaded, and
timed); each test adds the headline numbers the criterion pins. Criterion 12
reruns every suite at 1 and 4 threads and compares the lines byte for byte.
"""

import subprocess
import sys
import time
from fractions import Fraction

import pytest

from genuslab.catalog import ClassSpec, count
from genuslab.embedding import ORIENTABLE, min_euler_genus
from genuslab.graph import Graph
from genuslab.lab import all_down_sets, fsgr_sandwich, unlabelled_disconnect_ratio
from genuslab.verify import SUITES, run_suites

SEED = 0


@pytest.fixture(scope="module")
def suites():
    out = {}
    for name in SUITES:
        t0 = time.perf_counter()
        (res,) = run_suites([name], seed=SEED, threads=1)
        out[name] = (res, time.perf_counter() - t0)
    return out


@pytest.fixture
def report(capsys):
    def emit(number: int, title: str, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:>2} {title}: {detail}")
        assert ok, f"criterion {number} {title}: {detail}"

    return emit


def failures(res):
    return [ln for ln in res.lines if ln.startswith("FAIL")]


def test_criterion_01_complete_graph_genus(suites, report):
    res, secs = suites["ringel"]
    k7 = min_euler_genus(Graph.complete(7), ORIENTABLE)
    k7n = [ln for ln in res.lines if "K7 nonorientable" in ln][0]
    ok = res.passed and k7.euler_genus == 2 and secs <= 600
    report(1, "complete-graph genus", ok,
           f"K3..K6 both modes match closed form, K7 orientable = {k7.euler_genus}, "
           f"{k7n.split(': ', 1)[1]}, {secs:.1f}s")


def test_criterion_02_euler_formula(suites, report):
    res, _ = suites["euler"]
    report(2, "euler formula", res.passed, res.lines[0].split(": ", 1)[1])


def test_criterion_03_planar_census(suites, report):
    res, secs = suites["planar-census"]
    five = count(5, ClassSpec.planar(), use_cache=False).count
    six = count(6, ClassSpec.planar(), use_cache=False).count
    ok = res.passed and five == 1023 and six == 32071 and secs <= 900
    report(3, "planar census", ok, f"engine = oracle for n <= 6, n=5 -> {five}, n=6 -> {six}, {secs:.1f}s")


def test_criterion_04_edge_dominance(suites, report):
    res, _ = suites["dominance"]
    checks = [ln for ln in res.lines if ln.startswith(("PASS", "FAIL"))]
    ok = res.passed and len(checks) == 3 * 3 * 4
    report(4, "edge-count dominance", ok, f"{len(checks)} (n, variant, g) cases, {len(failures(res))} violations")


def test_criterion_05_down_sets(suites, report):
    res, _ = suites["downsets"]
    ok = res.passed and len(all_down_sets(4)) == 168 and "ground size 4: 168 down-sets" in " ".join(res.lines)
    report(5, "down-set dominance", ok, f"all down-sets on ground sets of size <= 4 (168 at size 4), "
           f"{len(failures(res))} violations")


def test_criterion_06_connectivity_bounds(suites, report):
    res, _ = suites["bridge"]
    report(6, "connectivity bounds", res.passed, f"{len(res.lines)} checks over bridge-addable specs n <= 6, "
           f"{len(failures(res))} failing")


def test_criterion_07_fsgr_sandwich(suites, report):
    res, _ = suites["fsgr"]
    s = fsgr_sandwich(5, ClassSpec.planar())
    ok = res.passed and s.p_frag1 == Fraction(190, 1023) and s.upper == Fraction(320, 1023)
    report(7, "fsgr sandwich", ok, f"n=5 planar P(frag=1) = {s.p_frag1}, upper = {s.upper}, "
           f"{len(res.lines)} checks, {len(failures(res))} failing")


def test_criterion_08_boltzmann_poisson(suites, report):
    res, secs = suites["bp"]
    empty = [ln for ln in res.lines if "P(R = empty)" in ln][0]
    ok = res.passed and secs <= 300
    report(8, "boltzmann poisson", ok, f"{empty.split(': ', 1)[1]}, "
           f"{sum('chi-square' in ln for ln in res.lines)} component laws tested, {secs:.1f}s")


def test_criterion_09_embedding_bounds(suites, report):
    res, _ = suites["bounds"]
    report(9, "embedding bounds", res.passed, f"{sum(ln.startswith('PASS') for ln in res.lines)} checks, "
           f"{len(failures(res))} failing")


def test_criterion_10_unlabelled_ratio(suites, report):
    res, _ = suites["unlabelled"]
    r4 = unlabelled_disconnect_ratio(4)
    series = ", ".join(f"{float(unlabelled_disconnect_ratio(n)):.4f}" for n in range(2, 10))
    ok = res.passed and r4 == Fraction(10, 11)
    report(10, "unlabelled ratio", ok, f"n=4 -> {r4}, n=2..9 -> {series}")


def test_criterion_11_closures(suites, report):
    res, _ = suites["closure"]
    report(11, "closure inclusions", res.passed, f"{len(res.lines)} checks, {len(failures(res))} failing")


def _verify_cli(threads: int) -> bytes:
    # a fresh process each time, so no in-memory genus or table memo carries over
    cmd = [sys.executable, "-m", "genuslab.cli", "--no-cache", "--threads", str(threads), "verify", "--seed", str(SEED)]
    return subprocess.run(cmd, capture_output=True, check=False, timeout=1800).stdout


def test_criterion_12_determinism(suites, report):
    first = "".join(ln + "\n" for name in SUITES for ln in suites[name][0].lines)
    outs = {(t, k): _verify_cli(t) for t in (1, 4) for k in (1, 2)}
    same_runs = outs[(1, 1)] == outs[(1, 2)] and outs[(4, 1)] == outs[(4, 2)]
    same_threads = outs[(1, 1)] == outs[(4, 1)]
    suite_lines = b"".join(ln + b"\n" for ln in outs[(1, 1)].splitlines() if not ln.startswith(b"PASS suite "))
    ok = same_runs and same_threads and suite_lines == first.encode() and b"FAIL" not in outs[(1, 1)]
    report(12, "determinism", ok,
           f"verify in 4 fresh processes (threads 1, 1, 4, 4): {len(outs[(1, 1)])} bytes each, "
           f"repeat-identical {same_runs}, thread-identical {same_threads}, matches in-process run "
           f"{suite_lines == first.encode()}")
