"""Command-line entry point: ``genuslab <command> [flags]``.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 genus search budget exhausted (the answer is unknown, not false),
4 cache or output I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import cache as cache_mod
from .catalog import ClassError, ClassSpec, GenusFunction, count, count_connected, enumerate_class, export_csv, member
from .embedding import (
    DEFAULT_BUDGET,
    EITHER,
    MODES,
    EmbeddingScheme,
    SchemeError,
    euler_genus_of_scheme,
    min_euler_genus,
    relevant_face_stats,
    trace_faces,
)
from .graph import CapExceeded, Graph, GraphError
from .graph6 import Graph6Error, parse_graph6, write_graph6
from .lab import LabError
from .samplers import RHO_PLANAR, BPModel, BPSample, SamplerError, Seed, UniformSampler, bp_planar_batch, uniform_from_class

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET, EXIT_IO = 0, 1, 2, 3, 4
LONG_BUDGET = None


class _Out:
    """Single serialized writer for primary output."""

    def __init__(self, stream):
        self.stream = stream

    def line(self, text: str) -> None:
        self.stream.write(text + "\n")

    def json(self, obj) -> None:
        self.line(json.dumps(obj, sort_keys=True))


def _spec_args(p: argparse.ArgumentParser, need_n: bool = True) -> None:
    if need_n:
        p.add_argument("--n", type=int, required=True, help="number of vertices")
    p.add_argument("--variant", default="E", help="OE, NE, E or OE&NE (default E)")
    p.add_argument("--closure", default="plain", help="plain, hereditary or minor (default plain)")
    p.add_argument("--g", default="const:0", help="genus function: const:c, table:g1,g2,..., pow:a,b, nlogn, ry")
    lab = p.add_mutually_exclusive_group()
    lab.add_argument("--labelled", dest="labelled", action="store_true", default=True)
    lab.add_argument("--unlabelled", dest="labelled", action="store_false")
    p.add_argument("--monotonize", action="store_true", help="use the running maximum of g")


def _spec(a) -> ClassSpec:
    g = GenusFunction.parse(a.g)
    if a.monotonize:
        g = g.monotonized()
    return ClassSpec(a.variant, a.closure, a.labelled, g)


def _budget(a):
    return LONG_BUDGET if a.long else a.budget


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="genuslab", description="Graph classes of bounded Euler genus: exact lab.")
    p.add_argument("--threads", type=int, default=None, help="worker threads (default GENUSLAB_THREADS or 1)")
    p.add_argument("--no-cache", action="store_true", help="bypass the on-disk cache")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("genus", help="minimum Euler genus of a graph")
    s.add_argument("--graph6", required=True)
    s.add_argument("--mode", choices=MODES, default=EITHER)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    s.add_argument("--long", action="store_true", help="no node budget; allows up to 10 vertices")

    s = sub.add_parser("faces", help="face statistics of a scheme, or over relevant embeddings")
    s.add_argument("--graph6", required=True)
    s.add_argument("--scheme", help="embedding scheme as JSON (rotation, signature) to trace")
    s.add_argument("--variant", default="E")
    s.add_argument("--budget", type=int, default=0, help="Euler-genus budget for relevant embeddings")

    s = sub.add_parser("member", help="class membership of a graph")
    s.add_argument("--graph6", required=True)
    _spec_args(s, need_n=False)

    s = sub.add_parser("enumerate", help="stream class members as graph6")
    _spec_args(s)

    s = sub.add_parser("count", help="exact class size")
    _spec_args(s)
    s.add_argument("--csv", action="store_true", help="CSV series n, count, connected_count, fsgr for 1..n")

    s = sub.add_parser("sample", help="uniform class members as graph6 after a JSON header")
    _spec_args(s)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--reject", action="store_true", help="rejection from G(n, 1/2) instead of enumeration")

    s = sub.add_parser("bp", help="Boltzmann Poisson random planar graphs as graph6 after a JSON header")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--reps", type=int, default=1)
    s.add_argument("--cap", type=int, default=7)
    s.add_argument("--rho", type=float, default=RHO_PLANAR)

    s = sub.add_parser("experiment", help="run a JSON plan file")
    s.add_argument("plan")
    s.add_argument("--output", help="write the whole report here (JSON plus CSV twin)")

    s = sub.add_parser("verify", help="run verification suites")
    s.add_argument("--suite", action="append", help="suite name (repeatable; default all)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--long", action="store_true", help="no node budget for the long genus instance")

    s = sub.add_parser("census", help="unlabelled genus census up to n")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--long", action="store_true", help="genus histograms beyond the table cap")
    return p


# ---------------------------------------------------------------------------


def _cmd_genus(a, out: _Out) -> int:
    g = parse_graph6(a.graph6)
    res = min_euler_genus(g, a.mode, budget=_budget(a), cap=10 if a.long else 8)
    d = res.to_json()
    d["graph6"] = write_graph6(g)
    out.json(d)
    return EXIT_OK if res.exact else EXIT_BUDGET


def _cmd_faces(a, out: _Out) -> int:
    g = parse_graph6(a.graph6)
    if a.scheme:
        s = EmbeddingScheme.from_json(json.loads(a.scheme))
        tr = trace_faces(g, s)
        sg = euler_genus_of_scheme(g, s)
        out.json({"tag": "exact", "faces": tr.f, "merged_faces": sg.faces, "face_lengths": list(tr.face_lengths),
                  "euler_genus": sg.euler_genus, "orientable": sg.orientable})
        return EXIT_OK
    st = relevant_face_stats(g, a.budget, a.variant)
    out.json({"tag": "exact", "variant": a.variant, "budget": a.budget, "min_faces": st.min_faces,
              "max_faces": st.max_faces, "max_face_size": st.max_face_size, "embeddings": st.embeddings})
    return EXIT_OK


def _cmd_member(a, out: _Out) -> int:
    g = parse_graph6(a.graph6)
    spec = _spec(a)
    out.json({"tag": "exact", "graph6": write_graph6(g), "spec": spec.describe(), "member": member(g, spec)})
    return EXIT_OK


def _cmd_enumerate(a, out: _Out) -> int:
    for g in enumerate_class(a.n, _spec(a), a.threads):
        out.line(write_graph6(g.canonical if hasattr(g, "canonical") else g))
    return EXIT_OK


def _cmd_count(a, out: _Out) -> int:
    spec = _spec(a)
    if a.csv:
        out.stream.write(export_csv(spec, range(1, a.n + 1)))
        return EXIT_OK
    c = count(a.n, spec, a.threads)
    k = count_connected(a.n, spec, a.threads)
    out.json({
        "schema": 1, "tag": "exact", "n": a.n, "spec": spec.describe(), "fingerprint": spec.fingerprint(a.n),
        "count": c.count, "connected_count": k.count, "source": c.source,
        "edge_histogram": {str(e): v for e, v in sorted(c.histogram.items())},
    })
    return EXIT_OK


def _cmd_sample(a, out: _Out) -> int:
    spec = _spec(a)
    seed = Seed(a.seed)
    mode = "reject" if a.reject or a.n > 7 else "enumerate"
    out.json({"schema": 1, "kind": "uniform", "n": a.n, "spec": spec.describe(), "seed": a.seed, "reps": a.reps,
              "mode": mode})
    if mode == "enumerate":
        for code in UniformSampler(a.n, spec).draw_codes(a.reps, seed).tolist():
            out.line(write_graph6(Graph.from_code(a.n, code)))
    else:
        for i in range(a.reps):
            out.line(write_graph6(uniform_from_class(a.n, spec, seed.split(i), mode="reject")))
    return EXIT_OK


def _cmd_bp(a, out: _Out) -> int:
    model = BPModel.build(a.rho, a.cap)
    out.json({"schema": 1, "kind": "boltzmann-poisson", "rho": a.rho, "cap": a.cap, "seed": a.seed, "reps": a.reps,
              "lambda_trunc": model.lambda_trunc, "tail_mass_estimate": model.tail_estimate,
              "table_size": len(model.graphs)})
    x = bp_planar_batch(model, a.reps, Seed(a.seed))
    for row in x:
        s = BPSample(tuple(int(v) for v in row), model)
        out.line(write_graph6(s.unlabelled().canonical))
    return EXIT_OK


def _cmd_experiment(a, out: _Out) -> int:
    from .experiments import _write_pair, load_plan, report_json, run_plan

    runs = load_plan(a.plan)
    report = run_plan(runs, a.threads)
    if a.output:
        _write_pair(a.output, report)
    out.stream.write(report_json(report))
    return EXIT_OK


def _cmd_verify(a, out: _Out) -> int:
    from .verify import run_suites

    ok = True
    for r in run_suites(a.suite, seed=a.seed, threads=a.threads, long=a.long):
        for ln in r.lines:
            out.line(ln)
        out.line(f"{'PASS' if r.passed else 'FAIL'} suite {r.name}")
        ok &= r.passed
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_census(a, out: _Out) -> int:
    from .census import genus_census

    for row in genus_census(a.n, a.threads, long=a.long):
        out.json(row)
    return EXIT_OK


COMMANDS = {
    "genus": _cmd_genus,
    "faces": _cmd_faces,
    "member": _cmd_member,
    "enumerate": _cmd_enumerate,
    "count": _cmd_count,
    "sample": _cmd_sample,
    "bp": _cmd_bp,
    "experiment": _cmd_experiment,
    "verify": _cmd_verify,
    "census": _cmd_census,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    from .experiments import PlanError

    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    old = cache_mod.set_cache(cache_mod.Cache(enabled=not a.no_cache))
    try:
        return COMMANDS[a.command](a, _Out(stdout))
    except cache_mod.CacheIOError as exc:
        stderr.write(f"genuslab: {exc}\n")
        return EXIT_IO
    except OSError as exc:
        stderr.write(f"genuslab: {exc}\n")
        return EXIT_IO
    except (CapExceeded, ClassError, GraphError, Graph6Error, SchemeError, LabError, SamplerError, PlanError,
            KeyError, ValueError) as exc:
        stderr.write(f"genuslab: {exc}\n")
        return EXIT_USAGE
    finally:
        cache_mod.set_cache(old)


if __name__ == "__main__":
    sys.exit(main())
