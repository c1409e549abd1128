"""Batch experiment driver: plan files in, tagged JSON/CSV reports out.

A plan is a JSON list of runs (or ``{"runs": [...]}``, or one run object).
Each run names an ``experiment``, a class ``spec``, an ``n_range`` and,
where relevant, ``reps``, ``seed``, ``output`` and experiment ``params``.
Every number in a report is tagged ``exact``, ``estimate`` or ``bound``.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from pathlib import Path

from .catalog import ClassError, ClassSpec, GenusFunction, count, count_connected, growth_ratios, radius_proxy
from .graph import GraphError
from .graph6 import Graph6Error, parse_graph6
from .lab import (
    EventQuery,
    LabError,
    connectivity_bounds,
    edge_dominance,
    fsgr_sandwich,
    moments,
    parse_spec,
    pendant_density,
    probability,
    unlabelled_disconnect_ratio,
    wilson,
)
from .samplers import RHO_PLANAR, BPModel, Seed, bp_planar_batch

SCHEMA = 1
RUN_FIELDS = ("experiment", "spec", "n_range", "reps", "seed", "output", "params")


class PlanError(ValueError):
    """Plan schema violation; the message starts with the offending field path."""


def _value(x, tag: str, **extra) -> dict:
    if isinstance(x, Fraction):
        out = {"tag": tag, "value": str(x), "float": float(x)}
    elif isinstance(x, bool) or x is None:
        out = {"tag": tag, "value": x}
    elif isinstance(x, int):
        out = {"tag": tag, "value": x}
    else:
        out = {"tag": tag, "value": float(x)}
    out.update(extra)
    return out


def _trend(xs: list) -> str:
    xs = [x for x in xs if x is not None]
    if len(xs) < 2:
        return "n/a"
    if all(a < b for a, b in zip(xs, xs[1:])):
        return "increasing"
    if all(a > b for a, b in zip(xs, xs[1:])):
        return "decreasing"
    if all(a <= b for a, b in zip(xs, xs[1:])):
        return "non-decreasing"
    if all(a >= b for a, b in zip(xs, xs[1:])):
        return "non-increasing"
    return "non-monotone"


# ---------------------------------------------------------------------------
# validation


def _runs_of(plan) -> list:
    if isinstance(plan, list):
        return plan
    if isinstance(plan, dict):
        if "runs" in plan:
            extra = sorted(set(plan) - {"runs", "schema"})
            if extra:
                raise PlanError(f"{extra[0]}: unknown top-level field")
            if not isinstance(plan["runs"], list):
                raise PlanError("runs: expected a list of run objects")
            return plan["runs"]
        return [plan] if plan else []
    raise PlanError("plan: expected a JSON object or list")


def _n_range(v, where: str) -> list[int]:
    if isinstance(v, int) and not isinstance(v, bool):
        v = [v, v]
    if isinstance(v, dict):
        v = [v.get("lo"), v.get("hi")]
    if (not isinstance(v, list) or len(v) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in v)):
        raise PlanError(f"{where}.n_range: expected [lo, hi] of integers")
    lo, hi = v
    if not 1 <= lo <= hi:
        raise PlanError(f"{where}.n_range: need 1 <= lo <= hi, got [{lo}, {hi}]")
    return list(range(lo, hi + 1))


def _spec(v, where: str) -> ClassSpec:
    try:
        if isinstance(v, str):
            return parse_spec(v)
        if isinstance(v, dict):
            return ClassSpec(v.get("variant", "E"), v.get("closure", "plain"), bool(v.get("labelled", True)),
                             GenusFunction.parse(str(v.get("g", "const:0"))))
    except (ClassError, LabError) as exc:
        raise PlanError(f"{where}.spec: {exc}") from exc
    raise PlanError(f"{where}.spec: expected 'variant/closure/labelled/g' or an object")


def validate_run(run, index: int) -> dict:
    where = f"runs[{index}]"
    if not isinstance(run, dict):
        raise PlanError(f"{where}: expected an object")
    unknown = sorted(set(run) - set(RUN_FIELDS))
    if unknown:
        raise PlanError(f"{where}.{unknown[0]}: unknown field")
    exp = run.get("experiment")
    if exp not in EXPERIMENTS:
        raise PlanError(f"{where}.experiment: expected one of {', '.join(EXPERIMENTS)}, got {exp!r}")
    out = {"experiment": exp}
    out["spec"] = _spec(run.get("spec", "E/plain/labelled/const:0"), where)
    if "n_range" not in run:
        raise PlanError(f"{where}.n_range: required")
    out["n_range"] = _n_range(run["n_range"], where)
    reps = run.get("reps", 100_000)
    if not isinstance(reps, int) or isinstance(reps, bool) or reps < 1:
        raise PlanError(f"{where}.reps: expected a positive integer")
    out["reps"] = reps
    seed = run.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64:
        raise PlanError(f"{where}.seed: expected an integer in [0, 2^64)")
    out["seed"] = seed
    output = run.get("output")
    if output is not None and not isinstance(output, str):
        raise PlanError(f"{where}.output: expected a path string")
    out["output"] = output
    params = run.get("params", {})
    if not isinstance(params, dict):
        raise PlanError(f"{where}.params: expected an object")
    out["params"] = params
    if params.get("monotonize"):
        out["spec"] = out["spec"].with_g(out["spec"].g.monotonized())
    _check_params(exp, params, where)
    return out


def _check_params(exp: str, params: dict, where: str) -> None:
    allowed = {"probability": {"event", "mode"}, "moments": {"statistic", "max_t"},
               "pendant_density": {"H", "rho"}, "bp": {"cap", "rho"}}.get(exp, set()) | {"monotonize", "threads"}
    unknown = sorted(set(params) - allowed)
    if unknown:
        raise PlanError(f"{where}.params.{unknown[0]}: not a parameter of {exp}")
    if exp == "probability":
        if "event" not in params:
            raise PlanError(f"{where}.params.event: required")
        try:
            EventQuery.parse(str(params["event"]))
        except (LabError, GraphError, Graph6Error, ValueError) as exc:
            raise PlanError(f"{where}.params.event: {exc}") from exc
        if params.get("mode", "auto") not in ("auto", "exact", "montecarlo"):
            raise PlanError(f"{where}.params.mode: expected auto, exact or montecarlo")
    if exp == "moments" and params.get("statistic") not in ("edges", "leaves", "kappa", "frag", "maxdeg"):
        raise PlanError(f"{where}.params.statistic: expected edges, leaves, kappa, frag or maxdeg")
    if exp == "pendant_density":
        try:
            parse_graph6(str(params.get("H", "@")))
        except Graph6Error as exc:
            raise PlanError(f"{where}.params.H: {exc}") from exc
    for k in ("rho",):
        if k in params and not (isinstance(params[k], (int, float)) and params[k] > 0):
            raise PlanError(f"{where}.params.{k}: expected a positive number")


# ---------------------------------------------------------------------------
# experiments; each returns (rows, trend dict)


def _exp_probability(r: dict, threads):
    q = EventQuery.parse(str(r["params"]["event"]))
    mode = r["params"].get("mode", "auto")
    rows, vals = [], []
    for n in r["n_range"]:
        m = mode if mode != "auto" else ("exact" if n <= 7 else "montecarlo")
        res = probability(n, r["spec"], q, m, reps=r["reps"], seed=Seed(r["seed"]).split(n), threads=threads)
        if m == "exact":
            rows.append({"n": n, "probability": _value(res.value, "exact", class_size=res.class_size)})
        else:
            rows.append({"n": n, "probability": _value(res.value, "estimate", ci95=list(res.ci), reps=res.reps,
                                                       seed=r["seed"], seed_path=[n])})
        vals.append(res.value)
    return rows, {"probability": _trend(vals)}


def _exp_count(r: dict, threads):
    rows = []
    for n in r["n_range"]:
        c = count(n, r["spec"], threads)
        k = count_connected(n, r["spec"], threads)
        rows.append({"n": n, "count": _value(c.count, "exact"), "connected_count": _value(k.count, "exact")})
    return rows, {}


def _exp_fsgr(r: dict, threads):
    rows, vals = [], []
    for n in r["n_range"]:
        if n < 2:
            continue
        s = fsgr_sandwich(n, r["spec"])
        rows.append({
            "n": n,
            "g": r["spec"].g(n),
            "fsgr": _value(s.fsgr, "exact"),
            "p_frag1": _value(s.p_frag1, "exact"),
            "upper": _value(s.upper, "bound", holds=s.upper_holds),
            "lower": _value(float(s.lower), "bound", holds=s.lower_holds),
        })
        vals.append(s.fsgr)
    return rows, {"fsgr": _trend(vals)}


def _exp_moments(r: dict, threads):
    stat = r["params"]["statistic"]
    max_t = int(r["params"].get("max_t", 3))
    rows, vals = [], []
    for n in r["n_range"]:
        m = moments(n, r["spec"], stat, max_t)
        row = {"n": n, "mean": _value(m.mean, "exact")}
        for t, v in m.factorial.items():
            row[f"factorial_{t}"] = _value(v, "exact")
        rows.append(row)
        vals.append(m.mean / n)
    return rows, {"mean_per_n": _trend(vals)}


def _exp_edge_dominance(r: dict, threads):
    rows = []
    for n in r["n_range"]:
        d = edge_dominance(n, r["spec"])
        rows.append({"n": n, "dominates": _value(d.dominates, "exact"),
                     "first_violation": _value(d.first_violation, "exact")})
    return rows, {}


def _exp_connectivity(r: dict, threads):
    rows = []
    for n in r["n_range"]:
        b = connectivity_bounds(n, r["spec"])
        rows.append({"n": n, "p_connected": _value(b.p_connected, "exact"), "e_kappa": _value(b.e_kappa, "exact"),
                     "e_frag": _value(b.e_frag, "exact"), "holds": _value(b.holds, "exact")})
    return rows, {}


def _exp_pendant(r: dict, threads):
    h = parse_graph6(str(r["params"].get("H", "@")))
    rho = float(r["params"].get("rho", RHO_PLANAR))
    rows, vals = [], []
    for n in r["n_range"]:
        d, alpha = pendant_density(n, r["spec"], h, rho)
        rows.append({"n": n, "density": _value(d, "exact"), "alpha_H": _value(alpha, "exact", rho=rho)})
        vals.append(d)
    return rows, {"density": _trend(vals)}


def _exp_unlabelled(r: dict, threads):
    rows, vals = [], []
    for n in r["n_range"]:
        x = unlabelled_disconnect_ratio(n)
        rows.append({"n": n, "ratio": _value(x, "exact")})
        vals.append(x)
    return rows, {"ratio": _trend(vals)}


def _exp_radius(r: dict, threads):
    rows = [{"n": n, "radius_proxy": _value(x, "exact")} for n, x in radius_proxy(r["spec"], r["n_range"])]
    return rows, {"radius_proxy": _trend([row["radius_proxy"]["value"] for row in rows])}


def _exp_growth(r: dict, threads):
    rows = []
    for n in r["n_range"]:
        gr = growth_ratios(n, r["spec"])
        row = {"n": n, "fsgr": _value(gr.fsgr, "exact")}
        for h, (ratio, ok) in gr.genus_step.items():
            row[f"genus_step_{h}"] = _value(ratio, "exact", above_bound=ok)
        for h, (ratio, ok) in gr.vertex_step.items():
            row[f"vertex_step_{h}"] = _value(ratio, "exact", above_bound=ok)
        rows.append(row)
    return rows, {}


def _exp_bp(r: dict, threads):
    cap = int(r["params"].get("cap", 7))
    rho = float(r["params"].get("rho", RHO_PLANAR))
    model = BPModel.build(rho, cap)
    x = bp_planar_batch(model, r["reps"], Seed(r["seed"]))
    empty = int((x.sum(axis=1) == 0).sum())
    kappa = x.sum(axis=1)
    row = {
        "n": cap,
        "p_empty": _value(empty / r["reps"], "estimate", ci95=list(wilson(empty, r["reps"])), reps=r["reps"],
                          seed=r["seed"]),
        "p_empty_truncated_model": _value(math.exp(-model.lambda_trunc), "exact"),
        "lambda_trunc": _value(model.lambda_trunc, "exact"),
        "tail_mass": _value(model.tail_estimate, "estimate"),
        "mean_components": _value(float(kappa.mean()), "estimate", reps=r["reps"], seed=r["seed"]),
    }
    return [row], {}


EXPERIMENTS = {
    "probability": _exp_probability,
    "count": _exp_count,
    "fsgr": _exp_fsgr,
    "moments": _exp_moments,
    "edge_dominance": _exp_edge_dominance,
    "connectivity": _exp_connectivity,
    "pendant_density": _exp_pendant,
    "unlabelled_ratio": _exp_unlabelled,
    "radius_proxy": _exp_radius,
    "growth_ratios": _exp_growth,
    "bp": _exp_bp,
}


# ---------------------------------------------------------------------------


def load_plan(path) -> list[dict]:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise PlanError(f"plan: cannot read {p}: {exc.strerror}") from exc
    if not text.strip():
        return []
    try:
        plan = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PlanError(f"plan: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return [validate_run(run, i) for i, run in enumerate(_runs_of(plan))]


def run_plan(runs: list[dict], threads: int | None = None, write: bool = True) -> dict:
    """Execute validated runs; per-run ``output`` paths get a JSON file and a CSV twin."""
    out = []
    for r in runs:
        rows, trend = EXPERIMENTS[r["experiment"]](r, r["params"].get("threads", threads))
        n_max = max(r["n_range"])
        rec = {
            "experiment": r["experiment"],
            "spec": r["spec"].describe(),
            "fingerprint": r["spec"].fingerprint(n_max),
            "n_range": [min(r["n_range"]), n_max],
            "seed": r["seed"],
            "reps": r["reps"],
            "params": {k: v for k, v in r["params"].items() if k != "threads"},
            "rows": rows,
            "trend": trend,
        }
        out.append(rec)
        if write and r["output"]:
            _write_pair(r["output"], {"schema": SCHEMA, "runs": [rec]})
    return {"schema": SCHEMA, "runs": out}


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def report_csv(report: dict) -> str:
    """Flat projection: one line per (run, n, quantity)."""
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    w.writerow(["run", "experiment", "spec", "fingerprint", "n", "quantity", "tag", "value", "ci_low", "ci_high",
                "seed", "reps"])
    for i, rec in enumerate(report["runs"]):
        for row in rec["rows"]:
            for k, v in row.items():
                if not isinstance(v, dict):
                    continue
                ci = v.get("ci95") or ["", ""]
                est = v["tag"] == "estimate" and "seed" in v
                w.writerow([i, rec["experiment"], rec["spec"], rec["fingerprint"], row["n"], k, v["tag"], v["value"],
                            ci[0], ci[1], v.get("seed", "") if est else "", v.get("reps", "") if est else ""])
    return buf.getvalue()


def _write_pair(output: str, report: dict) -> None:
    p = Path(output)
    base = p.with_suffix("") if p.suffix.lower() in (".json", ".csv") else p
    base.parent.mkdir(parents=True, exist_ok=True)
    base.with_suffix(".json").write_text(report_json(report))
    base.with_suffix(".csv").write_text(report_csv(report), newline="")
