"""Verification suites: hard assertions of the per-n identities, bounds and oracles.

Each suite returns its lines (``PASS ...`` / ``FAIL ...``) and an overall
verdict. Lines carry no timings, so repeated runs with the same seed are
byte-identical whatever the thread count.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx
import numpy as np
from scipy.stats import chisquare

from .catalog import (
    VARIANTS,
    bridge_addable,
    ClassSpec,
    GenusFunction,
    class_mask,
    count,
    host_table,
    ordered_map,
)
from .census import census_counts
from .embedding import (
    EITHER,
    NONORIENTABLE,
    ORIENTABLE,
    EmbeddingScheme,
    _component_scheme_space,
    iter_schemes,
    min_euler_genus,
    ringel_youngs,
    search_only,
    scheme_is_orientable,
    trace_faces,
)
from .graph import Graph, components, induced_subgraph
from .lab import (
    all_down_sets,
    connectivity_bounds,
    downward_closed_dominance,
    edge_dominance,
    fsgr_sandwich,
    harris_route,
    unlabelled_disconnect_ratio,
)
from .samplers import BPModel, Seed, bp_planar_batch, exact_pmf, gnp, Poisson

# regression locks, pinned from the first verified runs
PLANAR_COUNTS = {1: 1, 2: 2, 3: 8, 4: 64, 5: 1023, 6: 32071}
UNLABELLED_COUNTS = {1: (1, 1), 2: (2, 1), 3: (4, 2), 4: (11, 6), 5: (34, 21), 6: (156, 112),
                     7: (1044, 853), 8: (12346, 11117), 9: (274668, 261080)}
DISCONNECT_RATIOS = {
    2: Fraction(1, 2), 3: Fraction(2, 3), 4: Fraction(10, 11), 5: Fraction(104, 85),
    6: Fraction(176, 117), 7: Fraction(3056, 1827), 8: Fraction(9832, 6173),
    9: Fraction(869632, 618003),
}

K7_BUDGET = 20_000_000
BP_P_EMPTY = 0.963


@dataclass
class SuiteResult:
    name: str
    lines: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(not ln.startswith("FAIL") for ln in self.lines)

    def check(self, ok: bool, text: str) -> bool:
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {self.name}: {text}")
        return ok

    def note(self, text: str) -> None:
        self.lines.append(f"NOTE {self.name}: {text}")


GENUS_FUNCTIONS = ("const:0", "const:1", "const:2", "ry")


# ---------------------------------------------------------------------------


def suite_ringel(seed: int = 0, threads: int | None = None, long: bool = False) -> SuiteResult:
    r = SuiteResult("ringel")
    for n in range(3, 7):
        g = Graph.complete(n)
        for mode in (ORIENTABLE, NONORIENTABLE):
            res = min_euler_genus(g, mode)
            want = ringel_youngs(n, mode)
            r.check(res.euler_genus == want, f"K{n} {mode} = {res.euler_genus} (closed form {want}, {res.certificate})")
    k7 = Graph.complete(7)
    res = min_euler_genus(k7, ORIENTABLE)
    r.check(res.euler_genus == 2, f"K7 orientable = {res.euler_genus} ({res.certificate})")
    budget = None if long else K7_BUDGET
    res = min_euler_genus(k7, NONORIENTABLE, budget=budget)
    if res.exact:
        r.check(res.euler_genus == 3, f"K7 nonorientable = {res.euler_genus} ({res.certificate})")
    else:
        r.check(res.lower <= 3 <= res.upper, f"K7 nonorientable in [{res.lower}, {res.upper}] (budget exhausted)")
    return r


def _random_scheme(g: Graph, rng: random.Random) -> EmbeddingScheme:
    rot = {}
    for v in range(1, g.n + 1):
        nb = g.neighbors(v)
        rng.shuffle(nb)
        rot[v] = tuple(nb)
    sig = {e: -1 for e in g.sorted_edges() if rng.random() < 0.3}
    return EmbeddingScheme(rot, sig)


def _euler_checks(g: Graph, s: EmbeddingScheme) -> bool:
    tr = trace_faces(g, s)
    seen: dict[tuple, int] = {}
    for face in tr.faces:
        for a, b in face:
            e = (min(a, b), max(a, b))
            seen[e] = seen.get(e, 0) + 1
    if any(seen.get(e, 0) != 2 for e in g.edges) or len(seen) != g.e:
        return False
    total_f = 0
    total_h = 0
    for verts, f in tr.component_faces:
        vs = set(verts)
        comp_e = [e for e in g.edges if e[0] in vs]
        lengths = sum(len(face) for face in tr.faces if face and face[0][0] in vs)
        if lengths != 2 * len(comp_e):
            return False
        h = 2 - len(verts) + len(comp_e) - f
        sub = induced_subgraph(g, verts)
        loc = {v: i + 1 for i, v in enumerate(verts)}
        ss = EmbeddingScheme({loc[v]: tuple(loc[u] for u in s.rotation[v]) for v in verts},
                             {(loc[a], loc[b]): x for (a, b), x in s.signature.items() if a in vs})
        if h < 0 or (scheme_is_orientable(sub, ss) and h % 2) or (not scheme_is_orientable(sub, ss) and h < 1):
            return False
        total_f += f
        total_h += h
    kappa = len(tr.component_faces)
    merged = total_f - (kappa - 1)
    # v - e + f - kappa = 1 - h for the merged embedding
    return g.n - g.e + merged - kappa == 1 - total_h


def suite_euler(seed: int = 0, threads: int | None = None, trials: int = 10_000) -> SuiteResult:
    r = SuiteResult("euler")
    chunks = list(range(0, trials, 500))

    def run(start: int) -> int:
        rng = random.Random(f"{seed}:{start}")
        bad = 0
        for _ in range(min(500, trials - start)):
            n = rng.randint(1, 8)
            g = gnp(n, rng.random(), np.random.default_rng(rng.getrandbits(64)))
            bad += not _euler_checks(g, _random_scheme(g, rng))
        return bad

    bad = sum(ordered_map(run, chunks, threads))
    r.check(bad == 0, f"{trials} random (graph, scheme) pairs, n <= 8: face lengths sum to 2e and Euler's formula exact; {bad} violations")
    return r


def _nx_planar(n: int, code: int) -> bool:
    g = Graph.from_code(n, code)
    h = nx.Graph()
    h.add_nodes_from(range(1, n + 1))
    h.add_edges_from(g.edges)
    return nx.check_planarity(h)[0]


def suite_planar_census(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("planar-census")
    spec = ClassSpec.planar()
    for n in range(1, 7):
        t = host_table(n)
        with search_only():
            ours = sum(int(t.orbit[c]) for c in range(t.classes)
                       if min_euler_genus(t.graph(c), EITHER, budget=None).euler_genus == 0)
        table = count(n, spec, threads).count
        oracle = sum(int(t.orbit[c]) for c in range(t.classes) if _nx_planar(n, int(t.reps[c])))
        brute = None
        if n <= 5:
            brute = sum(_nx_planar(n, code) for code in range(1 << (n * (n - 1) // 2)))
        ok = ours == table == oracle == PLANAR_COUNTS[n] and (brute is None or brute == ours)
        r.check(ok, f"n={n}: genus search {ours}, class table {table}, planarity oracle {oracle}" + (f", all-hosts oracle {brute}" if brute is not None else "")
                + f", locked {PLANAR_COUNTS[n]}")
    return r


def suite_dominance(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("dominance")
    for n in (3, 4, 5):
        for variant in ("E", "OE", "NE"):
            for gf in GENUS_FUNCTIONS:
                spec = ClassSpec(variant, "plain", True, GenusFunction.parse(gf))
                rep = edge_dominance(n, spec)
                r.check(rep.dominates, f"n={n} {variant} g={gf}: e(R_n) >=s Bin({3 * n - 6},1/2)"
                        + ("" if rep.dominates else f" violated at t={rep.first_violation}"))
    return r


def suite_downsets(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("downsets")
    for m in range(0, 5):
        everything = all_down_sets(m)
        # the empty family has no uniform member, so it is counted but not tested
        fams = [f for f in everything if f]
        direct = sum(downward_closed_dominance(f).dominates for f in fams)
        route = sum(harris_route(f) for f in fams)
        r.check(direct == route == len(fams),
                f"ground size {m}: {len(everything)} down-sets, {len(fams)} non-empty tested, "
                f"direct {direct}, upward-closed parts {route}")
    return r


def _specs():
    for variant in VARIANTS:
        for closure in ("plain", "hereditary", "minor"):
            for gf in GENUS_FUNCTIONS + ("nlogn",):
                yield ClassSpec(variant, closure, True, GenusFunction.parse(gf))


def suite_bridge(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("bridge")
    for n in range(1, 7):
        tested = 0
        failures = []
        skipped = 0
        for spec in _specs():
            if not bridge_addable(n, spec):
                skipped += 1
                continue
            tested += 1
            b = connectivity_bounds(n, spec)
            if not b.holds:
                failures.append(spec.describe())
        r.check(not failures, f"n={n}: {tested} bridge-addable specs, P(conn) >= 1/e, E[kappa] < 2, E[frag] < 2, "
                f"kappa <=s 1+Po(1); {skipped} specs not bridge-addable" + (f"; failing {failures}" if failures else ""))
    # the plain and hereditary classes must be bridge-addable for non-decreasing g
    bad = []
    for n in range(1, 7):
        for spec in _specs():
            if spec.closure in ("plain", "hereditary") and spec.g.non_decreasing(1, n):
                if not bridge_addable(n, spec):
                    bad.append((n, spec.describe()))
    r.check(not bad, "plain and hereditary classes with non-decreasing g are bridge-addable for n <= 6"
            + (f"; exceptions {bad}" if bad else ""))
    return r


def suite_fsgr(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("fsgr")
    five = fsgr_sandwich(5, ClassSpec.planar())
    r.check(five.p_frag1 == Fraction(190, 1023) and five.upper == Fraction(320, 1023),
            f"n=5 planar: P(frag=1) = {five.p_frag1}, upper = {five.upper}")
    functions = ("const:0", "const:1", "const:2", "ry", "nlogn", "pow:1,1")
    for gf in functions:
        g = GenusFunction.parse(gf)
        for variant in VARIANTS:
            spec = ClassSpec(variant, "plain", True, g)
            lines = []
            ok = True
            for n in range(2, 7):
                if g(n) < g(n - 1):
                    continue
                s = fsgr_sandwich(n, spec)
                ok &= s.holds and (s.identity is None or s.identity == s.p_frag1)
                lines.append(f"{n}:{s.p_frag1}")
            r.check(ok, f"{variant} g={gf}: (1/e)/fsgr <= P(frag=1) <= 1/fsgr for n=2..6 [{' '.join(lines)}]")
    return r


def suite_bp(seed: int = 0, threads: int | None = None, reps: int = 200_000) -> SuiteResult:
    r = SuiteResult("bp")
    model = BPModel.build()
    r.note(f"cap {model.cap}, rho {model.rho}, lambda_trunc {model.lambda_trunc:.9f}, "
           f"tail estimate {model.tail_estimate:.3e}, {len(model.graphs)} components in table")
    base = Seed(seed)
    chunk_seeds = [base.split(i) for i in range(4)]
    per = [reps // 4 + (1 if i < reps % 4 else 0) for i in range(4)]
    parts = ordered_map(lambda i: bp_planar_batch(model, per[i], chunk_seeds[i]), range(4), threads)
    x = np.concatenate(parts)
    p_empty = float((x.sum(axis=1) == 0).mean())
    r.check(abs(p_empty - BP_P_EMPTY) <= 0.005, f"P(R = empty) = {p_empty:.5f} over {reps} draws (target {BP_P_EMPTY} +/- 0.005)")
    for i, w in enumerate(model.weights):
        if w <= 1e-4:
            continue
        obs = x[:, i]
        pmf = exact_pmf(Poisson(w, tail=1e-15)).table
        # pool the upper tail so every expected cell is at least 5
        cells = []
        k = 0
        while True:
            p_k = float(pmf.get(k, 0.0))
            rest = 1.0 - sum(float(pmf.get(j, 0.0)) for j in range(k + 1))
            if reps * rest < 5 or reps * p_k < 5:
                break
            cells.append(k)
            k += 1
        exp = [reps * float(pmf[j]) for j in cells] + [reps * (1.0 - sum(float(pmf[j]) for j in cells))]
        o = [int((obs == j).sum()) for j in cells] + [int((obs > (cells[-1] if cells else -1)).sum())]
        stat, pval = chisquare(o, exp)
        g = model.graphs[i]
        r.check(pval >= 0.01, f"H = {g.n}v{g.e}e (mu = {w:.3e}): chi-square p = {pval:.4f} over {len(o)} cells")
    return r


def _embedding_profiles(g: Graph, rng: random.Random, limit: int = 3000, samples: int = 200) -> set:
    """(h, merged f) for relevant embeddings of g: exhaustive when small, otherwise sampled plus optimal witnesses."""
    comp_sets = []
    for comp in components(g):
        sub = induced_subgraph(g, sorted(comp))
        if sub.e == 0:
            comp_sets.append({(0, 1)})
            continue
        _, _, size = _component_scheme_space(sub, True)
        found = set()
        if size <= limit:
            schemes = iter_schemes(sub, True)
        else:
            schemes = [_random_scheme(sub, rng) for _ in range(samples)]
            schemes += [min_euler_genus(sub, m).witness for m in (ORIENTABLE, NONORIENTABLE, EITHER)]
        for s in schemes:
            f = trace_faces(sub, s).f
            found.add((2 - sub.n + sub.e - f, f))
        comp_sets.append(found)
    combos = {(0, 0)}
    for cs in comp_sets:
        combos = {(h + a, f + b) for h, f in combos for a, b in cs}
    k = len(comp_sets)
    return {(h, f - (k - 1)) for h, f in combos}


def suite_bounds(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("bounds")
    for n in range(1, 7):
        t = host_table(n)

        def one(c: int):
            rng = random.Random(f"{seed}:{n}:{c}")
            g = t.graph(c)
            v, e = g.n, g.e
            checked = viol = outside = 0
            odd = []
            for h, f in sorted(_embedding_profiles(g, rng)):
                checked += 1
                ok = e <= 3 * (v + h - 2) and f <= 2 * (v + h - 2) and e >= h
                if 3 * f <= 2 * e:
                    viol += not ok
                else:
                    outside += 1
                    if not ok:
                        odd.append((h, f))
            return checked, viol, outside, odd

        res = ordered_map(one, range(t.classes), threads)
        checked = sum(x[0] for x in res)
        viol = sum(x[1] for x in res)
        outside = sum(x[2] for x in res)
        odd = [(int(t.reps[c]), x[3]) for c, x in enumerate(res) if x[3]]
        r.check(viol == 0, f"n={n}: {checked} (graph class, h, f) embedding profiles; e <= 3(v+h-2), "
                f"f <= 2(v+h-2), e >= h: {viol} violations where 3f <= 2e ({outside} profiles outside that precondition)")
        for code, hf in odd:
            pairs = ", ".join(f"h={h} f={f}" for h, f in hf)
            r.note(f"n={n} code {code}: a bound fails outside the 3f <= 2e precondition ({pairs})")
    return r


def suite_unlabelled(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("unlabelled")
    for n in range(2, 10):
        u, c = census_counts(n)
        ratio = unlabelled_disconnect_ratio(n)
        ok = (u, c) == UNLABELLED_COUNTS[n] and ratio == DISCONNECT_RATIOS[n]
        r.check(ok, f"n={n}: u={u}, connected={c}, ratio={ratio} ({float(ratio):.6f})")
    r.check(unlabelled_disconnect_ratio(4) == Fraction(10, 11), "n=4 ratio is 10/11")
    return r


def suite_closure(seed: int = 0, threads: int | None = None) -> SuiteResult:
    r = SuiteResult("closure")
    for n in range(1, 7):
        planar = class_mask(n, ClassSpec.planar())
        bad = []
        for variant in VARIANTS:
            for gf in GENUS_FUNCTIONS + ("nlogn", "pow:1,1"):
                g = GenusFunction.parse(gf)
                if not g.non_decreasing(1, n):
                    continue
                plain = class_mask(n, ClassSpec(variant, "plain", True, g))
                hered = class_mask(n, ClassSpec(variant, "hereditary", True, g))
                minor = class_mask(n, ClassSpec(variant, "minor", True, g))
                if not (np.all(planar <= minor) and np.all(minor <= hered) and np.all(hered <= plain)):
                    bad.append(f"{variant}/{gf}")
        r.check(not bad, f"n={n}: P <= Minor <= Hered <= A for all variants and non-decreasing g"
                + (f"; failing {bad}" if bad else ""))
        eq = []
        for variant in VARIANTS:
            spec = ClassSpec(variant, "plain", True, GenusFunction.const(0))
            m = class_mask(n, spec.with_closure("minor"))
            h = class_mask(n, spec.with_closure("hereditary"))
            p = class_mask(n, spec)
            eq.append(bool(np.array_equal(m, planar) and np.array_equal(h, planar) and np.array_equal(p, planar)))
        r.check(all(eq), f"n={n}: Minor(P) = Hered(P) = P")
    for gf in ("table:0,2,4,6,8,10,12", "pow:2,1"):
        g = GenusFunction.parse(gf)
        for variant in VARIANTS:
            spec = ClassSpec(variant, "hereditary", True, g)
            cases = 0
            fails = 0
            for n in range(2, 7):
                t = host_table(n)
                mask = class_mask(n, spec)
                for c in np.flatnonzero(mask):
                    G = t.graph(int(c))
                    for v in range(1, n + 1):
                        if G.degree(v) != 1:
                            continue
                        for w in range(1, n + 1):
                            if w != v and not G.has_edge(v, w):
                                cases += 1
                                fails += not mask[t.class_of[G.add_edge(v, w).code]]
            r.check(fails == 0, f"{variant} g={gf}: adding an edge at a leaf stays hereditary ({cases} cases, n <= 6)")
    return r


SUITES = {
    "ringel": suite_ringel,
    "euler": suite_euler,
    "planar-census": suite_planar_census,
    "dominance": suite_dominance,
    "downsets": suite_downsets,
    "bridge": suite_bridge,
    "fsgr": suite_fsgr,
    "bp": suite_bp,
    "bounds": suite_bounds,
    "unlabelled": suite_unlabelled,
    "closure": suite_closure,
}


def run_suites(names=None, seed: int = 0, threads: int | None = None, long: bool = False) -> list[SuiteResult]:
    names = list(SUITES) if not names else list(names)
    unknown = [x for x in names if x not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s) {unknown}; available: {', '.join(SUITES)}")
    out = []
    for name in names:
        fn = SUITES[name]
        out.append(fn(seed=seed, threads=threads, long=long) if name == "ringel" else fn(seed=seed, threads=threads))
    return out
