"""Exact and Monte-Carlo statistics over the graph classes, dominance checks, and set-system oracles.

Exact quantities are rationals over the labelled (or unlabelled) member list;
Monte-Carlo quantities carry their seed and a 95% Wilson interval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable

import mpmath
import numpy as np
from scipy.stats import binomtest

from .catalog import (
    TABLE_CAP,
    ClassError,
    ClassSpec,
    GenusFunction,
    class_mask,
    count,
    count_at,
    fsgr,
    host_table,
    member,
    ordered_map,
)
from .census import census_counts
from .embedding import is_planar
from .graph import (
    Graph,
    GraphError,
    UnlabelledGraph,
    _mask_components,
    aut_count,
    canonical_code,
    induced_subgraph,
    is_connected,
    leaves,
    max_degree,
    pendant_appearances,
)
from .graph6 import parse_graph6, write_graph6
from .samplers import CHUNK, Binomial, Poisson, Seed, UniformSampler, exact_pmf, uniform_from_class


class LabError(ValueError):
    pass


# ---------------------------------------------------------------------------
# events


def _component_masks(g: Graph) -> list[int]:
    return _mask_components(g.n, g.masks)


def _frag(g: Graph) -> int:
    if g.n == 0:
        raise GraphError("empty graph has no largest component")
    return g.n - max(c.bit_count() for c in _component_masks(g))


def _fragment(g: Graph) -> Graph:
    comps = _component_masks(g)
    big = max(c.bit_count() for c in comps)
    giant = next(c for c in comps if c.bit_count() == big)
    return induced_subgraph(g, [v + 1 for v in range(g.n) if not giant >> v & 1])


def _has_component(g: Graph, h: Graph) -> bool:
    target = canonical_code(h)
    for c in _component_masks(g):
        if c.bit_count() == h.n:
            sub = induced_subgraph(g, [v + 1 for v in range(g.n) if c >> v & 1])
            if sub.e == h.e and canonical_code(sub) == target:
                return True
    return False


def _as_graph(h) -> Graph:
    if isinstance(h, UnlabelledGraph):
        return h.canonical
    if isinstance(h, str):
        return parse_graph6(h)
    return h


@dataclass(frozen=True)
class EventQuery:
    kind: str
    arg: object = None
    t: int | None = None

    KINDS = ("connected", "frag_eq", "fragment_planar", "leaves_ge", "leaves_eq", "edges_ge", "maxdeg_ge",
             "has_component", "pend_ge", "in_subclass")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise LabError(f"unknown event {self.kind!r}")
        if self.kind in ("has_component", "pend_ge"):
            h = _as_graph(self.arg)
            if h.n == 0 or not is_connected(h):
                raise GraphError("pattern must be connected")
            object.__setattr__(self, "arg", h)

    @classmethod
    def parse(cls, text: str) -> "EventQuery":
        """``connected``, ``frag_eq:1``, ``has_component:Bw``, ``pend_ge:@,2``, ``in_subclass:E/plain/labelled/const:0``."""
        head, _, rest = text.partition(":")
        if head in ("connected", "fragment_planar"):
            return cls(head)
        if head in ("frag_eq", "leaves_ge", "leaves_eq", "edges_ge", "maxdeg_ge"):
            return cls(head, int(rest))
        if head == "has_component":
            return cls(head, parse_graph6(rest))
        if head == "pend_ge":
            g6, _, t = rest.rpartition(",")
            return cls(head, parse_graph6(g6), int(t))
        if head == "in_subclass":
            return cls(head, parse_spec(rest))
        raise LabError(f"unknown event {text!r}")

    def describe(self) -> str:
        if self.arg is None:
            return self.kind
        if isinstance(self.arg, Graph):
            a = write_graph6(self.arg)
            return f"{self.kind}:{a}" + (f",{self.t}" if self.t is not None else "")
        if isinstance(self.arg, ClassSpec):
            return f"{self.kind}:{self.arg.describe()}"
        return f"{self.kind}:{self.arg}"

    @property
    def label_free(self) -> bool:
        """False when the value can depend on labels (fragment ties between non-isomorphic components)."""
        return self.kind != "fragment_planar"

    def __call__(self, g: Graph) -> bool:
        k = self.kind
        if k == "connected":
            return is_connected(g)
        if k == "frag_eq":
            return _frag(g) == self.arg
        if k == "fragment_planar":
            return is_planar(_fragment(g))
        if k == "leaves_ge":
            return leaves(g) >= self.arg
        if k == "leaves_eq":
            return leaves(g) == self.arg
        if k == "edges_ge":
            return g.e >= self.arg
        if k == "maxdeg_ge":
            return max_degree(g) >= self.arg
        if k == "has_component":
            return _has_component(g, self.arg)
        if k == "pend_ge":
            return pendant_appearances(g, self.arg) >= self.t
        spec = self.arg
        if g.n <= TABLE_CAP:
            t = host_table(g.n)
            return bool(class_mask(g.n, spec)[t.class_of[g.code]])
        return member(g, spec)


def parse_spec(text: str) -> ClassSpec:
    """``variant/closure/labelled|unlabelled/genus-function``, e.g. ``E/plain/labelled/const:0``."""
    parts = text.split("/", 3)
    if len(parts) != 4 or parts[2] not in ("labelled", "unlabelled"):
        raise LabError(f"bad class spec {text!r} (variant/closure/labelled/g)")
    return ClassSpec(parts[0], parts[1], parts[2] == "labelled", GenusFunction.parse(parts[3]))


# ---------------------------------------------------------------------------
# exact weighted member lists


def _rows(n: int, spec: ClassSpec):
    """(representative graph, weight, class index) per member class."""
    if n < 1:
        raise ClassError("classes are defined on n >= 1 vertices")
    if n > TABLE_CAP:
        raise LabError(f"exact mode needs an enumerable class (n <= {TABLE_CAP})")
    t = host_table(n)
    mask = class_mask(n, spec)
    for c in np.flatnonzero(mask):
        c = int(c)
        yield t.graph(c), (int(t.orbit[c]) if spec.labelled else 1), c


def _ties_ambiguous(g: Graph) -> bool:
    comps = _component_masks(g)
    big = max(c.bit_count() for c in comps)
    tops = [c for c in comps if c.bit_count() == big]
    if len(tops) < 2:
        return False
    codes = {canonical_code(induced_subgraph(g, [v + 1 for v in range(g.n) if c >> v & 1])) for c in tops}
    return len(codes) > 1


def _exact_tally(n: int, spec: ClassSpec, pred: Callable[[Graph], object], label_free: bool = True):
    """Sum of pred over members (with multiplicity), and the class size."""
    if n < 1:
        raise ClassError("classes are defined on n >= 1 vertices")
    total = 0
    acc = 0
    t = host_table(n) if n <= TABLE_CAP else None
    for g, w, c in _rows(n, spec):
        total += w
        if label_free or not spec.labelled or not _ties_ambiguous(g):
            acc += w * pred(g)
        else:
            for code in np.flatnonzero(t.class_of == c):
                acc += pred(Graph.from_code(n, int(code)))
    if total == 0:
        raise ClassError("empty class")
    return acc, total


@dataclass(frozen=True)
class Exact:
    value: Fraction
    numerator_count: int
    class_size: int
    tag: str = "exact"

    def to_json(self) -> dict:
        return {"tag": self.tag, "value": str(self.value), "float": float(self.value)}


@dataclass(frozen=True)
class Estimate:
    value: float
    ci: tuple
    successes: int
    reps: int
    seed: int
    tag: str = "estimate"

    def to_json(self) -> dict:
        return {"tag": self.tag, "value": self.value, "ci95": list(self.ci), "successes": self.successes,
                "reps": self.reps, "seed": self.seed}


def wilson(successes: int, reps: int) -> tuple[float, float]:
    ci = binomtest(successes, reps).proportion_ci(confidence_level=0.95, method="wilson")
    return float(ci.low), float(ci.high)


def probability(n: int, spec: ClassSpec, q: EventQuery, mode: str = "exact", reps: int = 100_000,
                seed: Seed | int | None = None, threads: int | None = None) -> Exact | Estimate:
    if mode == "exact":
        k, total = _exact_tally(n, spec, q, q.label_free)
        return Exact(Fraction(k, total), k, total)
    if mode != "montecarlo":
        raise LabError(f"unknown mode {mode!r}")
    if seed is None:
        raise LabError("Monte-Carlo mode needs a seed")
    seed = seed if isinstance(seed, Seed) else Seed(int(seed))
    hits = mc_tally(n, spec, q, reps, seed, threads)
    return Estimate(hits / reps, wilson(hits, reps), hits, reps, seed.value)


def mc_tally(n: int, spec: ClassSpec, pred: Callable[[Graph], object], reps: int, seed: Seed,
             threads: int | None = None) -> int:
    """Sum of pred over ``reps`` uniform draws; draws are fixed by the seed alone."""
    if n <= TABLE_CAP:
        codes = UniformSampler(n, spec).draw_codes(reps, seed)
        memo: dict[int, object] = {}
        acc = 0
        for c in codes.tolist():
            v = memo.get(c)
            if v is None:
                v = memo[c] = pred(Graph.from_code(n, c))
            acc += v
        return int(acc)
    if spec.closure != "plain":
        raise LabError("Monte-Carlo beyond the enumeration cap needs a plain-closure spec")
    chunks = [(i, min(CHUNK, reps - s)) for i, s in enumerate(range(0, reps, CHUNK))]

    def run(chunk):
        i, k = chunk
        base = seed.split(i)
        return sum(pred(uniform_from_class(n, spec, base.split(j), mode="reject")) for j in range(k))

    return int(sum(ordered_map(run, chunks, threads)))


# ---------------------------------------------------------------------------
# moments


STATISTICS: dict[str, Callable[[Graph], int]] = {
    "edges": lambda g: g.e,
    "leaves": leaves,
    "kappa": lambda g: len(_component_masks(g)),
    "frag": _frag,
    "maxdeg": max_degree,
}


@dataclass(frozen=True)
class Moments:
    statistic: str
    mean: Fraction
    factorial: dict = field(default_factory=dict)  # t -> E[X (X-1) ... (X-t+1)]


def falling(x: int, t: int) -> int:
    out = 1
    for i in range(t):
        out *= x - i
    return out


def moments(n: int, spec: ClassSpec, statistic: str, max_t: int = 3) -> Moments:
    if statistic not in STATISTICS:
        raise LabError(f"unknown statistic {statistic!r} ({', '.join(STATISTICS)})")
    f = STATISTICS[statistic]
    s, total = _exact_tally(n, spec, f)
    fact = {}
    if statistic == "leaves":
        for t in range(1, max_t + 1):
            a, _ = _exact_tally(n, spec, lambda g, t=t: falling(leaves(g), t))
            fact[t] = Fraction(a, total)
    return Moments(statistic, Fraction(s, total), fact)


def distribution(n: int, spec: ClassSpec, statistic: str) -> dict[int, Fraction]:
    f = STATISTICS[statistic]
    hist: dict[int, int] = {}
    total = 0
    for g, w, _ in _rows(n, spec):
        x = f(g)
        hist[x] = hist.get(x, 0) + w
        total += w
    if total == 0:
        raise ClassError("empty class")
    return {k: Fraction(v, total) for k, v in sorted(hist.items())}


# ---------------------------------------------------------------------------
# stochastic dominance


@dataclass(frozen=True)
class DominanceReport:
    """``dominates``: A is stochastically at least B, i.e. cdf_a <= cdf_b everywhere."""

    cdf_a: dict
    cdf_b: dict
    dominates: bool
    first_violation: int | None
    info: dict = field(default_factory=dict)


def _cdf(pmf: dict, support: Iterable[int]) -> dict:
    out = {}
    acc = Fraction(0)
    items = sorted(pmf.items())
    i = 0
    for t in support:
        while i < len(items) and items[i][0] <= t:
            acc += items[i][1]
            i += 1
        out[t] = acc
    return out


def compare_laws(pmf_a: dict, pmf_b: dict, **info) -> DominanceReport:
    lo = min(min(pmf_a), min(pmf_b))
    hi = max(max(pmf_a), max(pmf_b))
    support = range(lo, hi + 1)
    ca, cb = _cdf(pmf_a, support), _cdf(pmf_b, support)
    bad = next((t for t in support if ca[t] > cb[t]), None)
    return DominanceReport(ca, cb, bad is None, bad, dict(info))


def binomial_pmf(k: int) -> dict:
    return exact_pmf(Binomial(k)).table


def edge_dominance(n: int, spec: ClassSpec) -> DominanceReport:
    """e(R_n) against Bin(3n - 6, 1/2)."""
    if n < 2:
        raise LabError("edge dominance needs n >= 2")
    if spec.closure != "plain" or spec.variant not in ("E", "OE", "NE"):
        raise LabError("edge dominance applies to plain specs of variant E, OE or NE")
    c = count(n, spec)
    if c.count == 0:
        raise ClassError("empty class")
    law = {e: Fraction(k, c.count) for e, k in c.histogram.items()}
    return compare_laws(law, binomial_pmf(3 * n - 6), n=n, spec=spec.describe(), trials=3 * n - 6)


def is_down_set(family: set) -> bool:
    return all(a - {x} in family for a in family for x in a)


def maximal_members(family: set) -> list[frozenset]:
    return sorted((a for a in family if not any(a < b for b in family)), key=lambda s: (len(s), sorted(s)))


def downward_closed_dominance(family: Iterable[Iterable]) -> DominanceReport:
    """|R| for R uniform on a down-set against Bin(r, 1/2), r = least size of a maximal member."""
    fam = {frozenset(a) for a in family}
    if not fam:
        raise LabError("family must be non-empty")
    if not is_down_set(fam):
        raise LabError("family is not closed downwards")
    maxes = maximal_members(fam)
    r = min(len(m) for m in maxes)
    hist: dict[int, int] = {}
    for a in fam:
        hist[len(a)] = hist.get(len(a), 0) + 1
    law = {k: Fraction(v, len(fam)) for k, v in hist.items()}
    return compare_laws(law, binomial_pmf(r), r=r, members=len(fam), maximal=len(maxes))


def harris_route(family: Iterable[Iterable]) -> bool:
    """Second route to the same dominance: split by first containing maximal set, check each part.

    Each part is closed upwards inside its maximal set M_i, so its size law must
    dominate Bin(|M_i|, 1/2) (which dominates Bin(r, 1/2)); the mixture then
    dominates Bin(r, 1/2).
    """
    fam = {frozenset(a) for a in family}
    maxes = maximal_members(fam)
    r = min(len(m) for m in maxes)
    parts: list[list[frozenset]] = [[] for _ in maxes]
    for a in fam:
        parts[next(i for i, m in enumerate(maxes) if a <= m)].append(a)
    mix: dict[int, Fraction] = {}
    for m, part in zip(maxes, parts):
        pset = set(part)
        if any(b not in pset for a in part for b in _supersets_within(a, m)):
            return False
        hist: dict[int, int] = {}
        for a in part:
            hist[len(a)] = hist.get(len(a), 0) + 1
        law = {k: Fraction(v, len(part)) for k, v in hist.items()}
        if not compare_laws(law, binomial_pmf(len(m))).dominates:
            return False
        for k, v in law.items():
            mix[k] = mix.get(k, 0) + v * Fraction(len(part), len(fam))
    return compare_laws(mix, binomial_pmf(r)).dominates


def _supersets_within(a: frozenset, m: frozenset):
    extra = sorted(m - a)
    for k in range(1, len(extra) + 1):
        for add in combinations(extra, k):
            yield a | frozenset(add)


def all_down_sets(m: int) -> list[frozenset]:
    """Every down-set of subsets of {1..m} (including the empty family), m <= 4."""
    if m > 4:
        raise LabError("down-set enumeration supports ground sets of size <= 4")
    subsets = [frozenset(c) for k in range(m + 1) for c in combinations(range(1, m + 1), k)]
    index = {s: i for i, s in enumerate(subsets)}
    below = [[index[s - {x}] for x in s] for s in subsets]
    out = []
    for bits in range(1 << len(subsets)):
        if all(not (bits >> i & 1) or all(bits >> j & 1 for j in below[i]) for i in range(len(subsets))):
            out.append(frozenset(subsets[i] for i in range(len(subsets)) if bits >> i & 1))
    return out


def _mp(x: Fraction) -> mpmath.mpf:
    return mpmath.mpf(x.numerator) / x.denominator


# ---------------------------------------------------------------------------
# bridge-addable bounds (connectivity, components, fragment)


@dataclass(frozen=True)
class ConnectivityBounds:
    p_connected: Fraction
    e_kappa: Fraction
    e_frag: Fraction
    kappa_cdf: dict
    poisson_cdf: dict      # conservative (upper) CDF of 1 + Po(1)
    tail_mass: float
    kappa_dominated: bool

    @property
    def holds(self) -> bool:
        with mpmath.workdps(40):
            above = _mp(self.p_connected) >= mpmath.exp(-1)
        return (
            above
            and self.e_kappa < 2
            and self.e_frag < 2
            and self.kappa_dominated
        )


def connectivity_bounds(n: int, spec: ClassSpec) -> ConnectivityBounds:
    """P(connected), E[kappa], E[frag] and kappa against 1 + Po(1), all exact."""
    kappa = distribution(n, spec, "kappa")
    frag = moments(n, spec, "frag").mean
    e_kappa = sum((k * p for k, p in kappa.items()), Fraction(0))
    pmf = exact_pmf(Poisson(Fraction(1), shift=1))
    with mpmath.workdps(40):
        last = max(pmf.table)
        top = max(max(kappa), last) + 1
        kc, pc = {}, {}
        acc_k = Fraction(0)
        acc_p = mpmath.mpf(0)
        ok = True
        for t in range(0, top + 1):
            acc_k += kappa.get(t, 0)
            acc_p += pmf.table.get(t, 0)
            # the dropped mass sits above the table, so inside it the partial sum is exact;
            # past it only the trivial bound 1 is safe
            bound = acc_p if t <= last else mpmath.mpf(1)
            kc[t] = acc_k
            pc[t] = bound
            if _mp(acc_k) < bound:
                ok = False
    return ConnectivityBounds(kappa.get(1, Fraction(0)), e_kappa, frag, kc, pc, pmf.tail_mass, ok)


# ---------------------------------------------------------------------------
# fsgr sandwich


@dataclass(frozen=True)
class FsgrSandwich:
    n: int
    fsgr: Fraction
    p_frag1: Fraction
    lower: mpmath.mpf
    upper: Fraction
    identity: Fraction | None   # n |Conn(A^{g(n)}_{n-1})| / |A^g_n|, valid for n >= 3
    upper_holds: bool
    lower_holds: bool

    @property
    def holds(self) -> bool:
        return self.upper_holds and self.lower_holds


def fsgr_sandwich(n: int, spec: ClassSpec) -> FsgrSandwich:
    if n < 2:
        raise LabError("fsgr sandwich needs n >= 2")
    if spec.closure != "plain":
        raise LabError("fsgr sandwich applies to plain specs")
    spec = ClassSpec(spec.variant, "plain", True, spec.g)
    fs = fsgr(n, spec)
    p = probability(n, spec, EventQuery("frag_eq", 1)).value
    upper = 1 / fs
    with mpmath.workdps(40):
        lower = mpmath.exp(-1) * _mp(upper)
        lower_ok = _mp(p) >= lower
    ident = None
    if n >= 3:
        conn = count_at(n - 1, spec, spec.g(n), connected=True)
        ident = Fraction(n * conn, count(n, spec).count)
    return FsgrSandwich(n, fs, p, lower, upper, ident, p <= upper, bool(lower_ok))


# ---------------------------------------------------------------------------
# pendant appearances


@dataclass(frozen=True)
class AlphaH:
    H: Graph
    rho: float

    @property
    def alpha(self) -> float:
        h = self.H.n
        return h * self.rho**h / aut_count(self.H)


def pendant_density(n: int, spec: ClassSpec, h, rho: float) -> tuple[Fraction, float]:
    """(E[pend(R_n, H)] / n exactly, alpha_H for the given rho)."""
    hg = _as_graph(h)
    if hg.n == 0 or not is_connected(hg):
        raise GraphError("pattern must be connected")
    s, total = _exact_tally(n, spec, lambda g: pendant_appearances(g, hg))
    return Fraction(s, total * n), AlphaH(hg, rho).alpha


# ---------------------------------------------------------------------------
# unlabelled graphs


def unlabelled_disconnect_ratio(n: int) -> Fraction:
    """P(a uniform unlabelled n-vertex graph is disconnected) / (n 2^(1-n))."""
    if n < 1:
        raise LabError("n must be positive")
    u, c = census_counts(n)
    return Fraction(u - c, u) / Fraction(n, 2 ** (n - 1))
