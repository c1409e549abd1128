"""Genus functions, class specifications, membership and exact enumeration.

Labelled enumeration at n <= 7 works from host tables: every graph on [n] is
identified by its code, codes are grouped into isomorphism classes with
numpy (the least code of an orbit is its canonical code), and each class
gets a genus profile once. Membership of a labelled graph is then a table
lookup; counts are sums of orbit sizes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from typing import Iterable, Iterator

import numpy as np

from . import cache as cache_mod
from .embedding import NONORIENTABLE, ORIENTABLE, is_planar, min_euler_genus, ringel_youngs
from .graph import (
    CapExceeded,
    Graph,
    UnlabelledGraph,
    canonical_code,
    components,
    is_connected,
    pair_list,
)

TABLE_CAP = 7
PROFILE_VERSION = 1

VARIANTS = ("OE", "NE", "E", "OE&NE")
CLOSURES = ("plain", "hereditary", "minor")

_VARIANT_ALIASES = {
    "OE": "OE", "NE": "NE", "E": "E",
    "OE&NE": "OE&NE", "OE∩NE": "OE&NE", "OENE": "OE&NE", "OE^NE": "OE&NE", "BOTH": "OE&NE",
}
_CLOSURE_ALIASES = {"plain": "plain", "hereditary": "hereditary", "hered": "hereditary", "minor": "minor"}


class ClassError(ValueError):
    pass


# ---------------------------------------------------------------------------
# genus functions


def _floor_pow(a: Fraction, b: Fraction, n: int) -> int:
    """floor(a * n**b) exactly, for a, b >= 0 rational."""
    if a == 0:
        return 0
    p, q = b.numerator, b.denominator
    an, ad = a.numerator, a.denominator
    # k <= a n^(p/q)  <=>  (k ad)^q <= an^q n^p
    rhs = an**q * n**p
    lo, hi = 0, 1
    while (hi * ad) ** q <= rhs:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if (mid * ad) ** q <= rhs:
            lo = mid
        else:
            hi = mid
    return lo


def ry_ceiling(n: int) -> int:
    """Largest Euler genus any n-vertex graph needs on either kind of surface."""
    return max(ringel_youngs(n, ORIENTABLE), ringel_youngs(n, NONORIENTABLE))


@dataclass(frozen=True)
class GenusFunction:
    """n -> g(n). Kinds: const, table, pow (floor(a n^b)), nlogn (floor(n / ln n)), ry, runmax."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in ("const", "table", "pow", "nlogn", "ry", "runmax"):
            raise ClassError(f"unknown genus function kind {self.kind!r}")
        if self.kind == "const" and (len(self.params) != 1 or self.params[0] < 0):
            raise ClassError("const genus function needs one value >= 0")
        if self.kind == "table" and (not self.params or any(x < 0 for x in self.params)):
            raise ClassError("table genus function needs non-negative values")
        if self.kind == "pow" and (len(self.params) != 2 or self.params[0] < 0 or self.params[1] < 0):
            raise ClassError("pow genus function needs a >= 0 and b >= 0")

    @classmethod
    def const(cls, c: int) -> "GenusFunction":
        return cls("const", (int(c),))

    @classmethod
    def table(cls, values: Iterable[int]) -> "GenusFunction":
        return cls("table", tuple(int(v) for v in values))

    @classmethod
    def parse(cls, text: str) -> "GenusFunction":
        text = text.strip()
        head, _, rest = text.partition(":")
        try:
            if head == "const":
                return cls.const(int(rest))
            if head == "table":
                return cls.table(int(x) for x in rest.split(","))
            if head == "pow":
                a, b = rest.split(",")
                return cls("pow", (Fraction(a), Fraction(b)))
            if head in ("nlogn", "ry") and not rest:
                return cls(head)
        except ValueError as exc:
            raise ClassError(f"bad genus function {text!r}: {exc}") from exc
        raise ClassError(f"bad genus function {text!r} (use const:c, table:g1,g2,..., pow:a,b, nlogn, ry)")

    def __call__(self, n: int) -> int:
        if n < 1:
            raise ClassError("genus functions are defined for n >= 1")
        k, p = self.kind, self.params
        if k == "const":
            return p[0]
        if k == "table":
            if n > len(p):
                raise ClassError(f"genus table has {len(p)} entries, g({n}) requested")
            return p[n - 1]
        if k == "pow":
            return _floor_pow(Fraction(p[0]), Fraction(p[1]), n)
        if k == "nlogn":
            # n / ln n is irrational for n >= 2, so the float floor is safe; g(1) := 0
            return 0 if n == 1 else int(math.floor(n / math.log(n)))
        if k == "ry":
            return ry_ceiling(n)
        inner = p[0]
        return max(inner(m) for m in range(1, n + 1))

    def describe(self) -> str:
        k, p = self.kind, self.params
        if k == "const":
            return f"const:{p[0]}"
        if k == "table":
            return "table:" + ",".join(map(str, p))
        if k == "pow":
            return f"pow:{p[0]},{p[1]}"
        if k == "runmax":
            return f"runmax({p[0].describe()})"
        return k

    def values(self, lo: int, hi: int) -> list[int]:
        return [self(n) for n in range(lo, hi + 1)]

    def non_decreasing(self, lo: int, hi: int) -> bool:
        v = self.values(lo, hi)
        return all(a <= b for a, b in zip(v, v[1:]))

    def monotonized(self) -> "GenusFunction":
        """Running maximum g*(n) = max(g(1..n))."""
        return self if self.kind == "runmax" else GenusFunction("runmax", (self,))


# ---------------------------------------------------------------------------
# class specs


@dataclass(frozen=True)
class ClassSpec:
    variant: str
    closure: str
    labelled: bool
    g: GenusFunction

    def __post_init__(self):
        v = _VARIANT_ALIASES.get(str(self.variant).upper().replace(" ", ""))
        c = _CLOSURE_ALIASES.get(str(self.closure).lower())
        if v is None:
            raise ClassError(f"unknown variant {self.variant!r} (OE, NE, E, OE&NE)")
        if c is None:
            raise ClassError(f"unknown closure {self.closure!r} (plain, hereditary, minor)")
        object.__setattr__(self, "variant", v)
        object.__setattr__(self, "closure", c)

    @classmethod
    def planar(cls, labelled: bool = True) -> "ClassSpec":
        return cls("E", "plain", labelled, GenusFunction.const(0))

    def with_g(self, g: GenusFunction) -> "ClassSpec":
        return replace(self, g=g)

    def with_closure(self, closure: str) -> "ClassSpec":
        return replace(self, closure=closure)

    def fingerprint(self, n_max: int) -> str:
        return cache_mod.digest(self.key(n_max))[:16]

    def key(self, n_max: int) -> dict:
        return {
            "variant": self.variant,
            "closure": self.closure,
            "labelled": self.labelled,
            "g": self.g.describe(),
            "table": self.g.values(1, max(n_max, 1)),
        }

    def describe(self) -> str:
        lab = "labelled" if self.labelled else "unlabelled"
        return f"{self.variant}/{self.closure}/{lab}/{self.g.describe()}"


@dataclass(frozen=True)
class ClassCount:
    n: int
    count: int
    source: str
    histogram: dict = field(default_factory=dict)  # edge count -> number of members

    def __post_init__(self):
        if sum(self.histogram.values()) != self.count:
            raise ClassError("histogram total differs from count")


# ---------------------------------------------------------------------------
# genus profile of a single graph


@dataclass(frozen=True)
class Profile:
    """Least Euler genus on orientable surfaces, and on non-orientable ones (planar -> 0)."""

    orientable: int
    nonorientable: int

    def genus(self, variant: str) -> int:
        if variant == "OE":
            return self.orientable
        if variant == "NE":
            return self.nonorientable
        if variant == "E":
            return min(self.orientable, self.nonorientable)
        return max(self.orientable, self.nonorientable)


def variant_ceiling(n: int, variant: str) -> int:
    """Genus of K_n for the variant; every n-vertex graph is within it (genus is monotone under subgraphs)."""
    return Profile(ringel_youngs(n, ORIENTABLE), ringel_youngs(n, NONORIENTABLE)).genus(variant)


_GENUS_MEMO: dict[tuple[int, int, str], int] = {}


def _mode_genus(g: Graph, mode: str, budget: int | None = None) -> int:
    key = (g.n, canonical_code(g), mode) if g.n <= 10 else None
    if key is not None and key in _GENUS_MEMO:
        return _GENUS_MEMO[key]
    r = min_euler_genus(g, mode, budget=budget, cap=max(8, g.n))
    if not r.exact:
        raise CapExceeded(f"genus search budget exhausted for {g!r} ({mode}, interval [{r.lower}, {r.upper}])")
    if key is not None:
        _GENUS_MEMO[key] = r.euler_genus
    return r.euler_genus


def graph_profile(g: Graph, budget: int | None = None) -> Profile:
    return Profile(_mode_genus(g, ORIENTABLE, budget), _mode_genus(g, NONORIENTABLE, budget))


def _plain_member(g: Graph, variant: str, gval: int) -> bool:
    if g.n == 0 or gval >= variant_ceiling(g.n, variant):
        return True
    # e <= 3(v + h - 2) for every simple graph on v >= 3 vertices
    if g.n >= 3 and g.e > 3 * (g.n + gval - 2):
        return False
    if gval == 0:
        # every variant's budget-0 class is the planar class
        return is_planar(g)
    if variant == "OE":
        return _mode_genus(g, ORIENTABLE) <= gval
    if variant == "NE":
        return _mode_genus(g, NONORIENTABLE) <= gval
    if variant == "E":
        return _mode_genus(g, ORIENTABLE) <= gval or _mode_genus(g, NONORIENTABLE) <= gval
    return _mode_genus(g, ORIENTABLE) <= gval and _mode_genus(g, NONORIENTABLE) <= gval


def member(g: Graph, spec: ClassSpec) -> bool:
    """Is g (on its own order n) in the class? Works on single graphs without tables."""
    if g.n == 0:
        raise ClassError("classes are defined on n >= 1 vertices")
    if spec.closure == "plain":
        return _plain_member(g, spec.variant, spec.g(g.n))
    memo: dict[tuple[int, int], bool] = {}

    def hered(x: Graph) -> bool:
        key = (x.n, canonical_code(x))
        if key in memo:
            return memo[key]
        ok = _plain_member(x, spec.variant, spec.g(x.n))
        if ok and x.n > 1:
            ok = all(hered(x.remove_vertex(v)) for v in range(1, x.n + 1))
        memo[key] = ok
        return ok

    def minor(x: Graph) -> bool:
        key = (x.n, canonical_code(x))
        if key in memo:
            return memo[key]
        ok = _plain_member(x, spec.variant, spec.g(x.n))
        if ok:
            kids = [x.remove_edge(u, v) for u, v in x.sorted_edges()]
            kids += [x.contract(u, v) for u, v in x.sorted_edges()]
            if x.n > 1:
                kids += [x.remove_vertex(v) for v in range(1, x.n + 1)]
            ok = all(minor(k) for k in kids)
        memo[key] = ok
        return ok

    return hered(g) if spec.closure == "hereditary" else minor(g)


# ---------------------------------------------------------------------------
# host tables


@lru_cache(maxsize=None)
def _weights(n: int) -> np.ndarray:
    """W[pi, k] = bit value, in the image code, of pair k after relabelling by pi."""
    pairs = pair_list(n)
    p = len(pairs)
    index = {pr: k for k, pr in enumerate(pairs)}
    perms = list(permutations(range(n)))
    w = np.zeros((len(perms), p), dtype=np.int64)
    for a, pi in enumerate(perms):
        for k, (i, j) in enumerate(pairs):
            x, y = pi[i], pi[j]
            kk = index[(min(x, y), max(x, y))]
            w[a, k] = 1 << (p - 1 - kk)
    return w


@dataclass
class HostTable:
    n: int
    class_of: np.ndarray      # code -> class index
    reps: np.ndarray          # canonical (least) code per class, ascending
    orbit: np.ndarray         # labelled copies per class
    edges: np.ndarray
    connected: np.ndarray

    @property
    def classes(self) -> int:
        return len(self.reps)

    def aut(self, c: int) -> int:
        return math.factorial(self.n) // int(self.orbit[c])

    def graph(self, c: int) -> Graph:
        return Graph.from_code(self.n, int(self.reps[c]))


_TABLES: dict[int, HostTable] = {}


def host_table(n: int) -> HostTable:
    if n < 1 or n > TABLE_CAP:
        raise CapExceeded(f"host table cap exceeded (n={n}, allowed 1..{TABLE_CAP})")
    if n in _TABLES:
        return _TABLES[n]
    p = n * (n - 1) // 2
    size = 1 << p
    w = _weights(n)
    shifts = np.arange(p - 1, -1, -1, dtype=np.int64)
    class_of = np.full(size, -1, dtype=np.int32)
    reps, orbit = [], []
    ptr = 0
    while ptr < size:
        off = int(np.argmax(class_of[ptr:] < 0))
        ptr += off
        if class_of[ptr] >= 0:
            break
        bits = (ptr >> shifts) & 1
        images = np.unique(w @ bits)
        class_of[images] = len(reps)
        reps.append(ptr)
        orbit.append(len(images))
    reps_a = np.array(reps, dtype=np.int64)
    edges = np.array([bin(c).count("1") for c in reps], dtype=np.int64)
    conn = np.array([is_connected(Graph.from_code(n, c)) for c in reps], dtype=bool)
    t = HostTable(n, class_of, reps_a, np.array(orbit, dtype=np.int64), edges, conn)
    _TABLES[n] = t
    return t


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("GENUSLAB_THREADS", "1") or 1)
    return max(1, threads)


def ordered_map(fn, items, threads: int | None = None) -> list:
    """map with a thread pool; results come back in input order regardless of scheduling."""
    items = list(items)
    t = _threads(threads)
    if t == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=t) as ex:
        return list(ex.map(fn, items))


_PROFILES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def class_profiles(n: int, threads: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """(orientable, non-orientable convention) Euler genus per class of host_table(n)."""
    if n in _PROFILES:
        return _PROFILES[n]
    t = host_table(n)
    c = cache_mod.get_cache()
    key = {"n": n, "version": PROFILE_VERSION, "reps": cache_mod.digest(t.reps.tolist())}
    hit = c.get("profiles", key)
    if hit is not None and len(hit["o"]) == t.classes:
        o, nn = np.array(hit["o"], dtype=np.int64), np.array(hit["n"], dtype=np.int64)
    else:
        profs = ordered_map(lambda i: graph_profile(t.graph(i)), range(t.classes), threads)
        o = np.array([p.orientable for p in profs], dtype=np.int64)
        nn = np.array([p.nonorientable for p in profs], dtype=np.int64)
        c.put("profiles", key, {"o": o.tolist(), "n": nn.tolist()})
    _PROFILES[n] = (o, nn)
    return o, nn


def _variant_genus(n: int, variant: str, threads: int | None = None) -> np.ndarray:
    o, nn = class_profiles(n, threads)
    if variant == "OE":
        return o
    if variant == "NE":
        return nn
    if variant == "E":
        return np.minimum(o, nn)
    return np.maximum(o, nn)


@lru_cache(maxsize=None)
def _deletion_children(n: int) -> tuple[tuple[int, ...], ...]:
    """Per class at n: classes (at n-1) of the vertex-deleted subgraphs."""
    t, s = host_table(n), host_table(n - 1)
    out = []
    for c in range(t.classes):
        g = t.graph(c)
        out.append(tuple(sorted({int(s.class_of[g.remove_vertex(v).code]) for v in range(1, n + 1)})))
    return tuple(out)


@lru_cache(maxsize=None)
def _minor_children(n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """Per class at n: (edge-deletion classes at n, contraction classes at n-1)."""
    t = host_table(n)
    s = host_table(n - 1) if n > 1 else None
    out = []
    for c in range(t.classes):
        g = t.graph(c)
        dels = {int(t.class_of[g.remove_edge(u, v).code]) for u, v in g.sorted_edges()}
        cons = {int(s.class_of[g.contract(u, v).code]) for u, v in g.sorted_edges()} if s else set()
        out.append((tuple(sorted(dels)), tuple(sorted(cons))))
    return tuple(out)


_MASKS: dict[tuple, np.ndarray] = {}


def class_mask(n: int, spec: ClassSpec, threads: int | None = None) -> np.ndarray:
    """Boolean membership per class of host_table(n) (the labelled flag is irrelevant here)."""
    key = (n, spec.variant, spec.closure, tuple(spec.g.values(1, n)))
    if key in _MASKS:
        return _MASKS[key]
    t = host_table(n)
    gval = spec.g(n)
    if gval >= variant_ceiling(n, spec.variant):
        plain = np.ones(t.classes, dtype=bool)
    else:
        plain = _variant_genus(n, spec.variant, threads) <= gval
    if spec.closure == "plain" or n == 1:
        mask = plain
    elif spec.closure == "hereditary":
        below = class_mask(n - 1, spec, threads)
        kids = _deletion_children(n)
        mask = np.array([plain[c] and all(below[k] for k in kids[c]) for c in range(t.classes)], dtype=bool)
    else:
        below = class_mask(n - 1, spec, threads)
        dkids = _deletion_children(n)
        mkids = _minor_children(n)
        mask = np.zeros(t.classes, dtype=bool)
        for c in np.argsort(t.edges, kind="stable"):
            dels, cons = mkids[c]
            mask[c] = (
                plain[c]
                and all(below[k] for k in dkids[c])
                and all(below[k] for k in cons)
                and all(mask[k] for k in dels)
            )
    _MASKS[key] = mask
    return mask


def table_member(g: Graph, spec: ClassSpec) -> bool:
    t = host_table(g.n)
    return bool(class_mask(g.n, spec)[t.class_of[g.code]])


# ---------------------------------------------------------------------------
# enumeration and counting


def _check_enum(n: int, spec: ClassSpec) -> None:
    if n < 1:
        raise ClassError("classes are defined on n >= 1 vertices")
    cap = TABLE_CAP if spec.labelled else TABLE_CAP + 1
    if n > cap:
        lab = "labelled" if spec.labelled else "unlabelled"
        raise CapExceeded(f"enumeration cap exceeded ({lab} n={n} > {cap})")


def _unlabelled_large(n: int, spec: ClassSpec, threads: int | None = None) -> list[tuple[int, bool, int]]:
    """(canonical code, connected, aut) for every unlabelled member at n beyond the table cap."""
    from .census import unlabelled_graphs

    gs = unlabelled_graphs(n)

    def one(g: Graph):
        if not member(g, spec):
            return None
        from .graph import aut_count

        return (canonical_code(g), is_connected(g), aut_count(g))

    rows = [r for r in ordered_map(one, gs, threads) if r is not None]
    rows.sort()
    return rows


def enumerate_class(n: int, spec: ClassSpec, threads: int | None = None) -> Iterator[Graph | UnlabelledGraph]:
    """Members on [n] (ascending code), or unlabelled members as canonical forms (ascending canonical code)."""
    _check_enum(n, spec)
    if n > TABLE_CAP:
        for code, _, _ in _unlabelled_large(n, spec, threads):
            yield UnlabelledGraph(Graph.from_code(n, code))
        return
    t = host_table(n)
    mask = class_mask(n, spec, threads)
    if spec.labelled:
        codes = np.flatnonzero(mask[t.class_of])
        for c in codes:
            yield Graph.from_code(n, int(c))
    else:
        for c in np.flatnonzero(mask):
            yield UnlabelledGraph(t.graph(int(c)))


def member_codes(n: int, spec: ClassSpec) -> np.ndarray:
    """Codes of all labelled members on [n], ascending."""
    _check_enum(n, replace(spec, labelled=True))
    t = host_table(n)
    return np.flatnonzero(class_mask(n, spec)[t.class_of])


def _count(n: int, spec: ClassSpec, connected: bool, threads: int | None = None,
           use_cache: bool = True) -> ClassCount:
    if n < 1:
        raise ClassError("classes are defined on n >= 1 vertices")
    if n > TABLE_CAP + 1:
        raise CapExceeded(f"counting cap exceeded (n={n} > {TABLE_CAP + 1})")
    c = cache_mod.get_cache()
    key = {"spec": spec.key(n), "n": n, "connected": connected}
    if use_cache:
        hit = c.get("counts", key)
        if hit is not None:
            hist = {int(k): int(v) for k, v in hit["histogram"].items()}
            if sum(hist.values()) == int(hit["count"]):
                return ClassCount(n, int(hit["count"]), "cached", hist)
    hist: dict[int, int] = {}
    if n <= TABLE_CAP:
        t = host_table(n)
        mask = class_mask(n, spec, threads)
        if connected:
            mask = mask & t.connected
        for cl in np.flatnonzero(mask):
            e = int(t.edges[cl])
            hist[e] = hist.get(e, 0) + (int(t.orbit[cl]) if spec.labelled else 1)
    else:
        fact = math.factorial(n)
        for code, conn, aut in _unlabelled_large(n, spec, threads):
            if connected and not conn:
                continue
            e = bin(code).count("1")
            hist[e] = hist.get(e, 0) + (fact // aut if spec.labelled else 1)
    hist = dict(sorted(hist.items()))
    total = sum(hist.values())
    if use_cache:
        c.put("counts", key, {"count": total, "histogram": {str(k): v for k, v in hist.items()}})
    return ClassCount(n, total, "enumerated", hist)


def count(n: int, spec: ClassSpec, threads: int | None = None, use_cache: bool = True) -> ClassCount:
    return _count(n, spec, False, threads, use_cache)


def count_connected(n: int, spec: ClassSpec, threads: int | None = None, use_cache: bool = True) -> ClassCount:
    return _count(n, spec, True, threads, use_cache)


def count_at(n: int, spec: ClassSpec, h: int, connected: bool = False) -> int:
    """|A^h_n| for the spec's variant and closure with the constant budget h."""
    s = spec.with_g(GenusFunction.const(h))
    return _count(n, s, connected).count


def fsgr(n: int, spec: ClassSpec) -> Fraction:
    """|A^g_n| / (n |A^{g(n)}_{n-1}|)."""
    if n < 2:
        raise ClassError("fsgr needs n >= 2")
    num = count(n, spec).count
    den = n * count_at(n - 1, spec, spec.g(n))
    if den == 0:
        raise ZeroDivisionError(f"fsgr: empty class at n-1={n - 1}")
    return Fraction(num, den)


@dataclass(frozen=True)
class GrowthRatios:
    n: int
    genus_step: dict        # h -> (ratio, ratio >= n^2 / (7 (n + h)))
    vertex_step: dict       # h -> (ratio, ratio >= 2n)
    fsgr: Fraction | None


def growth_ratios(n: int, spec: ClassSpec) -> GrowthRatios:
    gn = spec.g(n)
    gstep = {}
    for h in range(gn + 1):
        a, b = count_at(n, spec, h + 2), count_at(n, spec, h)
        if b == 0:
            gstep[h] = (None, None)
            continue
        r = Fraction(a, b)
        gstep[h] = (r, r >= Fraction(n * n, 7 * (n + h)))
    vstep = {}
    if n + 1 <= TABLE_CAP + 1:
        for h in range(gn + 1):
            a, b = count_at(n + 1, spec, h), count_at(n, spec, h)
            r = Fraction(a, b) if b else None
            vstep[h] = (r, None if r is None else r >= 2 * n)
    fs = fsgr(n, spec) if n >= 2 else None
    return GrowthRatios(n, gstep, vstep, fs)


def radius_proxy(spec: ClassSpec, n_range: Iterable[int]) -> list[tuple[int, float]]:
    """(|A_n| / n!)^(1/n) as a trend series."""
    out = []
    for n in n_range:
        c = count(n, replace(spec, labelled=True)).count
        out.append((n, (c / math.factorial(n)) ** (1.0 / n)))
    return out


def bridge_addable(n: int, spec: ClassSpec) -> bool:
    """Does adding any edge between two components of a member on [n] stay in the class?"""
    t = host_table(n)
    mask = class_mask(n, spec)
    for cl in np.flatnonzero(mask):
        g = t.graph(int(cl))
        comps = components(g)
        if len(comps) < 2:
            continue
        where = {v: i for i, c in enumerate(comps) for v in c}
        for u in range(1, n + 1):
            for v in range(u + 1, n + 1):
                if where[u] != where[v] and not mask[t.class_of[g.add_edge(u, v).code]]:
                    return False
    return True


def export_csv(spec: ClassSpec, n_range: Iterable[int], path=None) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "count", "connected_count", "fsgr"])
    for n in n_range:
        fs = fsgr(n, spec) if n >= 2 else ""
        w.writerow([n, count(n, spec).count, count_connected(n, spec).count, str(fs)])
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text
