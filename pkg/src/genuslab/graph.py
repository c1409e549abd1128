"""Small labelled graphs on {1..n} and the structural statistics measured on them.

Graphs are immutable values. Internally every graph also carries 0-based
adjacency bitmasks, and an integer ``code`` whose binary expansion is the
graph6 bit string (upper triangle, column by column, first pair most
significant). Comparing codes numerically is therefore the same as comparing
adjacency encodings lexicographically, which is what the canonical form uses.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

CANON_CAP = 10
MINOR_CAP = 9


class GraphError(ValueError):
    """Raised on malformed graphs or out-of-range requests."""


class CapExceeded(GraphError):
    pass


def pair_index(i: int, j: int) -> int:
    """Position of the 0-based pair {i, j} in graph6 column order."""
    if i > j:
        i, j = j, i
    return j * (j - 1) // 2 + i


@lru_cache(maxsize=None)
def pair_list(n: int) -> tuple[tuple[int, int], ...]:
    """0-based pairs (i, j), i < j, in graph6 column order."""
    return tuple((i, j) for j in range(n) for i in range(j))


@dataclass(frozen=True)
class Graph:
    """Simple graph on vertex set {1..n}; ``edges`` holds pairs (u, v) with u < v."""

    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise GraphError(f"vertex count must be a non-negative int, got {self.n!r}")
        norm = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if u > v:
                u, v = v, u
            if u < 1 or v > self.n:
                raise GraphError(f"edge {e} outside vertex set 1..{self.n}")
            norm.add((u, v))
        object.__setattr__(self, "edges", frozenset(norm))

    # -- construction -------------------------------------------------

    @classmethod
    def from_code(cls, n: int, code: int) -> "Graph":
        pairs = pair_list(n)
        p = len(pairs)
        edges = [(i + 1, j + 1) for k, (i, j) in enumerate(pairs) if (code >> (p - 1 - k)) & 1]
        return cls(n, frozenset(edges))

    @classmethod
    def from_masks(cls, masks: Sequence[int]) -> "Graph":
        n = len(masks)
        return cls(n, frozenset((i + 1, j + 1) for i in range(n) for j in range(i + 1, n) if masks[i] >> j & 1))

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, frozenset(combinations(range(1, n + 1), 2)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(n, frozenset((i, i + 1) for i in range(1, n)))

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise GraphError("a cycle needs at least 3 vertices")
        return cls(n, frozenset([(i, i + 1) for i in range(1, n)] + [(1, n)]))

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        return cls(leaves + 1, frozenset((1, i) for i in range(2, leaves + 2)))

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(n, frozenset())

    # -- basic data ----------------------------------------------------

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        m = [0] * self.n
        for u, v in self.edges:
            m[u - 1] |= 1 << (v - 1)
            m[v - 1] |= 1 << (u - 1)
        return tuple(m)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        """Degrees indexed 0..n-1 (vertex v has degree ``degrees[v - 1]``)."""
        degs = tuple(m.bit_count() for m in self.masks)
        assert sum(degs) == 2 * self.e
        return degs

    def degree(self, v: int) -> int:
        return self.degrees[v - 1]

    def neighbors(self, v: int) -> list[int]:
        m = self.masks[v - 1]
        return [u + 1 for u in range(self.n) if m >> u & 1]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u - 1] >> (v - 1) & 1)

    @cached_property
    def code(self) -> int:
        p = self.n * (self.n - 1) // 2
        c = 0
        for u, v in self.edges:
            c |= 1 << (p - 1 - pair_index(u - 1, v - 1))
        return c

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    # -- derived graphs ------------------------------------------------

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Apply ``perm`` (a sequence with perm[v-1] = image of v, 1-based)."""
        return Graph(self.n, frozenset((perm[u - 1], perm[v - 1]) for u, v in self.edges))

    def add_edge(self, u: int, v: int) -> "Graph":
        if self.has_edge(u, v):
            raise GraphError(f"edge ({u}, {v}) already present")
        return Graph(self.n, self.edges | {(min(u, v), max(u, v))})

    def remove_edge(self, u: int, v: int) -> "Graph":
        return Graph(self.n, self.edges - {(min(u, v), max(u, v))})

    def remove_vertex(self, v: int) -> "Graph":
        keep = [u for u in range(1, self.n + 1) if u != v]
        return induced_subgraph(self, keep)

    def contract(self, u: int, v: int) -> "Graph":
        """Contract edge uv; the merged vertex takes the smaller label, the rest shift down."""
        if not self.has_edge(u, v):
            raise GraphError(f"({u}, {v}) is not an edge")
        a, b = min(u, v), max(u, v)

        def f(x):
            if x == b:
                x = a
            return x - 1 if x > b else x

        edges = {(min(f(x), f(y)), max(f(x), f(y))) for x, y in self.edges if {x, y} != {a, b}}
        return Graph(self.n - 1, frozenset(edges))

    def disjoint_union(self, other: "Graph") -> "Graph":
        k = self.n
        return Graph(k + other.n, self.edges | {(u + k, v + k) for u, v in other.edges})

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.sorted_edges()})"


@dataclass(frozen=True)
class UnlabelledGraph:
    """Isomorphism class, represented by its lexicographically least relabelling."""

    canonical: Graph

    @property
    def n(self) -> int:
        return self.canonical.n

    @property
    def e(self) -> int:
        return self.canonical.e

    @property
    def code(self) -> int:
        return self.canonical.code

    def __repr__(self):
        from .graph6 import write_graph6

        return f"UnlabelledGraph({write_graph6(self.canonical)!r})"


@dataclass(frozen=True)
class FragmentReport:
    giant: frozenset
    fragment: UnlabelledGraph
    frag: int
    kappa: int


# ---------------------------------------------------------------------------
# components, degrees, fragment


def _mask_components(n: int, masks: Sequence[int]) -> list[int]:
    """Connected components as 0-based vertex bitmasks, ordered by least vertex."""
    seen = 0
    comps = []
    for s in range(n):
        if seen >> s & 1:
            continue
        comp = frontier = 1 << s
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= masks[low.bit_length() - 1]
                f ^= low
            frontier = nxt & ~comp
            comp |= frontier
        seen |= comp
        comps.append(comp)
    return comps


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def components(g: Graph) -> list[frozenset]:
    """Partition of {1..n} into the vertex sets of connected components."""
    return [frozenset(v + 1 for v in _bits(c)) for c in _mask_components(g.n, g.masks)]


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(_mask_components(g.n, g.masks)) == 1


def fragment_report(g: Graph) -> FragmentReport:
    if g.n == 0:
        raise GraphError("empty graph has no largest component")
    comps = [sorted(c) for c in components(g)]
    biggest = max(len(c) for c in comps)
    # components come out ordered by least vertex, so the first maximal one
    # is the lexicographically least sorted vertex list among the maximal ones
    giant = next(c for c in comps if len(c) == biggest)
    rest = [v for v in range(1, g.n + 1) if v not in set(giant)]
    frag = canonical_form(induced_subgraph(g, rest)) if len(rest) <= CANON_CAP else None
    return FragmentReport(frozenset(giant), frag, len(rest), len(comps))


def leaves(g: Graph) -> int:
    return sum(1 for d in g.degrees if d == 1)


def max_degree(g: Graph) -> int:
    return max(g.degrees, default=0)


def induced_subgraph(g: Graph, w: Iterable[int]) -> Graph:
    """G[W], relabelled order-preservingly onto {1..|W|}."""
    ws = sorted(set(w))
    if ws and (ws[0] < 1 or ws[-1] > g.n):
        raise GraphError(f"vertex set {ws} is not a subset of 1..{g.n}")
    pos = {v: i + 1 for i, v in enumerate(ws)}
    return Graph(len(ws), frozenset((pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos))


def pendant_appearances(g: Graph, h: UnlabelledGraph | Graph) -> int:
    """Number of vertex sets W with G[W] isomorphic to H and exactly one edge leaving W."""
    hg = h.canonical if isinstance(h, UnlabelledGraph) else h
    if hg.n == 0 or not is_connected(hg):
        raise GraphError("pattern must be connected")
    k = hg.n
    if k >= g.n:
        return 0
    target = canonical_code(hg)
    masks = g.masks
    count = 0
    for w in combinations(range(g.n), k):
        wm = 0
        for v in w:
            wm |= 1 << v
        inside = 0
        leaving = 0
        for v in w:
            inside += (masks[v] & wm).bit_count()
            leaving += (masks[v] & ~wm).bit_count()
            if leaving > 1:
                break
        if leaving != 1 or inside // 2 != hg.e:
            continue
        sub = induced_subgraph(g, [v + 1 for v in w])
        if canonical_code(sub) == target:
            count += 1
    return count


# ---------------------------------------------------------------------------
# canonical form and automorphisms


def _twin_classes(n: int, masks: Sequence[int]) -> list[int]:
    """rep[v] = least u that is a twin of v (N(u) - {v} == N(v) - {u})."""
    rep = list(range(n))
    for v in range(n):
        for u in range(v):
            if rep[u] == u and (masks[u] & ~(1 << v)) == (masks[v] & ~(1 << u)):
                rep[v] = u
                break
    return rep


def _canonical_order(n: int, masks: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Lexicographically least graph6 code over all relabellings, and one labelling attaining it.

    Column j of the graph6 string depends only on which vertices occupy new
    positions 0..j, so the least string is found level by level, keeping every
    partial labelling whose prefix is minimal. Twins are interchangeable by an
    automorphism fixing everything else, so only one twin per class is tried.
    """
    if n == 0:
        return 0, ()
    twin = _twin_classes(n, masks)
    # partial labelling -> column signature of each unplaced vertex
    partials = [((), {v: 0 for v in range(n)})]
    code = 0
    for j in range(n):
        best = None
        nxt = []
        for placed, sig in partials:
            tried = set()
            for c, col in sig.items():
                t = twin[c]
                if t in tried:
                    continue
                tried.add(t)
                if best is None or col < best:
                    best = col
                    nxt = [(placed, sig, c)]
                elif col == best:
                    nxt.append((placed, sig, c))
        code = (code << j) | best
        partials = []
        for placed, sig, c in nxt:
            mc = masks[c]
            partials.append((placed + (c,), {u: (s << 1) | (mc >> u & 1) for u, s in sig.items() if u != c}))
    return code, partials[0][0]


def canonical_code(g: Graph) -> int:
    if g.n > CANON_CAP:
        raise CapExceeded(f"canonicalization cap exceeded (n={g.n} > {CANON_CAP})")
    return _canonical_order(g.n, g.masks)[0]


def canonical_form(g: Graph) -> UnlabelledGraph:
    """Canonical representative; exhaustive over relabellings (with twin pruning), n <= 10."""
    return UnlabelledGraph(Graph.from_code(g.n, canonical_code(g)))


def canonical_relabelling(g: Graph) -> tuple[int, ...]:
    """perm (1-based, perm[v-1] = new label of v) with g.relabel(perm) canonical."""
    if g.n > CANON_CAP:
        raise CapExceeded(f"canonicalization cap exceeded (n={g.n} > {CANON_CAP})")
    _, order = _canonical_order(g.n, g.masks)
    perm = [0] * g.n
    for new, old in enumerate(order):
        perm[old] = new + 1
    return tuple(perm)


def _extends_to_automorphism(n, masks, degs, fixed: dict[int, int]) -> bool:
    """Is there an automorphism agreeing with the partial map ``fixed``?"""
    order = list(fixed) + [v for v in range(n) if v not in fixed]
    image = dict(fixed)
    for v, w in fixed.items():
        if degs[v] != degs[w]:
            return False
    for a in fixed:
        for b in fixed:
            if (masks[a] >> b & 1) != (masks[fixed[a]] >> fixed[b] & 1):
                return False
    used = set(image.values())
    k0 = len(fixed)

    def rec(k):
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if w in used or degs[w] != degs[v]:
                continue
            ok = True
            for i in range(k):
                a = order[i]
                if (masks[v] >> a & 1) != (masks[w] >> image[a] & 1):
                    ok = False
                    break
            if ok:
                image[v] = w
                used.add(w)
                if rec(k + 1):
                    return True
                used.discard(w)
                del image[v]
        return False

    return rec(k0)


def aut_count(g: Graph) -> int:
    """|Aut(G)| via the orbit-stabilizer chain of a pointwise stabilizer tower."""
    if g.n > CANON_CAP:
        raise CapExceeded(f"canonicalization cap exceeded (n={g.n} > {CANON_CAP})")
    n, masks, degs = g.n, g.masks, g.degrees
    fixed: dict[int, int] = {}
    total = 1
    for v in range(n):
        orbit = 1
        for w in range(n):
            if w == v or w in fixed or degs[w] != degs[v]:
                continue
            trial = dict(fixed)
            trial[v] = w
            if _extends_to_automorphism(n, masks, degs, trial):
                orbit += 1
        total *= orbit
        fixed[v] = v
    return total


def isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or a.e != b.e or sorted(a.degrees) != sorted(b.degrees):
        return False
    return canonical_code(a) == canonical_code(b)


# ---------------------------------------------------------------------------
# minors


def one_step_minors(g: Graph) -> Iterator[Graph]:
    """Graphs obtained by deleting one vertex, deleting one edge, or contracting one edge."""
    for v in range(1, g.n + 1):
        yield g.remove_vertex(v)
    for u, v in g.sorted_edges():
        yield g.remove_edge(u, v)
        yield g.contract(u, v)


def is_minor(h: Graph, g: Graph) -> bool:
    """Decide whether h is a minor of g by memoized delete/contract recursion."""
    if g.n > MINOR_CAP:
        raise CapExceeded(f"minor cap exceeded (n={g.n} > {MINOR_CAP})")
    if h.n > g.n or h.e > g.e:
        return False
    if h.n == 0:
        return True
    target = canonical_code(h)
    hdeg = sorted(h.degrees, reverse=True)
    seen: set[tuple[int, int]] = set()

    def search(x: Graph) -> bool:
        key = (x.n, canonical_code(x))
        if key in seen:
            return False
        seen.add(key)
        if x.n == h.n:
            if x.e == h.e:
                return key[1] == target
            # only edge deletions keep the order; degrees can only drop
            if any(a < b for a, b in zip(sorted(x.degrees, reverse=True), hdeg)):
                return False
            return any(search(x.remove_edge(u, v)) for u, v in x.sorted_edges())
        if x.e < h.e:
            return False
        return any(search(y) for y in one_step_minors(x))

    return search(g)
