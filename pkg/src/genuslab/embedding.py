"""Cellular embeddings as signed rotation systems, face tracing, and exact minimum Euler genus.

A scheme fixes, at every vertex, a cyclic order of its neighbours, and a sign
on every edge. Faces are traced by the usual rule: leave along a dart with a
local orientation, flip the orientation when crossing a -1 edge, and continue
with the rotation successor (or predecessor, when flipped) of the reversed
dart. A scheme is orientable iff it is equivalent under vertex flips to an
all-positive one.

Minimum genus is found per block (Euler genus is additive over blocks) by a
depth-first branch and bound that builds rotations one corner at a time while
tracing faces, so every partial state knows how many faces are already closed
and how many corners are left. That gives an admissible upper bound on the
final face count and hence a lower bound on the genus of every completion.
"""

from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator, Mapping, Sequence

import networkx as nx

from .graph import Graph, GraphError, CapExceeded, canonical_relabelling, components, induced_subgraph

ORIENTABLE = "orientable"
NONORIENTABLE = "nonorientable"
EITHER = "either"
MODES = (ORIENTABLE, NONORIENTABLE, EITHER)

GENUS_CAP = 8
DEFAULT_BUDGET = 3_000_000
# settle genus 0 with a planarity test before searching; off only to cross-check the search
PLANARITY_SHORTCUT = True


class SchemeError(GraphError):
    pass


class BudgetExhausted(RuntimeError):
    """A search hit its node budget; ``result`` carries the certified interval."""

    def __init__(self, result: "GenusResult"):
        super().__init__(f"search budget exhausted: Euler genus in [{result.lower}, {result.upper}]")
        self.result = result


@dataclass(frozen=True)
class EmbeddingScheme:
    """rotation[v] is the cyclic order of v's neighbours; signature maps (u, v), u < v, to +1/-1."""

    rotation: Mapping[int, tuple]
    signature: Mapping[tuple, int] = field(default_factory=dict)

    def sign(self, u: int, v: int) -> int:
        return self.signature.get((min(u, v), max(u, v)), 1)

    def to_json(self) -> dict:
        return {
            "rotation": {str(v): list(r) for v, r in sorted(self.rotation.items())},
            "signature": {f"{u}-{v}": s for (u, v), s in sorted(self.signature.items())},
        }

    @classmethod
    def from_json(cls, data: dict) -> "EmbeddingScheme":
        rot = {int(v): tuple(r) for v, r in data["rotation"].items()}
        sig = {}
        for k, s in data.get("signature", {}).items():
            u, v = (int(x) for x in k.split("-"))
            sig[(min(u, v), max(u, v))] = int(s)
        return cls(rot, sig)


@dataclass(frozen=True)
class FaceTrace:
    faces: tuple          # closed walks, each a tuple of darts (u, v)
    face_lengths: tuple
    component_faces: tuple  # per component (sorted vertex tuple, number of faces)

    @property
    def f(self) -> int:
        return len(self.faces)


@dataclass(frozen=True)
class SchemeGenus:
    euler_genus: int
    orientable: bool
    faces: int             # merged count, sum(f_i) - (kappa - 1)
    component_genus: tuple

    @property
    def orientability(self) -> str:
        return ORIENTABLE if self.orientable else NONORIENTABLE


@dataclass(frozen=True)
class GenusResult:
    mode: str
    euler_genus: int | None
    lower: int
    upper: int
    orientability: str | None
    witness: EmbeddingScheme | None
    certificate: str
    convention: bool = False
    geometric: int | None = None
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.euler_genus is not None

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "euler_genus": self.euler_genus,
            "lower": self.lower,
            "upper": self.upper,
            "tag": "exact" if self.exact else "bound",
            "orientability": self.orientability,
            "certificate": self.certificate,
            "convention": self.convention,
            "witness": self.witness.to_json() if self.witness is not None else None,
        }
        if self.mode == NONORIENTABLE:
            out["geometric"] = self.geometric
        return out


# ---------------------------------------------------------------------------
# scheme validation and face tracing


def _check_scheme(g: Graph, s: EmbeddingScheme) -> dict[int, dict[int, int]]:
    pos = {}
    for v in range(1, g.n + 1):
        rot = tuple(s.rotation.get(v, ()))
        nbrs = g.neighbors(v)
        if sorted(rot) != nbrs:
            raise SchemeError(f"rotation at vertex {v} is {list(rot)}, expected a cyclic order of {nbrs}")
        pos[v] = {u: i for i, u in enumerate(rot)}
    for (u, v), sgn in s.signature.items():
        if not g.has_edge(u, v):
            raise SchemeError(f"signature given for non-edge ({u}, {v})")
        if sgn not in (1, -1):
            raise SchemeError(f"signature of ({u}, {v}) must be +1 or -1, got {sgn}")
    return pos


def trace_faces(g: Graph, s: EmbeddingScheme) -> FaceTrace:
    """Facial walks of the embedding; isolated vertices contribute one empty walk each."""
    pos = _check_scheme(g, s)
    rot = {v: tuple(s.rotation.get(v, ())) for v in range(1, g.n + 1)}
    seen = set()
    faces = []
    comp_faces = []
    for comp in components(g):
        verts = sorted(comp)
        if len(verts) == 1 and not rot[verts[0]]:
            faces.append(())
            comp_faces.append((tuple(verts), 1))
            continue
        count = 0
        for v in verts:
            for u in rot[v]:
                for o in (1, -1):
                    start = ((v, u), o)
                    if start in seen:
                        continue
                    walk = []
                    cur = start
                    while True:
                        (a, b), ori = cur
                        seen.add(cur)
                        sg = s.sign(a, b)
                        # the same face traversed backwards
                        seen.add(((b, a), -ori * sg))
                        walk.append((a, b))
                        ori2 = ori * sg
                        r = rot[b]
                        nxt = r[(pos[b][a] + ori2) % len(r)]
                        cur = ((b, nxt), ori2)
                        if cur == start:
                            break
                        if cur in seen:
                            raise SchemeError("inconsistent face tracing")
                    faces.append(tuple(walk))
                    count += 1
        comp_faces.append((tuple(verts), count))
    lengths = tuple(len(w) for w in faces)
    return FaceTrace(tuple(faces), lengths, tuple(comp_faces))


def scheme_is_orientable(g: Graph, s: EmbeddingScheme) -> bool:
    """Flip vertices to make a spanning forest positive; orientable iff every edge is then positive."""
    flip = {}
    for comp in components(g):
        root = min(comp)
        flip[root] = 1
        stack = [root]
        while stack:
            v = stack.pop()
            for u in g.neighbors(v):
                if u not in flip:
                    flip[u] = flip[v] * s.sign(v, u)
                    stack.append(u)
    return all(flip[u] * s.sign(u, v) * flip[v] == 1 for u, v in g.edges)


def euler_genus_of_scheme(g: Graph, s: EmbeddingScheme) -> SchemeGenus:
    tr = trace_faces(g, s)
    comp_h = []
    total_faces = 0
    for verts, f in tr.component_faces:
        vs = set(verts)
        e = sum(1 for a, b in g.edges if a in vs)
        comp_h.append(2 - len(verts) + e - f)
        total_faces += f
    kappa = len(tr.component_faces)
    merged = total_faces - (kappa - 1) if kappa else 1
    return SchemeGenus(sum(comp_h), scheme_is_orientable(g, s), merged, tuple(comp_h))


# ---------------------------------------------------------------------------
# blocks


@dataclass(frozen=True)
class Block:
    vertices: frozenset
    edges: frozenset

    @property
    def is_bridge(self) -> bool:
        return len(self.edges) == 1


def block_decomposition(g: Graph) -> list[Block]:
    """Blocks (2-connected pieces and bridges); vertices without edges are omitted."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    blocks = []
    counter = 0
    for root in range(1, g.n + 1):
        if root in disc or g.degree(root) == 0:
            continue
        disc[root] = low[root] = counter
        counter += 1
        estack: list[tuple[int, int]] = []
        stack = [(root, 0, iter(g.neighbors(root)))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for u in it:
                if u == parent:
                    continue
                if u not in disc:
                    disc[u] = low[u] = counter
                    counter += 1
                    estack.append((v, u))
                    stack.append((u, v, iter(g.neighbors(u))))
                    advanced = True
                    break
                if disc[u] < disc[v]:
                    estack.append((v, u))
                    low[v] = min(low[v], disc[u])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    es = set()
                    while True:
                        a, b = estack.pop()
                        es.add((min(a, b), max(a, b)))
                        if (a, b) == (p, v):
                            break
                    verts = frozenset(x for e in es for x in e)
                    blocks.append(Block(verts, frozenset(es)))
    return blocks


# ---------------------------------------------------------------------------
# Euler-formula bounds


def _triangle_free(k: int, adj: Sequence[int]) -> bool:
    for v in range(k):
        m = adj[v]
        x = m
        while x:
            low = x & -x
            u = low.bit_length() - 1
            if adj[u] & m:
                return False
            x ^= low
    return True


def euler_lower_bound(v: int, e: int, mode: str, triangle_free: bool = False) -> int:
    """Least Euler genus allowed by Euler's formula for a connected graph with a cycle.

    Every face of a simple connected graph with at least two edges has length
    at least 3 (at least 4 when triangle-free), so f <= 2e/3 (2e/4).
    """
    girth = 4 if triangle_free else 3
    fmax = (2 * e) // girth
    h = max(0, 2 - v + e - fmax)
    if mode == ORIENTABLE and h % 2:
        h += 1
    if mode == NONORIENTABLE:
        h = max(h, 1)
    return h


def is_planar(g: Graph) -> bool:
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges)
    return nx.check_planarity(h)[0]


def ringel_youngs(n: int, mode: str = ORIENTABLE) -> int:
    """Euler genus of K_n (closed form, with the K_7 non-orientable exception)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n <= 4:
        return 0
    t = (n - 3) * (n - 4)
    o = 2 * (-(-t // 12))
    nn = 3 if n == 7 else -(-t // 6)
    if mode == ORIENTABLE:
        return o
    if mode == NONORIENTABLE:
        return nn
    return min(o, nn)


# ---------------------------------------------------------------------------
# branch and bound


class _Budget(Exception):
    pass


class _FaceSearch:
    """Corner-by-corner face tracing with branching on undetermined rotation arcs and edge signs.

    Vertices 0..k-1, connected, at least two edges. Dart 2i is edge i forwards
    (u -> v), dart 2i+1 backwards. A corner is an arc a -> b in the partial
    rotation at a vertex; each step of a facial walk creates exactly one new
    corner, so following an existing arc means the partial scheme is dead.
    """

    def __init__(self, k: int, edges: Sequence[tuple[int, int]], mode: str, budget: int | None):
        self.k = k
        self.m = m = len(edges)
        self.edges = list(edges)
        tail, head = [], []
        for u, v in edges:
            tail += [u, v]
            head += [v, u]
        self.tail, self.head = tail, head
        outs = [[] for _ in range(k)]
        for d in range(2 * m):
            outs[tail[d]].append(d)
        self.outs = outs
        self.deg = [len(o) for o in outs]
        adj = [0] * k
        for u, v in edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self.girth = 4 if _triangle_free(k, adj) else 3
        self.mode = mode
        self.budget = budget
        self.nodes = 0
        # spanning tree edges are normalized to +1
        tree = set()
        seen = {0}
        order = [0]
        for x in order:
            for d in outs[x]:
                y = head[d]
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    tree.add(d >> 1)
        if len(seen) != k:
            raise SchemeError("search graph must be connected")
        self.tree = tree

    def run(self, flo: int, fhi: int, prefer_close: bool = True):
        """Find a scheme whose face count lies in [flo, fhi]; None if none exists."""
        k, m = self.k, self.m
        tail, head, outs, deg = self.tail, self.head, self.outs, self.deg
        girth = self.girth
        mode = self.mode
        budget = self.budget
        total = 2 * m
        parity = None
        if mode == ORIENTABLE:
            parity = (m - k) % 2  # v - e + f even
        sign = [1 if (mode == ORIENTABLE or i in self.tree) else 0 for i in range(m)]
        succ = [-1] * total
        pred = [-1] * total
        start_of = list(range(total))
        end_of = list(range(total))
        plen = [1] * total
        st = {"T": 0, "F": 0, "d0": -1, "undecided": sign.count(0), "neg": 0}
        found = []

        def add_arc(a, b):
            s = start_of[a]
            if s == b:
                if plen[b] != deg[tail[a]]:
                    return None
                succ[a] = b
                pred[b] = a
                return (a, b, None)
            t = end_of[b]
            old = (end_of[s], start_of[t], plen[s])
            end_of[s] = t
            start_of[t] = s
            plen[s] += plen[b]
            succ[a] = b
            pred[b] = a
            return (a, b, (s, t, old))

        def undo(tok):
            a, b, rest = tok
            succ[a] = -1
            pred[b] = -1
            if rest is not None:
                s, t, (es, st_, pl) = rest
                end_of[s] = es
                start_of[t] = st_
                plen[s] = pl

        def ok_bounds(F, T, open_len):
            R = total - T
            if open_len is None:
                ub = F + R // girth
                lb = F + (1 if R else 0)
            else:
                need = max(1, girth - open_len)
                if R < need:
                    return False
                ub = F + 1 + (R - need) // girth
                lb = F + 1
            if parity is not None and ub % 2 != parity:
                ub -= 1
            return ub >= flo and lb <= fhi

        def next_face():
            if st["T"] == total:
                if mode == NONORIENTABLE and st["neg"] == 0:
                    return False
                F = st["F"]
                if flo <= F <= fhi:
                    found.append((list(succ), list(sign)))
                    return True
                return False
            d0 = pred.index(-1)
            saved = st["d0"]
            st["d0"] = d0
            r = walk(d0, 1, 0)
            st["d0"] = saved
            return r

        def walk(d, s, L):
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise _Budget
            e = d >> 1
            sg = sign[e]
            if sg == 0:
                choices = (-1, 1) if (mode == NONORIENTABLE and st["neg"] == 0) else (1, -1)
                st["undecided"] -= 1
                for c in choices:
                    sign[e] = c
                    if c < 0:
                        st["neg"] += 1
                    dead = mode == NONORIENTABLE and st["undecided"] == 0 and st["neg"] == 0
                    if not dead and walk(d, s, L):
                        sign[e] = 0
                        st["undecided"] += 1
                        if c < 0:
                            st["neg"] -= 1
                        return True
                    if c < 0:
                        st["neg"] -= 1
                sign[e] = 0
                st["undecided"] += 1
                return False
            s2 = s * sg
            u = head[d]
            a = d ^ 1
            d0 = st["d0"]
            v0 = tail[d0]
            if s2 > 0:
                if succ[a] != -1:
                    return False
                cands = [b for b in outs[u] if pred[b] == -1]
            else:
                if pred[a] != -1 or a == d0:
                    return False
                cands = [b for b in outs[u] if succ[b] == -1]
            if len(cands) > 1:
                closing = [b for b in cands if s2 > 0 and b == d0]
                near = [b for b in cands if b != d0 and head[b] == v0]
                rest = [b for b in cands if b != d0 and head[b] != v0]
                if s2 < 0 and d0 in cands:
                    rest.append(d0)
                cands = closing + near + rest if prefer_close else rest + near + closing
            for b in cands:
                tok = add_arc(a, b) if s2 > 0 else add_arc(b, a)
                if tok is None:
                    continue
                st["T"] += 1
                if s2 > 0 and b == d0:
                    st["F"] += 1
                    r = ok_bounds(st["F"], st["T"], None) and next_face()
                    st["F"] -= 1
                else:
                    r = ok_bounds(st["F"], st["T"], L + 1) and walk(b, s2, L + 1)
                st["T"] -= 1
                undo(tok)
                if r:
                    return True
            return False

        if not ok_bounds(0, 0, None):
            return None
        if next_face():
            return found[0]
        return None

    def scheme(self, state) -> tuple[dict[int, tuple], dict[tuple, int]]:
        succ, sign = state
        rot = {}
        for v in range(self.k):
            o = self.outs[v]
            cyc = [o[0]]
            x = succ[o[0]]
            while x != o[0]:
                cyc.append(x)
                x = succ[x]
            rot[v] = tuple(self.head[d] for d in cyc)
        sig = {}
        for i, (u, v) in enumerate(self.edges):
            if sign[i] == -1:
                sig[(min(u, v), max(u, v))] = -1
        return rot, sig


@dataclass(frozen=True)
class _PieceResult:
    lower: int
    upper: int | None         # None: no embedding of this orientability exists
    rotation: dict | None     # 1-based, canonical labels
    signature: dict | None
    certificate: str
    nodes: int


def _search_piece(g: Graph, mode: str, budget: int | None) -> _PieceResult:
    """Min Euler genus of a connected graph with at least two edges, for mode orientable/nonorientable."""
    k, e = g.n, g.e
    edges = [(u - 1, v - 1) for u, v in g.sorted_edges()]
    search = _FaceSearch(k, edges, mode, budget)
    lb = euler_lower_bound(k, e, mode, search.girth == 4)
    step = 2 if mode == ORIENTABLE else 1
    hmax = e - k + 1  # at least one face
    if mode == ORIENTABLE and hmax % 2:
        hmax -= 1

    def embed(state):
        rot, sig = search.scheme(state)
        return (
            {v + 1: tuple(x + 1 for x in r) for v, r in rot.items()},
            {(u + 1, v + 1): s for (u, v), s in sig.items()},
        )

    lb_euler = lb
    planar, pe = nx.check_planarity(nx.Graph(g.sorted_edges())) if PLANARITY_SHORTCUT else (None, None)
    if planar:
        shortcut = _planar_piece(g, pe, mode)
        if shortcut is not None:
            return shortcut
    elif planar is False and mode == ORIENTABLE:
        lb = max(lb, 2)

    best = None
    try:
        # a quick witness gives the upper end of any interval we might report
        first = search.run(1, 2 * e)
        if first is None:
            raise SchemeError("no cellular embedding found")
        h_first = 2 - k + e - _faces_of(search, first)
        best = (h_first, first)
        h = lb
        while h < best[0]:
            target_f = 2 - k + e - h
            st = search.run(target_f, 2 * e)
            if st is not None:
                best = (2 - k + e - _faces_of(search, st), st)
                break
            h += step
        if best[0] == lb_euler:
            cert = "euler-bound"
        else:
            cert = "planarity-test" if best[0] == lb else "exhausted-search"
        rot, sig = embed(best[1])
        return _PieceResult(best[0], best[0], rot, sig, cert, search.nodes)
    except _Budget:
        if best is None:
            return _PieceResult(lb, hmax, None, None, "budget-exhausted", search.nodes)
        rot, sig = embed(best[1])
        return _PieceResult(h, best[0], rot, sig, "budget-exhausted", search.nodes)


def _planar_piece(g: Graph, pe, mode: str) -> _PieceResult | None:
    """Witness from a planar embedding: genus 0, or 1 after twisting one edge.

    In a 2-connected plane graph every edge separates two distinct faces, so a
    single twisted edge merges them and gives a projective-planar embedding.
    """
    rot = {v: tuple(pe.neighbors_cw_order(v)) for v in range(1, g.n + 1)}
    sig = {} if mode == ORIENTABLE else {g.sorted_edges()[0]: -1}
    sg = euler_genus_of_scheme(g, EmbeddingScheme(rot, sig))
    want = 0 if mode == ORIENTABLE else 1
    if sg.euler_genus != want or sg.orientable != (mode == ORIENTABLE):
        return None  # fall back to the search
    return _PieceResult(want, want, rot, sig, "euler-bound", 0)


def _faces_of(search: _FaceSearch, state) -> int:
    rot, sig = search.scheme(state)
    g = Graph(search.k, frozenset((u + 1, v + 1) for u, v in search.edges))
    s = EmbeddingScheme({v + 1: tuple(x + 1 for x in r) for v, r in rot.items()},
                        {(u + 1, v + 1): x for (u, v), x in sig.items()})
    return trace_faces(g, s).f


_PIECE_CACHE: dict[tuple, _PieceResult] = {}


@contextmanager
def search_only():
    """Run genus computations without the planarity shortcut (and with a private block cache)."""
    global PLANARITY_SHORTCUT, _PIECE_CACHE
    saved = PLANARITY_SHORTCUT, _PIECE_CACHE
    PLANARITY_SHORTCUT, _PIECE_CACHE = False, {}
    try:
        yield
    finally:
        PLANARITY_SHORTCUT, _PIECE_CACHE = saved


def _piece(g: Graph, mode: str, budget: int | None) -> tuple[_PieceResult, tuple[int, ...]]:
    """Memoized by canonical form; returns the result and the relabelling into canonical labels."""
    perm = canonical_relabelling(g)
    cg = g.relabel(perm)
    key = (cg.n, cg.code, mode)
    res = _PIECE_CACHE.get(key)
    if res is None or (res.upper != res.lower and (budget is None or res.nodes < budget)):
        res = _search_piece(cg, mode, budget)
        _PIECE_CACHE[key] = res
    return res, perm


def _piece_in_original_labels(g: Graph, res: _PieceResult, perm) -> tuple[dict, dict]:
    inv = {new: old for old, new in enumerate(perm, start=1)}
    rot = {inv[v]: tuple(inv[x] for x in r) for v, r in res.rotation.items()}
    sig = {}
    for (a, b), s in res.signature.items():
        u, v = inv[a], inv[b]
        sig[(min(u, v), max(u, v))] = s
    return rot, sig


@dataclass
class _Part:
    """One block, in the labels of the host graph."""

    orient: _PieceResult
    nonor: _PieceResult | None
    o_rot: dict
    o_sig: dict
    n_rot: dict | None
    n_sig: dict | None


def _block_parts(g: Graph, modes: set, budget: int | None) -> list[_Part]:
    parts = []
    for blk in block_decomposition(g):
        if blk.is_bridge:
            continue
        verts = sorted(blk.vertices)
        loc = {v: i + 1 for i, v in enumerate(verts)}
        sub = Graph(len(verts), frozenset((loc[a], loc[b]) for a, b in blk.edges))
        back = {i: v for v, i in loc.items()}

        def lift(rot, sig):
            return (
                {back[v]: tuple(back[x] for x in r) for v, r in rot.items()},
                {(min(back[a], back[b]), max(back[a], back[b])): s for (a, b), s in sig.items()},
            )

        o, perm = _piece(sub, ORIENTABLE, budget)
        o_rot, o_sig = lift(*_piece_in_original_labels(sub, o, perm)) if o.rotation is not None else (None, None)
        nres = n_rot = n_sig = None
        if NONORIENTABLE in modes or EITHER in modes:
            nres, perm = _piece(sub, NONORIENTABLE, budget)
            if nres.rotation is not None:
                n_rot, n_sig = lift(*_piece_in_original_labels(sub, nres, perm))
        parts.append(_Part(o, nres, o_rot, o_sig, n_rot, n_sig))
    return parts


def _assemble(g: Graph, choices: list[tuple[dict, dict]]) -> EmbeddingScheme:
    """Glue block schemes at cut vertices by concatenating rotations; bridges are appended."""
    rot: dict[int, list] = {v: [] for v in range(1, g.n + 1)}
    sig: dict[tuple, int] = {}
    covered = set()
    for r, s in choices:
        for v, seq in r.items():
            rot[v].extend(seq)
        sig.update(s)
        for v, seq in r.items():
            for u in seq:
                covered.add((min(u, v), max(u, v)))
    for u, v in g.sorted_edges():
        if (u, v) not in covered:
            rot[u].append(v)
            rot[v].append(u)
    return EmbeddingScheme({v: tuple(r) for v, r in rot.items()}, {k: s for k, s in sig.items() if s == -1})


def min_euler_genus(g: Graph, mode: str = EITHER, *, budget: int | None = DEFAULT_BUDGET,
                    cap: int = GENUS_CAP, use_blocks: bool = True, strict: bool = False) -> GenusResult:
    """Least Euler genus of a surface (of the requested kind) into which g embeds.

    With ``mode="nonorientable"`` a planar graph gets the class convention
    value 0 (``convention=True``); ``geometric`` then holds the least Euler
    genus of a genuine non-orientable cellular embedding (1 if g has a cycle,
    None for forests). When the node budget runs out the result is an interval
    ``[lower, upper]`` with ``euler_genus=None``; ``strict=True`` raises
    :class:`BudgetExhausted` instead.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if g.n > cap:
        raise CapExceeded(f"genus cap exceeded (n={g.n} > {cap})")
    if use_blocks:
        parts = _block_parts(g, {mode}, budget)
    else:
        parts = _component_parts(g, mode, budget)
    nodes = sum(p.orient.nodes + (p.nonor.nodes if p.nonor else 0) for p in parts)
    res = _combine(g, parts, mode, nodes)
    if strict and not res.exact:
        raise BudgetExhausted(res)
    return res


def _component_parts(g: Graph, mode: str, budget: int | None) -> list[_Part]:
    """Like _block_parts but searching whole components (the block-additivity cross-check)."""
    parts = []
    for comp in components(g):
        verts = sorted(comp)
        sub = induced_subgraph(g, verts)
        if sub.e <= sub.n - 1:
            continue
        back = {i + 1: v for i, v in enumerate(verts)}
        key_modes = [ORIENTABLE] + ([NONORIENTABLE] if mode != ORIENTABLE else [])
        out = {}
        for md in key_modes:
            r = _search_piece(sub, md, budget)
            if r.rotation is not None:
                rot = {back[v]: tuple(back[x] for x in seq) for v, seq in r.rotation.items()}
                sig = {(min(back[a], back[b]), max(back[a], back[b])): s for (a, b), s in r.signature.items()}
            else:
                rot = sig = None
            out[md] = (r, rot, sig)
        o = out[ORIENTABLE]
        nn = out.get(NONORIENTABLE, (None, None, None))
        parts.append(_Part(o[0], nn[0], o[1], o[2], nn[1], nn[2]))
    return parts


def _combine(g: Graph, parts: list[_Part], mode: str, nodes: int) -> GenusResult:
    # bridges and trees contribute genus 0 and only orientable (trivial) embeddings
    o_lo = sum(p.orient.lower for p in parts)
    o_hi = sum(p.orient.upper for p in parts)
    o_exact = all(p.orient.lower == p.orient.upper for p in parts)
    certs = {p.orient.certificate for p in parts}
    planar = o_exact and o_hi == 0

    def cert_of(ps):
        cs = set(ps)
        if not parts:
            return "trivial"
        if "budget-exhausted" in cs:
            return "budget-exhausted"
        for c in ("exhausted-search", "planarity-test"):
            if c in cs:
                return c
        return "euler-bound"

    if mode == ORIENTABLE:
        w = _assemble(g, [(p.o_rot, p.o_sig) for p in parts]) if all(p.o_rot for p in parts) else None
        return GenusResult(mode, o_hi if o_exact else None, o_lo, o_hi, ORIENTABLE if w else None, w,
                           cert_of(certs), nodes=nodes)

    # per block: best genus either way, and the non-orientable one
    def e_bounds(p):
        n = p.nonor
        return min(p.orient.lower, n.lower), min(p.orient.upper, n.upper)

    if mode == EITHER:
        lo = sum(e_bounds(p)[0] for p in parts)
        hi = sum(e_bounds(p)[1] for p in parts)
        exact = lo == hi
        choice = []
        ori = ORIENTABLE
        for p in parts:
            if p.nonor.upper < p.orient.upper:
                choice.append((p.n_rot, p.n_sig))
                ori = NONORIENTABLE
            else:
                choice.append((p.o_rot, p.o_sig))
        w = _assemble(g, choice) if all(c[0] for c in choice) else None
        cs = certs | {p.nonor.certificate for p in parts}
        return GenusResult(mode, hi if exact else None, lo, hi, ori if w else None, w, cert_of(cs), nodes=nodes)

    # non-orientable: one block goes non-orientable, the rest take their best
    if not parts:
        w = _assemble(g, [])
        return GenusResult(mode, 0, 0, 0, ORIENTABLE, w, "trivial", convention=True, geometric=None, nodes=nodes)
    best_lo = best_hi = None
    best_choice = None
    for i, p in enumerate(parts):
        lo = p.nonor.lower + sum(e_bounds(q)[0] for j, q in enumerate(parts) if j != i)
        hi = p.nonor.upper + sum(e_bounds(q)[1] for j, q in enumerate(parts) if j != i)
        if best_lo is None or lo < best_lo:
            best_lo = lo
        if best_hi is None or hi < best_hi:
            best_hi = hi
            best_choice = i
    choice = []
    for j, q in enumerate(parts):
        if j == best_choice:
            choice.append((q.n_rot, q.n_sig))
        elif q.nonor.upper < q.orient.upper:
            choice.append((q.n_rot, q.n_sig))
        else:
            choice.append((q.o_rot, q.o_sig))
    w = _assemble(g, choice) if all(c[0] for c in choice) else None
    cs = certs | {p.nonor.certificate for p in parts}
    exact = best_lo == best_hi
    if planar:
        pw = _assemble(g, [(p.o_rot, p.o_sig) for p in parts])
        return GenusResult(mode, 0, 0, 0, ORIENTABLE, pw, cert_of(certs), convention=True,
                           geometric=best_hi if exact else None, nodes=nodes)
    return GenusResult(mode, best_hi if exact else None, best_lo, best_hi, NONORIENTABLE if w else None, w,
                       cert_of(cs), geometric=best_hi if exact else None, nodes=nodes)


# ---------------------------------------------------------------------------
# exhaustive scheme enumeration (small graphs)


def _component_scheme_space(sub: Graph, signed: bool) -> tuple[list, list, int]:
    rot_choices = []
    size = 1
    for v in range(1, sub.n + 1):
        nb = sub.neighbors(v)
        if len(nb) <= 2:
            opts = [tuple(nb)]
        else:
            opts = [(nb[0],) + p for p in permutations(nb[1:])]
        rot_choices.append(opts)
        size *= len(opts)
    free = []
    if signed:
        seen = {1}
        order = [1]
        tree = set()
        for x in order:
            for y in sub.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    tree.add((min(x, y), max(x, y)))
        free = [e for e in sub.sorted_edges() if e not in tree]
        size *= 2 ** len(free)
    return rot_choices, free, size


def iter_schemes(sub: Graph, signed: bool, limit: int | None = None) -> Iterator[EmbeddingScheme]:
    """All schemes of a connected graph up to vertex-flip equivalence (spanning tree kept positive)."""
    rot_choices, free, size = _component_scheme_space(sub, signed)
    if limit is not None and size > limit:
        raise CapExceeded(f"scheme space of size {size} exceeds limit {limit}")
    for rots in product(*rot_choices):
        rot = {v + 1: r for v, r in enumerate(rots)}
        if not free:
            yield EmbeddingScheme(rot, {})
            continue
        for signs in product((1, -1), repeat=len(free)):
            yield EmbeddingScheme(rot, {e: s for e, s in zip(free, signs) if s == -1})


@dataclass(frozen=True)
class FaceStats:
    min_faces: int
    max_faces: int
    max_face_size: int
    embeddings: int   # distinct (per-component) scheme combinations considered


def _component_profiles(sub: Graph, signed: bool, limit: int | None) -> set[tuple]:
    """Distinct (h, f, longest face, orientable) over all schemes of a connected graph."""
    if sub.e == 0:
        return {(0, 1, 0, True)}
    out = set()
    for s in iter_schemes(sub, signed, limit):
        tr = trace_faces(sub, s)
        h = 2 - sub.n + sub.e - tr.f
        out.add((h, tr.f, max(tr.face_lengths), scheme_is_orientable(sub, s)))
    return out


def relevant_face_stats(g: Graph, budget: int, variant: str, *, limit: int | None = 200_000,
                        cap: int = 7) -> FaceStats:
    """Extremes of face counts and face size over embeddings within an Euler-genus budget.

    ``variant`` is OE (orientable surfaces), NE (non-orientable; with budget 0
    the sphere, matching the convention that the budget-0 class is the planar
    class), or E / OE&NE (any surface). Face counts are merged across
    components; face sizes are per-component facial walk lengths.
    """
    if g.n > cap:
        raise CapExceeded(f"face-statistics cap exceeded (n={g.n} > {cap})")
    variant = variant.upper().replace("∩", "&")
    signed = variant != "OE"
    lowest = min_euler_genus(g, ORIENTABLE if variant == "OE" else (NONORIENTABLE if variant == "NE" else EITHER),
                             budget=None, cap=cap)
    if lowest.euler_genus > budget:
        raise SchemeError("not embeddable within budget")
    comps = [induced_subgraph(g, sorted(c)) for c in components(g)]
    profiles = [sorted(_component_profiles(c, signed, limit)) for c in comps]
    need_nonor = variant == "NE" and budget > 0
    if variant == "NE" and budget == 0:
        profiles = [[p for p in prof if p[3]] for prof in profiles]

    best = None
    count = 0
    # combine per-component options; the state is (h, faces so far, longest, any non-orientable)
    states = {(0, 0, 0, False)}
    for prof in profiles:
        nxt = set()
        for h, f, mx, nonor in states:
            for ph, pf, pm, por in prof:
                if h + ph <= budget:
                    nxt.add((h + ph, f + pf, max(mx, pm), nonor or not por))
        states = nxt
    kappa = len(comps)
    for h, f, mx, nonor in states:
        if need_nonor and not nonor:
            continue
        merged = f - (kappa - 1)
        count += 1
        if best is None:
            best = [merged, merged, mx]
        else:
            best = [min(best[0], merged), max(best[1], merged), max(best[2], mx)]
    if best is None:
        raise SchemeError("not embeddable within budget")
    return FaceStats(best[0], best[1], best[2], count)
