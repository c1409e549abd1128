"""Random generation: uniform class members, G(n, p), Boltzmann Poisson planar graphs, discrete laws.

Every draw takes a :class:`Seed`; replicate ``i`` of a batch uses ``seed.split(i)``
(or, for the vectorized batch paths, fixed-size chunks use ``seed.split(chunk)``),
so results never depend on how many worker threads run the batch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .catalog import TABLE_CAP, ClassSpec, class_profiles, host_table, member, member_codes
from .graph import CapExceeded, Graph, UnlabelledGraph, canonical_form, pair_list

RHO_PLANAR = 0.0367284
LAMBDA_PLANAR = 0.037439
CHUNK = 4096


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class Seed:
    value: int
    path: tuple = ()

    def __post_init__(self):
        if not 0 <= int(self.value) < 2**64:
            raise SamplerError("seed must be a 64-bit unsigned value")

    def split(self, index: int) -> "Seed":
        return Seed(self.value, self.path + (int(index),))

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.value, spawn_key=self.path)
        return np.random.Generator(np.random.PCG64(ss))


def _rng(seed: Seed | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else seed.generator()


# ---------------------------------------------------------------------------
# discrete laws


def poisson(mean: float, seed) -> int:
    """Poisson draw by inversion (sequential search on the pmf recurrence)."""
    if not mean >= 0 or math.isinf(mean):
        raise SamplerError(f"invalid Poisson mean {mean!r}")
    if mean == 0:
        return 0
    if mean > 500:
        raise SamplerError("inversion sampling supports means up to 500")
    u = _rng(seed).random()
    k = 0
    p = math.exp(-mean)
    cdf = p
    while u > cdf:
        k += 1
        p *= mean / k
        cdf += p
        if p == 0.0 and cdf < u:  # rounding floor; the remaining mass is below float resolution
            break
    return k


def binomial(k: int, p: float, seed) -> int:
    if k < 0 or not 0 <= p <= 1:
        raise SamplerError(f"invalid binomial parameters ({k}, {p})")
    return int((_rng(seed).random(k) < p).sum())


@dataclass(frozen=True)
class Binomial:
    k: int
    p: Fraction = Fraction(1, 2)


@dataclass(frozen=True)
class Poisson:
    mean: Fraction | float
    shift: int = 0
    tail: float = 1e-12


@dataclass(frozen=True)
class PMF:
    table: dict          # value -> probability (Fraction for binomial; mpmath-backed float otherwise)
    tail_mass: float = 0.0   # probability of values beyond the table

    def cdf(self, t: int):
        return sum((p for x, p in self.table.items() if x <= t), start=type(next(iter(self.table.values())))(0))


def exact_pmf(law) -> PMF:
    """Binomial laws exactly (rationals); Poisson laws tail-truncated with the dropped mass declared."""
    if isinstance(law, Binomial):
        if law.k < 0 or not 0 <= law.p <= 1:
            raise SamplerError("invalid binomial law")
        p = Fraction(law.p)
        return PMF({i: math.comb(law.k, i) * p**i * (1 - p) ** (law.k - i) for i in range(law.k + 1)}, 0.0)
    if isinstance(law, Poisson):
        import mpmath

        if law.mean < 0:
            raise SamplerError("invalid Poisson mean")
        with mpmath.workdps(40):
            m = mpmath.mpf(law.mean.numerator) / law.mean.denominator if isinstance(law.mean, Fraction) \
                else mpmath.mpf(law.mean)
            term = mpmath.exp(-m)
            acc = mpmath.mpf(0)
            table = {}
            i = 0
            while True:
                table[law.shift + i] = term
                acc += term
                if 1 - acc < law.tail:
                    break
                i += 1
                term = term * m / i
            tail = float(1 - acc)
        return PMF(table, max(tail, 0.0))
    raise SamplerError(f"unknown law {law!r}")


# ---------------------------------------------------------------------------
# graphs


def gnp(n: int, p: float, seed) -> Graph:
    if n < 0 or not 0 <= p <= 1:
        raise SamplerError(f"invalid G(n, p) parameters ({n}, {p})")
    pairs = pair_list(n)
    coins = _rng(seed).random(len(pairs)) < p
    return Graph(n, frozenset((i + 1, j + 1) for (i, j), c in zip(pairs, coins) if c))


class RejectionExhausted(SamplerError):
    def __init__(self, tries: int, accepted: int = 0):
        super().__init__(f"rejection sampling gave up after {tries} hosts (observed acceptance rate {accepted}/{tries})")
        self.tries = tries


def uniform_from_class(n: int, spec: ClassSpec, seed, mode: str = "auto", max_tries: int = 100_000) -> Graph:
    """Uniform member of the class on [n].

    ``mode="enumerate"`` indexes the exact member list (n <= 7);
    ``mode="reject"`` draws G(n, 1/2) hosts until one is a member (plain closure only).
    """
    if n < 1:
        raise SamplerError("n must be positive")
    if mode == "auto":
        mode = "enumerate" if n <= TABLE_CAP else "reject"
    rng = _rng(seed)
    if mode == "enumerate":
        codes = member_codes(n, spec)
        if len(codes) == 0:
            raise SamplerError("empty class")
        return Graph.from_code(n, int(codes[rng.integers(len(codes))]))
    if mode != "reject":
        raise SamplerError(f"unknown sampling mode {mode!r}")
    if spec.closure != "plain":
        raise SamplerError("rejection sampling is only offered for plain closure")
    for t in range(1, max_tries + 1):
        g = gnp(n, 0.5, rng)
        if member(g, spec):
            return g
    raise RejectionExhausted(max_tries)


class UniformSampler:
    """Repeated uniform draws from one enumerable class (member list built once)."""

    def __init__(self, n: int, spec: ClassSpec):
        self.n = n
        self.spec = spec
        self.codes = member_codes(n, spec)
        if len(self.codes) == 0:
            raise SamplerError("empty class")

    def draw_codes(self, reps: int, seed: Seed) -> np.ndarray:
        out = []
        for chunk, start in enumerate(range(0, reps, CHUNK)):
            k = min(CHUNK, reps - start)
            out.append(self.codes[seed.split(chunk).generator().integers(len(self.codes), size=k)])
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)


# ---------------------------------------------------------------------------
# Boltzmann Poisson random planar graph


@dataclass(frozen=True)
class BPModel:
    rho: float
    cap: int
    graphs: tuple          # canonical connected planar graphs, by order then code
    weights: tuple         # mu(H) = rho^v(H) / aut(H)
    lambda_trunc: float
    tail_estimate: float   # geometric estimate of the mass left out beyond cap

    @classmethod
    def build(cls, rho: float = RHO_PLANAR, cap: int = 7) -> "BPModel":
        if cap < 1:
            raise SamplerError("cap must be at least 1")
        if cap > TABLE_CAP:
            raise CapExceeded(f"BP table cap exceeded (cap={cap} > {TABLE_CAP})")
        if not rho > 0:
            raise SamplerError("rho must be positive")
        graphs, weights = [], []
        level_mass = []
        for v in range(1, cap + 1):
            t = host_table(v)
            o, _ = class_profiles(v)
            mass = 0.0
            for c in range(t.classes):
                if t.connected[c] and o[c] == 0:
                    graphs.append(t.graph(c))
                    w = rho**v / t.aut(c)
                    weights.append(w)
                    mass += w
            level_mass.append(mass)
        lam = math.fsum(weights)
        tail = 0.0
        if len(level_mass) >= 2 and level_mass[-2] > 0:
            r = level_mass[-1] / level_mass[-2]
            tail = level_mass[-1] * r / (1 - r) if r < 1 else math.inf
        return cls(rho, cap, tuple(graphs), tuple(weights), lam, tail)

    def index_of(self, h: Graph | UnlabelledGraph) -> int:
        g = h.canonical if isinstance(h, UnlabelledGraph) else canonical_form(h).canonical
        for i, x in enumerate(self.graphs):
            if x == g:
                return i
        raise KeyError("graph not in the model table")


@dataclass(frozen=True)
class BPSample:
    """Multiset of components: counts[i] copies of model.graphs[i]."""

    counts: tuple
    model: BPModel = field(repr=False, compare=False)

    @property
    def is_empty(self) -> bool:
        return not any(self.counts)

    def __repr__(self):
        parts = [f"{k}x{self.model.graphs[i].n}v{self.model.graphs[i].e}e" for i, k in enumerate(self.counts) if k]
        return f"BPSample({', '.join(parts) or 'empty'})"

    def graph(self) -> Graph:
        g = Graph.empty(0)
        for i, k in enumerate(self.counts):
            for _ in range(k):
                g = g.disjoint_union(self.model.graphs[i])
        return g

    def unlabelled(self) -> UnlabelledGraph:
        return canonical_form(self.graph())


def _bp_counts(model: BPModel, rng: np.random.Generator, size: int) -> np.ndarray:
    """(size, len(table)) component counts.

    Independent Po(mu_i) counts have the same joint law as a Po(sum mu) total
    split multinomially with probabilities mu_i / sum mu; the total is drawn by
    inversion and each component's type by a categorical draw.
    """
    w = np.array(model.weights)
    lam = model.lambda_trunc
    k = len(w)
    # Poisson(lam) cdf table until the remaining mass is negligible
    pm = [math.exp(-lam)]
    cdf = [pm[0]]
    while 1 - cdf[-1] > 1e-17 and len(pm) < 200:
        pm.append(pm[-1] * lam / len(pm))
        cdf.append(cdf[-1] + pm[-1])
    totals = np.searchsorted(np.array(cdf), rng.random(size), side="left")
    out = np.zeros((size, k), dtype=np.int64)
    nz = np.flatnonzero(totals)
    if len(nz):
        cat = np.cumsum(w / w.sum())
        cat[-1] = 1.0
        m = int(totals[nz].sum())
        kinds = np.searchsorted(cat, rng.random(m), side="right")
        rows = np.repeat(nz, totals[nz])
        np.add.at(out, (rows, kinds), 1)
    return out


def bp_planar(model: BPModel, seed) -> BPSample:
    row = _bp_counts(model, _rng(seed), 1)[0]
    return BPSample(tuple(int(x) for x in row), model)


def bp_planar_batch(model: BPModel, reps: int, seed: Seed) -> np.ndarray:
    """Component-count matrix for ``reps`` independent draws (chunked, thread-count independent)."""
    parts = []
    for chunk, start in enumerate(range(0, reps, CHUNK)):
        parts.append(_bp_counts(model, seed.split(chunk).generator(), min(CHUNK, reps - start)))
    return np.concatenate(parts) if parts else np.zeros((0, len(model.weights)), dtype=np.int64)
