"""Unlabelled graph census by vertex augmentation.

Each graph on n vertices is built from one on n-1 vertices by adding a vertex
of minimum degree; duplicates are removed with nauty certificates (via
pynauty). Only used where the in-house canonical form is too slow (n = 8, 9).
"""

from __future__ import annotations

from functools import lru_cache

import pynauty

from . import cache as cache_mod
from .graph import CapExceeded, Graph, _mask_components

CENSUS_CAP = 9


def _certificate(n: int, masks: tuple[int, ...]) -> bytes:
    adj = {v: [u for u in range(v + 1, n) if masks[v] >> u & 1] for v in range(n)}
    return pynauty.certificate(pynauty.Graph(n, adjacency_dict=adj))


def _extensions(n: int, masks: tuple[int, ...]):
    """Graphs on n+1 vertices whose new vertex n has minimum degree."""
    degs = [bin(m).count("1") for m in masks]
    new_bit = 1 << n
    for s in range(1 << n):
        k = bin(s).count("1")
        if any(k > degs[i] + (s >> i & 1) for i in range(n)):
            continue
        out = [m | new_bit if s >> i & 1 else m for i, m in enumerate(masks)]
        out.append(s)
        yield tuple(out)


@lru_cache(maxsize=None)
def _level(n: int) -> tuple[tuple[int, ...], ...]:
    """One adjacency-mask tuple per isomorphism class on n vertices."""
    if n > CENSUS_CAP:
        raise CapExceeded(f"census cap exceeded (n={n} > {CENSUS_CAP})")
    if n == 0:
        return ((),)
    if n == 1:
        return ((0,),)
    seen = set()
    out = []
    for h in _level(n - 1):
        for g in _extensions(n - 1, h):
            c = _certificate(n, g)
            if c not in seen:
                seen.add(c)
                out.append(g)
    return tuple(out)


def unlabelled_graphs(n: int) -> list[Graph]:
    """One labelled representative per isomorphism class on n vertices (not canonical)."""
    return [Graph.from_masks(m) for m in _level(n)]


def census_counts(n: int) -> tuple[int, int]:
    """(number of unlabelled graphs, number of connected ones) on n vertices."""
    if n < 1:
        raise ValueError("census needs n >= 1")
    c = cache_mod.get_cache()
    key = {"n": n, "what": "unlabelled-census"}
    hit = c.get("census", key)
    if hit is not None:
        return int(hit["all"]), int(hit["connected"])
    lvl = _level(n)
    conn = sum(1 for m in lvl if len(_mask_components(n, m)) == 1)
    c.put("census", key, {"all": len(lvl), "connected": conn})
    return len(lvl), conn


def _hist(values) -> dict:
    out: dict[str, int] = {}
    for v in sorted(values):
        out[str(v)] = out.get(str(v), 0) + 1
    return out


def genus_census(n_max: int, threads: int | None = None, long: bool = False) -> list[dict]:
    """Per n: unlabelled and connected counts, plus histograms of orientable and
    non-orientable (convention) Euler genus over the unlabelled graphs.

    Histograms come from the host tables up to their cap; n = 8 needs ``long``
    (a genus search per graph); beyond that only counts are produced.
    """
    from .catalog import TABLE_CAP, class_profiles, graph_profile, host_table, ordered_map

    if not 1 <= n_max <= CENSUS_CAP:
        raise CapExceeded(f"census cap exceeded (n={n_max}, allowed 1..{CENSUS_CAP})")
    rows = []
    for n in range(1, n_max + 1):
        u, c = census_counts(n)
        row = {"schema": 1, "tag": "exact", "n": n, "unlabelled": u, "connected": c}
        if n <= TABLE_CAP:
            t = host_table(n)
            if t.classes != u:
                raise AssertionError(f"host table and census disagree at n={n}: {t.classes} vs {u}")
            o, nn = class_profiles(n, threads)
            row["orientable"] = _hist(o.tolist())
            row["nonorientable"] = _hist(nn.tolist())
        elif n == TABLE_CAP + 1 and long:
            profs = ordered_map(graph_profile, unlabelled_graphs(n), threads)
            row["orientable"] = _hist(p.orientable for p in profs)
            row["nonorientable"] = _hist(p.nonorientable for p in profs)
        rows.append(row)
    return rows
