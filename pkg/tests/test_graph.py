import math
from itertools import permutations

import pytest
from hypothesis import given, strategies as st

from genuslab.graph import (
    CapExceeded,
    Graph,
    GraphError,
    aut_count,
    canonical_code,
    canonical_form,
    components,
    fragment_report,
    induced_subgraph,
    is_connected,
    is_minor,
    isomorphic,
    leaves,
    max_degree,
    pair_index,
    pendant_appearances,
)

from .strategies import graph_and_perm, graphs


def tri_plus_edge():
    return Graph(5, frozenset({(1, 2), (1, 3), (2, 3), (4, 5)}))


def test_graph_rejects_bad_edges():
    with pytest.raises(GraphError):
        Graph(3, frozenset({(1, 1)}))
    with pytest.raises(GraphError):
        Graph(3, frozenset({(1, 4)}))


def test_code_ordering_is_column_major():
    assert pair_index(0, 1) == 0
    assert pair_index(0, 2) == 1
    assert pair_index(1, 2) == 2
    # first pair is the most significant bit
    assert Graph(3, frozenset({(1, 2)})).code == 0b100
    assert Graph.complete(3).code == 0b111


@given(graphs(max_n=8))
def test_code_round_trip(g):
    assert Graph.from_code(g.n, g.code) == g
    assert Graph.from_masks(g.masks) == g
    assert sum(g.degrees) == 2 * g.e


def test_components_examples():
    assert components(tri_plus_edge()) == [frozenset({1, 2, 3}), frozenset({4, 5})]
    assert components(Graph.empty(3)) == [frozenset({1}), frozenset({2}), frozenset({3})]
    assert components(Graph.empty(0)) == []


def test_fragment_examples():
    r = fragment_report(tri_plus_edge())
    assert r.giant == frozenset({1, 2, 3})
    assert r.fragment.canonical == Graph.complete(2)
    assert (r.frag, r.kappa) == (2, 2)
    r = fragment_report(Graph.path(5))
    assert (r.frag, r.kappa) == (0, 1)
    r = fragment_report(Graph(4, frozenset({(1, 2), (3, 4)})))
    assert r.giant == frozenset({1, 2})
    assert r.fragment.canonical == Graph.complete(2)
    with pytest.raises(GraphError, match="empty graph"):
        fragment_report(Graph.empty(0))


@given(graphs(min_n=1, max_n=8))
def test_fragment_invariants(g):
    r = fragment_report(g)
    assert r.frag + len(r.giant) == g.n
    assert r.kappa >= 1
    assert (r.frag == 0) == is_connected(g)
    rest = [v for v in range(1, g.n + 1) if v not in r.giant]
    assert len(components(induced_subgraph(g, rest))) == r.kappa - 1


def test_leaves_and_max_degree():
    assert (leaves(Graph.path(3)), max_degree(Graph.path(3))) == (2, 2)
    assert (leaves(Graph.star(4)), max_degree(Graph.star(4))) == (4, 4)
    assert (leaves(Graph.complete(3)), max_degree(Graph.complete(3))) == (0, 2)
    assert max_degree(Graph.empty(0)) == 0


def test_pendant_examples():
    g = Graph.complete(3).disjoint_union(Graph.empty(1)).add_edge(3, 4)
    assert pendant_appearances(g, Graph.empty(1)) == 1
    assert pendant_appearances(g, Graph.complete(3)) == 1
    assert pendant_appearances(Graph.star(3), Graph.empty(1)) == 3
    with pytest.raises(GraphError, match="connected"):
        pendant_appearances(g, Graph.empty(2))
    assert pendant_appearances(g, Graph.complete(4)) == 0


@given(graph_and_perm(max_n=6))
def test_pendant_label_invariant(gp):
    g, perm = gp
    for h in (Graph.empty(1), Graph.complete(2), Graph.path(3)):
        assert pendant_appearances(g, h) == pendant_appearances(g.relabel(perm), h)


def test_aut_examples():
    assert aut_count(Graph.complete(3)) == 6
    assert aut_count(Graph.path(3)) == 2
    assert aut_count(Graph.empty(4)) == 24


@given(graph_and_perm(max_n=7))
def test_canonical_form_invariant(gp):
    g, perm = gp
    assert canonical_form(g) == canonical_form(g.relabel(perm))
    assert canonical_code(g) <= g.code


@pytest.mark.parametrize("n", range(1, 6))
def test_orbit_stabilizer_by_enumeration(n):
    p = n * (n - 1) // 2
    orbits = {}
    for code in range(1 << p):
        c = canonical_code(Graph.from_code(n, code))
        orbits[c] = orbits.get(c, 0) + 1
    for c, size in orbits.items():
        assert aut_count(Graph.from_code(n, c)) * size == math.factorial(n)


def test_isomorphism_matches_brute_force():
    gs = [Graph.from_code(4, c) for c in range(64)]
    for a in gs[:20]:
        for b in gs:
            brute = any(a.relabel(p) == b for p in permutations(range(1, 5)))
            assert isomorphic(a, b) == brute


def test_canonical_cap():
    with pytest.raises(CapExceeded, match="canonicalization cap exceeded"):
        canonical_form(Graph.empty(11))


def test_minor_examples():
    c5 = Graph.cycle(5)
    assert is_minor(Graph.complete(3), c5)
    assert not is_minor(Graph.complete(4), c5)
    assert is_minor(Graph.empty(1), Graph.path(2))
    assert is_minor(Graph.complete(4), Graph.complete(5))


def test_induced_subgraph_examples():
    assert induced_subgraph(Graph.complete(4), [1, 2, 4]) == Graph.complete(3)
    assert induced_subgraph(Graph.path(3), []) == Graph.empty(0)
    assert induced_subgraph(Graph.path(3), [1, 3]) == Graph.empty(2)
    with pytest.raises(GraphError):
        induced_subgraph(Graph.path(3), [4])


@given(st.integers(1, 6))
def test_contract_and_remove(n):
    k = Graph.complete(n)
    if n >= 2:
        assert k.contract(1, 2) == Graph.complete(n - 1)
    assert k.remove_vertex(1) == Graph.complete(n - 1)
