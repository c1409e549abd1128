import math
from fractions import Fraction

import pytest
from hypothesis import given, settings

from genuslab.catalog import (
    ClassError,
    ClassSpec,
    GenusFunction,
    bridge_addable,
    count,
    count_connected,
    enumerate_class,
    export_csv,
    fsgr,
    graph_profile,
    growth_ratios,
    member,
    member_codes,
    radius_proxy,
    table_member,
)
from genuslab.graph import CapExceeded, Graph, UnlabelledGraph, aut_count, induced_subgraph

from .strategies import graphs

PLANAR = ClassSpec.planar()


def spec(variant="E", closure="plain", g="const:0", labelled=True):
    return ClassSpec(variant, closure, labelled, GenusFunction.parse(g))


def test_member_examples():
    k4, k5 = Graph.complete(4), Graph.complete(5)
    assert member(k4, PLANAR)
    assert member(k5, spec("OE", g="const:2"))
    assert not member(k5, spec("OE", g="const:1"))
    assert member(k5, spec("OE", "hereditary", "table:0,0,0,0,2"))


def test_hereditary_member_matches_subset_check():
    k5 = Graph.complete(5)
    s = spec("OE", "hereditary", "table:0,0,0,0,2")
    assert all(member(induced_subgraph(k5, w), spec("OE", g="const:0"))
               for w in [(1, 2, 3, 4), (2, 3, 4, 5)])
    # K5 minus an edge on 5 vertices, but g(4) = 0 still admits every 4-subset
    assert member(k5.remove_edge(1, 2), s)
    assert not member(k5, spec("OE", "hereditary", "table:0,0,0,0,1"))


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 8), (4, 64), (5, 1023), (6, 32071)])
def test_planar_counts(n, expected):
    assert count(n, PLANAR).count == expected


def test_connected_planar_count():
    assert count_connected(4, PLANAR).count == 38


def test_enumerate_examples():
    assert len(list(enumerate_class(3, PLANAR))) == 8
    got = list(enumerate_class(5, PLANAR))
    assert len(got) == 1023
    assert Graph.complete(5) not in got
    assert [g.code for g in got] == sorted(g.code for g in got)
    assert len(list(enumerate_class(5, spec("OE", g="const:2")))) == 1024


def test_unlabelled_enumeration_consistent_with_labelled():
    for n in range(1, 7):
        total = sum(math.factorial(n) // aut_count(u.canonical)
                    for u in enumerate_class(n, spec(labelled=False)))
        assert total == count(n, PLANAR).count


def test_unlabelled_counts_small():
    # 11 unlabelled graphs on 4 vertices, all planar; 34 on 5, one of them K5
    assert count(4, spec(labelled=False)).count == 11
    assert count(5, spec(labelled=False)).count == 33
    assert all(isinstance(u, UnlabelledGraph) for u in enumerate_class(4, spec(labelled=False)))


def test_unlabelled_planar_beyond_table():
    assert count(8, spec(labelled=False)).count == 6966


def test_enumeration_cap():
    with pytest.raises(CapExceeded):
        list(enumerate_class(8, PLANAR))
    with pytest.raises(CapExceeded):
        count(10, spec(labelled=False))
    with pytest.raises(ClassError):
        count(0, PLANAR)


def test_fsgr_examples():
    assert fsgr(2, PLANAR) == 1
    assert fsgr(5, PLANAR) == Fraction(1023, 320)
    r = growth_ratios(4, PLANAR)
    assert r.vertex_step[0][0] == Fraction(1023, 64)
    assert r.fsgr == Fraction(64, 4 * 8)
    with pytest.raises(ClassError):
        fsgr(1, PLANAR)


def test_growth_ratio_genus_step():
    r = growth_ratios(5, PLANAR)
    ratio, flag = r.genus_step[0]
    assert ratio == Fraction(1024, 1023)
    assert flag == (ratio >= Fraction(25, 35))


def test_radius_proxy_examples():
    got = dict(radius_proxy(PLANAR, range(1, 6)))
    assert got[1] == pytest.approx(1.0)
    assert got[2] == pytest.approx(1.0)
    assert got[3] == pytest.approx((8 / 6) ** (1 / 3))
    assert got[5] == pytest.approx((1023 / 120) ** (1 / 5))
    everything = dict(radius_proxy(spec(g="ry"), range(1, 7)))
    assert all(everything[n] < everything[n + 1] for n in range(2, 6))


@given(graphs(1, 6))
@settings(max_examples=80)
def test_table_and_direct_membership_agree(g):
    for s in (PLANAR, spec("OE", g="const:1"), spec("NE", g="const:1"), spec("OE&NE", "hereditary", "const:2"),
              spec("E", "minor", "table:0,0,0,1,1,2")):
        assert member(g, s) == table_member(g, s)


@given(graphs(1, 6))
@settings(max_examples=40)
def test_variant_union_and_intersection(g):
    p = graph_profile(g)
    for h in range(0, 5):
        oe, ne = member(g, spec("OE", g=f"const:{h}")), member(g, spec("NE", g=f"const:{h}"))
        assert member(g, spec("E", g=f"const:{h}")) == (oe or ne)
        assert member(g, spec("OE&NE", g=f"const:{h}")) == (oe and ne)
        assert oe == (p.orientable <= h)


def test_closure_inclusions_by_enumeration():
    for n in range(1, 7):
        planar = set(member_codes(n, PLANAR).tolist())
        for g in ("const:1", "table:0,0,0,0,2,4", "ry"):
            plain = set(member_codes(n, spec(g=g)).tolist())
            hered = set(member_codes(n, spec(closure="hereditary", g=g)).tolist())
            minor = set(member_codes(n, spec(closure="minor", g=g)).tolist())
            assert planar <= minor <= hered <= plain


def test_planar_closures_coincide():
    for n in range(1, 7):
        base = member_codes(n, PLANAR).tolist()
        assert member_codes(n, spec(closure="hereditary")).tolist() == base
        assert member_codes(n, spec(closure="minor")).tolist() == base


@pytest.mark.parametrize("g", ["const:0", "const:2", "ry", "table:0,0,0,0,2,2"])
def test_bridge_addable(g):
    for n in range(2, 7):
        assert bridge_addable(n, spec(g=g))
        assert bridge_addable(n, spec(closure="hereditary", g=g))


def test_genus_function_parse_and_values():
    assert GenusFunction.parse("const:3")(10) == 3
    assert GenusFunction.parse("table:0,1,2").values(1, 3) == [0, 1, 2]
    assert GenusFunction.parse("pow:1,3/2").values(1, 4) == [1, 2, 5, 8]
    assert GenusFunction.parse("nlogn")(1) == 0
    assert GenusFunction.parse("nlogn")(10) == 4
    assert GenusFunction.parse("ry").values(1, 9) == [0, 0, 0, 0, 2, 2, 3, 4, 6]
    for bad in ("const:-1", "table:", "pow:1", "cubic", "ry:2"):
        with pytest.raises(ClassError):
            GenusFunction.parse(bad)
    with pytest.raises(ClassError):
        GenusFunction.parse("table:0,1")(3)


def test_monotonized():
    g = GenusFunction.parse("table:0,3,1,2,5")
    m = g.monotonized()
    assert not g.non_decreasing(1, 5)
    assert m.values(1, 5) == [0, 3, 3, 3, 5]
    assert m.non_decreasing(1, 5)
    assert m.monotonized() is m


def test_spec_aliases_and_fingerprint():
    a = ClassSpec("oe", "hered", True, GenusFunction.const(1))
    assert (a.variant, a.closure) == ("OE", "hereditary")
    assert a.fingerprint(5) == ClassSpec("OE", "hereditary", True, GenusFunction.const(1)).fingerprint(5)
    assert a.fingerprint(5) != a.fingerprint(6)
    with pytest.raises(ClassError):
        ClassSpec("XE", "plain", True, GenusFunction.const(0))
    with pytest.raises(ClassError):
        ClassSpec("E", "closed", True, GenusFunction.const(0))


def test_export_csv(tmp_path):
    path = tmp_path / "counts.csv"
    text = export_csv(PLANAR, range(1, 6), path)
    assert path.read_text() == text
    lines = text.splitlines()
    assert lines[0] == "n,count,connected_count,fsgr"
    assert lines[1] == "1,1,1,"
    assert lines[4] == "4,64,38,2"
    assert lines[5] == "5,1023,727,1023/320"


def test_counts_use_cache(tmp_cache):
    first = count(5, PLANAR)
    assert first.source == "enumerated"
    again = count(5, PLANAR)
    assert again.source == "cached"
    assert (again.count, again.histogram) == (first.count, first.histogram)


def test_corrupt_cache_entry_recomputed(tmp_cache):
    count(4, PLANAR)
    files = list(tmp_cache.root.rglob("*.json"))
    assert files
    for f in files:
        f.write_text(f.read_text().replace('"count":64', '"count":65'))
    c = count(4, PLANAR)
    assert (c.count, c.source) == (64, "enumerated")
    assert tmp_cache.warnings
