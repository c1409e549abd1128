import pytest

from genuslab.census import census_counts, genus_census, unlabelled_graphs
from genuslab.graph import CapExceeded, canonical_code, is_connected

# unlabelled graphs, connected unlabelled graphs, and planar unlabelled graphs on n vertices
GRAPHS = [1, 2, 4, 11, 34, 156, 1044, 12346]
CONNECTED = [1, 1, 2, 6, 21, 112, 853, 11117]
PLANAR = [1, 2, 4, 11, 33, 142, 822]


@pytest.mark.parametrize("n", range(1, 9))
def test_census_counts(n):
    assert census_counts(n) == (GRAPHS[n - 1], CONNECTED[n - 1])


def test_census_graphs_distinct_and_canonical():
    gs = unlabelled_graphs(6)
    codes = {canonical_code(g) for g in gs}
    assert len(codes) == len(gs) == 156
    assert sum(map(is_connected, gs)) == 112


def test_genus_census_histograms():
    rows = genus_census(7)
    for row in rows:
        n = row["n"]
        assert sum(row["orientable"].values()) == row["unlabelled"]
        assert sum(row["nonorientable"].values()) == row["unlabelled"]
        assert row["orientable"]["0"] == row["nonorientable"]["0"] == PLANAR[n - 1]
    assert rows[4]["orientable"] == {"0": 33, "2": 1}
    assert rows[4]["nonorientable"] == {"0": 33, "1": 1}
    # K7 is the only 7-vertex graph of non-orientable genus 3
    assert rows[6]["nonorientable"]["3"] == 1


def test_genus_census_counts_only_beyond_tables():
    row = genus_census(8)[-1]
    assert (row["unlabelled"], row["connected"]) == (12346, 11117)
    assert "orientable" not in row


def test_census_cap():
    with pytest.raises(CapExceeded):
        genus_census(10)
    with pytest.raises(CapExceeded):
        genus_census(0)
