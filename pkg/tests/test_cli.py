import io
import json

import pytest

from genuslab import embedding
from genuslab.cli import EXIT_BUDGET, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from genuslab.graph6 import parse_graph6


def cli(*argv, cache_dir=None):
    out, err = io.StringIO(), io.StringIO()
    args = list(argv)
    if cache_dir is None and "--no-cache" not in args:
        args = ["--no-cache"] + args
    code = main(args, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("GENUSLAB_CACHE", str(tmp_path / "c"))
    return tmp_path / "c"


def test_genus_triangle():
    code, out, _ = cli("genus", "--graph6", "Bw", "--mode", "orientable")
    d = json.loads(out)
    assert code == EXIT_OK
    assert (d["euler_genus"], d["tag"], d["graph6"]) == (0, "exact", "Bw")
    assert "geometric" not in d


def test_genus_k5_modes():
    _, out, _ = cli("genus", "--graph6", "D~{", "--mode", "orientable")
    assert json.loads(out)["euler_genus"] == 2
    _, out, _ = cli("genus", "--graph6", "D~{", "--mode", "nonorientable")
    d = json.loads(out)
    assert (d["euler_genus"], d["geometric"], d["convention"]) == (1, 1, False)


def test_genus_budget_exhaustion_exit_code(monkeypatch):
    # an exact answer memoized earlier in the process would bypass the budget
    monkeypatch.setattr(embedding, "_PIECE_CACHE", {})
    code, out, _ = cli("genus", "--graph6", "F~~~w", "--mode", "nonorientable", "--budget", "100")
    d = json.loads(out)
    assert code == EXIT_BUDGET
    assert d["tag"] == "bound" and d["euler_genus"] is None and d["lower"] <= 3 <= d["upper"]


def test_bad_graph6_reports_offset():
    code, _, err = cli("genus", "--graph6", "B!")
    assert code == EXIT_USAGE
    assert "byte 1" in err


def test_unknown_flag():
    code, _, _ = cli("count", "--n", "3", "--bogus")
    assert code == EXIT_USAGE
    code, _, _ = cli("frobnicate")
    assert code == EXIT_USAGE


def test_count_example():
    code, out, _ = cli("count", "--n", "5", "--variant", "E", "--closure", "plain", "--g", "const:0")
    d = json.loads(out)
    assert code == EXIT_OK
    assert (d["count"], d["connected_count"], d["tag"], d["schema"]) == (1023, 727, "exact", 1)
    assert sum(d["edge_histogram"].values()) == 1023


def test_count_csv():
    _, out, _ = cli("count", "--n", "4", "--csv")
    assert out.splitlines() == ["n,count,connected_count,fsgr", "1,1,1,", "2,2,1,1", "3,8,4,4/3", "4,64,38,2"]


def test_count_cache_round_trip(cache_env):
    code, out, _ = cli("count", "--n", "6", cache_dir=cache_env)
    assert code == EXIT_OK and json.loads(out)["source"] == "enumerated"
    code, again, _ = cli("count", "--n", "6", cache_dir=cache_env)
    assert json.loads(again)["source"] == "cached"
    assert json.loads(again)["count"] == json.loads(out)["count"] == 32071
    assert any(cache_env.rglob("*.json"))


def test_cache_tamper_recomputes(cache_env):
    _, first, _ = cli("count", "--n", "5", cache_dir=cache_env)
    for f in cache_env.rglob("*.json"):
        f.write_text(f.read_text().replace("1023", "1000"))
    _, second, _ = cli("count", "--n", "5", cache_dir=cache_env)
    a, b = json.loads(first), json.loads(second)
    assert b["source"] == "enumerated" and a["count"] == b["count"] == 1023


def test_unwritable_cache(tmp_path, monkeypatch):
    blocker = tmp_path / "file"
    blocker.write_text("")
    monkeypatch.setenv("GENUSLAB_CACHE", str(blocker))
    code, _, err = cli("count", "--n", "3", cache_dir=blocker)
    assert code == EXIT_IO
    assert str(blocker) in err


def test_member_and_enumerate():
    _, out, _ = cli("member", "--graph6", "D~{", "--variant", "OE", "--g", "const:1")
    assert json.loads(out)["member"] is False
    _, out, _ = cli("member", "--graph6", "D~{", "--variant", "OE", "--closure", "hereditary", "--g",
                    "table:0,0,0,0,2")
    assert json.loads(out)["member"] is True
    _, out, _ = cli("enumerate", "--n", "3")
    lines = out.split()
    assert len(lines) == 8 and all(parse_graph6(x).n == 3 for x in lines)
    _, out, _ = cli("enumerate", "--n", "4", "--unlabelled")
    assert len(out.split()) == 11


def test_sample_and_bp_are_reproducible():
    a = cli("sample", "--n", "5", "--seed", "3", "--reps", "50")[1]
    b = cli("sample", "--n", "5", "--seed", "3", "--reps", "50")[1]
    assert a == b
    head, *graphs = a.splitlines()
    assert json.loads(head)["reps"] == 50 and len(graphs) == 50
    x = cli("bp", "--seed", "1", "--reps", "200", "--cap", "5")[1]
    assert x == cli("bp", "--seed", "1", "--reps", "200", "--cap", "5")[1]
    head, *graphs = x.splitlines()
    assert json.loads(head)["table_size"] > 0 and len(graphs) == 200


def test_faces_scheme_and_relevant():
    scheme = json.dumps({"rotation": {"1": [2, 3], "2": [3, 1], "3": [1, 2]}, "signature": {}})
    code, out, _ = cli("faces", "--graph6", "Bw", "--scheme", scheme)
    d = json.loads(out)
    assert code == EXIT_OK and d["faces"] == 2 and d["euler_genus"] == 0
    _, out, _ = cli("faces", "--graph6", "Bw", "--budget", "0")
    assert json.loads(out)["max_faces"] == 2
    code, _, err = cli("faces", "--graph6", "D~{", "--budget", "0")
    assert code == EXIT_USAGE and "not embeddable" in err


def test_verify_dominance_suite():
    code, out, _ = cli("verify", "--suite", "dominance")
    assert code == EXIT_OK
    assert out.splitlines()[-1] == "PASS suite dominance"


def test_verify_unknown_suite():
    code, _, _ = cli("verify", "--suite", "nope")
    assert code == EXIT_USAGE


def test_experiment_command(tmp_path):
    plan = tmp_path / "p.json"
    plan.write_text("")
    code, out, _ = cli("experiment", str(plan))
    assert code == EXIT_OK and json.loads(out) == {"runs": [], "schema": 1}
    plan.write_text(json.dumps([{"experiment": "count", "n_range": [1, 3]}]))
    code, out, _ = cli("experiment", str(plan), "--output", str(tmp_path / "r"))
    assert code == EXIT_OK
    assert (tmp_path / "r.json").exists() and (tmp_path / "r.csv").exists()
    plan.write_text(json.dumps([{"experiment": "count"}]))
    code, _, err = cli("experiment", str(plan))
    assert code == EXIT_USAGE and "runs[0].n_range" in err


def test_census_command():
    code, out, _ = cli("census", "--n", "5")
    rows = [json.loads(x) for x in out.splitlines()]
    assert code == EXIT_OK and [r["unlabelled"] for r in rows] == [1, 2, 4, 11, 34]


def test_same_command_same_bytes():
    args = ("count", "--n", "5", "--g", "ry", "--variant", "NE")
    assert cli(*args)[1] == cli(*args)[1]
