import json
import os

import pytest

from genuslab.cache import Cache, CacheIOError, digest, get_cache, set_cache


def test_round_trip(tmp_path):
    c = Cache(tmp_path)
    key = {"n": 5, "spec": "E"}
    assert c.get("counts", key) is None
    c.put("counts", key, {"count": 1023})
    assert c.get("counts", key) == {"count": 1023}
    assert c.path("counts", key).name == digest(key) + ".json"


def test_disabled_cache_is_inert(tmp_path):
    c = Cache(tmp_path, enabled=False)
    c.put("counts", {"a": 1}, 2)
    assert c.get("counts", {"a": 1}) is None
    assert not any(tmp_path.iterdir())


@pytest.mark.parametrize("damage", [
    lambda t: t[: len(t) // 2],
    lambda t: t.replace("1023", "1024"),
    lambda t: json.dumps({"payload": 1}),
    lambda t: "",
])
def test_corrupt_entries_are_dropped(tmp_path, damage):
    c = Cache(tmp_path)
    key = {"n": 5}
    c.put("counts", key, {"count": 1023})
    p = c.path("counts", key)
    p.write_text(damage(p.read_text()))
    assert c.get("counts", key) is None
    assert not p.exists()
    assert len(c.warnings) == 1


def test_key_mismatch_is_corruption(tmp_path):
    c = Cache(tmp_path)
    c.put("counts", {"n": 5}, 1)
    a, b = c.path("counts", {"n": 5}), c.path("counts", {"n": 6})
    b.parent.mkdir(parents=True, exist_ok=True)
    os.replace(a, b)
    assert c.get("counts", {"n": 6}) is None


def test_invalidate(tmp_path):
    c = Cache(tmp_path)
    c.put("counts", {"n": 1}, 1)
    assert c.invalidate("counts", {"n": 1})
    assert not c.invalidate("counts", {"n": 1})
    assert c.get("counts", {"n": 1}) is None


def test_env_root(monkeypatch, tmp_path):
    monkeypatch.setenv("GENUSLAB_CACHE", str(tmp_path / "elsewhere"))
    assert Cache().root == tmp_path / "elsewhere"


def test_unwritable_root(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    c = Cache(blocker)
    with pytest.raises(CacheIOError):
        c.put("counts", {"n": 1}, 1)


def test_set_cache_returns_previous(tmp_path):
    mine = Cache(tmp_path)
    old = set_cache(mine)
    try:
        assert get_cache() is mine
    finally:
        assert set_cache(old) is mine
