"""Content-addressed JSON cache with checksums.

Entries live at ``<root>/<kind>/<sha256 of key>.json`` and hold the key, the
payload and a checksum of the payload. Anything that fails to parse or to
validate is treated as absent (and removed), so a damaged cache costs a
recomputation, never a wrong answer.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
import threading
from pathlib import Path
from typing import Any

log = logging.getLogger(__name__)

DEFAULT_ROOT = ".genuslab-cache"


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical_json(obj).encode()).hexdigest()


class CacheIOError(OSError):
    pass


class Cache:
    def __init__(self, root: str | os.PathLike | None = None, enabled: bool = True):
        if root is None:
            root = os.environ.get("GENUSLAB_CACHE") or DEFAULT_ROOT
        self.root = Path(root)
        self.enabled = enabled
        self._lock = threading.Lock()
        self.warnings: list[str] = []

    def path(self, kind: str, key: Any) -> Path:
        return self.root / kind / f"{digest(key)}.json"

    def get(self, kind: str, key: Any) -> Any | None:
        if not self.enabled:
            return None
        p = self.path(kind, key)
        try:
            raw = p.read_text()
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise CacheIOError(f"cannot read cache entry {p}: {exc}") from exc
        try:
            entry = json.loads(raw)
            payload = entry["payload"]
            ok = entry["checksum"] == digest(payload) and entry["key"] == json.loads(canonical_json(key))
        except (ValueError, KeyError, TypeError):
            ok = False
        if not ok:
            msg = f"corrupt cache entry {p}; recomputing"
            log.warning(msg)
            self.warnings.append(msg)
            try:
                p.unlink()
            except OSError:
                pass
            return None
        return payload

    def put(self, kind: str, key: Any, payload: Any) -> None:
        if not self.enabled:
            return
        p = self.path(kind, key)
        entry = {"key": key, "payload": payload, "checksum": digest(payload)}
        with self._lock:
            try:
                p.parent.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
                with os.fdopen(fd, "w") as fh:
                    fh.write(canonical_json(entry))
                os.replace(tmp, p)
            except OSError as exc:
                raise CacheIOError(f"cannot write cache entry {p}: {exc}") from exc

    def invalidate(self, kind: str, key: Any) -> bool:
        p = self.path(kind, key)
        with self._lock:
            try:
                p.unlink()
                return True
            except FileNotFoundError:
                return False


_default = Cache(enabled=False)


def get_cache() -> Cache:
    return _default


def set_cache(cache: Cache) -> Cache:
    """Install ``cache`` as the process default; returns the previous one."""
    global _default
    old, _default = _default, cache
    return old
