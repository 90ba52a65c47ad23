"""On-disk cache of closure bases.

Entries are JSON files named by a SHA-256 key over a canonical serialization
of the generator set, bounds and engine version.  Each file carries a checksum
of its payload; a corrupted or unreadable entry is reported and treated as a
miss so the caller recomputes it.  Writes take a lock file in the cache
directory and land atomically via rename.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

from filelock import FileLock

from .closure import ENGINE_VERSION, ClosureResult, GeneratorSet

log = logging.getLogger(__name__)

ENV_VAR = "PARTCAT_CACHE_DIR"


class CacheError(OSError):
    pass


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def digest(obj) -> str:
    return hashlib.sha256(canonical_json(obj).encode("ascii")).hexdigest()


def closure_key(G: GeneratorSet, max_legs: int, slack: int, max_rounds: int, version: str = ENGINE_VERSION) -> str:
    return digest({
        "generators": G.serialize(),
        "max_legs": max_legs,
        "slack": slack,
        "max_rounds": max_rounds,
        "engine": version,
    })


def default_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


class Cache:
    def __init__(self, directory: str | os.PathLike, version: str = ENGINE_VERSION):
        self.dir = Path(directory)
        self.version = version
        try:
            self.dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CacheError(f"cannot create cache directory {self.dir}: {exc}") from exc
        self._lock = FileLock(str(self.dir / ".lock"))

    def path(self, key: str) -> Path:
        return self.dir / f"{key}.json"

    def get(self, key: str) -> dict | None:
        path = self.path(key)
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text(encoding="ascii"))
            payload = entry["payload"]
            ok = entry.get("version") == self.version and entry.get("checksum") == digest(payload)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            log.warning("unreadable cache entry %s (%s); recomputing", path, exc)
            return None
        if not ok:
            log.warning("cache entry %s failed its checksum or version check; recomputing", path)
            return None
        return payload

    def put(self, key: str, payload: dict) -> Path:
        path = self.path(key)
        text = canonical_json({"version": self.version, "checksum": digest(payload), "payload": payload})
        try:
            with self._lock:
                fd, tmp = tempfile.mkstemp(dir=self.dir, suffix=".tmp")
                with os.fdopen(fd, "w", encoding="ascii") as fh:
                    fh.write(text)
                os.replace(tmp, path)
        except OSError as exc:
            raise CacheError(f"cannot write cache entry {path}: {exc}") from exc
        return path

    def entries(self) -> list[Path]:
        return sorted(self.dir.glob("*.json"))

    def verify(self) -> dict[str, bool]:
        return {p.stem: self.get(p.stem) is not None for p in self.entries()}

    def clear(self) -> int:
        n = 0
        with self._lock:
            for p in self.entries():
                p.unlink()
                n += 1
        return n

    # -- closure results --

    def get_closure(self, G: GeneratorSet, max_legs: int, slack: int, max_rounds: int) -> ClosureResult | None:
        payload = self.get(closure_key(G, max_legs, slack, max_rounds, self.version))
        return None if payload is None else ClosureResult.from_payload(G, payload)

    def put_closure(self, G: GeneratorSet, max_legs: int, slack: int, max_rounds: int, result: ClosureResult) -> Path:
        return self.put(closure_key(G, max_legs, slack, max_rounds, self.version), result.to_payload())
