"""Content-addressed on-disk store for computed reports and series.

Entries are JSON files named by the SHA-256 of the canonical JSON of the
key fields plus :data:`CONVENTION`.  A file that fails to parse is treated
as a miss: the caller recomputes and the entry is overwritten.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

log = logging.getLogger(__name__)

# bump when a convention that changes stored values changes
CONVENTION = "ifun-k0/t-rescaled/fhat-normalized/v1"

ENV_VAR = "LOCALPN_CACHE_DIR"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


class Cache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    @classmethod
    def from_env(cls, explicit: str | None = None) -> "Cache | None":
        path = explicit or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    @staticmethod
    def key(fields: dict) -> str:
        blob = canonical_json({"convention": CONVENTION, **fields})
        return hashlib.sha256(blob.encode()).hexdigest()

    def path(self, key: str) -> Path:
        return self.root / key[:2] / f"{key}.json"

    def load(self, key: str):
        p = self.path(key)
        if not p.exists():
            return None
        try:
            with open(p, encoding="utf-8") as fh:
                entry = json.load(fh)
            if entry.get("key") != key or "value" not in entry:
                raise ValueError("entry does not match its key")
            return entry["value"]
        except (OSError, ValueError) as exc:
            log.warning("corrupt cache entry %s (%s); recomputing", p, exc)
            return None

    def store(self, key: str, value) -> None:
        p = self.path(key)
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(canonical_json({"key": key, "value": value}))
        os.replace(tmp, p)

    def get_or_compute(self, fields: dict, compute):
        """(value, hit) for the entry keyed by ``fields``."""
        key = self.key(fields)
        value = self.load(key)
        if value is not None:
            return value, True
        value = compute()
        self.store(key, value)
        return value, False
