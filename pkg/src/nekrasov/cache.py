"""On-disk cache of computed alpha_n, one JSON file per (context, n, mode).

Each file records the canonical payload together with its SHA-256; a file
whose payload does not hash to the recorded value is reported as corrupt
rather than silently recomputed.
"""
from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path

from .exactalg import RationalFunction
from .localization import Context

FORMAT_VERSION = 1


class CacheCorruptionError(RuntimeError):
    """A cache file exists but fails its integrity check."""


def canonical_dumps(data) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def cache_key(ctx: Context, n: int, mode: str = "symbolic", **extra) -> dict:
    key = {"format": FORMAT_VERSION, "quantity": "alpha", "r": ctx.r, "nf": ctx.nf,
           "vars": list(ctx.vars), "n": n, "mode": mode}
    key.update(extra)
    return key


class AlphaCache:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)

    def path(self, key: dict) -> Path:
        digest = sha256(canonical_dumps(key))[:20]
        return self.root / f"alpha_r{key['r']}_nf{key['nf']}_n{key['n']}_{key['mode']}_{digest}.json"

    def load(self, key: dict):
        """Stored payload for ``key``, ``None`` on a miss; raises on corruption."""
        path = self.path(key)
        if not path.exists():
            return None
        try:
            record = json.loads(path.read_text())
            payload = record["payload"]
            stored_key, stored_hash = record["key"], record["sha256"]
        except (ValueError, KeyError, TypeError) as exc:
            raise CacheCorruptionError(f"{path}: unreadable cache record ({exc})") from exc
        if stored_key != key:
            raise CacheCorruptionError(f"{path}: key does not match the requested context")
        if sha256(canonical_dumps(payload)) != stored_hash:
            raise CacheCorruptionError(f"{path}: payload hash mismatch")
        return payload

    def store(self, key: dict, payload) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self.path(key)
        record = {"key": key, "payload": payload, "sha256": sha256(canonical_dumps(payload))}
        tmp = path.with_suffix(".tmp")
        tmp.write_text(canonical_dumps(record) + "\n")
        tmp.replace(path)
        return path


def rf_payload(x: RationalFunction) -> dict:
    return {"value": x.to_dict(), "den_factors": x.den_factors_json()}


def rf_from_payload(payload: dict) -> RationalFunction:
    return RationalFunction.from_dict(payload["value"], payload["den_factors"])


def cached_alpha(ctx: Context, n: int, cache: AlphaCache | None, workers: int = 1) -> RationalFunction:
    """alpha_n from the cache when present, computed and stored otherwise."""
    from .localization import alpha_n
    if cache is None:
        return alpha_n(ctx, n, workers)
    key = cache_key(ctx, n)
    payload = cache.load(key)
    if payload is not None:
        return rf_from_payload(payload)
    value = alpha_n(ctx, n, workers)
    cache.store(key, rf_payload(value))
    return value
