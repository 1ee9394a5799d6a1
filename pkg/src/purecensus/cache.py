"""Small JSON cache for evaluated constants, keyed by (family, ell, P, method)."""

from __future__ import annotations

import json
import os
from pathlib import Path

from filelock import FileLock

ENV = "PURECENSUS_CACHE_DIR"


def cache_dir() -> Path:
    d = os.environ.get(ENV)
    return Path(d) if d else Path.home() / ".cache" / "purecensus"


def _path() -> Path:
    return cache_dir() / "constants.json"


def _key(family: str, ell: int, P: int, method: str) -> str:
    return f"{family}|{ell}|{P}|{method}"


def load(family: str, ell: int, P: int, method: str) -> dict | None:
    p = _path()
    if not p.exists():
        return None
    return json.loads(p.read_text()).get(_key(family, ell, P, method))


def store(records: list[dict]):
    p = _path()
    p.parent.mkdir(parents=True, exist_ok=True)
    with FileLock(str(p) + ".lock"):
        data = json.loads(p.read_text()) if p.exists() else {}
        for r in records:
            data[_key(r["family"], r["ell"], r["P"], r["method"])] = r
        p.write_text(json.dumps(data, sort_keys=True, indent=1))
