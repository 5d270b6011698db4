"""On-disk cache of reduced relation matrices.

One JSON file per (N, w, m).  Entries are stored as explicit
``[column, numerator, denominator]`` integer triples together with a schema
version and a SHA-256 checksum of the payload; anything that fails to parse
or verify is ignored and recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
from pathlib import Path

from .linalg import Echelon, Quotient

SCHEMA = 1
ENV_VAR = "MZVC_CACHE_DIR"

log = logging.getLogger(__name__)
_dir: Path | None = None


def set_cache_dir(path) -> None:
    global _dir
    _dir = Path(path) if path else None


def cache_dir() -> Path | None:
    if _dir is not None:
        return _dir
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def _path(N: int, w: int, m: int) -> Path | None:
    d = cache_dir()
    return None if d is None else d / f"dihedral-N{N}-w{w}-m{m}.json"


def _digest(payload: dict) -> str:
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def store_quotient(N: int, w: int, m: int, q: Quotient) -> None:
    path = _path(N, w, m)
    if path is None:
        return
    rows = [[col, [[c, x, 1] for c, x in sorted(row.items())]]
            for col, row in (q.echelon.pivots[k] for k in sorted(q.echelon.pivots))]
    payload = {"schema": SCHEMA, "key": [N, w, m], "ngens": q.ngens, "rows": rows}
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps({"payload": payload, "sha256": _digest(payload)}, sort_keys=True))
    tmp.replace(path)


def load_quotient(N: int, w: int, m: int) -> Quotient | None:
    path = _path(N, w, m)
    if path is None or not path.exists():
        return None
    try:
        doc = json.loads(path.read_text())
        payload = doc["payload"]
        if doc["sha256"] != _digest(payload):
            raise ValueError("checksum mismatch")
        if payload["schema"] != SCHEMA or payload["key"] != [N, w, m]:
            raise ValueError("stale entry")
        ech = Echelon(payload["ngens"])
        for col, entries in payload["rows"]:
            row = {}
            for c, num, den in entries:
                if den != 1:
                    raise ValueError("non-integral stored row")
                row[c] = num
            if min(row) != col:
                raise ValueError("bad pivot")
            ech.pivots[col] = (col, row)
        return Quotient(payload["ngens"], ech)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        log.warning("ignoring cache entry %s: %s", path, exc)
        return None
