"""JSON-lines cache of lower-central-series component dimensions.

One record per line, keyed by (n, m, d, p)::

    {"n": 2, "m": 5, "d": [3, 2], "p": 1073741789, "dim": 2}

``p`` is the prime, or ``"Q"`` for rational arithmetic.  The stored dim is
that of L_m(A_n)[d].  Readers tolerate a truncated last line; the file has a
single writer.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

ENV_VAR = "LCSLAB_CACHE"


def default_path() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "lcslab" / "dims.jsonl"


class DimCache:
    def __init__(self, path: str | os.PathLike | None = None):
        self.path = Path(path) if path is not None else default_path()
        self._data: dict[tuple, int] = {}
        if self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    try:
                        rec = json.loads(line)
                    except json.JSONDecodeError:
                        continue
                    self._data[self._key(rec["n"], rec["m"], rec["d"], rec["p"])] = int(rec["dim"])

    @staticmethod
    def _key(n, m, d, p):
        return (int(n), int(m), tuple(int(x) for x in d), p)

    def __len__(self):
        return len(self._data)

    def get(self, n, m, d, p):
        return self._data.get(self._key(n, m, d, p))

    def has_all(self, keys) -> bool:
        return all(self._key(*k) in self._data for k in keys)

    def put_many(self, records) -> None:
        fresh = []
        for n, m, d, p, dim in records:
            key = self._key(n, m, d, p)
            old = self._data.get(key)
            if old is not None and old != dim:
                raise RuntimeError(f"cache conflict at {key}: stored {old}, computed {dim}")
            if old is None:
                self._data[key] = dim
                fresh.append({"n": n, "m": m, "d": list(d), "p": p, "dim": dim})
        if not fresh:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a") as fh:
            for rec in fresh:
                fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
