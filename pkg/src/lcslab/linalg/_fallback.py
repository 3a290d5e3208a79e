"""Pure-Python echelon backends.

``ModEchelon`` mirrors the compiled kernel's interface and algorithm using
numpy row operations; ``RationalEchelon`` does the same over Q with
:class:`fractions.Fraction` and dict rows.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np


class ModEchelon:
    def __init__(self, ncols: int, p: int):
        if p < 5 or p >= 1 << 31:
            raise ValueError("modular kernel needs a prime 5 <= p < 2**31")
        self.p = p
        self.ncols = ncols
        self.rank = 0
        self._rows = np.zeros((min(ncols, 16) or 1, max(ncols, 1)), dtype=np.int64)
        self._colrow = np.full(max(ncols, 1), -1, dtype=np.int64)
        self._pivcol: list[int] = []
        self._free = np.ones(max(ncols, 1), dtype=bool)
        if ncols == 0:
            self._free[:] = False

    def _reduce(self, indices, data) -> np.ndarray:
        p = self.p
        x = np.zeros(max(self.ncols, 1), dtype=np.int64)
        np.add.at(x, indices, data)
        x %= p
        free = np.flatnonzero(self._free)
        for j in np.unique(indices):
            r = self._colrow[j]
            if r >= 0 and x[j]:
                c = p - x[j]
                x[j] = 0
                x[free] = (x[free] + c * self._rows[r, free]) % p
        return x

    def _insert(self, x: np.ndarray, best: int) -> None:
        p = self.p
        r = self.rank
        if r >= self._rows.shape[0]:
            grown = np.zeros((min(2 * r, self.ncols), self.ncols), dtype=np.int64)
            grown[:r] = self._rows[:r]
            self._rows = grown
        inv = pow(int(x[best]), -1, p)
        self._free[best] = False
        free = np.flatnonzero(self._free)
        row = np.zeros(self.ncols, dtype=np.int64)
        row[free] = (x[free] * inv) % p
        row[best] = 1
        col = self._rows[:r, best].copy()
        hit = np.flatnonzero(col)
        if hit.size:
            self._rows[hit, best] = 0
            upd = ((p - col[hit])[:, None] * row[free][None, :]) % p
            sub = self._rows[np.ix_(hit, free)]
            self._rows[np.ix_(hit, free)] = (sub + upd) % p
        self._rows[r] = row
        self._colrow[best] = r
        self._pivcol.append(best)
        self.rank = r + 1

    def absorb(self, indptr, indices, data) -> np.ndarray:
        indptr = np.asarray(indptr, dtype=np.int64)
        indices = np.asarray(indices, dtype=np.int64)
        data = np.asarray(data, dtype=np.int64)
        grew = np.zeros(len(indptr) - 1, dtype=np.uint8)
        for i in range(len(indptr) - 1):
            if self.rank == self.ncols:
                break
            a, b = indptr[i], indptr[i + 1]
            x = self._reduce(indices[a:b], data[a:b])
            nz = np.flatnonzero(x[: self.ncols])
            if nz.size:
                self._insert(x, int(nz[0]))
                grew[i] = 1
        return grew

    def reduce(self, indices, data):
        x = self._reduce(np.asarray(indices, dtype=np.int64), np.asarray(data, dtype=np.int64))
        nz = np.flatnonzero(x[: self.ncols])
        return nz.astype(np.int64), x[nz]

    def pivots(self) -> np.ndarray:
        return np.asarray(self._pivcol, dtype=np.int64)

    def dense_rows(self) -> np.ndarray:
        return self._rows[: self.rank].copy()


class RationalEchelon:
    """Reduced row echelon form over Q; rows are dicts col -> Fraction."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rank = 0
        self._rows: list[dict[int, Fraction]] = []
        self._colrow: dict[int, int] = {}

    def _reduce(self, pairs) -> dict[int, Fraction]:
        x: dict[int, Fraction] = {}
        for j, c in pairs:
            v = x.get(j, 0) + Fraction(c)
            if v:
                x[j] = v
            else:
                x.pop(j, None)
        for j in [j for j in x if j in self._colrow]:
            c = x.pop(j, 0)
            if not c:
                continue
            for f, a in self._rows[self._colrow[j]].items():
                if f == j:
                    continue
                v = x.get(f, 0) - c * a
                if v:
                    x[f] = v
                else:
                    x.pop(f, None)
        return x

    def insert_pairs(self, pairs) -> bool:
        x = self._reduce(pairs)
        if not x:
            return False
        best = min(x)
        inv = 1 / x[best]
        row = {f: a * inv for f, a in x.items()}
        for other in self._rows:
            c = other.pop(best, 0)
            if c:
                for f, a in row.items():
                    if f == best:
                        continue
                    v = other.get(f, 0) - c * a
                    if v:
                        other[f] = v
                    else:
                        other.pop(f, None)
        self._colrow[best] = len(self._rows)
        self._rows.append(row)
        self.rank += 1
        return True

    def reduce_pairs(self, pairs) -> list[tuple[int, Fraction]]:
        return sorted(self._reduce(pairs).items())

    def pivots(self) -> list[int]:
        return sorted(self._colrow, key=self._colrow.get)

    def row_pairs(self) -> list[list[tuple[int, Fraction]]]:
        return [sorted(r.items()) for r in self._rows]
