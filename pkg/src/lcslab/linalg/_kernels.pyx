# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled modular echelon kernel.

Rows are kept in reduced row echelon form.  Only free (non-pivot) columns of
a stored row can be nonzero besides its own pivot, so reducing an incoming
vector costs ``|support ∩ pivots| * |free|`` multiply-adds.
"""

import numpy as np
cimport numpy as cnp

ctypedef long long i64
ctypedef unsigned long long u64


cdef inline i64 _inv(i64 a, i64 p) nogil:
    cdef i64 t = 0, newt = 1, r = p, newr = a, q, tmp
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


cdef class ModEchelon:
    cdef readonly i64 p
    cdef readonly i64 ncols
    cdef readonly i64 rank
    cdef object _rows_obj
    cdef i64[:, ::1] rows
    cdef i64[::1] colrow
    cdef i64[::1] pivcol
    cdef i64[::1] free
    cdef i64[::1] freepos
    cdef i64 nfree
    cdef i64[::1] work

    def __init__(self, i64 ncols, i64 p):
        if p < 5 or p >= (1 << 31):
            raise ValueError("compiled kernel needs a prime 5 <= p < 2**31")
        self.p = p
        self.ncols = ncols
        self.rank = 0
        cap = min(ncols, 16) if ncols > 0 else 1
        self._rows_obj = np.zeros((cap, max(ncols, 1)), dtype=np.int64)
        self.rows = self._rows_obj
        self.colrow = np.full(max(ncols, 1), -1, dtype=np.int64)
        self.pivcol = np.zeros(max(ncols, 1), dtype=np.int64)
        self.free = np.arange(max(ncols, 1), dtype=np.int64)
        self.freepos = np.arange(max(ncols, 1), dtype=np.int64)
        self.nfree = ncols
        self.work = np.zeros(max(ncols, 1), dtype=np.int64)

    cdef void _grow(self):
        cdef i64 cap = self.rows.shape[0]
        new = np.zeros((min(2 * cap, self.ncols), self.ncols), dtype=np.int64)
        new[:cap] = self._rows_obj
        self._rows_obj = new
        self.rows = new

    cdef void _drop_free(self, i64 col) nogil:
        cdef i64 pos = self.freepos[col]
        cdef i64 last = self.free[self.nfree - 1]
        self.free[pos] = last
        self.freepos[last] = pos
        self.nfree -= 1

    cdef i64 _reduce_work(self, const i64[::1] idx, i64 start, i64 stop) nogil:
        # work holds the scattered vector; returns min nonzero free col or -1
        cdef i64 k, j, rj, c, t, f, best = -1
        cdef i64 p = self.p
        for k in range(start, stop):
            j = idx[k]
            rj = self.colrow[j]
            if rj >= 0 and self.work[j] != 0:
                c = p - self.work[j]
                self.work[j] = 0
                for t in range(self.nfree):
                    f = self.free[t]
                    if self.rows[rj, f] != 0:
                        self.work[f] = <i64>((<u64>self.work[f] + <u64>c * <u64>self.rows[rj, f]) % <u64>p)
        for t in range(self.nfree):
            f = self.free[t]
            if self.work[f] != 0 and (best < 0 or f < best):
                best = f
        return best

    cdef void _clear_work(self, const i64[::1] idx, i64 start, i64 stop) nogil:
        cdef i64 k, t
        for k in range(start, stop):
            self.work[idx[k]] = 0
        for t in range(self.nfree):
            self.work[self.free[t]] = 0

    cdef void _insert_work(self, i64 best):
        cdef i64 p = self.p
        cdef i64 r = self.rank
        cdef i64 inv, t, f, i, c
        if r >= self.rows.shape[0]:
            self._grow()
        inv = _inv(self.work[best], p)
        self.work[best] = 0
        self._drop_free(best)
        with nogil:
            for t in range(self.nfree):
                f = self.free[t]
                if self.work[f] != 0:
                    self.rows[r, f] = <i64>((<u64>self.work[f] * <u64>inv) % <u64>p)
                    self.work[f] = 0
            self.rows[r, best] = 1
            for i in range(r):
                c = self.rows[i, best]
                if c != 0:
                    self.rows[i, best] = 0
                    c = p - c
                    for t in range(self.nfree):
                        f = self.free[t]
                        if self.rows[r, f] != 0:
                            self.rows[i, f] = <i64>((<u64>self.rows[i, f] + <u64>c * <u64>self.rows[r, f]) % <u64>p)
            self.colrow[best] = r
            self.pivcol[r] = best
            self.rank = r + 1

    cdef void _scatter(self, const i64[::1] idx, const i64[::1] dat, i64 start, i64 stop) nogil:
        cdef i64 k, j
        cdef i64 p = self.p
        for k in range(start, stop):
            j = idx[k]
            self.work[j] = (self.work[j] + dat[k]) % p

    def absorb(self, const i64[::1] indptr, const i64[::1] indices, const i64[::1] data):
        """Insert every CSR row; entries must lie in [0, p).  Returns grew flags."""
        cdef i64 nrows = indptr.shape[0] - 1
        cdef i64 i, best
        grew = np.zeros(nrows, dtype=np.uint8)
        cdef cnp.uint8_t[::1] g = grew
        for i in range(nrows):
            if self.nfree == 0:
                break
            self._scatter(indices, data, indptr[i], indptr[i + 1])
            best = self._reduce_work(indices, indptr[i], indptr[i + 1])
            if best < 0:
                self._clear_work(indices, indptr[i], indptr[i + 1])
            else:
                self._clear_pivot_support(indices, indptr[i], indptr[i + 1])
                self._insert_work(best)
                g[i] = 1
        return grew

    cdef void _clear_pivot_support(self, const i64[::1] idx, i64 start, i64 stop) nogil:
        cdef i64 k
        for k in range(start, stop):
            if self.colrow[idx[k]] >= 0:
                self.work[idx[k]] = 0

    def reduce(self, const i64[::1] indices, const i64[::1] data):
        """Reduced form of one sparse vector as (indices, data); state unchanged."""
        cdef i64 n = indices.shape[0]
        cdef i64 t, f
        self._scatter(indices, data, 0, n)
        self._reduce_work(indices, 0, n)
        out_i = []
        out_d = []
        for t in range(self.nfree):
            f = self.free[t]
            if self.work[f] != 0:
                out_i.append(f)
                out_d.append(self.work[f])
        self._clear_work(indices, 0, n)
        order = np.argsort(np.asarray(out_i, dtype=np.int64), kind="stable")
        return (np.asarray(out_i, dtype=np.int64)[order],
                np.asarray(out_d, dtype=np.int64)[order])

    def pivots(self):
        return np.asarray(self.pivcol[:self.rank]).copy()

    def dense_rows(self):
        return np.asarray(self._rows_obj[:self.rank]).copy()
