"""Exact scalar arithmetic and incremental echelon bases.

Two coefficient fields are supported: a prime field F_p with ``p`` an odd
prime below 2**31 (characteristic 2 and 3 are refused), and the rationals.
Prime-field bases run on the compiled kernel when it is importable and on a
numpy implementation otherwise; set ``LCSLAB_PURE_PYTHON=1`` to force the
fallback.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar, Union

import numpy as np

from . import _fallback

if os.environ.get("LCSLAB_PURE_PYTHON"):
    _Compiled = None
else:
    try:
        from ._kernels import ModEchelon as _Compiled
    except ImportError:  # pragma: no cover - depends on build
        _Compiled = None

BACKEND = "compiled" if _Compiled is not None else "python"

DEFAULT_PRIMES = (1073741789, 1073741783)

Scalar = Union[int, Fraction]
SparseVector = list  # sorted [(index, nonzero coefficient), ...]

T = TypeVar("T")


class PrimeMismatchError(RuntimeError):
    """Two primes disagreed on a reported quantity."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17):
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``p`` is a prime, or ``None`` for the rationals."""

    p: int | None = DEFAULT_PRIMES[0]

    def __post_init__(self):
        if self.p is None:
            return
        if self.p in (2, 3):
            raise ValueError(f"characteristic {self.p} is not supported (identities need 1/2 and 1/3)")
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= 1 << 31:
            raise ValueError("prime must be below 2**31")

    @property
    def rational(self) -> bool:
        return self.p is None

    @property
    def tag(self):
        """Cache/report key: the prime, or ``"Q"``."""
        return "Q" if self.p is None else self.p

    def __call__(self, c) -> Scalar:
        c = Fraction(c)
        if self.p is None:
            return c
        return c.numerator * pow(c.denominator, -1, self.p) % self.p

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"


QQ = Field(None)


def field_from_tag(tag) -> Field:
    return QQ if tag in ("Q", None) else Field(int(tag))


def sparse(pairs: Iterable[tuple[int, Scalar]], field: Field | None = None) -> SparseVector:
    """Normalize (index, coeff) pairs: merge duplicates, drop zeros, sort."""
    acc: dict[int, Scalar] = {}
    for i, c in pairs:
        if i < 0:
            raise ValueError("negative basis index")
        acc[i] = acc.get(i, 0) + (field(c) if field is not None else c)
    if field is not None and field.p is not None:
        acc = {i: c % field.p for i, c in acc.items()}
    return [(i, c) for i, c in sorted(acc.items()) if c != 0]


class EchelonBasis:
    """Incrementally maintained reduced row echelon basis of a subspace of K^ncols.

    >>> b = EchelonBasis(2)
    >>> b.insert([(0, 1), (1, 1)]), b.insert([(0, 2), (1, 2)]), b.dimension
    (True, False, 1)
    """

    def __init__(self, ncols: int, field: Field = Field()):
        self.ncols = ncols
        self.field = field
        if field.rational:
            self._impl = _fallback.RationalEchelon(ncols)
        elif _Compiled is not None:
            self._impl = _Compiled(ncols, field.p)
        else:
            self._impl = _fallback.ModEchelon(ncols, field.p)

    @property
    def dimension(self) -> int:
        return self._impl.rank

    def __len__(self) -> int:
        return self._impl.rank

    def _check(self, v: SparseVector) -> None:
        for i, _ in v:
            if not 0 <= i < self.ncols:
                raise IndexError(f"index {i} outside component of size {self.ncols}")

    def _arrays(self, v: SparseVector):
        p = self.field.p
        idx = np.fromiter((i for i, _ in v), dtype=np.int64, count=len(v))
        dat = np.fromiter((self.field(c) % p for _, c in v), dtype=np.int64, count=len(v))
        return idx, dat

    def insert(self, v: SparseVector) -> bool:
        """Add ``v`` to the span; True iff it was independent of the old span."""
        self._check(v)
        if self.field.rational:
            return self._impl.insert_pairs(v)
        idx, dat = self._arrays(v)
        return bool(self._impl.absorb(np.array([0, len(v)], dtype=np.int64), idx, dat)[0])

    def absorb_csr(self, indptr: np.ndarray, indices: np.ndarray, data: np.ndarray) -> np.ndarray:
        """Bulk insertion of CSR rows (data already reduced into [0, p))."""
        if self.field.rational:
            out = np.zeros(len(indptr) - 1, dtype=np.uint8)
            for r in range(len(indptr) - 1):
                a, b = indptr[r], indptr[r + 1]
                out[r] = self._impl.insert_pairs(zip(indices[a:b].tolist(), data[a:b].tolist()))
            return out
        return self._impl.absorb(
            np.ascontiguousarray(indptr, dtype=np.int64),
            np.ascontiguousarray(indices, dtype=np.int64),
            np.ascontiguousarray(data, dtype=np.int64),
        )

    def reduce(self, v: SparseVector) -> SparseVector:
        self._check(v)
        if self.field.rational:
            return self._impl.reduce_pairs(v)
        idx, dat = self._arrays(v)
        ri, rd = self._impl.reduce(idx, dat)
        return [(int(i), int(c)) for i, c in zip(ri, rd)]

    def contains(self, v: SparseVector) -> bool:
        return not self.reduce(v)

    __contains__ = contains

    def pivots(self) -> list[int]:
        return [int(j) for j in self._impl.pivots()]

    def rows(self) -> list[SparseVector]:
        """Basis rows as sparse vectors, in insertion order."""
        if self.field.rational:
            return self._impl.row_pairs()
        dense = self._impl.dense_rows()
        return [[(int(j), int(r[j])) for j in np.flatnonzero(r)] for r in dense]


def naive_rank(matrix: Sequence[Sequence[Scalar]], field: Field = Field()) -> int:
    """Textbook full Gaussian elimination; the oracle for ``EchelonBasis``."""
    if field.rational:
        rows = [[Fraction(x) for x in row] for row in matrix]
        inv = lambda a: 1 / a  # noqa: E731
        norm = lambda a: a  # noqa: E731
    else:
        p = field.p
        rows = [[field(x) for x in row] for row in matrix]
        inv = lambda a: pow(a, -1, p)  # noqa: E731
        norm = lambda a: a % p  # noqa: E731
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        s = inv(rows[rank][c])
        rows[rank] = [norm(a * s) for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [norm(a - f * b) for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def rank_of(vectors: Iterable[SparseVector], ncols: int, field: Field = Field()) -> int:
    basis = EchelonBasis(ncols, field)
    for v in vectors:
        basis.insert(v)
    return basis.dimension


def solve_rational(columns: Sequence[SparseVector], target: SparseVector) -> list[Fraction] | None:
    """Find x with sum_j x_j * columns[j] == target over Q, or None if infeasible.

    Free unknowns are set to zero.
    """
    # augmented rows: unknown j contributes column j, target is the last column
    ncols = len(columns)
    eqs: dict[int, dict[int, Fraction]] = {}
    for j, col in enumerate(columns):
        for i, c in col:
            eqs.setdefault(i, {})[j] = Fraction(c)
    for i, c in target:
        eqs.setdefault(i, {})[ncols] = Fraction(c)
    rows = [[r.get(j, Fraction(0)) for j in range(ncols + 1)] for _, r in sorted(eqs.items())]
    pivots = []
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        s = rows[rank][c]
        rows[rank] = [a / s for a in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        pivots.append(c)
        rank += 1
    if any(row[ncols] for row in rows[rank:]):
        return None
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = rows[r][ncols]
    return x


def dual_prime(fn: Callable[[Field], T], primes: Sequence[int] = DEFAULT_PRIMES, what: str = "result") -> T:
    """Evaluate ``fn`` over two distinct primes and insist they agree."""
    if len(primes) != 2 or primes[0] == primes[1]:
        raise ValueError("dual-prime protocol needs exactly two distinct primes")
    a = fn(Field(primes[0]))
    b = fn(Field(primes[1]))
    if a != b:
        raise PrimeMismatchError(
            f"{what} differs between p={primes[0]} and p={primes[1]}; rerun with --rational"
        )
    return a
