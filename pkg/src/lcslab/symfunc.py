"""Partitions, symmetric polynomials and tensor-field-module Hilbert series.

Series are :class:`SymPoly` objects: integer coefficients on exponent
vectors, optionally truncated at a total degree ``D`` (``None`` means an exact
polynomial).  Everything here is exact integer arithmetic.
"""
from __future__ import annotations

import itertools
from math import factorial
from typing import Iterable, Iterator, Mapping

Partition = tuple  # weakly decreasing, padded with zeros to length n


class NotSymmetric(ValueError):
    pass


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class SymPoly:
    """Symmetric polynomial or truncated power series in ``n`` variables."""

    __slots__ = ("n", "D", "coeffs")

    def __init__(self, n: int, coeffs: Mapping[tuple, int] | None = None, D: int | None = None, check: bool = True):
        self.n = n
        self.D = D
        self.coeffs = {}
        for a, c in (coeffs or {}).items():
            a = tuple(a)
            if len(a) != n or any(k < 0 for k in a):
                raise ValueError(f"bad exponent {a} for n={n}")
            if c and (D is None or sum(a) <= D):
                self.coeffs[a] = self.coeffs.get(a, 0) + int(c)
        self.coeffs = {a: c for a, c in self.coeffs.items() if c}
        if check and not self.is_symmetric():
            raise NotSymmetric("coefficients are not invariant under permuting variables")

    @classmethod
    def _raw(cls, n, coeffs, D):
        out = cls.__new__(cls)
        out.n, out.D = n, D
        out.coeffs = {a: c for a, c in coeffs.items() if c}
        return out

    @classmethod
    def one(cls, n: int, D: int | None = None) -> "SymPoly":
        return cls._raw(n, {(0,) * n: 1}, D)

    def is_symmetric(self) -> bool:
        seen: dict[tuple, int] = {}
        for a, c in self.coeffs.items():
            key = tuple(sorted(a, reverse=True))
            if self.coeffs.get(key, 0) != c:
                return False
            seen[key] = seen.get(key, 0) + 1
        return all(cnt == _orbit_size(key) for key, cnt in seen.items())

    def __getitem__(self, alpha) -> int:
        return self.coeffs.get(tuple(alpha), 0)

    def _join_D(self, other: "SymPoly"):
        if self.D is None:
            return other.D
        if other.D is None:
            return self.D
        return min(self.D, other.D)

    def __add__(self, other: "SymPoly") -> "SymPoly":
        D = self._join_D(other)
        out = dict(self.coeffs)
        for a, c in other.coeffs.items():
            out[a] = out.get(a, 0) + c
        return SymPoly._raw(self.n, {a: c for a, c in out.items() if D is None or sum(a) <= D}, D)

    def __neg__(self) -> "SymPoly":
        return SymPoly._raw(self.n, {a: -c for a, c in self.coeffs.items()}, self.D)

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def __mul__(self, other) -> "SymPoly":
        if isinstance(other, int):
            return SymPoly._raw(self.n, {a: c * other for a, c in self.coeffs.items()}, self.D)
        D = self._join_D(other)
        out: dict[tuple, int] = {}
        for a, c in self.coeffs.items():
            for b, e in other.coeffs.items():
                s = _add_exp(a, b)
                if D is None or sum(s) <= D:
                    out[s] = out.get(s, 0) + c * e
        return SymPoly._raw(self.n, out, D)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "SymPoly":
        out = SymPoly.one(self.n, self.D)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymPoly):
            return NotImplemented
        return self.n == other.n and self.coeffs == other.coeffs

    def __repr__(self) -> str:
        return f"SymPoly(n={self.n}, D={self.D}, {dict(sorted(self.coeffs.items()))})"

    def truncate(self, D: int) -> "SymPoly":
        if self.D is not None and D > self.D:
            raise ValueError(f"cannot raise truncation from {self.D} to {D}")
        return SymPoly._raw(self.n, {a: c for a, c in self.coeffs.items() if sum(a) <= D}, D)

    def degree_part(self, k: int) -> dict[tuple, int]:
        return {a: c for a, c in self.coeffs.items() if sum(a) == k}

    def total_degree_dims(self, upto: int | None = None) -> list[int]:
        """Coefficient sums per total degree, i.e. the single-variable specialization."""
        top = upto if upto is not None else (self.D if self.D is not None else self.max_degree())
        out = [0] * (top + 1)
        for a, c in self.coeffs.items():
            if sum(a) <= top:
                out[sum(a)] += c
        return out

    def max_degree(self) -> int:
        return max((sum(a) for a in self.coeffs), default=-1)

    def min_degree(self) -> int:
        return min((sum(a) for a in self.coeffs), default=-1)

    def evaluate(self, point: Iterable) -> object:
        point = list(point)
        total = 0
        for a, c in self.coeffs.items():
            term = c
            for x, k in zip(point, a):
                term *= x**k
            total += term
        return total

    def times_vanishing(self) -> "SymPoly":
        """Multiply by prod_i (1 - t_i)."""
        out = self
        for i in range(self.n):
            shifted = {}
            for a, c in out.coeffs.items():
                b = a[:i] + (a[i] + 1,) + a[i + 1:]
                if out.D is None or sum(b) <= out.D:
                    shifted[b] = shifted.get(b, 0) - c
            merged = dict(out.coeffs)
            for b, c in shifted.items():
                merged[b] = merged.get(b, 0) + c
            out = SymPoly._raw(self.n, merged, out.D)
        return out

    def over_vanishing(self, D: int) -> "SymPoly":
        """Multiply by prod_i 1/(1 - t_i), truncated at total degree ``D``."""
        if self.D is not None:
            D = min(D, self.D)
        cur = {a: c for a, c in self.coeffs.items() if sum(a) <= D}
        for i in range(self.n):
            nxt: dict[tuple, int] = {}
            for a in sorted(exponents_upto(self.n, D), key=lambda a: a[i]):
                prev = a[:i] + (a[i] - 1,) + a[i + 1:] if a[i] else None
                v = cur.get(a, 0) + (nxt.get(prev, 0) if prev else 0)
                if v:
                    nxt[a] = v
            cur = nxt
        return SymPoly._raw(self.n, cur, D)

    def dominated_by(self, other: "SymPoly") -> bool:
        """Coefficientwise <= on every exponent below both truncations."""
        D = self._join_D(other)
        keys = set(self.coeffs) | set(other.coeffs)
        return all(self[a] <= other[a] for a in keys if D is None or sum(a) <= D)


def _orbit_size(a: tuple) -> int:
    out = factorial(len(a))
    for k in set(a):
        out //= factorial(a.count(k))
    return out


def exponents_upto(n: int, D: int) -> list[tuple]:
    out = []
    for t in range(D + 1):
        out.extend(exponents_of_total(n, t))
    return out


def exponents_of_total(n: int, t: int) -> list[tuple]:
    if n == 1:
        return [(t,)]
    return [(a,) + rest for a in range(t + 1) for rest in exponents_of_total(n - 1, t - a)]


# --- partitions ---------------------------------------------------------


def partition(parts: Iterable[int], n: int) -> Partition:
    """Normalize to a length-``n`` weakly decreasing tuple, or raise."""
    parts = [int(x) for x in parts]
    if len(parts) > n:
        if any(parts[n:]):
            raise ValueError(f"{tuple(parts)} has more than {n} nonzero parts")
        parts = parts[:n]
    parts += [0] * (n - len(parts))
    if any(x < 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"{tuple(parts)} is not a partition")
    return tuple(parts)


def is_partition(a: tuple) -> bool:
    return all(x >= y for x, y in zip(a, a[1:])) and (not a or a[-1] >= 0)


def partitions(k: int, n: int, maxpart: int | None = None) -> Iterator[Partition]:
    """Partitions of ``k`` into at most ``n`` parts, lexicographically decreasing."""
    maxpart = k if maxpart is None else maxpart
    if n == 0:
        if k == 0:
            yield ()
        return
    for first in range(min(k, maxpart), -1, -1):
        if first * n < k:
            break
        for rest in partitions(k - first, n - 1, first):
            yield (first,) + rest


def dominates(lam: Partition, mu: Partition) -> bool:
    """lam >= mu in dominance order (equal sizes assumed)."""
    a = b = 0
    for x, y in zip(lam, mu):
        a += x
        b += y
        if a < b:
            return False
    return True


def is_one_column(lam: Partition) -> bool:
    """True for (1^k, 0^{n-k}) with 1 <= k <= n-1, the closed-forms family."""
    k = sum(lam)
    n = len(lam)
    return 1 <= k <= n - 1 and all(x == 1 for x in lam[:k])


def fmt_partition(lam: Partition) -> str:
    return "(" + ",".join(str(x) for x in lam) + ")"


# --- symmetric polynomials ---------------------------------------------


def ssyt(shape: Partition, n: int) -> Iterator[list[list[int]]]:
    """Semistandard tableaux of ``shape`` with entries 0..n-1."""
    shape = [x for x in shape if x]
    cells = [(r, c) for r, row in enumerate(shape) for c in range(row)]
    T = [[0] * row for row in shape]

    def fill(k):
        if k == len(cells):
            yield [row[:] for row in T]
            return
        r, c = cells[k]
        lo = 0
        if c:
            lo = T[r][c - 1]
        if r:
            lo = max(lo, T[r - 1][c] + 1)
        for v in range(lo, n):
            T[r][c] = v
            yield from fill(k + 1)

    yield from fill(0)


def schur(lam: Iterable[int], n: int) -> SymPoly:
    """Schur polynomial s_lam(t_1..t_n) by tableau enumeration."""
    lam = partition(lam, n)
    out: dict[tuple, int] = {}
    for T in ssyt(lam, n):
        w = [0] * n
        for row in T:
            for v in row:
                w[v] += 1
        out[tuple(w)] = out.get(tuple(w), 0) + 1
    return SymPoly._raw(n, out, None)


def elementary(k: int, n: int) -> SymPoly:
    if k < 0 or k > n:
        return SymPoly._raw(n, {}, None)
    out = {}
    for S in itertools.combinations(range(n), k):
        out[tuple(1 if i in S else 0 for i in range(n))] = 1
    return SymPoly._raw(n, out, None)


def complete(k: int, n: int) -> SymPoly:
    return SymPoly._raw(n, {a: 1 for a in exponents_of_total(n, k)}, None)


def numerator(lam: Iterable[int], n: int) -> SymPoly:
    """N_lam = h_{F_lam} * prod(1 - t_i)."""
    lam = partition(lam, n)
    if not any(lam):
        return SymPoly.one(n)
    if not is_one_column(lam):
        return schur(lam, n)
    # exact k-forms: N_(1) = 1 - prod(1-t), N_(1^k) = e_{k-1} - N_(1^{k-1})
    N = SymPoly.one(n) - SymPoly.one(n).times_vanishing()
    for k in range(2, sum(lam) + 1):
        N = elementary(k - 1, n) - N
    return N


def flambda_dims(lam: Iterable[int], n: int, maxdeg: int) -> SymPoly:
    """Multigraded Hilbert series of F_lam through total degree ``maxdeg``."""
    return numerator(lam, n).over_vanishing(maxdeg)


def density(lam: Iterable[int], n: int) -> int:
    return numerator(lam, n).evaluate([1] * n)


def dim_irrep(lam: Iterable[int], n: int) -> int:
    """dim V_lam by the hook-content formula (independent of tableaux)."""
    lam = partition(lam, n)
    num = den = 1
    for i, row in enumerate(lam):
        for j in range(row):
            num *= n + j - i
            arm = row - j - 1
            leg = sum(1 for r in lam[i + 1:] if r > j)
            den *= arm + leg + 1
    return num // den


def bound(m: int, n: int, mode: str = "thm12") -> int:
    """Upper bound on |lam| for F_lam in B_m(A_n).

    ``thm12``: 2m-3 for n in {2,3}, else 4m-7+2*floor((n-2)/2);
    ``m3``: the sharper m = 3 bound 3+2*floor((n-2)/2);
    ``de``: the older quadratic bound (m-1)^2 + 2*floor((n-2)/2)*(m-1).
    """
    half = 2 * ((n - 2) // 2)
    if mode == "thm12":
        if m < 3:
            raise ValueError("thm12 bound needs m >= 3")
        return 2 * m - 3 if n in (2, 3) else 4 * m - 7 + half
    if mode == "m3":
        if m != 3:
            raise ValueError("m3 bound only applies to m = 3")
        return 3 + half
    if mode == "de":
        if m < 3:
            raise ValueError("de bound needs m >= 3")
        return (m - 1) ** 2 + half * (m - 1)
    raise ValueError(f"unknown bound mode {mode!r}")


def upper_series(m: int, n: int, maxdeg: int) -> SymPoly:
    """Hilbert series of Y/JY, which dominates that of B_m(A_n)."""
    if m < 3:
        raise ValueError("upper series needs m >= 3")
    one = SymPoly.one(n)
    e1 = elementary(1, n)
    num = (one + e1 + complete(2, n)) ** (m - 2) * (one + e1)
    if n >= 4:
        K = (n - 2) // 2
        tail = SymPoly._raw(n, {}, None)
        for j in range(K + 1):
            for k in range(K + 1 - j):
                tail = tail + elementary(2 * j, n) * elementary(2 * k, n)
        num = num * (one + elementary(2, n)) ** (m - 2) * tail
    return num.over_vanishing(maxdeg)


def density_ratio(n: int):
    """Largest allowed a_{m+1,n} / a_{m,n}."""
    from fractions import Fraction

    if n == 2:
        return Fraction(3)
    if n == 3:
        return Fraction(9)
    return Fraction(n**3 + 11 * n, 6)


__all__ = [
    "SymPoly",
    "partition",
    "partitions",
    "dominates",
    "schur",
    "elementary",
    "complete",
    "numerator",
    "flambda_dims",
    "density",
    "dim_irrep",
    "bound",
    "upper_series",
    "fmt_partition",
]
