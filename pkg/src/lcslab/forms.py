"""Polynomial differential forms on affine n-space and the quantized product.

A basis form is ``x^alpha dx_S`` with ``S`` a strictly increasing tuple of
variable indices; its multidegree is ``alpha + 1_S`` (x_i and dx_i both have
degree e_i).  Forms are sparse maps from ``(alpha, S)`` to rationals.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable, Mapping

from .freealg import degrees_upto
from .linalg import DEFAULT_PRIMES, EchelonBasis, Field, QQ, sparse

Basis = tuple  # (alpha, S)


def _merge_sign(S: tuple, T: tuple) -> int:
    """Sign of dx_S ^ dx_T relative to dx_{S u T} sorted; 0 on overlap."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


class Form:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[Basis, object] | None = None):
        self.n = n
        out: dict[Basis, Fraction] = {}
        for (alpha, S), c in (terms or {}).items():
            alpha, S = tuple(alpha), tuple(S)
            if len(alpha) != n or list(S) != sorted(set(S)) or any(not 0 <= i < n for i in S):
                raise ValueError(f"bad basis form {(alpha, S)}")
            out[(alpha, S)] = out.get((alpha, S), 0) + Fraction(c)
        self.terms = {k: c for k, c in out.items() if c}

    @classmethod
    def _raw(cls, n, terms):
        f = cls.__new__(cls)
        f.n = n
        f.terms = {k: c for k, c in terms.items() if c}
        return f

    @classmethod
    def one(cls, n: int) -> "Form":
        return cls._raw(n, {((0,) * n, ()): Fraction(1)})

    @classmethod
    def x(cls, i: int, n: int) -> "Form":
        a = [0] * n
        a[i] = 1
        return cls._raw(n, {(tuple(a), ()): Fraction(1)})

    @classmethod
    def dx(cls, i: int, n: int) -> "Form":
        return cls._raw(n, {((0,) * n, (i,)): Fraction(1)})

    @classmethod
    def basis(cls, alpha, S, n: int) -> "Form":
        return cls(n, {(tuple(alpha), tuple(S)): 1})

    def ranks(self) -> set[int]:
        return {len(S) for _, S in self.terms}

    def is_even(self) -> bool:
        return all(r % 2 == 0 for r in self.ranks())

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Form._raw(self.n, out)

    def __neg__(self) -> "Form":
        return Form._raw(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __rmul__(self, c) -> "Form":
        c = Fraction(c)
        return Form._raw(self.n, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, Form) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (alpha, S), c in sorted(self.terms.items()):
            mono = "".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(alpha) if k)
            diff = "^".join(f"dx{i + 1}" for i in S)
            body = "*".join(p for p in (mono, diff) if p) or "1"
            parts.append(f"{c}*{body}" if c != 1 else body)
        return " + ".join(parts)

    def multidegrees(self) -> set[tuple]:
        return {multidegree(b) for b in self.terms}


def multidegree(b: Basis) -> tuple:
    alpha, S = b
    return tuple(a + (1 if i in S else 0) for i, a in enumerate(alpha))


def wedge(a: Form, b: Form) -> Form:
    out: dict[Basis, Fraction] = {}
    for (al, S), c in a.terms.items():
        for (be, T), e in b.terms.items():
            sg = _merge_sign(S, T)
            if sg:
                key = (tuple(x + y for x, y in zip(al, be)), tuple(sorted(S + T)))
                out[key] = out.get(key, 0) + sg * c * e
    return Form._raw(a.n, out)


def differential(a: Form) -> Form:
    out: dict[Basis, Fraction] = {}
    for (al, S), c in a.terms.items():
        for i, k in enumerate(al):
            if k == 0 or i in S:
                continue
            sg = -1 if sum(1 for s in S if s < i) % 2 else 1
            key = (al[:i] + (k - 1,) + al[i + 1:], tuple(sorted(S + (i,))))
            out[key] = out.get(key, 0) + sg * k * c
    return Form._raw(a.n, out)


def star(a: Form, b: Form) -> Form:
    """a * b = a ^ b + da ^ db on even forms."""
    if not (a.is_even() and b.is_even()):
        raise ValueError("star product is defined on even forms only")
    return wedge(a, b) + wedge(differential(a), differential(b))


def symmetrized(a: Form, b: Form, c: Form) -> Form:
    """S(a,b,c): the average of the six *-products of a, b, c."""
    total = Form(a.n)
    for p, q, r in itertools.permutations((a, b, c)):
        total = total + star(star(p, q), r)
    return Fraction(1, 6) * total


# --- graded components ------------------------------------------------------


def basis_forms(n: int, d, parity: int | None = 0, rank: int | None = None) -> list[Basis]:
    """Basis forms of multidegree ``d``: even (parity 0), odd (1), all (None), or one rank."""
    d = tuple(d)
    supp = [i for i, k in enumerate(d) if k]
    out = []
    for k in range(len(supp) + 1):
        if rank is not None and k != rank:
            continue
        if parity is not None and k % 2 != parity:
            continue
        for S in itertools.combinations(supp, k):
            alpha = tuple(x - (1 if i in S else 0) for i, x in enumerate(d))
            out.append((alpha, S))
    return sorted(out)


def omega_ev_dim(n: int, d) -> int:
    if len(d) != n:
        raise ValueError("multidegree length must equal n")
    return len(basis_forms(n, d, 0))


def _vector(f: Form, index: dict, field: Field):
    return sparse(((index[k], c) for k, c in f.terms.items()), field)


def exact_even_dim(n: int, d, field: Field = QQ) -> int:
    """Rank of d on odd forms of multidegree ``d``."""
    even = {b: i for i, b in enumerate(basis_forms(n, d, 0))}
    basis = EchelonBasis(len(even), field)
    for b in basis_forms(n, d, 1):
        basis.insert(_vector(differential(Form._raw(n, {b: Fraction(1)})), even, field))
    return basis.dimension


def x_generators(n: int) -> list[Form]:
    """1, x_i, x_i x_j (i <= j), x_i dx_j ^ dx_k (i < j < k)."""
    x = [Form.x(i, n) for i in range(n)]
    dx = [Form.dx(i, n) for i in range(n)]
    out = [Form.one(n)] + x
    out += [wedge(x[i], x[j]) for i, j in itertools.combinations_with_replacement(range(n), 2)]
    out += [wedge(x[i], wedge(dx[j], dx[k])) for i, j, k in itertools.combinations(range(n), 3)]
    return out


def _positive_splits(d, parts: int):
    """Ordered splits of ``d`` into ``parts`` nonzero multidegrees."""
    ranges = [range(k + 1) for k in d]
    if parts == 1:
        if any(d):
            yield (tuple(d),)
        return
    for e in itertools.product(*ranges):
        if any(e):
            rest = tuple(a - b for a, b in zip(d, e))
            for tail in _positive_splits(rest, parts - 1):
                yield (e,) + tail


def lemma33_check(n: int, total: int, field: Field = QQ, cap: int = 8) -> bool:
    """X + E + exact even forms fill every even component of the given total degree."""
    if total > cap:
        raise ValueError(f"total degree {total} above cap {cap}")
    xs = x_generators(n)
    for d in degrees_upto(n, total):
        if sum(d) != total:
            continue
        even = {b: i for i, b in enumerate(basis_forms(n, d, 0))}
        basis = EchelonBasis(len(even), field)
        for g in xs:
            if g.multidegrees() == {d}:
                basis.insert(_vector(g, even, field))
        for b in basis_forms(n, d, 1):
            basis.insert(_vector(differential(Form._raw(n, {b: Fraction(1)})), even, field))
        seen = set()
        for e1, e2, e3 in _positive_splits(d, 3):
            for a, b, c in itertools.product(basis_forms(n, e1), basis_forms(n, e2), basis_forms(n, e3)):
                key = tuple(sorted((a, b, c)))
                if key in seen or basis.dimension == len(even):
                    continue
                seen.add(key)
                s = symmetrized(*(Form._raw(n, {t: Fraction(1)}) for t in (a, b, c)))
                basis.insert(_vector(s, even, field))
        if basis.dimension != len(even):
            return False
    return True


@dataclass
class XiReport:
    n: int
    maxdeg: int
    checked: list = dc_field(default_factory=list)
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def xi_consistency(n: int, maxdeg: int, primes=DEFAULT_PRIMES, field: Field | None = None) -> XiReport:
    """Dimension-level consequences of the isomorphism of even quantized forms with A/A[A,[A,A]].

    For each multidegree: even forms vs A/A[A,[A,A]], and exact even forms vs B_2.
    Every A-side dimension is computed over both primes (or over ``field``).
    """
    from .lcs import LcsEngine, zbar_dim

    fields = [field] if field is not None else [Field(p) for p in primes]
    engines = [LcsEngine(n, f) for f in fields]
    report = XiReport(n, maxdeg)
    for d in degrees_upto(n, maxdeg):
        om = omega_ev_dim(n, d)
        ex = exact_even_dim(n, d)
        zb = {zbar_dim(n, d, engine=e) for e in engines}
        b2 = {e.dim(2, d) - e.dim(3, d) for e in engines}
        row = {"d": list(d), "omega_ev": om, "zbar": sorted(zb), "exact_even": ex, "b2": sorted(b2)}
        report.checked.append(row)
        if zb != {om} or b2 != {ex}:
            report.failures.append(row)
    return report
