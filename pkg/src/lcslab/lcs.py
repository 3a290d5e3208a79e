"""Lower central series L_m(A_n) per multidegree, and B_m = L_m / L_{m+1}.

A component L_m[d] is represented by a basis of *witnesses*: the generators
(nested commutators of monomials) that raised the rank while the component
was being built.  Witnesses stay sparse, with at most 2^(m-1) terms, so
bracketing them into the next level is cheap; the reduced echelon form is
only materialized while a component is being built or tested.

Strategies for building L_m[d] from L_{m-1}:

``brute``
    [w, v] for every monomial w of every positive degree e <= d and every
    witness v of L_{m-1}[d-e].  This is the definition.
``spanning``
    For m >= 3 the outer monomials are replaced by the reduced generators
    (x_i, x_i x_j, and x_i [x_j, x_k] for n >= 4).  Levels m <= 2 are always
    built by ``brute``.
"""
from __future__ import annotations

import itertools
import logging
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .freealg import (
    Component,
    Element,
    bracket,
    component,
    degrees_upto,
    down_set,
    enumerate_words,
    generators,
    nested,
    pack,
)
from .linalg import DEFAULT_PRIMES, EchelonBasis, Field, QQ, dual_prime, solve_rational

log = logging.getLogger(__name__)

STRATEGIES = ("brute", "spanning")
DEGREE_CAPS = {2: 12, 3: 8, 4: 6, 5: 6, 6: 6}


class ComponentCapExceeded(ValueError):
    pass


@dataclass
class Witnesses:
    """CSR rows over the word basis of one component (data in the field)."""

    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    @property
    def count(self) -> int:
        return len(self.indptr) - 1

    @classmethod
    def empty(cls, rational: bool = False) -> "Witnesses":
        return cls(np.zeros(1, np.int64), np.zeros(0, np.int64), np.zeros(0, object if rational else np.int64))

    def rows(self, keep: np.ndarray) -> "Witnesses":
        lengths = np.diff(self.indptr)
        mask = np.repeat(keep, lengths)
        indptr = np.concatenate([[0], np.cumsum(lengths[keep])]).astype(np.int64)
        return Witnesses(indptr, self.indices[mask], self.data[mask])


@dataclass
class LcsComponent:
    n: int
    m: int
    d: tuple
    field: Field
    strategy: str
    dim: int
    witnesses: Witnesses
    basis: EchelonBasis | None = dc_field(default=None, repr=False)


# --- generator construction -------------------------------------------------


def _neg(data: np.ndarray, field: Field) -> np.ndarray:
    if field.rational:
        return -data
    return (field.p - data) % field.p


def _scale(data: np.ndarray, c, field: Field) -> np.ndarray:
    if field.rational:
        return data * Fraction(c)
    return (data * field(c)) % field.p


def _bracket_block(outer_codes: np.ndarray, outer_len: int, outer_coeff, inner: Witnesses,
                   inner_comp: Component, target: Component, field: Field, left_only: bool = False):
    """COO triplets (row, col, val) of c*[w, v] for each outer word w and inner row v.

    Rows are numbered word-major: row = k * inner.count + r.  ``left_only``
    gives w*v instead of the bracket.
    """
    n = target.n
    nnz = len(inner.indices)
    k = len(outer_codes)
    if nnz == 0 or k == 0:
        return None
    row_of = np.repeat(np.arange(inner.count, dtype=np.int64), np.diff(inner.indptr))
    inner_codes = inner_comp.codes[inner.indices]
    shift_in = n ** inner_comp.total
    shift_out = n ** outer_len
    left = target.lookup(outer_codes[:, None] * shift_in + inner_codes[None, :])
    rows = (np.arange(k, dtype=np.int64)[:, None] * inner.count + row_of[None, :])
    vals = np.broadcast_to(inner.data, (k, nnz))
    if outer_coeff is not None:
        vals = np.stack([_scale(inner.data, c, field) for c in outer_coeff])
    if left_only:
        return rows.ravel(), left.ravel(), vals.ravel()
    right = target.lookup(inner_codes[None, :] * shift_out + outer_codes[:, None])
    return (
        np.concatenate([rows.ravel(), rows.ravel()]),
        np.concatenate([left.ravel(), right.ravel()]),
        np.concatenate([vals.ravel(), _neg(vals, field).ravel()]),
    )


def _to_csr(parts, nrows: int, field: Field) -> Witnesses:
    if not parts:
        return Witnesses(np.zeros(nrows + 1, np.int64), np.zeros(0, np.int64),
                         np.zeros(0, object if field.rational else np.int64))
    rows = np.concatenate([p[0] for p in parts])
    cols = np.concatenate([p[1] for p in parts])
    vals = np.concatenate([p[2] for p in parts])
    order = np.argsort(rows, kind="stable")
    counts = np.bincount(rows, minlength=nrows)
    indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return Witnesses(indptr, cols[order].astype(np.int64), vals[order])


def reduced_generators(n: int, cubic: bool = True) -> list[Element]:
    """Outer elements x_i, x_i x_j and (n >= 4) x_i [x_j, x_k]."""
    x = generators(n)
    out = list(x)
    if n == 2:
        out.append(x[0] * x[1])
    else:
        out.extend(x[i] * x[j] for i, j in itertools.combinations_with_replacement(range(n), 2))
    if n >= 4 and cubic:
        out.extend(x[i] * bracket(x[j], x[k]) for i, j, k in itertools.combinations(range(n), 3))
    return out


def _sub(d, e):
    return tuple(a - b for a, b in zip(d, e))


def _le(e, d):
    return all(a <= b for a, b in zip(e, d))


def element_brackets(outer: list[Element], d: tuple, level: dict, field: Field):
    """Generator CSR for sum over g in outer of [g, L[d - deg g]] (level maps d -> Witnesses)."""
    n = len(d)
    target = component(n, d)
    parts = []
    base = 0
    for g in outer:
        e = g.degree
        if not any(e) or not _le(e, d):
            continue
        inner = level.get(_sub(d, e))
        if inner is None or inner.count == 0:
            continue
        words = sorted(g.terms)
        codes = np.array([pack(w, n) for w in words], dtype=np.int64)
        coeffs = [g.terms[w] for w in words]
        inner_comp = component(n, _sub(d, e))
        for k, (code, c) in enumerate(zip(codes, coeffs)):
            block = _bracket_block(codes[k:k + 1], sum(e), [c], inner, inner_comp, target, field)
            if block is not None:
                parts.append((block[0] + base, block[1], block[2]))
        base += inner.count
    return _to_csr(parts, base, field)


def word_brackets(d: tuple, level: dict, field: Field, left_only: bool = False, include_unit: bool = False):
    """Generator CSR for [w, v] over all monomials w (or w*v if ``left_only``)."""
    n = len(d)
    target = component(n, d)
    parts = []
    base = 0
    for e in down_set(d):
        if not any(e) and not include_unit:
            continue
        inner = level.get(_sub(d, e))
        if inner is None or inner.count == 0:
            continue
        outer = component(n, e)
        block = _bracket_block(outer.codes, sum(e), None, inner, component(n, _sub(d, e)), target,
                               field, left_only=left_only)
        if block is not None:
            parts.append((block[0] + base, block[1], block[2]))
        base += len(outer) * inner.count
    return _to_csr(parts, base, field)


def _full_witnesses(comp: Component, field: Field) -> Witnesses:
    k = len(comp)
    data = np.array([Fraction(1)] * k, dtype=object) if field.rational else np.ones(k, np.int64)
    return Witnesses(np.arange(k + 1, dtype=np.int64), np.arange(k, dtype=np.int64), data)


def _absorb(basis: EchelonBasis, gens: Witnesses) -> Witnesses:
    grew = basis.absorb_csr(gens.indptr, gens.indices, gens.data)
    return gens.rows(grew.astype(bool))


# --- the engine -------------------------------------------------------------

_POOL_STATE: dict = {}


def _pool_build(args):
    d, m = args
    eng = _POOL_STATE["engine"]
    return d, eng._build(m, d, _POOL_STATE["prev"])


class LcsEngine:
    """Memoizing builder of L_m(A_n)[d] over one field."""

    def __init__(self, n: int, field: Field = Field(), strategy: str = "brute", jobs: int = 1,
                 word_limit: int = 20000):
        if n < 2:
            raise ValueError("n must be at least 2")
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}")
        self.n = n
        self.field = field
        self.strategy = strategy
        self.jobs = jobs
        self.word_limit = word_limit
        self.levels: dict[int, dict[tuple, Witnesses]] = {}
        self._gens = reduced_generators(n)

    def _check_size(self, d):
        from .freealg import multinomial

        if multinomial(d) > self.word_limit:
            raise ComponentCapExceeded(f"A_{self.n}{list(d)} has {multinomial(d)} words (cap {self.word_limit})")

    def _build(self, m: int, d: tuple, prev: dict) -> Witnesses:
        comp = component(self.n, d)
        if sum(d) < m:
            return Witnesses.empty(self.field.rational)
        if m == 1:
            return _full_witnesses(comp, self.field)
        if self.strategy == "spanning" and m >= 3:
            gens = element_brackets(self._gens, d, prev, self.field)
        else:
            gens = word_brackets(d, prev, self.field)
        basis = EchelonBasis(len(comp), self.field)
        return _absorb(basis, gens)

    def ensure(self, m: int, degrees) -> None:
        """Build levels 1..m on the down-closure of ``degrees``."""
        need = set()
        for d in degrees:
            d = tuple(d)
            if len(d) != self.n:
                raise ValueError(f"multidegree {d} has wrong length for n={self.n}")
            need.update(down_set(d))
        need = sorted(need, key=lambda e: (sum(e), e))
        for d in need:
            if any(k for k in d):
                self._check_size(d)
        for level in range(1, m + 1):
            have = self.levels.setdefault(level, {})
            todo = [d for d in need if d not in have]
            if not todo:
                continue
            prev = self.levels.get(level - 1, {})
            if self.jobs > 1 and len(todo) > 4 and level > 1:
                _POOL_STATE["engine"] = self
                _POOL_STATE["prev"] = prev
                ctx = multiprocessing.get_context("fork")
                with ProcessPoolExecutor(self.jobs, mp_context=ctx) as pool:
                    todo_big = sorted(todo, key=lambda e: -len(component(self.n, e)))
                    for d, w in pool.map(_pool_build, [(d, level) for d in todo_big], chunksize=1):
                        have[d] = w
                _POOL_STATE.clear()
            else:
                for d in todo:
                    have[d] = self._build(level, d, prev)
            log.debug("n=%d level %d: %d components", self.n, level, len(todo))

    def witnesses(self, m: int, d) -> Witnesses:
        d = tuple(d)
        self.ensure(m, [d])
        return self.levels[m][d]

    def dim(self, m: int, d) -> int:
        return self.witnesses(m, d).count

    def basis(self, m: int, d) -> EchelonBasis:
        d = tuple(d)
        w = self.witnesses(m, d)
        b = EchelonBasis(len(component(self.n, d)), self.field)
        b.absorb_csr(w.indptr, w.indices, w.data)
        return b

    def component(self, m: int, d, keep_basis: bool = False) -> LcsComponent:
        d = tuple(d)
        w = self.witnesses(m, d)
        return LcsComponent(self.n, m, d, self.field, self.strategy, w.count, w,
                            self.basis(m, d) if keep_basis else None)

    def dims(self, ms, maxdeg: int) -> dict[tuple[int, tuple], int]:
        degs = degrees_upto(self.n, maxdeg)
        top = [d for d in degs if sum(d) == maxdeg] or degs
        self.ensure(max(ms), top)
        return {(m, d): self.levels[m][d].count for m in ms for d in degs}


# --- module-level operations ------------------------------------------------


def _field_runner(fn, field: Field | None, primes):
    if field is not None:
        return fn(field)
    return dual_prime(fn, primes)


def lcs_component(n: int, m: int, d, field: Field = Field(), strategy: str = "brute",
                  keep_basis: bool = True) -> LcsComponent:
    if m < 1:
        raise ValueError("m must be >= 1")
    if strategy == "spanning" and m <= 2:
        raise ValueError("spanning strategy is only defined for m >= 3")
    return LcsEngine(n, field, strategy).component(m, d, keep_basis=keep_basis)


def bm_dim(n: int, m: int, d, field: Field | None = None, strategy: str = "brute",
           primes=DEFAULT_PRIMES) -> int:
    """dim B_m(A_n)[d]; without ``field`` the dual-prime protocol is used."""
    d = tuple(d)

    def run(f):
        eng = LcsEngine(n, f, strategy)
        return eng.dim(m, d) - eng.dim(m + 1, d)

    return _field_runner(run, field, primes)


def membership(v: Element, m: int, field: Field = QQ, engine: LcsEngine | None = None) -> bool:
    """Whether the homogeneous element ``v`` lies in L_m."""
    if v.is_zero():
        return True
    eng = engine or LcsEngine(v.n, field)
    return eng.basis(m, v.degree).contains(v.to_vector(field=eng.field))


def spanning_check(n: int, m: int, d, field: Field = Field(), cubic: bool = True,
                   engine: LcsEngine | None = None) -> bool:
    """Reduced-generator brackets into L_m plus L_{m+2} span L_{m+1} at ``d``."""
    d = tuple(d)
    if m < 1:
        raise ValueError("m must be >= 1")
    eng = engine or LcsEngine(n, field, "brute")
    if eng.strategy != "brute":
        raise ValueError("spanning_check needs a brute-force engine")
    eng.ensure(m + 2, [d])
    outer = generators(n) if m == 1 else reduced_generators(n, cubic=cubic)
    comp = component(n, d)
    basis = EchelonBasis(len(comp), eng.field)
    deep = eng.levels[m + 2][d]
    basis.absorb_csr(deep.indptr, deep.indices, deep.data)
    gens = element_brackets(outer, d, eng.levels[m], eng.field)
    basis.absorb_csr(gens.indptr, gens.indices, gens.data)
    return basis.dimension == eng.levels[m + 1][d].count


def zbar_dim(n: int, d, field: Field = Field(), engine: LcsEngine | None = None) -> int:
    """dim of (A / A[A,[A,A]])[d]."""
    d = tuple(d)
    eng = engine or LcsEngine(n, field)
    eng.ensure(3, [d])
    comp = component(n, d)
    gens = word_brackets(d, eng.levels[3], eng.field, left_only=True, include_unit=True)
    basis = EchelonBasis(len(comp), eng.field)
    basis.absorb_csr(gens.indptr, gens.indices, gens.data)
    return len(comp) - basis.dimension


# --- identities ----------------------------------------------------------------


def _lemma31() -> Element:
    u, v, w = generators(3)
    b = bracket
    h = Fraction(3, 2)
    lhs = b(u**3, b(v, w))
    rhs = (3 * b(u**2, b(u * v, w)) - 3 * b(u, b(u**2 * v, w)) + h * b(u**2, b(v, b(u, w)))
           - h * b(u, b(v, b(u**2, w))) + nested(u, u, u, b(v, w)) - h * nested(u, u, v, b(u, w))
           + h * nested(u, v, u, b(u, w)))
    return lhs - rhs


def _lemma35a() -> Element:
    x, y, w = generators(3)
    b = bracket
    lhs = b(x**2, b(y, w))
    rhs = 2 * b(x, b(x * y, w)) + b(y, b(x**2, w)) - 2 * b(x * y, b(x, w)) - nested(w, x, b(y, x))
    return lhs - rhs


def _lemma35b() -> Element:
    x, y, w = generators(3)
    b = bracket
    lhs = 6 * b(x**2, b(x * y, w))
    rhs = (12 * b(x, b(x**2 * y, w)) + 4 * b(y, b(x**3, w)) - 6 * b(x * y, b(x**2, w))
           - 3 * b(x**2, b(y, b(x, w))) - 3 * b(y, b(x**2, b(x, w))) + 9 * b(x, b(y, b(x**2, w)))
           - 3 * nested(x, x, x, b(y, w)) + 3 * nested(x, x, y, b(x, w)) - 3 * nested(x, y, x, b(x, w))
           - nested(y, x, x, b(x, w)))
    return lhs - rhs


def _lemma52() -> Element:
    x, y, z, w, v = generators(5)
    b = bracket
    lhs = b(x * b(y, z), b(w, v))
    rhs = b(x, b(w * b(y, z), v)) - b(y, b(w * b(x, z), v)) + b(z, b(w * b(x, y), v))
    return lhs - rhs


IDENTITIES = {
    "lemma31": (_lemma31, None),
    "lemma35a": (_lemma35a, None),
    "lemma35b": (_lemma35b, None),
    "lemma52": (_lemma52, 4),
}


def identity_residual(which: str) -> Element:
    """LHS - RHS of the named identity, expanded in the free algebra."""
    return IDENTITIES[which][0]()


def identity_check(which: str, modulo: int | None = None) -> bool:
    """True iff LHS - RHS vanishes exactly, or lies in L_modulo when one is given.

    ``lemma52`` is stated modulo L_4 and is always checked that way.
    """
    if which not in IDENTITIES:
        raise ValueError(f"unknown identity {which!r}")
    build, default_mod = IDENTITIES[which]
    residual = build()
    mod = modulo if modulo is not None else default_mod
    if mod is None:
        return residual.is_zero()
    return membership(residual, mod, QQ)


def reordering_solve(m: int):
    """Coefficients eps(sigma) with [a0,[a1,...[a_{m-1},a_m]]] = sum eps(sigma) [a_s1,[...[a_sm, a0]]].

    Returns a dict mapping permutations of (1..m) to Fractions, or None if
    the system is infeasible.
    """
    if not 2 <= m <= 4:
        raise ValueError("reordering_solve supports 2 <= m <= 4")
    a = generators(m + 1)
    target = nested(*a)
    comp = component(m + 1, target.degree)
    perms = list(itertools.permutations(range(1, m + 1)))
    columns = [nested(*[a[i] for i in s], a[0]).to_vector(comp) for s in perms]
    sol = solve_rational(columns, target.to_vector(comp))
    if sol is None:
        return None
    return {s: c for s, c in zip(perms, sol) if c}


def v_generator(k: int) -> Element:
    """[x_1, [x_1,x_2][x_3,x_4]...[x_{2k-1},x_{2k}]] in A_{2k}."""
    x = generators(2 * k)
    prod = Element.unit(2 * k)
    for i in range(k):
        prod = prod * bracket(x[2 * i], x[2 * i + 1])
    return bracket(x[0], prod)


def v_generator_nonzero(k: int, field: Field | None = None, strategy: str = "brute") -> bool:
    """v lies in L_3 and not in L_4 (so it is nonzero in B_3(A_{2k}))."""
    if not 1 <= k <= 3:
        raise ValueError("v_generator_nonzero supports 1 <= k <= 3")
    v = v_generator(k)

    def run(f):
        eng = LcsEngine(2 * k, f, strategy, word_limit=5040)
        vec = v.to_vector(field=f)
        return eng.basis(3, v.degree).contains(vec) and not eng.basis(4, v.degree).contains(vec)

    return _field_runner(run, field, DEFAULT_PRIMES)


# --- Hilbert series of B_m ----------------------------------------------------


def lcs_dim_table(n: int, ms, maxdeg: int, field: Field, strategy: str = "brute", cache=None,
                  jobs: int = 1, cap: int | None = None) -> dict[tuple[int, tuple], int]:
    """dim L_m[d] for every m in ``ms`` and every d of total <= maxdeg."""
    ms = sorted(set(ms))
    if cap is None:
        cap = DEGREE_CAPS.get(n, 6)
    if maxdeg > cap:
        raise ComponentCapExceeded(f"maxdeg {maxdeg} above cap {cap} for n={n}")
    degs = degrees_upto(n, maxdeg)
    keys = [(n, m, d, field.tag) for m in ms for d in degs]
    if cache is not None and cache.has_all(keys):
        return {(m, d): cache.get(n, m, d, field.tag) for m in ms for d in degs}
    eng = LcsEngine(n, field, strategy, jobs=jobs)
    levels = range(1, max(ms) + 1)
    dims = eng.dims(levels, maxdeg)
    if cache is not None:
        cache.put_many((n, m, d, field.tag, dims[(m, d)]) for m in levels for d in degs)
    return {(m, d): dims[(m, d)] for m in ms for d in degs}


def bm_tables(n: int, ms, maxdeg: int, fields=None, strategy: str = "brute", cache=None,
              jobs: int = 1, cap: int | None = None):
    """Truncated multigraded Hilbert series of B_m(A_n) for each m in ``ms``.

    ``fields`` defaults to the two default primes; with two fields every
    coefficient must agree or :class:`PrimeMismatchError` is raised.
    """
    from .linalg import PrimeMismatchError
    from .symfunc import SymPoly

    ms = sorted(set(ms))
    if any(m < 1 for m in ms):
        raise ValueError("m must be >= 1")
    fields = list(fields) if fields is not None else [Field(p) for p in DEFAULT_PRIMES]
    levels = sorted(set(ms) | {m + 1 for m in ms})
    tables = [lcs_dim_table(n, levels, maxdeg, f, strategy, cache, jobs, cap) for f in fields]
    first = tables[0]
    for f, t in zip(fields[1:], tables[1:]):
        for key, v in first.items():
            if t[key] != v:
                raise PrimeMismatchError(
                    f"dim L_{key[0]}{list(key[1])} is {v} over {fields[0]} but {t[key]} over {f}; "
                    "rerun with --rational")
    out = {}
    for m in ms:
        coeffs = {d: first[(m, d)] - first[(m + 1, d)] for d in degrees_upto(n, maxdeg)}
        out[m] = SymPoly(n, coeffs, D=maxdeg)
    return out


def bm_hilbert(n: int, m: int, maxdeg: int, fields=None, strategy: str = "brute", cache=None,
               jobs: int = 1, cap: int | None = None):
    return bm_tables(n, [m], maxdeg, fields, strategy, cache, jobs, cap)[m]


def spanning_grid(n: int, ms, maxdeg: int, field: Field = Field(), cubic: bool = True,
                  jobs: int = 1) -> list[tuple[int, tuple, bool]]:
    """spanning_check at every m in ``ms`` and every d of total <= maxdeg, on one engine."""
    eng = LcsEngine(n, field, "brute", jobs=jobs)
    degs = degrees_upto(n, maxdeg)
    eng.ensure(max(ms) + 2, [d for d in degs if sum(d) == maxdeg])
    return [(m, d, spanning_check(n, m, d, field, cubic, eng)) for m in ms for d in degs if sum(d) > m]
