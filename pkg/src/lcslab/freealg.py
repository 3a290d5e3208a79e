"""Words and homogeneous elements of the free associative algebra A_n.

Generators are 0-based internally (``x1`` is index 0) and printed 1-based.
A graded component A_n[d] has the words of multidegree ``d`` as its basis,
ordered lexicographically; for a fixed length that is the numeric order of
the base-``n`` packed code, which is what :class:`Component` indexes by.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

from .linalg import Field, SparseVector, sparse

Word = tuple  # tuple[int, ...]
MultiDegree = tuple  # tuple[int, ...]

WORD_LIMIT = 2_000_000


class ComponentTooLarge(ValueError):
    pass


def multinomial(d: Iterable[int]) -> int:
    d = list(d)
    out = math.factorial(sum(d))
    for k in d:
        out //= math.factorial(k)
    return out


def multidegree(word: Word, n: int) -> MultiDegree:
    out = [0] * n
    for a in word:
        out[a] += 1
    return tuple(out)


def _multiset_perms(d: list[int], total: int) -> Iterator[Word]:
    if total == 0:
        yield ()
        return
    for a in range(len(d)):
        if d[a]:
            d[a] -= 1
            for rest in _multiset_perms(d, total - 1):
                yield (a,) + rest
            d[a] += 1


def enumerate_words(n: int, d: MultiDegree, limit: int = WORD_LIMIT) -> list[Word]:
    """All words of multidegree ``d`` in lexicographic order."""
    if len(d) != n:
        raise ValueError(f"multidegree {d} has length {len(d)}, expected {n}")
    if any(k < 0 for k in d):
        raise ValueError("negative exponent in multidegree")
    count = multinomial(d)
    if count > limit:
        raise ComponentTooLarge(f"A_{n}{list(d)} has {count} words (limit {limit})")
    return list(_multiset_perms(list(d), sum(d)))


def pack(word: Word, n: int) -> int:
    code = 0
    for a in word:
        code = code * n + a
    return code


class Component:
    """Canonical word basis of one graded component A_n[d]."""

    def __init__(self, n: int, d: MultiDegree):
        self.n = n
        self.d = tuple(d)
        self.total = sum(d)
        if n ** max(self.total, 1) >= 1 << 62:
            raise ComponentTooLarge("packed word code would overflow")
        self.words = enumerate_words(n, self.d)
        self.codes = np.fromiter((pack(w, n) for w in self.words), dtype=np.int64, count=len(self.words))

    def __len__(self):
        return len(self.words)

    def index(self, word: Word) -> int:
        code = pack(word, self.n)
        i = int(np.searchsorted(self.codes, code))
        if len(word) != self.total or i >= len(self.codes) or self.codes[i] != code:
            raise KeyError(word)
        return i

    def lookup(self, codes: np.ndarray) -> np.ndarray:
        """Indices of packed codes that are known to lie in this component."""
        return np.searchsorted(self.codes, codes)


@lru_cache(maxsize=None)
def component(n: int, d: MultiDegree) -> Component:
    return Component(n, tuple(d))


def concat_maps(outer: Component, left_code: int, left_len: int, inner: Component):
    """Index maps u -> w·u and u -> u·w from ``inner`` into ``outer``."""
    n = outer.n
    left = outer.lookup(left_code * n ** inner.total + inner.codes)
    right = outer.lookup(inner.codes * n ** left_len + left_code)
    return left, right


class Element:
    """Homogeneous element of A_n: a map from words to nonzero rationals."""

    __slots__ = ("n", "degree", "terms")

    def __init__(self, n: int, degree: MultiDegree, terms: Mapping[Word, object] | None = None):
        self.n = n
        self.degree = tuple(degree)
        if len(self.degree) != n:
            raise ValueError("multidegree length must equal n")
        clean = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if multidegree(w, n) != self.degree:
                raise ValueError(f"word {w} is not of multidegree {self.degree}")
            c = Fraction(c)
            if c:
                clean[w] = clean.get(w, 0) + c
        self.terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def gen(cls, i: int, n: int) -> "Element":
        """The generator x_{i+1}."""
        deg = [0] * n
        deg[i] = 1
        return cls(n, deg, {(i,): 1})

    @classmethod
    def unit(cls, n: int) -> "Element":
        return cls(n, (0,) * n, {(): 1})

    @classmethod
    def word(cls, w: Word, n: int) -> "Element":
        return cls(n, multidegree(w, n), {tuple(w): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def _same(self, other: "Element") -> None:
        if self.n != other.n:
            raise ValueError("elements of different free algebras")
        if self.degree != other.degree and self.terms and other.terms:
            raise ValueError(f"inhomogeneous sum of degrees {self.degree} and {other.degree}")

    def __add__(self, other: "Element") -> "Element":
        self._same(other)
        deg = self.degree if self.terms else other.degree
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return Element(self.n, deg, out)

    def __neg__(self) -> "Element":
        return Element(self.n, self.degree, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def __mul__(self, other) -> "Element":
        if not isinstance(other, Element):
            return Element(self.n, self.degree, {w: c * Fraction(other) for w, c in self.terms.items()})
        if self.n != other.n:
            raise ValueError("elements of different free algebras")
        deg = tuple(a + b for a, b in zip(self.degree, other.degree))
        out: dict[Word, Fraction] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                out[u + v] = out.get(u + v, 0) + a * b
        return Element(self.n, deg, out)

    def __rmul__(self, scalar) -> "Element":
        return self * scalar

    def __pow__(self, k: int) -> "Element":
        out = Element.unit(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            mono = "".join(f"x{a + 1}" for a in w) or "1"
            parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_vector(self, comp: Component | None = None, field: Field | None = None) -> SparseVector:
        """Coordinates in the canonical word basis of this element's component."""
        comp = comp or component(self.n, self.degree)
        if self.terms and comp.d != self.degree:
            raise ValueError(f"element of degree {self.degree} in component {comp.d}")
        return sparse(((comp.index(w), c) for w, c in self.terms.items()), field)

    @classmethod
    def from_vector(cls, v: SparseVector, comp: Component) -> "Element":
        return cls(comp.n, comp.d, {comp.words[i]: c for i, c in v})


def multiply(a: Element, b: Element) -> Element:
    return a * b


def bracket(a: Element, b: Element) -> Element:
    """The commutator ab - ba."""
    return a * b - b * a


def nested(*elems: Element) -> Element:
    """Right-normed bracket [e1, [e2, [..., e_k]]]."""
    out = elems[-1]
    for e in reversed(elems[:-1]):
        out = bracket(e, out)
    return out


def generators(n: int) -> list[Element]:
    return [Element.gen(i, n) for i in range(n)]


def down_set(d: MultiDegree) -> list[MultiDegree]:
    """All multidegrees e <= d componentwise, by increasing total then lexicographic."""
    import itertools

    out = list(itertools.product(*(range(k + 1) for k in d)))
    out.sort(key=lambda e: (sum(e), e))
    return out


def degrees_upto(n: int, maxdeg: int) -> list[MultiDegree]:
    """All multidegrees of total <= maxdeg, by increasing total then lexicographic."""
    out = []
    for t in range(maxdeg + 1):
        out.extend(compositions(t, n))
    return out


def compositions(total: int, n: int) -> list[MultiDegree]:
    if n == 1:
        return [(total,)]
    out = []
    for a in range(total, -1, -1):
        out.extend((a,) + rest for rest in compositions(total - a, n - 1))
    out.sort()
    return out
