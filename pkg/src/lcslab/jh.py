"""Composition factors of B_m(A_n) from its Hilbert series.

The Hilbert series of F_lam is N_lam / prod(1 - t_i), and the leading
homogeneous part of N_lam is the Schur polynomial s_lam, which is
unitriangular against monomials in dominance order.  So multiplying the
series by prod(1 - t_i) and repeatedly removing the dominance-maximal
partition exponent of lowest degree recovers the multiplicities uniquely.
"""
from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from importlib import resources

from .symfunc import (
    SymPoly,
    bound as lambda_bound,
    density,
    density_ratio,
    dominates,
    flambda_dims,
    fmt_partition,
    is_partition,
    numerator,
    partition,
    upper_series,
)


class DecompositionError(ArithmeticError):
    """The series is not a nonnegative combination of F_lam under the bound."""


class VerificationError(AssertionError):
    """A computed quantity disagrees with a proven statement or golden table."""


def size_bound(m: int, n: int, mode: str | None = None) -> int:
    """|lam| bound used for peeling; B_2 only has factors of size <= n."""
    if m <= 2:
        return n
    if mode is None:
        mode = "thm12"
    return lambda_bound(m, n, mode)


@dataclass
class Decomposition:
    n: int
    m: int
    factors: list[tuple[tuple, int]]
    D: int
    residual_zero: bool = True
    bound: int | None = None

    def multiset(self) -> Counter:
        return Counter(dict(self.factors))

    def multiplicity(self, lam) -> int:
        return self.multiset().get(partition(lam, self.n), 0)

    def to_text(self) -> str:
        return format_additive(self.factors)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "D": self.D,
            "factors": [{"lambda": list(lam), "mult": c} for lam, c in self.factors],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def reconstruct(self, D: int | None = None) -> SymPoly:
        D = self.D if D is None else D
        total = SymPoly(self.n, {}, D=D, check=False)
        for lam, c in self.factors:
            total = total + SymPoly._raw(self.n, {a: c * v for a, v in flambda_dims(lam, self.n, D).coeffs.items()}, D)
        return total


def format_additive(factors) -> str:
    parts = []
    for lam, c in factors:
        parts.append(("" if c == 1 else str(c)) + fmt_partition(lam))
    return "+".join(parts) if parts else "0"


_TERM = re.compile(r"^\s*(\d*)\s*\(([\d,\s]+)\)\s*$")


def parse_additive(text: str, n: int) -> Counter:
    """Parse "(4,1)+2(5,2)" into a multiset of length-n partitions."""
    out: Counter = Counter()
    text = text.strip()
    if text in ("", "0"):
        return out
    for term in text.split("+"):
        match = _TERM.match(term)
        if not match:
            raise ValueError(f"cannot parse factor {term!r}")
        c = int(match.group(1)) if match.group(1) else 1
        lam = partition((int(x) for x in match.group(2).split(",")), n)
        out[lam] += c
    return out


def _maximal(cands: list[tuple]) -> list[tuple]:
    return [a for a in cands if not any(b != a and dominates(b, a) for b in cands)]


def decompose(series: SymPoly, n: int, m: int, bound_mode: str | None = None,
              reverse_ties: bool = False) -> Decomposition:
    """Peel F_lam multiplicities off a truncated B_m Hilbert series.

    Ties among dominance-incomparable candidates are broken lexicographically
    (largest first, or smallest first with ``reverse_ties``).
    """
    if series.n != n:
        raise ValueError(f"series has {series.n} variables, expected {n}")
    D = series.D
    B = size_bound(m, n, bound_mode)
    if D is None or D < max(B, n):
        raise ValueError(f"truncation degree {D} below max(bound {B}, n={n})")
    P = series.times_vanishing()
    found: list[tuple[tuple, int]] = []
    for k in range(B + 1):
        while True:
            cands = [a for a in P.degree_part(k) if is_partition(a)]
            if not cands:
                break
            maximal = _maximal(cands)
            lam = min(maximal) if reverse_ties else max(maximal)
            c = P[lam]
            if c <= 0:
                raise DecompositionError(
                    f"series not F-decomposable under this bound: coefficient {c} at {fmt_partition(lam)} "
                    f"(n={n}, m={m}, D={D})")
            P = (P - SymPoly._raw(n, {a: c * v for a, v in numerator(lam, n).coeffs.items()}, None)).truncate(D)
            found.append((lam, c))
    rest = {a: c for a, c in P.coeffs.items() if c}
    if rest:
        a = min(rest, key=lambda a: (sum(a), a))
        raise DecompositionError(
            f"series not F-decomposable under this bound: residual {rest[a]} at {a} "
            f"of degree {sum(a)} > bound {B} (n={n}, m={m}, D={D})")
    found.sort(key=lambda f: (sum(f[0]), [-x for x in f[0]]))
    return Decomposition(n, m, found, D, residual_zero=True, bound=B)


def decompose_bm(n: int, m: int, maxdeg: int, bound_mode: str | None = None, **kw) -> Decomposition:
    from .lcs import bm_hilbert

    return decompose(bm_hilbert(n, m, maxdeg, **kw), n, m, bound_mode)


# --- golden tables -------------------------------------------------------------


def golden_tables() -> dict:
    with resources.files("lcslab").joinpath("data/golden.json").open() as fh:
        return json.load(fh)


def golden_row(n: int, m: int) -> Counter | None:
    for table in golden_tables().values():
        if table["n"] == n and str(m) in table["rows"]:
            return parse_additive(table["rows"][str(m)], n)
    return None


@dataclass
class TableReport:
    cells: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.cells)


def verify_tables(which=("n2", "n3"), jobs: int = 1, cache=None, fields=None) -> TableReport:
    """Recompute every golden row and compare multisets."""
    from .lcs import bm_tables

    report = TableReport()
    tables = golden_tables()
    for key in which:
        table = tables[key]
        n, D = table["n"], table["D"]
        ms = sorted(int(m) for m in table["rows"])
        series = bm_tables(n, ms, D, fields=fields, cache=cache, jobs=jobs)
        for m in ms:
            expected = parse_additive(table["rows"][str(m)], n)
            try:
                dec = decompose(series[m], n, m)
                got, text = dec.multiset(), dec.to_text()
            except DecompositionError as exc:
                got, text = None, f"error: {exc}"
            report.cells.append({"n": n, "m": m, "D": D, "expected": table["rows"][str(m)],
                                 "got": text, "ok": got == expected})
    return report


# --- structural checks ----------------------------------------------------------


def b3_expected(n: int) -> Counter:
    out = Counter()
    for i in range(1, n // 2 + 1):
        out[partition([2] + [1] * (2 * i - 1), n)] = 1
    return out


def b3_structure(n: int, D: int | None = None, **kw) -> bool:
    """B_3(A_n) is the multiplicity-free sum of (2, 1^{2i-1}) over 1 <= i <= n/2."""
    from .lcs import DEGREE_CAPS

    B = size_bound(3, n, "m3")
    if D is None:
        D = max(B, n, min(n + 2, DEGREE_CAPS.get(n, 6)))
    dec = decompose_bm(n, 3, D, "m3", **kw)
    return dec.multiset() == b3_expected(n)


def multilinear_b3(n: int, **kw) -> int:
    from .lcs import bm_dim

    if n > 6:
        raise ValueError("multilinear component needs n <= 6")
    value = bm_dim(n, 3, (1,) * n, **kw)
    expected = (n - 2) * 2 ** (n - 2)
    if value != expected:
        raise VerificationError(f"dim B_3(A_{n})[1..1] = {value}, expected {expected}")
    return value


def density_of(dec: Decomposition) -> int:
    return sum(c * density(lam, dec.n) for lam, c in dec.factors)


@dataclass
class DensityReport:
    n: int
    densities: dict = dc_field(default_factory=dict)
    links: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(link["ok"] for link in self.links)


def density_chain(decs: dict[int, Decomposition], n: int) -> DensityReport:
    """Check a_{m+1} <= r_n a_m for consecutive m among ``decs``."""
    ratio = density_ratio(n)
    report = DensityReport(n)
    for m, dec in sorted(decs.items()):
        report.densities[m] = density_of(dec)
    for m in sorted(report.densities):
        if m + 1 in report.densities:
            a, b = report.densities[m], report.densities[m + 1]
            report.links.append({"m": m, "a_m": a, "a_next": b, "limit": ratio * a, "ok": b <= ratio * a})
    return report


def check_density_chain(n: int, m_max: int, maxdeg: int | None = None, strict: bool = True, **kw) -> DensityReport:
    from .lcs import DEGREE_CAPS, bm_tables

    ms = list(range(2, m_max + 1))
    D = maxdeg if maxdeg is not None else DEGREE_CAPS.get(n, 6)
    series = bm_tables(n, ms, D, **kw)
    decs = {m: decompose(series[m], n, m) for m in ms}
    report = density_chain(decs, n)
    if strict and not report.ok:
        bad = [link for link in report.links if not link["ok"]]
        raise VerificationError(f"density chain violated for n={n}: {bad}")
    return report


def bound_compliance(dec: Decomposition) -> bool:
    """Every factor obeys the general bound (and the sharper one at m = 3)."""
    sizes = [sum(lam) for lam, _ in dec.factors]
    limit = size_bound(dec.m, dec.n)
    if dec.m == 3:
        limit = min(limit, size_bound(3, dec.n, "m3"))
    return all(s <= limit for s in sizes)


def dominated_by_upper(series: SymPoly, n: int, m: int) -> bool:
    return series.dominated_by(upper_series(m, n, series.D))


def conjecture_flags(dec: Decomposition, cubic_probe: list | None = None) -> dict:
    """Informational report on the open statements about B_m.

    ``cubic_probe`` is a list of (n, m, d) at which spanning is retried
    without the cubic generators x_i[x_j, x_k].
    """
    out: dict = {"n": dec.n, "m": dec.m}
    if dec.n == 2 and dec.m >= 3:
        top = (dec.m - 1, dec.m - 2)
        max_first = max((lam[0] for lam, _ in dec.factors), default=0)
        out["top_multiplicity"] = dec.multiplicity(top)
        out["top_consistent"] = out["top_multiplicity"] == 1
        out["max_first_part"] = max_first
        out["first_part_consistent"] = max_first <= dec.m - 1
    if cubic_probe:
        from .lcs import spanning_check

        out["cubic_free_spanning"] = [
            {"n": n, "m": m, "d": list(d), "passes": spanning_check(n, m, tuple(d), cubic=False)}
            for n, m, d in cubic_probe
        ]
    return out


def lemma51_check(decs) -> bool:
    """No one-column factor (1^k, 0^{n-k}) occurs in B_m for m >= 3."""
    for dec in decs:
        if dec.m < 3:
            continue
        for lam, _ in dec.factors:
            if lam and all(x in (0, 1) for x in lam) and any(lam):
                return False
    return True


def peeling_is_deterministic(series: SymPoly, n: int, m: int, bound_mode: str | None = None) -> bool:
    a = decompose(series, n, m, bound_mode)
    b = decompose(series, n, m, bound_mode, reverse_ties=True)
    return a.multiset() == b.multiset()


__all__ = [
    "Decomposition",
    "DecompositionError",
    "VerificationError",
    "b3_expected",
    "b3_structure",
    "bound_compliance",
    "check_density_chain",
    "conjecture_flags",
    "decompose",
    "decompose_bm",
    "density_chain",
    "density_of",
    "dominated_by_upper",
    "format_additive",
    "golden_row",
    "golden_tables",
    "lemma51_check",
    "multilinear_b3",
    "parse_additive",
    "peeling_is_deterministic",
    "size_bound",
    "verify_tables",
]
