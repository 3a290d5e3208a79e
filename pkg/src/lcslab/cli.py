"""Command-line entry point: ``lcslab {hilbert,decompose,verify}``.

Exit status: 0 when everything passes, 1 on a computational failure (bad
arguments, size caps, prime disagreement), 2 on a verification mismatch
(golden table, proven identity or inequality).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field as dc_field

from . import __version__
from .cache import DimCache
from .lcs import DEGREE_CAPS, STRATEGIES, ComponentCapExceeded
from .linalg import DEFAULT_PRIMES, QQ, Field, PrimeMismatchError

EXIT_OK, EXIT_COMPUTE, EXIT_MISMATCH = 0, 1, 2
SUITES = ("identities", "spanning", "xi", "b3", "density", "conjectures")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int | None
    ms: list[int] | None
    maxdeg: int | None
    fields: list[Field]
    strategy: str = "brute"
    cache: DimCache | None = None
    fmt: str = "text"
    jobs: int = 1
    golden: bool = False
    suite: str | None = None
    extra: dict = dc_field(default_factory=dict)

    def dims_kw(self) -> dict:
        return {"fields": self.fields, "strategy": self.strategy, "cache": self.cache, "jobs": self.jobs}


def parse_m(text: str) -> list[int]:
    """"5" -> [5]; "2..7" -> [2, ..., 7]; "2,4" -> [2, 4]."""
    out: list[int] = []
    for piece in text.split(","):
        if ".." in piece:
            lo, hi = piece.split("..")
            lo, hi = int(lo), int(hi)
            if lo > hi:
                raise argparse.ArgumentTypeError(f"empty range {piece!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(piece))
    if any(m < 1 for m in out):
        raise argparse.ArgumentTypeError("m must be >= 1")
    return sorted(set(out))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_COMPUTE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="number of generators")
    common.add_argument("--m", type=parse_m, help="LCS index: 5, 2..7 or 2,4")
    common.add_argument("--maxdeg", type=int, help="largest total degree")
    common.add_argument("--prime", type=int, action="append", default=[],
                        help="prime modulus; give it twice or not at all")
    common.add_argument("--rational", action="store_true", help="exact rational arithmetic")
    common.add_argument("--strategy", choices=STRATEGIES, default="brute")
    common.add_argument("--cache", metavar="PATH", help="dimension cache (default: $LCSLAB_CACHE)")
    common.add_argument("--no-cache", action="store_true", help="do not read or write the cache")
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="lcslab", description="Lower central series of free associative algebras.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("hilbert", parents=[common], help="dimensions of B_m per multidegree")
    dec = sub.add_parser("decompose", parents=[common], help="composition factors of B_m")
    dec.add_argument("--golden", action="store_true", help="compare with the embedded tables")
    ver = sub.add_parser("verify", parents=[common], help="run a verification suite")
    ver.add_argument("suite", choices=SUITES + ("all",))
    return parser


def make_config(args) -> RunConfig:
    if args.rational and args.prime:
        raise UsageError("--rational and --prime are exclusive")
    if args.prime and len(args.prime) != 2:
        raise UsageError("--prime must be given exactly twice (or not at all)")
    if args.prime and args.prime[0] == args.prime[1]:
        raise UsageError("the two primes must differ")
    if args.rational:
        fields = [QQ]
    else:
        try:
            fields = [Field(p) for p in (args.prime or DEFAULT_PRIMES)]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    if args.n is not None and args.n < 2:
        raise UsageError("--n must be at least 2")
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    if args.n is not None and args.maxdeg is not None:
        cap = DEGREE_CAPS.get(args.n, 6)
        if args.maxdeg > cap:
            raise ComponentCapExceeded(f"--maxdeg {args.maxdeg} above cap {cap} for n={args.n}")
    cache = None if args.no_cache else DimCache(args.cache)
    return RunConfig(args.n, args.m, args.maxdeg, fields, args.strategy, cache, args.format,
                     args.jobs, getattr(args, "golden", False), getattr(args, "suite", None))


def _require(cfg: RunConfig, *names):
    missing = [f"--{k}" for k in names if getattr(cfg, "ms" if k == "m" else k) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# --- hilbert -------------------------------------------------------------------


def cmd_hilbert(cfg: RunConfig) -> tuple[str, int]:
    from .freealg import degrees_upto
    from .lcs import bm_tables

    _require(cfg, "n", "m", "maxdeg")
    series = bm_tables(cfg.n, cfg.ms, cfg.maxdeg, **cfg.dims_kw())
    degs = degrees_upto(cfg.n, cfg.maxdeg)
    rows = [(cfg.n, m, d, series[m][d]) for m in cfg.ms for d in degs]
    if cfg.fmt == "csv":
        return _csv([(n, m, ";".join(map(str, d)), v) for n, m, d, v in rows], ["n", "m", "multidegree", "dim"]), EXIT_OK
    if cfg.fmt == "json":
        return "".join(json.dumps({"n": n, "m": m, "d": list(d), "dim": v}, separators=(",", ":")) + "\n"
                       for n, m, d, v in rows), EXIT_OK
    lines = []
    for m in cfg.ms:
        lines.append(f"B_{m}(A_{cfg.n}) through total degree {cfg.maxdeg}")
        for d in degs:
            lines.append(f"  {'(' + ','.join(map(str, d)) + ')':<20} {series[m][d]}")
        totals = series[m].total_degree_dims(cfg.maxdeg)
        lines.append("  by total degree: " + " ".join(map(str, totals)))
    return "\n".join(lines) + "\n", EXIT_OK


# --- decompose -----------------------------------------------------------------


def cmd_decompose(cfg: RunConfig) -> tuple[str, int]:
    from .jh import DecompositionError, decompose, golden_row
    from .lcs import bm_tables

    _require(cfg, "n", "m", "maxdeg")
    expected = {}
    if cfg.golden:
        for m in cfg.ms:
            row = golden_row(cfg.n, m)
            if row is None:
                raise UsageError(f"no golden row for n={cfg.n}, m={m}")
            expected[m] = row
    series = bm_tables(cfg.n, cfg.ms, cfg.maxdeg, **cfg.dims_kw())
    status = EXIT_OK
    records = []
    for m in cfg.ms:
        try:
            dec = decompose(series[m], cfg.n, m)
        except DecompositionError as exc:
            records.append((m, None, str(exc), None))
            status = EXIT_MISMATCH
            continue
        verdict = None
        if cfg.golden:
            verdict = dec.multiset() == expected[m]
            if not verdict:
                status = EXIT_MISMATCH
        records.append((m, dec, None, verdict))
    return _render_decompositions(cfg, records), status


def _render_decompositions(cfg: RunConfig, records) -> str:
    if cfg.fmt == "json":
        out = []
        for m, dec, err, verdict in records:
            rec = dec.to_dict() if dec else {"n": cfg.n, "m": m, "D": cfg.maxdeg, "error": err}
            if verdict is not None:
                rec["golden"] = "PASS" if verdict else "FAIL"
            out.append(json.dumps(rec, separators=(",", ":")))
        return "\n".join(out) + "\n"
    if cfg.fmt == "csv":
        rows = []
        for m, dec, err, _ in records:
            if dec is None:
                rows.append((cfg.n, m, "error", err))
            else:
                rows.extend((cfg.n, m, ";".join(map(str, lam)), c) for lam, c in dec.factors)
        return _csv(rows, ["n", "m", "lambda", "mult"])
    lines = []
    for m, dec, err, verdict in records:
        if dec is None:
            lines.append(f"B_{m}(A_{cfg.n}): error: {err}")
            continue
        tail = "" if verdict is None else ("  PASS" if verdict else "  FAIL")
        lines.append(f"B_{m}(A_{cfg.n}) = {dec.to_text()}  [verified to degree {dec.D}]{tail}")
    return "\n".join(lines) + "\n"


# --- verify --------------------------------------------------------------------


def _suite_identities(cfg):
    from .lcs import identity_check, reordering_solve

    for name in ("lemma31", "lemma35a", "lemma35b", "lemma52"):
        detail = "modulo L_4" if name == "lemma52" else "exact"
        yield name, identity_check(name), detail, True
    yield "lemma35b_mod_L4", identity_check("lemma35b", modulo=4), "modulo L_4", False
    for m in (2, 3, 4):
        sol = reordering_solve(m)
        yield f"reordering_m{m}", sol is not None, f"{len(sol or {})} nonzero coefficients", True


def _suite_spanning(cfg):
    from .lcs import spanning_grid

    if cfg.n is not None:
        grid = [(cfg.n, cfg.ms or [1, 2, 3], cfg.maxdeg or DEGREE_CAPS.get(cfg.n, 6) - 2)]
    else:
        grid = [(2, range(1, 7), 9), (3, range(1, 5), 7), (4, [3], 6)]
    for n, ms, D in grid:
        for f in cfg.fields:
            res = spanning_grid(n, list(ms), D, f, jobs=cfg.jobs)
            bad = [(m, d) for m, d, ok in res if not ok]
            yield (f"spanning_n{n}_{f.tag}", not bad,
                   f"m in {list(ms)}, degree <= {D}: {len(res)} components" + (f", failing {bad[:5]}" if bad else ""),
                   True)


def _suite_xi(cfg):
    from .forms import lemma33_check, xi_consistency

    grid = [(cfg.n, cfg.maxdeg or 6)] if cfg.n is not None else [(2, 8), (3, 6)]
    fields = cfg.fields
    for n, D in grid:
        rep = xi_consistency(n, D, primes=[f.p for f in fields if not f.rational] or DEFAULT_PRIMES,
                             field=QQ if fields == [QQ] else None)
        yield f"xi_n{n}", rep.ok, f"{len(rep.checked)} multidegrees through {D}" + (
            f", failing {rep.failures[:3]}" if rep.failures else ""), True
        top = min(D, 5 if n == 2 else 4)
        yield f"even_forms_span_n{n}", all(lemma33_check(n, t) for t in range(1, top + 1)), \
            f"totals 1..{top}", True


def _suite_b3(cfg):
    from .jh import VerificationError, b3_structure, multilinear_b3
    from .lcs import v_generator_nonzero

    ns = [cfg.n] if cfg.n is not None else [2, 3, 4, 5]
    kw = {"fields": cfg.fields, "strategy": cfg.strategy, "cache": cfg.cache, "jobs": cfg.jobs}
    for n in ns:
        yield f"b3_structure_n{n}", b3_structure(n, cfg.maxdeg, **kw), "direct sum of (2,1^(2i-1))", True
        if n <= 6:
            try:
                val = multilinear_b3(n, field=None if len(cfg.fields) == 2 else cfg.fields[0])
                yield f"multilinear_b3_n{n}", True, f"dim = {val}", True
            except VerificationError as exc:
                yield f"multilinear_b3_n{n}", False, str(exc), True
        if n % 2 == 0 and n <= 6:
            yield f"v_generator_n{n}", v_generator_nonzero(n // 2), "in L_3, not in L_4", True


def _default_decomposition_grid(cfg):
    if cfg.n is not None:
        ms = cfg.ms or list(range(2, 5))
        return [(cfg.n, ms, cfg.maxdeg or DEGREE_CAPS.get(cfg.n, 6))]
    return [(2, list(range(2, 8)), 12), (3, list(range(2, 6)), 8)]


def _decompositions(cfg):
    from .jh import decompose
    from .lcs import bm_tables

    for n, ms, D in _default_decomposition_grid(cfg):
        series = bm_tables(n, ms, D, **cfg.dims_kw())
        yield n, series, {m: decompose(series[m], n, m) for m in ms}


def _suite_density(cfg):
    from .jh import bound_compliance, density_chain, dominated_by_upper, lemma51_check

    for n, series, decs in _decompositions(cfg):
        rep = density_chain(decs, n)
        chain = ", ".join(f"a_{m}={a}" for m, a in sorted(rep.densities.items()))
        yield f"density_chain_n{n}", rep.ok, chain, True
        yield f"bounds_n{n}", all(bound_compliance(d) for d in decs.values()), "every |lambda| within bound", True
        dom = [m for m in decs if m >= 3 and not dominated_by_upper(series[m], n, m)]
        yield f"upper_series_n{n}", not dom, "dominated coefficientwise" + (f", failing m={dom}" if dom else ""), True
        yield f"no_one_column_n{n}", lemma51_check(decs.values()), "m >= 3", True


def _suite_conjectures(cfg):
    from .jh import conjecture_flags
    from .lcs import spanning_grid

    for n, _, decs in _decompositions(cfg):
        if n != 2:
            continue
        for m, dec in sorted(decs.items()):
            if m < 3:
                continue
            flags = conjecture_flags(dec)
            yield (f"top_factor_m{m}", flags["top_consistent"] and flags["first_part_consistent"],
                   f"mult({m - 1},{m - 2}) = {flags['top_multiplicity']}, max lambda_1 = {flags['max_first_part']}",
                   False)
    res = spanning_grid(4, [2, 3], 6, cfg.fields[0], cubic=False, jobs=cfg.jobs)
    bad = [(m, d) for m, d, ok in res if not ok]
    yield "cubic_free_spanning_n4", not bad, f"{len(res)} components, m in [2, 3], degree <= 6", False


SUITE_FUNCS = {
    "identities": _suite_identities,
    "spanning": _suite_spanning,
    "xi": _suite_xi,
    "b3": _suite_b3,
    "density": _suite_density,
    "conjectures": _suite_conjectures,
}


def cmd_verify(cfg: RunConfig) -> tuple[str, int]:
    suites = SUITES if cfg.suite == "all" else (cfg.suite,)
    results = []
    for suite in suites:
        for name, ok, detail, hard in SUITE_FUNCS[suite](cfg):
            results.append((suite, name, bool(ok), detail, hard))
    failed = any(hard and not ok for *_, ok, _, hard in results)
    if cfg.fmt == "json":
        text = "".join(json.dumps({"suite": s, "check": n, "ok": ok, "hard": h, "detail": d},
                                  separators=(",", ":")) + "\n" for s, n, ok, d, h in results)
    elif cfg.fmt == "csv":
        text = _csv([(s, n, "PASS" if ok else "FAIL", d) for s, n, ok, d, _ in results],
                    ["suite", "check", "status", "detail"])
    else:
        lines = []
        for s, n, ok, d, hard in results:
            tag = "PASS" if ok else ("FAIL" if hard else "NOTE")
            lines.append(f"{tag:<5}{s}/{n}: {d}")
        lines.append("overall: " + ("FAIL" if failed else "PASS"))
        text = "\n".join(lines) + "\n"
    return text, EXIT_MISMATCH if failed else EXIT_OK


COMMANDS = {"hilbert": cmd_hilbert, "decompose": cmd_decompose, "verify": cmd_verify}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = make_config(args)
        text, status = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"lcslab: error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    except (ComponentCapExceeded, PrimeMismatchError, ValueError, MemoryError) as exc:
        print(f"lcslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
