"""The ``wittram`` command line.

Subcommands print UTF-8 JSON or aligned text tables.  Exit codes: 0 when
everything is verified, 2 when a claim is falsified, 3 when a result is
inconclusive at the requested precision, 64 for usage errors and parameters
outside the supported caps.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import kato, suite
from .errors import CapError, PrecisionError, WittramError
from .fields import MAX_E, SeriesRing, check_prime, format_series, get_field, parse_series
from .filtration import FALSIFIED, INCONCLUSIVE, VERIFIED, graded_basis
from .witt import KINDS, MAX_M, WittParams, WittVector, cache_dir, cache_path, load_table

EXIT_OK = 0
EXIT_FALSIFIED = 2
EXIT_INCONCLUSIVE = 3
EXIT_USAGE = 64

_STATUS_EXIT = {VERIFIED: EXIT_OK, FALSIFIED: EXIT_FALSIFIED, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    """Parameters shared by the subcommands, checked against the caps before dispatch."""

    p: int = 2
    e: int = 1
    m: int = 1
    q: int = 0
    n: int = 0
    prec: int | None = None
    seed: int = 0
    output: Path | None = None
    cache: Path | None = None

    def validate(self) -> "RunConfig":
        check_prime(self.p)
        if not 1 <= self.e <= MAX_E:
            raise CapError(f"e must be in 1..{MAX_E}, got {self.e}")
        if not 1 <= self.m <= MAX_M:
            raise CapError(f"m must be in 1..{MAX_M}, got {self.m}")
        if self.q not in (0, 1):
            raise CapError(f"q must be 0 or 1, got {self.q}")
        if self.n < 0:
            raise CapError(f"n must be non-negative, got {self.n}")
        if self.prec is not None and self.prec < 1:
            raise CapError(f"precision must be positive, got {self.prec}")
        return self

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        cache = getattr(args, "cache_dir", None)
        out = getattr(args, "output", None)
        return cls(p=getattr(args, "p", 2), e=getattr(args, "e", 1), m=getattr(args, "m", 1),
                   q=getattr(args, "q", 0), n=getattr(args, "n", 0) or 0, prec=getattr(args, "prec", None),
                   seed=getattr(args, "seed", 0), output=Path(out) if out else None,
                   cache=Path(cache) if cache else None).validate()


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, sort_keys=True, ensure_ascii=False) + "\n")


def table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    """Right-aligned columns, one header line and one line per row."""
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_witt_tables(cfg: RunConfig, kind: str) -> int:
    kinds = KINDS if kind == "all" else (kind,)
    directory = cfg.cache or cache_dir()
    for k in kinds:
        tab, hit = load_table(WittParams(cfg.p, cfg.m), k, directory)
        terms = sum(len(poly) for poly in tab.polys)
        state = "cache hit" if hit else "generated"
        path = cache_path(cfg.p, cfg.m, k, directory)
        sys.stdout.write(f"witt-tables p={cfg.p} m={cfg.m} kind={k}: {len(tab.polys)} polynomials, "
                         f"{terms} terms, {state}: {path}\n")
    return EXIT_OK


def cmd_conductor(cfg: RunConfig, coords: Sequence[str], method: str, oracle: bool) -> int:
    if len(coords) != cfg.m:
        raise UsageError(f"expected {cfg.m} Witt coordinates, got {len(coords)}")
    fq = get_field(cfg.p, cfg.e)
    try:
        series = [parse_series(c, fq, cfg.prec) for c in coords]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    a = WittVector(SeriesRing(fq), series, cfg.p)
    n = kato.asw_conductor(a, method)
    record = {"field": {"p": cfg.p, "e": cfg.e}, "m": cfg.m, "witt": [format_series(s) for s in series],
              "method": method, "conductor": n, "oracle_checked": False}
    code = EXIT_OK
    if oracle:
        try:
            ref = kato.asw_conductor_oracle(a)
        except PrecisionError:
            ref = None
        if ref is not None:
            record["oracle_checked"] = True
            if ref != n:
                record["oracle"] = ref
                code = EXIT_FALSIFIED
    _emit(record)
    return code


def graded_rows(cfg: RunConfig, lo: int, hi: int) -> list[dict]:
    """One row per n in [lo, hi]: length of gr_n and of T~_n = T_n / T_(n-1)."""
    rows = []
    prev = None
    for n in range(lo, hi + 1):
        gr = graded_basis(cfg.p, cfg.e, cfg.m, cfg.q, n).dim
        cur = kato.t_space(cfg.p, cfg.e, cfg.m, cfg.q, n, cfg.prec)
        if n == 0:
            below, below_stable = 0, True
        elif prev is not None:
            below, below_stable = prev.length, prev.stable
        else:
            t = kato.t_space(cfg.p, cfg.e, cfg.m, cfg.q, n - 1, cfg.prec)
            below, below_stable = t.length, t.stable
        rows.append({"n": n, "gr": gr, "t_tilde": cur.length - below,
                     "stable": cur.stable and below_stable, "injective": cur.injective})
        prev = cur
    return rows


def cmd_graded_dims(cfg: RunConfig, lo: int, hi: int, as_json: bool) -> int:
    rows = graded_rows(cfg, lo, hi)
    if as_json:
        _emit({"field": {"p": cfg.p, "e": cfg.e}, "m": cfg.m, "q": cfg.q, "rows": rows})
    else:
        body = [(r["n"], r["gr"], r["t_tilde"], "yes" if r["stable"] else "no") for r in rows]
        sys.stdout.write(table(("n", "gr", "T~", "stable"), body))
    if any(not r["injective"] for r in rows):
        return EXIT_FALSIFIED
    if any(not r["stable"] for r in rows):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_tspace_dim(cfg: RunConfig) -> int:
    ts = kato.t_space(cfg.p, cfg.e, cfg.m, cfg.q, cfg.n, cfg.prec)
    out = ts.to_dict()
    out["dim"] = ts.length
    _emit(out)
    return _STATUS_EXIT[ts.status]


def cmd_verify(cfg: RunConfig, suite_name: str, jobs: int) -> int:
    prec = 12 if cfg.prec is None else cfg.prec
    res = suite.run_suite(suite_name, cfg.seed, prec, jobs)
    text = res.to_json() + "\n"
    if cfg.output is not None:
        cfg.output.write_text(text, encoding="utf-8")
        c = res.counts
        sys.stderr.write(f"{res.status}: {c[VERIFIED]} verified, {c[FALSIFIED]} falsified, "
                         f"{c[INCONCLUSIVE]} inconclusive; report written to {cfg.output}\n")
    else:
        sys.stdout.write(text)
    return _STATUS_EXIT[res.status]


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _field_args(sp: argparse.ArgumentParser, m: bool = True) -> None:
    sp.add_argument("-p", type=int, default=2, help="residue characteristic (prime)")
    sp.add_argument("-e", type=int, default=1, help="residue field F_(p^e)")
    if m:
        sp.add_argument("-m", type=int, default=1, help="Witt length")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wittram", description="De Rham-Witt computations over F_q((pi)).")
    ap.add_argument("--cache-dir", help="structure polynomial cache (default: $WITTRAM_CACHE)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("witt-tables", help="generate or load cached Witt structure polynomials")
    sp.add_argument("-p", type=int, default=2)
    sp.add_argument("-m", type=int, default=1)
    sp.add_argument("--kind", choices=KINDS + ("all",), default="all")

    sp = sub.add_parser("conductor", help="Artin-Schreier-Witt conductor of a Witt vector over K")
    _field_args(sp)
    sp.add_argument("coords", nargs="+", metavar="SERIES",
                    help="Witt coordinates x_0 (Teichmuller) first, e.g. 'pi^-3 + 1'")
    sp.add_argument("--method", choices=("witt", "canonical"), default="witt")
    sp.add_argument("--prec", type=int, default=None, help="precision for series without an O-term")
    sp.add_argument("--no-oracle", action="store_true", help="skip the brute-force cross-check")

    sp = sub.add_parser("graded-dims", help="lengths of gr_n and T~_n for a range of n")
    _field_args(sp)
    sp.add_argument("-q", type=int, default=0)
    sp.add_argument("--from", dest="lo", type=int, default=0)
    sp.add_argument("--to", dest="hi", type=int, default=6)
    sp.add_argument("--prec", type=int, default=None)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("tspace-dim", help="length of T^(m,q)_n with its stability data")
    _field_args(sp)
    sp.add_argument("-q", type=int, default=0)
    sp.add_argument("-n", type=int, default=0)
    sp.add_argument("--prec", type=int, default=None)

    sp = sub.add_parser("verify", help="run a verification suite and emit the aggregate report")
    sp.add_argument("--suite", choices=suite.SUITES, default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--prec", type=int, default=12)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--output", help="write the JSON report here instead of stdout")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        if cfg.cache is not None:
            os.environ["WITTRAM_CACHE"] = str(cfg.cache)
        if args.command == "witt-tables":
            return cmd_witt_tables(cfg, args.kind)
        if args.command == "conductor":
            return cmd_conductor(cfg, args.coords, args.method, not args.no_oracle)
        if args.command == "graded-dims":
            return cmd_graded_dims(cfg, args.lo, args.hi, args.json)
        if args.command == "tspace-dim":
            return cmd_tspace_dim(cfg)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return cmd_verify(cfg, args.suite, args.jobs)
    except (UsageError, CapError) as exc:
        sys.stderr.write(f"wittram: error: {exc}\n")
        return EXIT_USAGE
    except PrecisionError as exc:
        sys.stderr.write(f"wittram: inconclusive: {exc}\n")
        return EXIT_INCONCLUSIVE
    except WittramError as exc:
        sys.stderr.write(f"wittram: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
