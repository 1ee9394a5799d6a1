"""Command line entry point: enumerate, stats, constants, charsums, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation

from . import cache, census, characters, constants, verify
from .arith import is_odd_prime
from .errors import CapacityError, CrossCheckError, DomainError

EXIT_FAIL, EXIT_CONFIG, EXIT_CAPACITY, EXIT_CROSSCHECK = 1, 2, 3, 4
DEFAULT_P = 10**7


class ConfigError(ValueError):
    pass


def parse_bound(text: str) -> int:
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise ConfigError(f"not a number: {text!r}")
    if d != d.to_integral_value() or d < 0:
        raise ConfigError(f"bound must be a nonnegative integer: {text!r}")
    return int(d)


@dataclass
class RunConfig:
    subcommand: str
    ell: int = 3
    disc_bound: int | None = None
    prime_bound: int | None = None
    checkpoints: str | None = None
    out: str | None = None
    format: str = "json"
    threads: int = 1
    suite: str = "fast"
    method: str | None = None

    def validate(self):
        if not is_odd_prime(self.ell) or self.ell > 31:
            raise ConfigError("ell must be an odd prime")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.threads < 1:
            raise ConfigError("threads must be positive")
        if self.prime_bound is not None and self.prime_bound < 1:
            raise ConfigError("prime bound must be positive")

    def checkpoint_list(self) -> list[int]:
        X = self.disc_bound
        text = self.checkpoints
        if not text:
            return []
        if text == "log":
            out, k = [], 2
            while 10**k <= X:
                out.append(10**k)
                k += 1
            return out
        pts = sorted(parse_bound(s) for s in text.split(","))
        if pts and pts[-1] > X:
            raise ConfigError("checkpoints must not exceed the discriminant bound")
        return pts


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_enumerate(cfg: RunConfig) -> int:
    X = cfg.disc_bound or 0
    if cfg.method == "brute":
        fields = census.enumerate_brute(cfg.ell, X)
    else:
        fields = census.enumerate_radical(cfg.ell, X, threads=cfg.threads)
    if cfg.format == "csv":
        _emit(cfg, census.fields_to_csv(fields))
    else:
        rec = {"ell": cfg.ell, "X": X,
               "fields": [dict(zip(census.CSV_HEADER, f.csv_row())) for f in fields]}
        _emit(cfg, json.dumps(rec, sort_keys=True) + "\n")
    return 0


def cached_constants(ell: int, P: int, threads: int = 1) -> dict:
    """C, A and B at prime bound P, from the cache when present."""
    got = {
        "C": cache.load("C", ell, P, "from-D"),
        "A": cache.load("A", ell, P, "L-decomposition"),
        "B": cache.load("B", ell, P, "L-decomposition"),
    }
    if all(got.values()):
        return got
    rec = constants.constants_record(ell, P, constants.all_constants(ell, P, threads))
    cache.store([rec[k] for k in ("D", "D5hat", "D6hat", "A", "B", "C")])
    return {k: rec[k] for k in ("C", "A", "B")}


def cmd_stats(cfg: RunConfig) -> int:
    X = cfg.disc_bound or 0
    P = cfg.prime_bound or DEFAULT_P
    summary = census.count_summary(cfg.ell, X, cfg.checkpoint_list(), threads=cfg.threads)
    k = cached_constants(cfg.ell, P, cfg.threads)
    rows = census.asymptotic_comparison(summary, k["C"]["value"], k["A"]["value"], k["B"]["value"])
    cps = summary.checkpoints or [census.Checkpoint(X, summary.n_fields, summary.n_genus_one, summary.genus_sum)]
    if cfg.format == "csv":
        header = ["X", "n_fields", "n_genus_one", "genus_sum", "ratio_count", "ratio_genus_one", "ratio_genus_avg"]
        body = [[c.X, c.n_fields, c.n_genus_one, c.genus_sum, r["ratio_count"], r["ratio_genus_one"],
                 r["ratio_genus_avg"]] for c, r in zip(cps, rows)]
        _emit(cfg, _rows_csv(header, body))
        return 0
    rec = summary.to_json()
    rec["constants"] = {name: {"value": k[name]["value"], "P": P} for name in ("C", "A", "B")}
    rec["comparison"] = rows
    rec["plot"] = {col: [[r["X"], r[col]] for r in rows if r[col] is not None]
                   for col in ("ratio_count", "ratio_genus_one", "ratio_genus_avg")}
    _emit(cfg, json.dumps(rec, sort_keys=True) + "\n")
    return 0


def cmd_constants(cfg: RunConfig) -> int:
    P = cfg.prime_bound or DEFAULT_P
    results = constants.all_constants(cfg.ell, P, cfg.threads)
    rec = constants.constants_record(cfg.ell, P, results)
    cache.store([rec[k] for k in ("D", "D5hat", "D6hat", "A", "B", "C")])
    if cfg.format == "csv":
        header = ["family", "ell", "P", "method", "value", "tail", "cross_check_delta"]
        body = [[rec[k][h] for h in header] for k in ("D", "D5hat", "D6hat", "A", "B", "C")]
        _emit(cfg, _rows_csv(header, body))
    else:
        _emit(cfg, constants.dumps(rec) + "\n")
    return 0


def cmd_charsums(cfg: RunConfig) -> int:
    bound = cfg.prime_bound or 10**5
    reports = [characters.table_check_f_chi(cfg.ell, bound)]
    if cfg.disc_bound is not None:
        reports += [characters.big_identity_check(cfg.ell, cfg.disc_bound, w) for w in characters.WEIGHTS]
    if cfg.format == "csv":
        body = [[r.check, r.ell, r.bound, len(r.mismatches), int(r.passed)] for r in reports]
        _emit(cfg, _rows_csv(["check", "ell", "bound", "mismatches", "pass"], body))
    else:
        _emit(cfg, "\n".join(r.dumps() for r in reports) + "\n")
    return 0 if all(r.passed for r in reports) else EXIT_FAIL


def cmd_verify(cfg: RunConfig) -> int:
    try:
        verify.suite(cfg.suite)
    except KeyError:
        raise ConfigError(f"unknown suite {cfg.suite!r}; choose fast, full or all")
    outcomes = verify.run_suite(cfg.suite, echo=lambda s: print(s, flush=True))
    failed = [o.name for o in outcomes if not o.passed]
    if cfg.format == "json" and cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump([o.__dict__ for o in outcomes], fh, indent=1)
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return EXIT_FAIL
    return 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "stats": cmd_stats,
    "constants": cmd_constants,
    "charsums": cmd_charsums,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="purecensus", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--ell", type=int, default=3)
        p.add_argument("--disc-bound", type=parse_bound)
        p.add_argument("--prime-bound", type=parse_bound,
                       help=f"prime cutoff for Euler products (default {DEFAULT_P})")
        p.add_argument("--checkpoints", help="'log' or comma-separated bounds")
        p.add_argument("--out")
        p.add_argument("--format", default="csv" if name == "enumerate" else "json")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--suite", default="fast")
        p.add_argument("--method")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    cfg = RunConfig(**vars(args))
    try:
        cfg.validate()
        if cfg.subcommand in ("stats",) and cfg.disc_bound is None:
            raise ConfigError("--disc-bound is required")
        return COMMANDS[cfg.subcommand](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except CrossCheckError as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return EXIT_CROSSCHECK


if __name__ == "__main__":
    sys.exit(main())
