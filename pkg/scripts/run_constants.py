"""Evaluate every constant for a list of degrees and print a table."""

import argparse
import json
from dataclasses import dataclass, field
from pathlib import Path

from purecensus import constants


@dataclass
class ConstantsConfig:
    ells: list[int] = field(default_factory=lambda: [3, 5, 7])
    prime_bound: int = 10**7
    threads: int = 1
    out: str | None = None


def run(cfg: ConstantsConfig) -> dict:
    records = {}
    print(f"{'l':>3} {'D':>14} {'D5hat':>14} {'D6hat':>14} {'A':>14} {'B':>14} {'C':>14}")
    for ell in cfg.ells:
        res = constants.all_constants(ell, cfg.prime_bound, cfg.threads)
        rec = constants.constants_record(ell, cfg.prime_bound, res)
        records[ell] = rec
        vals = " ".join(f"{rec[k]['value']:14.8g}" for k in ("D", "D5hat", "D6hat", "A", "B", "C"))
        print(f"{ell:>3} {vals}")
    if cfg.out:
        Path(cfg.out).write_text(json.dumps(records, indent=1, sort_keys=True))
    return records


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ells", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--prime-bound", type=lambda s: int(float(s)), default=10**7)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out")
    a = ap.parse_args()
    run(ConstantsConfig(a.ells, a.prime_bound, a.threads, a.out))
