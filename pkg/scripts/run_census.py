"""Enumerate pure fields up to a bound and write the CSV plus a JSON summary."""

import argparse
import json
from dataclasses import asdict, dataclass
from pathlib import Path

from purecensus import census


@dataclass
class CensusConfig:
    ell: int = 3
    disc_bound: int = 10**8
    threads: int = 1
    out_dir: str = "results"


def run(cfg: CensusConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    fields = census.enumerate_radical(cfg.ell, cfg.disc_bound, threads=cfg.threads)
    stem = f"fields_l{cfg.ell}_X{cfg.disc_bound}"
    (out / f"{stem}.csv").write_text(census.fields_to_csv(fields))
    cps = [10**k for k in range(2, 40) if 10**k <= cfg.disc_bound]
    summary = census.summary_from_fields(cfg.ell, cfg.disc_bound, fields, cps)
    rec = {"config": asdict(cfg), **summary.to_json()}
    (out / f"{stem}.json").write_text(json.dumps(rec, indent=1, sort_keys=True))
    print(f"{len(fields)} fields written to {out / stem}.csv")
    return out


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--disc-bound", type=lambda s: int(float(s)), default=10**8)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out-dir", default="results")
    a = ap.parse_args()
    run(CensusConfig(a.ell, a.disc_bound, a.threads, a.out_dir))
