"""Empirical counts against the predicted main terms for l = 3.

Prints the three ratios at each decade and, with --plot, saves a log-scale
figure. A ratio drifting slowly toward 1 is expected: each main term carries
secondary terms that are only one logarithm smaller.
"""

import argparse
from dataclasses import dataclass

from purecensus import census, constants


@dataclass
class TrendConfig:
    ell: int = 3
    top_exponent: int = 10
    prime_bound: int = 10**7
    plot: str | None = None


def run(cfg: TrendConfig) -> list[dict]:
    cps = [10**k for k in range(4, cfg.top_exponent + 1)]
    summary = census.count_summary(cfg.ell, cps[-1], cps)
    C = constants.eval_C(cfg.ell, cfg.prime_bound).value
    A = constants.eval_conditional("A", cfg.ell, cfg.prime_bound).value
    B = constants.eval_conditional("B", cfg.ell, cfg.prime_bound).value
    rows = census.asymptotic_comparison(summary, C, A, B)
    print(f"{'X':>8} {'N':>9} {'count':>8} {'genus one':>10} {'avg genus':>10}")
    for cp, r in zip(summary.checkpoints, rows):
        print(f"{cp.X:8.0e} {cp.n_fields:9d} {r['ratio_count']:8.4f} "
              f"{r['ratio_genus_one']:10.4f} {r['ratio_genus_avg']:10.4f}")
    if cfg.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        fig, ax = plt.subplots(figsize=(6, 4))
        for col in ("ratio_count", "ratio_genus_one", "ratio_genus_avg"):
            ax.plot([r["X"] for r in rows], [r[col] for r in rows], marker="o", label=col)
        ax.axhline(1, color="grey", lw=0.8)
        ax.set_xscale("log")
        ax.set_xlabel("X")
        ax.set_ylabel("empirical / predicted")
        ax.legend()
        fig.tight_layout()
        fig.savefig(cfg.plot, dpi=120)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ell", type=int, default=3)
    ap.add_argument("--top-exponent", type=int, default=10)
    ap.add_argument("--prime-bound", type=lambda s: int(float(s)), default=10**7)
    ap.add_argument("--plot")
    a = ap.parse_args()
    run(TrendConfig(a.ell, a.top_exponent, a.prime_bound, a.plot))
