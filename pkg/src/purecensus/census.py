"""Enumeration and counting of pure fields of degree l with |disc| <= X.

Two enumerators are provided. `enumerate_brute` scans integers a directly and
leans on the field-level functions in `kummer`; `enumerate_radical` walks
squarefree radicals n and the exponent vectors over them. They share no code
beyond the integer primitives and are checked against each other.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kummer
from .arith import factor_with_spf, iroot, is_odd_prime, sieve_primes, spf_sieve
from .errors import CapacityError, DomainError
from .kummer import PureField

BRUTE_CAP = 10**9
CSV_HEADER = ["ell", "canonical_a", "radical", "disc", "wendt_tame", "genus"]


def _check_ell(ell: int):
    if not is_odd_prime(ell):
        raise DomainError("ell must be an odd prime")


def as_bound(X) -> int:
    """Integer part of a discriminant bound; |disc| <= X iff |disc| <= floor(X)."""
    if isinstance(X, int):
        return max(X, 0)
    X = float(X)
    if not math.isfinite(X):
        raise DomainError("bound must be finite")
    return max(int(math.floor(X)), 0)


def bound_pair(ell: int, X) -> tuple[float, float]:
    """Real radical cutoffs a(l) X^(1/(l-1)) and b(l) X^(1/(l-1)) for tame and wild a."""
    _check_ell(ell)
    if X < 1:
        raise DomainError("X must be >= 1")
    root = float(X) ** (1.0 / (ell - 1))
    a_l = ell ** (-1.0 + 1.0 / (ell - 1))
    b_l = ell ** (-1.0 - 1.0 / (ell - 1))
    return a_l * root, b_l * root


def radical_cutoffs(ell: int, X) -> tuple[int, int]:
    """Largest n with l^(l-2) n^(l-1) <= X and with l^l n^(l-1) <= X, in exact integers."""
    X = as_bound(X)
    return (
        iroot(X // ell ** (ell - 2), ell - 1),
        iroot(X // ell**ell, ell - 1),
    )


# ---------------------------------------------------------------------------
# direct scan over a


def _scan_ell_free(ell: int, amax: int, pmax: int, block: int = 1 << 20):
    """Yield (a, rad(a)) arrays for l-free a in [1, amax] with every prime factor <= pmax."""
    primes = [int(p) for p in sieve_primes(max(pmax, 2)).primes if p <= pmax]
    for lo in range(1, amax + 1, block):
        hi = min(lo + block, amax + 1)
        a = np.arange(lo, hi, dtype=np.int64)
        smooth = np.ones(hi - lo, dtype=np.int64)
        rad = np.ones(hi - lo, dtype=np.int64)
        free = np.ones(hi - lo, dtype=bool)
        for p in primes:
            if p >= hi:
                break
            first = -(-lo // p) * p - lo
            rad[first::p] *= p
            pk, k = p, 1
            while pk < hi:
                start = -(-lo // pk) * pk - lo
                smooth[start::pk] *= p
                if k == ell:
                    free[start::pk] = False
                pk *= p
                k += 1
        keep = free & (smooth == a)
        yield a[keep], rad[keep]


def enumerate_brute(ell: int, X) -> list[PureField]:
    """All fields with |disc| <= X by scanning every a up to n_max^(l-1).

    Slow and simple; serves as the oracle for `enumerate_radical`.
    """
    _check_ell(ell)
    X = as_bound(X)
    tame_cut, _ = radical_cutoffs(ell, X)
    amax = tame_cut ** (ell - 1)
    if amax > BRUTE_CAP:
        raise CapacityError(f"brute scan range {amax} exceeds {BRUTE_CAP}")
    out = []
    for a_arr, rad_arr in _scan_ell_free(ell, amax, tame_cut):
        for a, n in zip(a_arr.tolist(), rad_arr.tolist()):
            if a < 2 or n > tame_cut:
                continue
            disc, _ = kummer.disc_magnitude(a, ell)
            if disc <= X and kummer.canonical_rep(a, ell) == a:
                out.append(kummer.make_field(a, ell))
    out.sort()
    return out


# ---------------------------------------------------------------------------
# radical enumeration


def _squarefree_factors(limit: int):
    """SPF table plus an iterator of (n, primes) for squarefree 2 <= n <= limit."""
    spf = spf_sieve(max(limit, 1))

    def walk(lo: int, hi: int):
        for n in range(max(lo, 2), hi):
            f = factor_with_spf(n, spf)
            if all(e == 1 for _, e in f):
                yield n, f.primes

    return walk


def _blocks(lo: int, hi: int, nblocks: int) -> list[tuple[int, int]]:
    if hi <= lo:
        return []
    step = max(1, -(-(hi - lo) // nblocks))
    return [(s, min(s + step, hi)) for s in range(lo, hi, step)]


def _fields_over(ell: int, n: int, primes, tame_ok: bool, wild_ok: bool, genus: int):
    """Canonical fields with radical n, walking exponent vectors in odometer order."""
    mod = ell * ell
    k = len(primes)
    e = [1] * k
    # prefix residues mod l^2 and prefix values; index i covers primes[: i + 1]
    res = [0] * k
    val = [0] * k

    def refresh(i):
        r = res[i - 1] if i else 1
        v = val[i - 1] if i else 1
        for j in range(i, k):
            pe = primes[j] ** e[j]
            r = r * pe % mod
            v = v * pe
            res[j] = r
            val[j] = v

    refresh(0)
    out = []
    n_pow = n ** (ell - 1)
    while True:
        tame = pow(res[-1], ell - 1, mod) == 1
        if tame_ok if tame else wild_ok:
            a = val[-1]
            canonical = True
            for i in range(2, ell):
                b = 1
                for p, ep in zip(primes, e):
                    b *= p ** (ep * i % ell)
                    if b >= a:
                        break
                else:
                    canonical = False
                    break
            if canonical:
                disc = ell ** (ell - 2 if tame else ell) * n_pow
                out.append(PureField(disc, a, ell, n, tame, genus))
        i = k - 1
        while i >= 0 and e[i] == ell - 1:
            e[i] = 1
            i -= 1
        if i < 0:
            return out
        e[i] += 1
        refresh(i)


def enumerate_radical(ell: int, X, threads: int = 1) -> list[PureField]:
    """All fields with |disc| <= X, enumerated by squarefree radical n."""
    _check_ell(ell)
    X = as_bound(X)
    tame_cut, wild_cut = radical_cutoffs(ell, X)
    if tame_cut < 2:
        return []
    walk = _squarefree_factors(tame_cut)

    def work(span):
        found = []
        for n, primes in walk(*span):
            divisible = n % ell == 0
            tame_ok = not divisible
            wild_ok = n <= wild_cut
            if not (tame_ok or wild_ok):
                continue
            genus = ell ** sum(1 for p in primes if p % ell == 1)
            found.extend(_fields_over(ell, n, primes, tame_ok, wild_ok, genus))
        return found

    spans = _blocks(2, tame_cut + 1, max(1, threads) * 4)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        parts = list(pool.map(work, spans))
    out = [f for part in parts for f in part]
    out.sort()
    return out


# ---------------------------------------------------------------------------
# tallies per radical


@dataclass(frozen=True)
class RadicalTerm:
    n: int
    tame_count: int
    wild_count: int
    genus_weight: int

    @property
    def genus_one(self) -> bool:
        return self.genus_weight == 1


def _tally(ell: int, primes) -> tuple[int, int]:
    """Count l-free a with rad(a) = n split by a^(l-1) = 1 mod l^2.

    Dynamic programme over the residue of a^(l-1) mod l^2, which lives in the
    order-l subgroup; counts vectors without listing them.
    """
    mod = ell * ell
    if any(p == ell for p in primes):
        return 0, (ell - 1) ** len(primes)
    dist = {1: 1}
    for p in primes:
        step = pow(p, ell - 1, mod)
        powers = [pow(step, j, mod) for j in range(1, ell)]
        new = {}
        for r, c in dist.items():
            for s in powers:
                key = r * s % mod
                new[key] = new.get(key, 0) + c
        dist = new
    tame = dist.get(1, 0)
    return tame, (ell - 1) ** len(primes) - tame


def radical_terms(ell: int, limit: int) -> list[RadicalTerm]:
    """RadicalTerm for every squarefree 1 <= n <= limit (n = 1 is the a = 1 term)."""
    _check_ell(ell)
    if limit < 1:
        return []
    terms = [RadicalTerm(1, 1, 0, 1)]
    for n, primes in _squarefree_factors(limit)(2, limit + 1):
        tame, wild = _tally(ell, primes)
        g = ell ** sum(1 for p in primes if p % ell == 1)
        terms.append(RadicalTerm(n, tame, wild, g))
    return terms


@dataclass(frozen=True)
class Checkpoint:
    X: int
    n_fields: int
    n_genus_one: int
    genus_sum: int


@dataclass
class CountSummary:
    ell: int
    X: int
    n_fields: int
    n_genus_one: int
    genus_sum: int
    checkpoints: list[Checkpoint] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ell": self.ell,
            "X": self.X,
            "checkpoints": [asdict(c) for c in self.checkpoints],
        }


def _term_arrays(ell: int, limit: int, threads: int):
    """Dense per-n arrays (index n) of tame/wild tallies and genus weights for n >= 2."""
    tame = np.zeros(limit + 1, dtype=np.int64)
    wild = np.zeros(limit + 1, dtype=np.int64)
    weight = np.zeros(limit + 1, dtype=np.int64)
    if limit < 2:
        return tame, wild, weight
    walk = _squarefree_factors(limit)

    def work(span):
        rows = []
        for n, primes in walk(*span):
            t, w = _tally(ell, primes)
            rows.append((n, t, w, ell ** sum(1 for p in primes if p % ell == 1)))
        return rows

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        for rows in pool.map(work, _blocks(2, limit + 1, max(1, threads) * 4)):
            for n, t, w, g in rows:
                tame[n], wild[n], weight[n] = t, w, g
    return tame, wild, weight


def count_summary(ell: int, X, checkpoints=(), threads: int = 1) -> CountSummary:
    """N_l, the genus-one count and the genus sum at X and at each checkpoint."""
    _check_ell(ell)
    X = as_bound(X)
    cps = [as_bound(c) for c in checkpoints]
    if any(c > X for c in cps):
        raise DomainError("checkpoints must not exceed X")
    if cps != sorted(cps):
        raise DomainError("checkpoints must be ascending")
    tame_cut, _ = radical_cutoffs(ell, X)
    tame, wild, weight = _term_arrays(ell, tame_cut, threads)
    one = weight == 1
    cum = {
        "t": np.cumsum(tame),
        "w": np.cumsum(wild),
        "t1": np.cumsum(np.where(one, tame, 0)),
        "w1": np.cumsum(np.where(one, wild, 0)),
        "tg": np.cumsum(tame * weight),
        "wg": np.cumsum(wild * weight),
    }

    def at(bound):
        tc, wc = radical_cutoffs(ell, bound)
        tc, wc = min(tc, tame_cut), min(wc, tame_cut)
        vals = []
        for t, w in (("t", "w"), ("t1", "w1"), ("tg", "wg")):
            s = int(cum[t][tc]) + int(cum[w][wc])
            # every orbit has exactly l-1 members sharing n and the congruence class
            q, r = divmod(s, ell - 1)
            assert r == 0, "orbit count not divisible by l-1"
            vals.append(q)
        return Checkpoint(bound, *vals)

    rows = [at(c) for c in cps]
    total = at(X)
    return CountSummary(ell, X, total.n_fields, total.n_genus_one, total.genus_sum, rows)


@dataclass(frozen=True)
class IdentityCheck:
    ell: int
    X: int
    n_fields: int
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.lhs == self.rhs

    def __bool__(self):
        return self.passed


def direct_radical_sums(ell: int, X) -> tuple[int, int]:
    """The two double sums over (n, a) counted by scanning every l-free a.

    The a = 1 term (n = 1, tame) is always included in the first sum.
    """
    X = as_bound(X)
    tame_cut, wild_cut = radical_cutoffs(ell, X)
    tame_cut = max(tame_cut, 1)
    amax = tame_cut ** (ell - 1)
    if amax > BRUTE_CAP:
        raise CapacityError(f"direct scan range {amax} exceeds {BRUTE_CAP}")
    mod = ell * ell
    first = second = 0
    for a, n in _scan_ell_free(ell, amax, tame_cut):
        r = a % mod
        t = np.ones_like(r)
        for _ in range(ell - 1):
            t = t * r % mod
        is_tame = t == 1
        first += int(np.count_nonzero(is_tame & (n <= tame_cut)))
        second += int(np.count_nonzero(~is_tame & (n <= wild_cut)))
    return first, second


def parametrization_identity_check(ell: int, X) -> IdentityCheck:
    """(l-1) N_l(X) + 1 against the direct double sum over radicals and l-free a."""
    _check_ell(ell)
    X = as_bound(X)
    n_fields = len(enumerate_radical(ell, X))
    first, second = direct_radical_sums(ell, X)
    return IdentityCheck(ell, X, n_fields, (ell - 1) * n_fields + 1, first + second)


def asymptotic_comparison(summary: CountSummary, C: float, A: float, B: float) -> list[dict]:
    """Empirical over predicted at each checkpoint for the three asymptotics.

    ratio_count: N / (C X^(1/(l-1)) (log X)^(l-2)); ratio_genus_one: proportion
    with g = 1 times A log X; ratio_genus_avg: mean genus over B (log X)^(l-1).
    """
    ell = summary.ell
    rows = []
    for cp in summary.checkpoints or [
        Checkpoint(summary.X, summary.n_fields, summary.n_genus_one, summary.genus_sum)
    ]:
        row = {"X": cp.X, "ratio_count": None, "ratio_genus_one": None, "ratio_genus_avg": None}
        if cp.n_fields and cp.X > 1:
            L = math.log(cp.X)
            row["ratio_count"] = cp.n_fields / (C * cp.X ** (1 / (ell - 1)) * L ** (ell - 2))
            row["ratio_genus_one"] = cp.n_genus_one / cp.n_fields * A * L
            row["ratio_genus_avg"] = cp.genus_sum / cp.n_fields / (B * L ** (ell - 1))
        rows.append(row)
    return rows


def fields_to_csv(fields, fh=None) -> str | None:
    own = fh is None
    fh = io.StringIO() if own else fh
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for f in fields:
        w.writerow(f.csv_row())
    return fh.getvalue() if own else None


def fields_from_csv(fh) -> list[PureField]:
    out = []
    for row in csv.DictReader(fh):
        out.append(
            PureField(
                disc_magnitude=int(row["disc"]),
                canonical_a=int(row["canonical_a"]),
                ell=int(row["ell"]),
                radical_n=int(row["radical"]),
                wendt_tame=row["wendt_tame"] == "1",
                genus=int(row["genus"]),
            )
        )
    return out


def summary_from_fields(ell: int, X, fields, checkpoints=()) -> CountSummary:
    """CountSummary recomputed from a stored field list (no re-enumeration)."""
    X = as_bound(X)

    def at(bound):
        sel = [f for f in fields if f.disc_magnitude <= bound]
        return Checkpoint(
            bound, len(sel), sum(f.genus == 1 for f in sel), sum(f.genus for f in sel)
        )

    total = at(X)
    return CountSummary(
        ell, X, total.n_fields, total.n_genus_one, total.genus_sum,
        [at(as_bound(c)) for c in checkpoints],
    )


def summary_json(summary: CountSummary) -> str:
    return json.dumps(summary.to_json(), sort_keys=True)
