"""Integer primitives: sieves, factorization, radicals and discrete logs mod l^2."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np
from sympy import integer_nthroot

from .errors import CapacityError, DomainError

MAX_FACTOR = 2**63 - 1
MAX_DISC = 2**127 - 1
MAX_SIEVE = 2**40

_SEGMENT = 1 << 22


@dataclass(frozen=True)
class Factorization:
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        last = 0
        for p, e in self.pairs:
            if p <= last or e < 1:
                raise DomainError(f"malformed factorization {self.pairs}")
            last = p

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def value(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p**e
        return out

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray = field(repr=False)

    def __len__(self):
        return len(self.primes)


def _small_primes(limit: int) -> np.ndarray:
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mark = np.ones(limit + 1, dtype=bool)
    mark[:2] = False
    mark[4::2] = False
    for p in range(3, math.isqrt(limit) + 1, 2):
        if mark[p]:
            mark[p * p :: 2 * p] = False
    return np.flatnonzero(mark).astype(np.int64)


def prime_blocks(limit: int, lo: int = 2, segment: int = _SEGMENT) -> Iterator[np.ndarray]:
    """Yield the primes in [lo, limit] as consecutive ascending int64 blocks.

    Odd-only segmented sieve; block boundaries depend on `segment` only, so the
    concatenated output is the same whatever the consumer does with the blocks.
    """
    if limit > MAX_SIEVE:
        raise CapacityError(f"sieve limit {limit} exceeds 2^40")
    if limit < lo or limit < 2:
        return
    base = _small_primes(math.isqrt(limit))
    odd_base = base[1:]
    if lo <= 2:
        yield np.array([2], dtype=np.int64)
        lo = 3
    if lo % 2 == 0:
        lo += 1
    while lo <= limit:
        hi = min(lo + 2 * segment, limit + 1)
        count = (hi - lo + 1) // 2
        mark = np.ones(count, dtype=bool)
        for p in odd_base:
            p = int(p)
            sq = p * p
            if sq >= hi:
                break
            start = max(sq, -(-lo // p) * p)
            if start % 2 == 0:
                start += p
            if start < hi:
                mark[(start - lo) // 2 :: p] = False
        vals = lo + 2 * np.flatnonzero(mark).astype(np.int64)
        # base primes themselves are not crossed off (marking starts at p*p)
        yield vals[vals <= limit]
        lo = hi if hi % 2 == 1 else hi + 1


@lru_cache(maxsize=4)
def sieve_primes(limit: int) -> PrimeTable:
    if limit < 2:
        raise CapacityError("sieve limit must be at least 2")
    if limit > MAX_SIEVE:
        raise CapacityError(f"sieve limit {limit} exceeds 2^40")
    blocks = list(prime_blocks(limit))
    primes = np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64)
    primes.setflags(write=False)
    return PrimeTable(limit, primes)


def spf_sieve(limit: int) -> np.ndarray:
    """Smallest-prime-factor table for 0..limit (entries 0 and 1 are 0)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    if limit >= 2:
        spf[2::2] = 2
        for p in range(3, math.isqrt(limit) + 1, 2):
            if spf[p] == 0:
                seg = spf[p * p :: 2 * p]
                seg[seg == 0] = p
        rest = np.flatnonzero(spf == 0)
        rest = rest[rest >= 2]
        spf[rest] = rest
    return spf


def factor_with_spf(m: int, spf: np.ndarray) -> Factorization:
    pairs = []
    while m > 1:
        p = int(spf[m])
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        pairs.append((p, e))
    return Factorization(tuple(pairs))


_TRIAL = 1 << 16


@lru_cache(maxsize=1)
def _trial_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in _small_primes(_TRIAL))


def factorize(m: int) -> Factorization:
    if m == 0:
        raise DomainError("cannot factor 0")
    if m < 0 or m > MAX_FACTOR:
        raise CapacityError(f"{m} outside [1, 2^63-1]")
    pairs = []
    for p in _trial_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            pairs.append((p, e))
    if m > 1:
        if m < _TRIAL * _TRIAL:
            pairs.append((m, 1))
        else:
            # cofactor has no prime below 2^16; hand off to a general-purpose factorer
            from sympy import factorint

            pairs.extend(sorted(factorint(m).items()))
    return Factorization(tuple(pairs))


def radical(f: Factorization) -> int:
    out = 1
    for p, _ in f:
        out *= p
    return out


def omega_hat(f: Factorization, ell: int) -> int:
    return sum(1 for p, _ in f if p % ell == 1)


def is_ell_free(f: Factorization, ell: int) -> bool:
    return all(e < ell for _, e in f)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = factorize(n)
    return len(f) == 1 and f.pairs[0][1] == 1


def is_odd_prime(n: int) -> bool:
    return n > 2 and is_prime(n)


def iroot(x: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= x."""
    if x < 0:
        raise DomainError("iroot of negative number")
    return int(integer_nthroot(x, k)[0])


def multiplicative_order(u: int, m: int) -> int:
    if math.gcd(u, m) != 1:
        raise DomainError(f"{u} is not a unit mod {m}")
    k, x = 1, u % m
    while x != 1 % m:
        x = x * u % m
        k += 1
    return k


@dataclass(frozen=True)
class DlogTable:
    ell: int
    modulus: int
    generator: int
    table: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return self.ell * (self.ell - 1)

    def dlog(self, u: int) -> int:
        d = int(self.table[u % self.modulus])
        if d < 0:
            raise DomainError(f"{u} is not a unit mod {self.modulus}")
        return d

    def units(self) -> list[int]:
        return [u for u in range(1, self.modulus) if self.table[u] >= 0]


@lru_cache(maxsize=None)
def build_dlog_table(ell: int) -> DlogTable:
    if not is_odd_prime(ell) or ell > 1000:
        raise DomainError("ell must be an odd prime <= 1000")
    mod = ell * ell
    order = ell * (ell - 1)
    qs = factorize(order).primes
    g = next(
        g
        for g in range(2, mod)
        if g % ell and all(pow(g, order // q, mod) != 1 for q in qs)
    )
    table = np.full(mod, -1, dtype=np.int64)
    x = 1
    for k in range(order):
        table[x] = k
        x = x * g % mod
    table.setflags(write=False)
    return DlogTable(ell, mod, g, table)
