"""Field-level invariants of pure fields Q(a^(1/l)) of odd prime degree l.

A field is identified by an l-free integer a >= 2; the l-1 integers
reduce(a^i), 1 <= i < l, all give the same field and the smallest of them is
used as the canonical representative.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    MAX_DISC,
    MAX_FACTOR,
    Factorization,
    factorize,
    is_ell_free,
    omega_hat,
    radical,
)
from .errors import CapacityError, DomainError


@dataclass(frozen=True, order=True)
class PureField:
    disc_magnitude: int
    canonical_a: int
    ell: int
    radical_n: int
    wendt_tame: bool
    genus: int

    def csv_row(self) -> list:
        return [
            self.ell,
            self.canonical_a,
            self.radical_n,
            self.disc_magnitude,
            int(self.wendt_tame),
            self.genus,
        ]


def _reconstruct(pairs, checked: bool = True) -> int:
    out = 1
    for p, e in pairs:
        out *= p**e
    if checked and out > MAX_FACTOR:
        raise CapacityError(f"l-free reduction {out} exceeds 2^63-1")
    return out


def ell_free_reduce(a: int, ell: int) -> int:
    if a < 1:
        raise DomainError("a must be a positive integer")
    return _reconstruct((p, e % ell) for p, e in factorize(a))


def _checked_factorization(a: int, ell: int) -> Factorization:
    if a < 2:
        raise DomainError(f"a={a}: pure fields need an l-free a >= 2")
    f = factorize(a)
    if not is_ell_free(f, ell):
        raise DomainError(f"a={a} is not {ell}-free")
    return f


def _orbit_from(f: Factorization, ell: int) -> list[int]:
    return sorted(_reconstruct((p, e * i % ell) for p, e in f) for i in range(1, ell))


def _orbit_min(f: Factorization, ell: int) -> int:
    # large orbit members never win: the minimum is at most a itself
    return min(_reconstruct(((p, e * i % ell) for p, e in f), checked=False) for i in range(1, ell))


def orbit(a: int, ell: int) -> list[int]:
    return _orbit_from(_checked_factorization(a, ell), ell)


def canonical_rep(a: int, ell: int) -> int:
    return _orbit_min(_checked_factorization(a, ell), ell)


def _disc_from(n: int, a_mod: int, ell: int) -> tuple[int, bool]:
    mod = ell * ell
    tame = pow(a_mod, ell - 1, mod) == 1
    disc = ell ** (ell - 2 if tame else ell) * n ** (ell - 1)
    if disc > MAX_DISC:
        raise CapacityError(f"|disc| = {disc} exceeds 2^127-1")
    return disc, tame


def disc_magnitude(a: int, ell: int) -> tuple[int, bool]:
    """Return (|disc|, tame) where tame means a^(l-1) = 1 mod l^2.

    When l divides a the congruence cannot hold, which selects l^l n^(l-1).
    """
    f = _checked_factorization(a, ell)
    return _disc_from(radical(f), a % (ell * ell), ell)


def genus_number(a: int, ell: int) -> int:
    # l itself is never counted: l != 1 mod l
    return ell ** omega_hat(_checked_factorization(a, ell), ell)


def make_field(a: int, ell: int) -> PureField:
    f = _checked_factorization(a, ell)
    c = _orbit_min(f, ell)
    n = radical(f)
    disc, tame = _disc_from(n, c % (ell * ell), ell)
    return PureField(
        disc_magnitude=disc,
        canonical_a=c,
        ell=ell,
        radical_n=n,
        wendt_tame=tame,
        genus=ell ** omega_hat(f, ell),
    )
