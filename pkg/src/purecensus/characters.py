"""Dirichlet characters mod l and l^2 and the exact character sums built on them.

Character values are carried as exponents: chi_k(u) = w^(k dlog u) with w a
primitive root of unity of order phi(modulus). Characters whose l-th power is
principal take values in Z[zeta_l] and are summed exactly there.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np

from .arith import build_dlog_table, factorize, is_odd_prime, sieve_primes
from .census import as_bound, count_summary, radical_cutoffs
from .cyclotomic import CyclotomicInteger
from .errors import DomainError

WEIGHTS = ("plain", "genus_one", "genus")


@dataclass(frozen=True)
class DirichletCharacter:
    ell: int
    modulus: int
    index: int

    def __post_init__(self):
        if self.modulus not in (self.ell, self.ell * self.ell):
            raise DomainError("modulus must be l or l^2")
        if not 0 <= self.index < self.group_order:
            raise DomainError("character index out of range")

    @property
    def group_order(self) -> int:
        return self.ell - 1 if self.modulus == self.ell else self.ell * (self.ell - 1)

    @property
    def is_principal(self) -> bool:
        return self.index == 0

    @property
    def order(self) -> int:
        return self.group_order // math.gcd(self.index, self.group_order)

    def exponent(self, u: int) -> int | None:
        """k * dlog(u) mod phi(modulus), or None when gcd(u, l) > 1."""
        if u % self.ell == 0:
            return None
        d = build_dlog_table(self.ell).dlog(u % (self.ell * self.ell))
        return self.index * d % self.group_order

    def __call__(self, u: int) -> complex:
        k = self.exponent(u)
        if k is None:
            return 0j
        return cmath.exp(2j * math.pi * k / self.group_order)

    def cyclotomic(self, u: int) -> CyclotomicInteger:
        """Exact value in Z[zeta_l]; only for characters with chi^l principal."""
        if self.modulus != self.ell * self.ell or self.index % (self.ell - 1):
            raise DomainError("value is not in Z[zeta_l] for this character")
        k = self.exponent(u)
        if k is None:
            return CyclotomicInteger.from_int(self.ell, 0)
        return CyclotomicInteger.zeta_power(self.ell, k // (self.ell - 1))

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.ell, self.modulus, -self.index % self.group_order)

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.ell, self.modulus, self.index * k % self.group_order)


def _check_ell(ell):
    if not is_odd_prime(ell):
        raise DomainError("ell must be an odd prime")


def characters_mod_ell(ell: int) -> list[DirichletCharacter]:
    _check_ell(ell)
    return [DirichletCharacter(ell, ell, k) for k in range(ell - 1)]


def order_ell_characters(ell: int) -> list[DirichletCharacter]:
    """The l characters mod l^2 with chi^l = chi_0; principal first."""
    _check_ell(ell)
    return [DirichletCharacter(ell, ell * ell, (ell - 1) * j) for j in range(ell)]


def _weight_factor(ell: int, p: int, weight: str) -> int:
    if weight == "plain":
        return 1
    if weight == "genus_one":
        return 0 if p % ell == 1 else 1
    if weight == "genus":
        return ell if p % ell == 1 else 1
    raise DomainError(f"unknown weight {weight!r}")


def local_factor_chi(p: int, chi: DirichletCharacter, weight: str = "plain") -> CyclotomicInteger:
    """sum_{j=1}^{l-1} chi(p)^j times the weight at p."""
    ell = chi.ell
    v = chi.cyclotomic(p)
    acc = CyclotomicInteger.from_int(ell, 0)
    term = v
    for _ in range(ell - 1):
        acc = acc + term
        term = term * v
    return acc * _weight_factor(ell, p, weight)


def f_chi(n: int, chi: DirichletCharacter, weight: str = "plain") -> CyclotomicInteger:
    if n < 1:
        raise DomainError("n must be positive")
    f = factorize(n)
    if any(e > 1 for _, e in f):
        raise DomainError(f"{n} is not squarefree")
    out = CyclotomicInteger.from_int(chi.ell, 1)
    for p, _ in f:
        out = out * local_factor_chi(p, chi, weight)
    return out


def f_plain(n: int, ell: int, weight: str = "plain") -> int:
    """Unrestricted f(n) = (l-1)^omega(n), times the weight; nonzero at p = l."""
    out = 1
    for p, e in factorize(n):
        if e > 1:
            raise DomainError(f"{n} is not squarefree")
        out *= (ell - 1) * _weight_factor(ell, p, weight)
    return out


# ---------------------------------------------------------------------------
# summatory functions over squarefree n


def _multiplicative_on_squarefree(Y: int, local: np.ndarray, primes: np.ndarray) -> np.ndarray:
    """values[n] = mu^2(n) prod_{p | n} local[i], for 0 <= n <= Y (index 0 unused)."""
    # |value| <= vmax^omega_max, omega_max from the largest primorial <= Y
    omega_max, primorial = 0, 1
    for p in primes.tolist():
        if primorial * p > Y:
            break
        primorial *= p
        omega_max += 1
    vmax = max([1] + np.abs(local).tolist())
    dtype = np.int64 if vmax**omega_max < 2**62 else object
    vals = np.ones(Y + 1, dtype=dtype)
    vals[0] = 0
    for p, v in zip(primes.tolist(), local.tolist()):
        if p > Y:
            break
        if v != 1:
            vals[p::p] *= v
        if p * p <= Y:
            vals[p * p :: p * p] = 0
    return vals


def _exact_sum(arr: np.ndarray, chunk: int = 1 << 16) -> int:
    if arr.dtype == object:
        return int(sum(arr.tolist()))
    return sum(int(arr[i : i + chunk].sum()) for i in range(0, len(arr), chunk))


def _prefix_sums(vals: np.ndarray, cuts) -> dict[int, int]:
    out = {}
    pos, acc = 0, 0
    for c in sorted(set(cuts)):
        c = min(c, len(vals) - 1)
        acc += _exact_sum(vals[pos : c + 1])
        pos = c + 1
        out[c] = acc
    return out


def _chi_local_table(chi: DirichletCharacter, primes: np.ndarray, weight: str) -> np.ndarray:
    """Per-prime local factors of f_chi as integers, computed exactly in Z[zeta_l].

    Only l^2 residue classes occur, so each class is evaluated once.
    """
    ell = chi.ell
    cache = {}
    local = np.empty(len(primes), dtype=np.int64)
    for i, p in enumerate(primes.tolist()):
        key = (p % (ell * ell), _weight_factor(ell, p, weight))
        if key not in cache:
            v = local_factor_chi(p, chi, "plain") * key[1]
            cache[key] = v.rational_value()
        local[i] = cache[key]
    return local


def F_chi_partials(chi: DirichletCharacter, cuts, weight: str = "plain") -> dict[int, CyclotomicInteger]:
    """F_chi(Y) for every Y in cuts, from one sieve pass up to max(cuts)."""
    cuts = [int(math.floor(c)) for c in cuts]
    Y = max(cuts + [0])
    zero = CyclotomicInteger.from_int(chi.ell, 0)
    if Y < 1:
        return {c: zero for c in cuts}
    primes = sieve_primes(max(Y, 2)).primes
    primes = primes[primes <= Y]
    # local factors of order-l characters are rational; the check is exact
    local = _chi_local_table(chi, primes, weight)
    sums = _prefix_sums(_multiplicative_on_squarefree(Y, local, primes), [c for c in cuts if c >= 1])
    return {c: CyclotomicInteger.from_int(chi.ell, sums[c]) if c >= 1 else zero for c in cuts}


def F_chi_partial(chi: DirichletCharacter, Y, weight: str = "plain") -> CyclotomicInteger:
    return F_chi_partials(chi, [Y], weight)[int(math.floor(Y))]


def F_chi_partial_direct(chi: DirichletCharacter, Y: int, weight: str = "plain") -> CyclotomicInteger:
    """Reference evaluation: sum of f_chi(n) term by term in Z[zeta_l]."""
    acc = CyclotomicInteger.from_int(chi.ell, 0)
    for n in range(1, int(Y) + 1):
        if all(e == 1 for _, e in factorize(n)):
            acc = acc + f_chi(n, chi, weight)
    return acc


def F_plain_partials(ell: int, cuts, weight: str = "plain") -> dict[int, int]:
    cuts = [int(math.floor(c)) for c in cuts]
    Y = max(cuts + [0])
    if Y < 1:
        return {c: 0 for c in cuts}
    primes = sieve_primes(max(Y, 2)).primes
    primes = primes[primes <= Y]
    local = np.array(
        [(ell - 1) * _weight_factor(ell, p, weight) for p in primes.tolist()], dtype=np.int64
    )
    sums = _prefix_sums(_multiplicative_on_squarefree(Y, local, primes), [c for c in cuts if c >= 1])
    return {c: sums[c] if c >= 1 else 0 for c in cuts}


def F_plain(ell: int, Y, weight: str = "plain") -> int:
    return F_plain_partials(ell, [Y], weight)[int(math.floor(Y))]


# ---------------------------------------------------------------------------
# reports


@dataclass
class Report:
    check: str
    ell: int
    bound: int
    mismatches: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.passed = not self.mismatches

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "ell": self.ell,
            "bound": self.bound,
            "mismatches": self.mismatches,
            "pass": self.passed,
            "details": self.details,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, default=str)


# rows of the f_chi(p) tables, keyed by (p = 1 mod l, p^(l-1) = 1 mod l^2)
def table_rows(ell: int) -> dict[tuple[bool, bool], dict]:
    phi = ell * (ell - 1)
    return {
        (True, True): {"genus_one": 0, "genus": ell * (ell - 1), "density": 1 / phi},
        (True, False): {"genus_one": 0, "genus": -ell, "density": (ell - 1) / phi},
        (False, True): {"genus_one": ell - 1, "genus": ell - 1, "density": (ell - 2) / phi},
        (False, False): {"genus_one": -1, "genus": -1, "density": (ell - 1) * (ell - 2) / phi},
    }


def congruence_class(p: int, ell: int) -> tuple[bool, bool]:
    return p % ell == 1, pow(p, ell - 1, ell * ell) == 1


def table_check_f_chi(ell: int, prime_bound: int, density_bound: int | None = None) -> Report:
    """Compare f_chi(p) with the congruence-class tables for every p <= prime_bound.

    Also tallies the four congruence classes of primes up to density_bound and
    records their proportions next to the expected densities.
    """
    _check_ell(ell)
    rows = table_rows(ell)
    chars = [c for c in order_ell_characters(ell) if not c.is_principal]
    mismatches = []
    primes = sieve_primes(max(prime_bound, 2)).primes
    for p in primes[primes <= prime_bound].tolist():
        if p == ell:
            continue
        cls = congruence_class(p, ell)
        plain_expect = ell - 1 if cls[1] else -1
        for chi in chars:
            got = f_chi(p, chi, "plain")
            checks = [
                ("plain", got, plain_expect),
                ("genus_one", f_chi(p, chi, "genus_one"), rows[cls]["genus_one"]),
                ("genus", f_chi(p, chi, "genus"), rows[cls]["genus"]),
            ]
            for name, value, expect in checks:
                if value != expect:
                    mismatches.append({"p": p, "chi": chi.index, "weight": name,
                                       "got": repr(value), "expected": expect})
    dbound = density_bound or prime_bound
    dprimes = sieve_primes(max(dbound, 2)).primes
    dprimes = dprimes[(dprimes <= dbound) & (dprimes != ell)]
    mod = ell * ell
    r = dprimes % mod
    t = np.ones_like(r)
    for _ in range(ell - 1):
        t = t * r % mod
    one_l = (dprimes % ell) == 1
    tame = t == 1
    total = len(dprimes)
    classes = {}
    for key, row in rows.items():
        cnt = int(np.count_nonzero((one_l == key[0]) & (tame == key[1])))
        classes[f"{int(key[0])}{int(key[1])}"] = {
            "count": cnt,
            "proportion": cnt / total if total else 0.0,
            "density": row["density"],
            "rel_error": abs(cnt / total / row["density"] - 1) if total else None,
        }
    return Report(
        "table_check_f_chi", ell, prime_bound, mismatches,
        {"density_bound": dbound, "classes": classes, "p_equals_ell": "skipped; chi mod l^2 vanishes at l"},
    )


def character_orthogonality(ell: int) -> dict[int, CyclotomicInteger]:
    """sum over the l order-l characters of chi(u), for every unit u mod l^2."""
    chars = order_ell_characters(ell)
    out = {}
    for u in build_dlog_table(ell).units():
        acc = CyclotomicInteger.from_int(ell, 0)
        for chi in chars:
            acc = acc + chi.cyclotomic(u)
        out[u] = acc
    return out


def big_identity_check(ell: int, X, weight: str = "plain") -> Report:
    """Evaluate the character decomposition of (l-1) * count + 1 exactly.

    RHS = (1/l) sum_chi [F_chi(A) - F_chi(B)] + F(B) with A, B the tame and
    wild radical cutoffs. The character sum is formed in Z[zeta_l], checked to be
    a rational integer divisible by l, then compared with the census count
    (N_l, the genus-one count or the genus sum, per weight).
    """
    _check_ell(ell)
    if weight not in WEIGHTS:
        raise DomainError(f"unknown weight {weight!r}")
    X = as_bound(X)
    A, B = radical_cutoffs(ell, X)
    # the a = 1 term belongs to the tame sum even when the real cutoff is below 1
    A = max(A, 1)
    chars = order_ell_characters(ell)
    acc = CyclotomicInteger.from_int(ell, 0)
    for chi in chars:
        F = F_chi_partials(chi, [A, B], weight)
        acc = acc + (F[A] - F[B])
    mismatches = []
    details = {"A": A, "B": B, "character_sum": repr(acc)}
    if not acc.is_rational():
        mismatches.append({"reason": "character sum not rational", "value": repr(acc)})
    elif acc.rational_value() % ell:
        mismatches.append({"reason": "character sum not divisible by l", "value": repr(acc)})
    if not mismatches:
        rhs = acc.exact_div(ell).rational_value() + F_plain(ell, B, weight)
        s = count_summary(ell, X)
        count = {"plain": s.n_fields, "genus_one": s.n_genus_one, "genus": s.genus_sum}[weight]
        lhs = (ell - 1) * count + 1
        details.update({"lhs": lhs, "rhs": rhs, "count": count})
        if lhs != rhs:
            mismatches.append({"reason": "identity fails", "lhs": lhs, "rhs": rhs})
    return Report(f"big_identity_{weight}", ell, X, mismatches, details)


# ---------------------------------------------------------------------------
# Mertens sums over primes in residue classes


def _class_mask(primes: np.ndarray, S, m: int) -> np.ndarray:
    S = sorted({s % m for s in S})
    if not S:
        raise DomainError("S must be nonempty")
    if any(math.gcd(s, m) != 1 for s in S):
        raise DomainError("S must consist of units mod m")
    return np.isin(primes % m, S)


def mertens_partials(S, m: int, Xs) -> dict[int, float]:
    """sum of 1/p over primes p <= X with p mod m in S, for each X in Xs."""
    Xs = sorted(as_bound(x) for x in Xs)
    primes = sieve_primes(max(Xs[-1], 2)).primes
    mask = _class_mask(primes, S, m)
    sel = primes[mask]
    out, pos, parts = {}, 0, []
    for X in Xs:
        end = int(np.searchsorted(sel, X, side="right"))
        parts.append(math.fsum((1.0 / sel[pos:end]).tolist()))
        pos = end
        out[X] = math.fsum(parts)
    return out


def mertens_partial(S, m: int, X) -> float:
    return mertens_partials(S, m, [X])[as_bound(X)]


def mertens_slope(S, m: int, Xs) -> float:
    """Least-squares slope of the partial sums against log log X."""
    vals = mertens_partials(S, m, Xs)
    x = np.array([math.log(math.log(X)) for X in vals])
    y = np.array(list(vals.values()))
    return float(np.polyfit(x, y, 1)[0])


def tame_classes(ell: int) -> list[int]:
    mod = ell * ell
    return [u for u in range(1, mod) if u % ell and pow(u, ell - 1, mod) == 1]


@lru_cache(maxsize=None)
def _phi(m: int) -> int:
    out = m
    for p, _ in factorize(m):
        out = out // p * (p - 1)
    return out


def expected_mertens_slope(S, m: int) -> float:
    return len({s % m for s in S}) / _phi(m)
