"""Euler products for the counting constants and their L-function regularisation.

Every per-prime factor here depends on p only through p mod l, so each family
is described by a small table of (c, d, m) triples meaning (1 + c p^-d)^m.
Log-factors are summed over prime blocks with exactly rounded summation and
the product is recovered with one exponential at the end.

The families whose first-order log term does not vanish for every p (A, B
and the two hatted D variants) converge only conditionally. They are written
as prod_{chi != chi_0 mod l} L(1, chi)^e times an absolutely convergent
remainder G, whose factor at p is the family factor times
prod_{chi != chi_0} (1 - chi(p)/p)^e = ((1 - p^-f)^((l-1)/f) / (1 - 1/p))^e
with f the order of p mod l.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import exp1

from .arith import is_odd_prime, multiplicative_order, prime_blocks
from .characters import DirichletCharacter, characters_mod_ell
from .errors import CrossCheckError, DomainError

EULER_GAMMA = 0.57721566490153286060651209

FAMILIES = ("D", "D5hat", "D6hat", "A", "B")
ABSOLUTE = ("D", "D5hat", "D6hat")
CONDITIONAL = ("A", "B")
METHODS = ("direct-truncation", "direct-with-extrapolation", "direct-averaged", "L-decomposition")

_BLOCK = 1 << 20
_SERIES_ORDER = 12


def _check_ell(ell):
    if not is_odd_prime(ell) or ell > 31:
        raise DomainError("ell must be an odd prime <= 31")


def _terms(family: str, ell: int, r: int, tau: int = 0) -> list[tuple[int, int, int]]:
    """(c, d, m) triples whose product (1 + c x^d)^m is the factor at p = r mod l."""
    one = r == 1
    if family == "D":
        return [(ell - 1, 1, 1), (-1, 1, ell - 1)]
    if family == "D5hat":
        return [(-1, 1, ell - 2)] + ([] if one else [(ell - 1, 1, 1)])
    if family == "D6hat":
        return [(-1, 1, 2 * ell - 2), (ell * (ell - 1), 1, 1) if one else (ell - 1, 1, 1)]
    if family == "A":
        return [(-1, 1, 1)] + ([(ell - 1, 1, 1)] if one else [])
    if family == "B":
        return [(-1, 1, ell - 1)] + ([(ell * (ell - 1), 1, 1), (ell - 1, 1, -1)] if one else [])
    if family == "mertens":
        return [(tau, 1, 1), (-1, 1, tau)]
    raise DomainError(f"unknown family {family!r}")


# exponent of prod_{chi != chi_0 mod l} L(1, chi) in each family's product
L_POWER = {"D": 0, "D5hat": -1, "D6hat": None, "A": 1, "B": None, "mertens": 0}


def l_power(family: str, ell: int) -> int:
    e = L_POWER[family]
    return ell - 1 if e is None else e


def prefactor(family: str, ell: int) -> Fraction:
    f = math.factorial
    return {
        "D": Fraction(1, f(ell - 2)),
        "D5hat": Fraction(1, f(ell - 3)),
        "D6hat": Fraction(1, f(2 * ell - 3)),
        "A": Fraction(1, (ell - 1) * (ell - 2)),
        "B": Fraction(f(ell - 2), f(2 * ell - 3) * (ell - 1) ** (ell - 1)),
    }[family]


def local_factor(family: str, ell: int, p: int) -> Fraction:
    """The displayed per-prime factor of a family, as an exact rational."""
    out = Fraction(1)
    for c, d, m in _terms(family, ell, p % ell):
        out *= (1 + Fraction(c, p**d)) ** m
    return out


def _g_terms(family: str, ell: int, r: int, e: int, tau: int = 0):
    terms = list(_terms(family, ell, r, tau))
    if e and r % ell:
        f = multiplicative_order(r, ell)
        terms += [(-1, f, e * (ell - 1) // f), (-1, 1, -e)]
    return terms


def log_series(family: str, ell: int, r: int, decomposed: bool = True, order: int = _SERIES_ORDER,
               tau: int = 0) -> list[Fraction]:
    """Coefficients c_1..c_order of log(factor) as a power series in x = 1/p."""
    e = l_power(family, ell) if decomposed else 0
    coeffs = [Fraction(0)] * (order + 1)
    for c, d, m in _g_terms(family, ell, r, e, tau):
        j = 1
        while d * j <= order:
            coeffs[d * j] += Fraction(m * (-1) ** (j + 1) * c**j, j)
            j += 1
    return coeffs[1:]


def mean_log_series(family: str, ell: int, decomposed: bool = True, tau: int = 0) -> list[Fraction]:
    rows = [log_series(family, ell, r, decomposed, tau=tau) for r in range(1, ell)]
    return [sum(col) / (ell - 1) for col in zip(*rows)]


def _log_factors(family: str, ell: int, primes: np.ndarray, e: int, tau: int = 0) -> np.ndarray:
    x = 1.0 / primes.astype(np.float64)
    out = np.zeros(len(primes))
    residues = primes % ell
    for r in range(ell):
        sel = residues == r
        if not sel.any():
            continue
        xs = x[sel]
        acc = np.zeros(len(xs))
        for c, d, m in _g_terms(family, ell, r, e, tau):
            acc += m * np.log1p(c * xs**d)
        out[sel] = acc
    return out


def _log_sum(family: str, ell: int, P: int, e: int, threads: int = 1, tau: int = 0,
             lo: int = 2) -> float:
    """Exactly rounded sum of log-factors over lo <= p <= P.

    Blocks come from the sieve in a fixed order and each is summed with fsum,
    so the result does not depend on the thread count.
    """
    blocks = list(prime_blocks(P, lo=lo, segment=_BLOCK))

    def work(block):
        return math.fsum(_log_factors(family, ell, block, e, tau).tolist())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    return math.fsum(parts)


def prime_power_tail(P: float, k: int) -> float:
    """Approximation of sum_{p > P} p^-k by the integral of t^-k / log t."""
    return float(exp1((k - 1) * math.log(P)))


def tail_correction(family: str, ell: int, P: int, decomposed: bool = True, tau: int = 0) -> float:
    """Estimated sum over p > P of the log-factors, from the class-averaged series."""
    coeffs = mean_log_series(family, ell, decomposed, tau)
    return math.fsum(float(c) * prime_power_tail(P, k) for k, c in enumerate(coeffs, 1) if k >= 2)


@lru_cache(maxsize=None)
def envelope_constant(family: str, ell: int, decomposed: bool = True, tau: int = 0,
                      check_to: int = 10**4) -> float:
    """c such that |log factor at p| <= c / p^2 for every prime p > l.

    Checked directly for l < p <= check_to; beyond that the power series is
    bounded termwise.
    """
    e = l_power(family, ell) if decomposed else 0
    primes = np.concatenate(list(prime_blocks(check_to, lo=ell + 1)))
    vals = np.abs(_log_factors(family, ell, primes, e, tau)) * primes.astype(np.float64) ** 2
    c_small = float(vals.max()) if len(vals) else 0.0
    rows = [log_series(family, ell, r, decomposed, order=40, tau=tau) for r in range(1, ell)]
    if any(row[0] for row in rows):
        raise DomainError(f"{family} has a first-order term; it is not absolutely convergent")
    c_big = max(sum(abs(float(c)) * check_to ** -(k - 2) for k, c in enumerate(row, 1) if k >= 2)
                for row in rows)
    return max(c_small, c_big)


@dataclass
class ConstantResult:
    family: str
    ell: int
    P: int
    method: str
    value: float
    tail: float
    cross_check_delta: float | None = None

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "ell": self.ell,
            "P": self.P,
            "method": self.method,
            "value": self.value,
            "tail": self.tail,
            "cross_check_delta": self.cross_check_delta,
        }


@dataclass(frozen=True)
class EulerProductJob:
    ell: int
    family: str
    P: int
    method: str = "L-decomposition"

    def run(self, threads: int = 1) -> ConstantResult:
        if self.family in CONDITIONAL:
            return eval_conditional(self.family, self.ell, self.P, threads=threads)
        return eval_absolute(self.family, self.ell, self.P, threads=threads)


# ---------------------------------------------------------------------------
# L(1, chi) for chi mod l


def _require_nonprincipal(chi: DirichletCharacter):
    if chi.modulus != chi.ell:
        raise DomainError("L_one takes characters mod l")
    if chi.is_principal:
        raise DomainError("L(1, chi_0) diverges")


def _L_closed_form(chi: DirichletCharacter) -> complex:
    """-(chi(-1) tau(chi) / q) sum_a conj(chi(a)) log(1 - zeta^a), principal branch.

    log(1 - e^(i t)) = log(2 sin(t/2)) + i (t - pi)/2 for 0 < t < 2 pi, so the
    even part is a log-sine sum and the odd part is linear in a.
    """
    q = chi.modulus
    gauss = sum(chi(a) * cmath.exp(2j * math.pi * a / q) for a in range(1, q))
    acc = 0j
    for a in range(1, q):
        t = 2 * math.pi * a / q
        acc += chi(a).conjugate() * complex(math.log(2 * math.sin(t / 2)), (t - math.pi) / 2)
    return -(chi(q - 1).real * gauss / q) * acc


_BERNOULLI = [Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30), Fraction(5, 66)]


def _L_series(chi: DirichletCharacter, M: int = 4000) -> complex:
    """Partial sum over n < M q plus an Euler-Maclaurin tail per residue class."""
    q = chi.modulus
    vals = {a: chi(a) for a in range(1, q)}
    re, im = [], []
    for k in range(M):
        for a, v in vals.items():
            t = v / (k * q + a)
            re.append(t.real)
            im.append(t.imag)
    for a, v in vals.items():
        x = M * q + a
        # sum_{k >= M} 1/(kq + a) with the divergent log part cancelled across classes
        tail = -math.log(x) / q + 0.5 / x
        for j, b in enumerate(_BERNOULLI, 1):
            m = 2 * j - 1
            deriv = (-1) ** m * math.factorial(m) * q**m / x ** (m + 1)
            tail -= float(b) / math.factorial(2 * j) * deriv
        t = v * tail
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def L_one(chi: DirichletCharacter, method: str = "finite-closed-form") -> complex:
    _require_nonprincipal(chi)
    if method == "finite-closed-form":
        return _L_closed_form(chi)
    if method == "tail-accelerated-series":
        return _L_series(chi)
    raise DomainError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def L_product(ell: int) -> tuple[float, float]:
    """prod over non-principal chi mod l of L(1, chi), by both methods."""
    _check_ell(ell)
    out = []
    for method in ("finite-closed-form", "tail-accelerated-series"):
        prod = 1 + 0j
        for chi in characters_mod_ell(ell)[1:]:
            prod *= L_one(chi, method)
        if abs(prod.imag) > 1e-10 * abs(prod) or prod.real <= 0:
            raise CrossCheckError("L-product is not a positive real", prod)
        out.append(prod.real)
    if abs(out[0] - out[1]) > 1e-10 * out[0]:
        raise CrossCheckError("L-product methods disagree", *out)
    return out[0], out[1]


# ---------------------------------------------------------------------------
# evaluators


def _direct_log(family: str, ell: int, P: int, threads: int) -> float:
    return _log_sum(family, ell, P, 0, threads)


def eval_direct(family: str, ell: int, P: int, threads: int = 1) -> ConstantResult:
    """Plain truncated product over p <= P, no correction of any kind."""
    _check_ell(ell)
    value = float(prefactor(family, ell)) * math.exp(_direct_log(family, ell, P, threads))
    return ConstantResult(family, ell, P, "direct-truncation", value, math.nan)


def _decomposed(family: str, ell: int, P: int, threads: int, correct_tail: bool = True):
    e = l_power(family, ell)
    log_g = _log_sum(family, ell, P, e, threads)
    if correct_tail:
        log_g += tail_correction(family, ell, P, decomposed=True)
    log_l = e * math.log(L_product(ell)[0]) if e else 0.0
    value = float(prefactor(family, ell)) * math.exp(log_g + log_l)
    tail = 1.3 * envelope_constant(family, ell, True) / (P * math.log(P)) * value
    return value, tail


def eval_absolute(family: str, ell: int, P: int, threads: int = 1, correct_tail: bool = True) -> ConstantResult:
    """D, D5hat or D6hat truncated at P.

    D has factors 1 + O(1/p^2) and is summed directly. The hatted variants
    carry +-1/p terms that only cancel across residue classes, so they go
    through the L(1, chi) factorisation, whose remainder is 1 + O(1/p^2).
    The returned tail bounds the absolute error of the truncation.
    """
    _check_ell(ell)
    if family not in ABSOLUTE:
        raise DomainError(f"{family} is not a D-family")
    value, tail = _decomposed(family, ell, P, threads, correct_tail)
    method = "direct-truncation" if l_power(family, ell) == 0 else "L-decomposition"
    return ConstantResult(family, ell, P, method, value, tail)


def _partial_logs(family: str, ell: int, P: int, threads: int, points) -> dict[int, float]:
    """Log of the raw truncated product at several bounds, in one pass."""
    points = sorted(points)
    out, lo, acc = {}, 2, []
    for Q in points:
        acc.append(_log_sum(family, ell, Q, 0, threads, lo=lo))
        out[Q] = math.fsum(acc)
        lo = Q + 1
    return out


def eval_extrapolated(family: str, ell: int, P: int, threads: int = 1) -> ConstantResult:
    """Fit v + c1/log Q + c2/(log Q)^2 through the raw products at Q = P/4, P/2, P."""
    pts = [P // 4, P // 2, P]
    logs = _partial_logs(family, ell, P, threads, pts)
    pre = float(prefactor(family, ell))
    u = np.array([1 / math.log(Q) for Q in pts])
    y = np.array([pre * math.exp(logs[Q]) for Q in pts])
    v = float(np.linalg.solve(np.vstack([np.ones(3), u, u * u]).T, y)[0])
    return ConstantResult(family, ell, P, "direct-with-extrapolation", v, abs(v - y[-1]))


def eval_averaged(family: str, ell: int, P: int, threads: int = 1) -> ConstantResult:
    """Mean of the raw log-products over every prime cutoff in (P/2, P].

    The raw partial products oscillate about the limit; averaging over the
    cutoff damps the oscillation without assuming a model for the error.
    """
    half = P // 2
    base = _log_sum(family, ell, half, 0, threads)
    primes = np.concatenate(list(prime_blocks(P, lo=half + 1, segment=_BLOCK)))
    steps = np.cumsum(_log_factors(family, ell, primes, 0))
    mean_log = base + math.fsum(steps.tolist()) / len(steps)
    v = float(prefactor(family, ell)) * math.exp(mean_log)
    spread = float(np.std(steps)) * v
    return ConstantResult(family, ell, P, "direct-averaged", v, spread)


CROSS_TOL = 1e-4


def eval_conditional(family: str, ell: int, P: int, threads: int = 1, check: bool = True,
                     second: str = "direct-averaged") -> ConstantResult:
    """A_l or B_l: L-decomposition of record, cross-checked by a direct method."""
    _check_ell(ell)
    if family not in CONDITIONAL:
        raise DomainError(f"{family} is not conditionally convergent here")
    if P < 10**4:
        raise DomainError("P must be at least 10^4")
    value, tail = _decomposed(family, ell, P, threads)
    other = (eval_averaged if second == "direct-averaged" else eval_extrapolated)(family, ell, P, threads)
    delta = abs(value - other.value)
    res = ConstantResult(family, ell, P, "L-decomposition", value, tail, delta)
    if check and delta > CROSS_TOL * abs(value):
        raise CrossCheckError(
            f"{family}_{ell}: L-decomposition {value!r} vs {other.method} {other.value!r}",
            value, other.value,
        )
    return res


def a_b_cutoff_constants(ell: int) -> tuple[float, float]:
    return ell ** (-1 + 1 / (ell - 1)), ell ** (-1 - 1 / (ell - 1))


def c_ratio(ell: int) -> Fraction:
    """Ratio of the principal-character sum to the unrestricted one: l / (2l - 1)."""
    return 1 / (1 + Fraction(ell - 1, ell))


@dataclass
class CResult:
    ell: int
    P: int
    form_const: float
    form_const2: float
    D: ConstantResult
    c: Fraction

    @property
    def value(self) -> float:
        return self.form_const2

    @property
    def rel_delta(self) -> float:
        return abs(self.form_const - self.form_const2) / abs(self.form_const2)


C_FORM_TOL = 1e-12


def eval_C(ell: int, P: int, threads: int = 1, D: ConstantResult | None = None) -> CResult:
    """C_l from D_l by the two displayed algebraic forms, which must agree."""
    _check_ell(ell)
    D = D or eval_absolute("D", ell, P, threads)
    a, b = a_b_cutoff_constants(ell)
    c = c_ratio(ell)
    form1 = ((a - b) / ell * float(c) + b) * D.value / (ell - 1) ** (ell - 1)
    prod = D.value * math.factorial(ell - 2)
    form2 = (
        ell ** (-1 / (ell - 1))
        / (math.factorial(ell) * (ell - 1) ** (ell - 2))
        * (1 + (ell ** (2 / (ell - 1)) - 1) / (2 * ell - 1))
        * prod
    )
    res = CResult(ell, P, form1, form2, D, c)
    if res.rel_delta > C_FORM_TOL:
        raise CrossCheckError(f"C_{ell} forms disagree", form1, form2)
    return res


@dataclass
class RatioReport:
    ell: int
    P: int
    A: float
    A_from_D: float
    B: float
    B_from_D: float

    @property
    def rel_A(self) -> float:
        return abs(self.A - self.A_from_D) / self.A

    @property
    def rel_B(self) -> float:
        return abs(self.B - self.B_from_D) / self.B

    @property
    def passed(self) -> bool:
        return self.rel_A <= CROSS_TOL and self.rel_B <= CROSS_TOL


def derived_ratio_check(ell: int, P: int, threads: int = 1, results: dict | None = None) -> RatioReport:
    """A_l and B_l against D_l / ((l-1) D5hat_l) and (l-1)^(1-l) D6hat_l / D_l.

    A and B come from the L(1, chi) factorisation; the hatted products on the
    other side are raw cutoff-averaged products that never touch an L-value, so
    agreement ties the two evaluation routes together.
    """
    r = results or {}
    A = r.get("A") or eval_conditional("A", ell, P, threads)
    B = r.get("B") or eval_conditional("B", ell, P, threads)
    D = r.get("D") or eval_absolute("D", ell, P, threads)
    D5 = eval_averaged("D5hat", ell, P, threads)
    D6 = eval_averaged("D6hat", ell, P, threads)
    rep = RatioReport(
        ell, P,
        A.value, D.value / ((ell - 1) * D5.value),
        B.value, (ell - 1) ** (1 - ell) * D6.value / D.value,
    )
    if not rep.passed:
        raise CrossCheckError(f"derived ratios fail for l={ell}", rep)
    return rep


def mertens_third_check(tau: int, X: int, P_inf: int | None = None) -> float:
    """prod_{p<=X}(1 + tau/p) over e^(tau gamma) (log X)^tau prod_p (1 + tau/p)(1 - 1/p)^tau."""
    if tau <= 0:
        raise DomainError("tau must be positive")
    P_inf = max(P_inf or X, 10**4)
    lhs = math.fsum(
        math.fsum(np.log1p(tau / b.astype(np.float64)).tolist()) for b in prime_blocks(X, segment=_BLOCK)
    )
    # the infinite product converges absolutely: log factor = O(tau^2 / p^2)
    log_inf = _log_sum("mertens", 3, P_inf, 0, tau=tau) + _mertens_tail(tau, P_inf)
    rhs = tau * EULER_GAMMA + tau * math.log(math.log(X)) + log_inf
    return math.exp(lhs - rhs)


def _mertens_tail(tau: int, P: int) -> float:
    coeffs = [Fraction(0)] * (_SERIES_ORDER + 1)
    for c, d, m in _terms("mertens", 3, 0, tau):
        for j in range(1, _SERIES_ORDER + 1):
            coeffs[j] += Fraction(m * (-1) ** (j + 1) * c**j, j)
    return math.fsum(float(coeffs[k]) * prime_power_tail(P, k) for k in range(2, _SERIES_ORDER + 1))


def all_constants(ell: int, P: int, threads: int = 1, check: bool = True) -> dict:
    D = eval_absolute("D", ell, P, threads)
    D5 = eval_absolute("D5hat", ell, P, threads)
    D6 = eval_absolute("D6hat", ell, P, threads)
    A = eval_conditional("A", ell, P, threads, check=check)
    B = eval_conditional("B", ell, P, threads, check=check)
    C = eval_C(ell, P, threads, D)
    out = {"D": D, "D5hat": D5, "D6hat": D6, "A": A, "B": B, "C": C}
    if check:
        out["ratios"] = derived_ratio_check(ell, P, threads, out)
    return out


def constants_record(ell: int, P: int, results: dict) -> dict:
    rec = {"ell": ell, "P": P, "c": str(results["C"].c)}
    for k in ("D", "D5hat", "D6hat", "A", "B"):
        rec[k] = results[k].to_json()
    C = results["C"]
    rec["C"] = {"family": "C", "ell": ell, "P": P, "method": "from-D", "value": C.value,
                "form_const": C.form_const, "form_const2": C.form_const2,
                "tail": C.D.tail * C.value / C.D.value, "cross_check_delta": abs(C.form_const - C.form_const2)}
    if "ratios" in results:
        rec["ratios"] = asdict(results["ratios"])
    return rec


def dumps(rec: dict) -> str:
    return json.dumps(rec, sort_keys=True)
