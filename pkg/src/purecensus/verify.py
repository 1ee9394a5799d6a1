"""Named verification checks grouped into suites for the `verify` subcommand."""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import census, characters, constants


@dataclass
class Outcome:
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0


def _identity(ell, Xs):
    def run():
        bad = [(X, c.lhs, c.rhs) for X in Xs for c in [census.parametrization_identity_check(ell, X)] if not c]
        return not bad, f"{len(Xs)} bounds, failures={bad}"
    return run


def _big(ell, X):
    def run():
        reps = [characters.big_identity_check(ell, X, w) for w in characters.WEIGHTS]
        return all(r.passed for r in reps), "; ".join(
            f"{r.check}: {r.details.get('lhs')}={r.details.get('rhs')}" for r in reps)
    return run


def _table(ell, bound, dbound):
    def run():
        r = characters.table_check_f_chi(ell, bound, dbound)
        worst = max(c["rel_error"] for c in r.details["classes"].values())
        return r.passed and worst <= 0.10, f"mismatches={len(r.mismatches)} worst class error={worst:.3g}"
    return run


def _ratios(ell, P):
    def run():
        try:
            r = constants.derived_ratio_check(ell, P)
        except constants.CrossCheckError as exc:
            return False, str(exc)
        return r.passed, f"rel A {r.rel_A:.2e}, rel B {r.rel_B:.2e}"
    return run


def _mertens3(tau, X, tol):
    def run():
        v = constants.mertens_third_check(tau, X)
        return abs(v - 1) <= tol, f"ratio={v:.6f}"
    return run


def _oracle(ell, X):
    def run():
        a = census.enumerate_brute(ell, X)
        b = census.enumerate_radical(ell, X)
        return a == b, f"{len(a)} fields"
    return run


def _slope(m, S, Xs):
    def run():
        got = characters.mertens_slope(S, m, Xs)
        want = characters.expected_mertens_slope(S, m)
        return abs(got / want - 1) <= 0.05, f"slope={got:.4f} expected={want:.4f}"
    return run


def _log_bounds(lo, hi, n):
    return sorted({int(round(10 ** (lo + (hi - lo) * i / (n - 1)))) for i in range(n)})


def suite(name: str) -> list[tuple[str, callable]]:
    fast = [
        ("identity l=3", _identity(3, _log_bounds(1, 5, 8))),
        ("big identity l=3", _big(3, 10**6)),
        ("f_chi table l=3", _table(3, 10**4, 10**5)),
        ("derived ratios l=3", _ratios(3, 10**7)),
        ("mertens third tau=1", _mertens3(1, 10**6, 0.03)),
    ]
    full = [
        *(("identity l=%d" % l, _identity(l, _log_bounds(l - 2, b, 20))) for l, b in ((3, 7), (5, 8), (7, 9))),
        *(("big identity l=%d" % l, _big(l, X)) for l, X in ((3, 10**9), (5, 10**11))),
        *(("f_chi table l=%d" % l, _table(l, 10**5, 10**6)) for l in (3, 5, 7)),
        *(("derived ratios l=%d" % l, _ratios(l, 10**7)) for l in (3, 5, 7)),
        *(("mertens third tau=%d" % t, _mertens3(t, 10**8, 0.03)) for t in (1, 2, 4)),
    ]
    extra = [
        *(("oracle l=%d" % l, _oracle(l, X)) for l, X in ((3, 10**7), (5, 10**8), (7, 10**9))),
        ("mertens slope 3,{1}", _slope(3, [1], _log_bounds(4, 8, 9))),
        ("mertens slope 5,{1}", _slope(5, [1], _log_bounds(4, 8, 9))),
        ("mertens slope 9,tame", _slope(9, characters.tame_classes(3), _log_bounds(4, 8, 9))),
    ]
    suites = {"fast": fast, "full": full, "all": full + extra}
    if name not in suites:
        raise KeyError(name)
    return suites[name]


def run_suite(name: str, echo=print) -> list[Outcome]:
    out = []
    for label, fn in suite(name):
        t = time.time()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        o = Outcome(label, bool(ok), detail, time.time() - t)
        echo(f"{'PASS' if o.passed else 'FAIL'}  {o.name:<28} {o.seconds:7.1f}s  {o.detail}")
        out.append(o)
    return out
