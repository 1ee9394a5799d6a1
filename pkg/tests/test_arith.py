import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from purecensus import arith
from purecensus.errors import CapacityError, DomainError


def test_sieve_matches_sympy():
    got = arith.sieve_primes(10**5).primes.tolist()
    assert got == list(sympy.primerange(2, 10**5 + 1))


def test_prime_blocks_offset_window():
    got = np.concatenate(list(arith.prime_blocks(2000, lo=1000, segment=128))).tolist()
    assert got == list(sympy.primerange(1000, 2001))


def test_sieve_limits():
    with pytest.raises(CapacityError):
        arith.sieve_primes(1)
    with pytest.raises(CapacityError):
        arith.sieve_primes(arith.MAX_SIEVE + 1)


def test_spf():
    spf = arith.spf_sieve(1000)
    for m in range(2, 1001):
        assert spf[m] == min(sympy.factorint(m))


@settings(deadline=None)
@given(st.integers(1, 10**6))
def test_factor_with_spf_roundtrip(m):
    spf = arith.spf_sieve(10**6)
    f = arith.factor_with_spf(m, spf)
    assert f.value() == m
    assert dict(f.pairs) == sympy.factorint(m)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, arith.MAX_FACTOR))
def test_factorize_matches_sympy(m):
    assert dict(arith.factorize(m).pairs) == sympy.factorint(m)


def test_factorize_errors():
    with pytest.raises(DomainError):
        arith.factorize(0)
    with pytest.raises(CapacityError):
        arith.factorize(arith.MAX_FACTOR + 1)


def test_radical_and_omega_hat():
    f = arith.factorize(2**3 * 7**2 * 13)
    assert arith.radical(f) == 182
    assert arith.omega_hat(f, 3) == 2
    assert not arith.is_ell_free(f, 3)
    assert arith.is_ell_free(f, 5)


@given(st.integers(0, 10**40), st.integers(1, 9))
def test_iroot_is_floor(x, k):
    r = arith.iroot(x, k)
    assert r**k <= x < (r + 1) ** k


def test_multiplicative_order():
    assert arith.multiplicative_order(2, 9) == 6
    assert arith.multiplicative_order(10, 9) == 1


@pytest.mark.parametrize("ell,g", [(3, 2), (5, 2), (7, 3)])
def test_dlog_least_primitive_root(ell, g):
    t = arith.build_dlog_table(ell)
    assert t.generator == g
    m = ell * ell
    for u in t.units():
        assert pow(g, t.dlog(u), m) == u
    assert len(t.units()) == t.order == ell * (ell - 1)
    with pytest.raises(DomainError):
        t.dlog(ell)
