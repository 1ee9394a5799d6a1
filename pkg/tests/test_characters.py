import math

import pytest
from hypothesis import given, settings, strategies as st

from purecensus import characters as ch
from purecensus.cyclotomic import CyclotomicInteger as Z
from purecensus.errors import DomainError


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_order_ell_characters(ell):
    chars = ch.order_ell_characters(ell)
    assert len(chars) == ell
    assert chars[0].is_principal
    for chi in chars:
        assert (chi ** ell).is_principal
        assert chi.index % (ell - 1) == 0


@pytest.mark.parametrize("ell", [3, 5])
def test_multiplicativity_exhaustive(ell):
    m = ell * ell
    for chi in ch.characters_mod_ell(ell) + ch.order_ell_characters(ell):
        mod = chi.modulus
        for u in range(mod):
            for v in range(mod):
                if math.gcd(u * v, mod) > 1:
                    assert chi(u * v) == 0
                else:
                    assert abs(chi(u * v) - chi(u) * chi(v)) < 1e-12


def test_quadratic_mod_3():
    chi = ch.characters_mod_ell(3)[1]
    assert [round(chi(a).real) for a in range(6)] == [0, 1, -1, 0, 1, -1]


def test_kernel_is_wieferich_units():
    ell = 5
    chi = ch.order_ell_characters(ell)[1]
    for u in range(1, 25):
        if u % 5:
            in_kernel = chi.cyclotomic(u) == Z.from_int(ell, 1)
            assert in_kernel == (pow(u, ell - 1, 25) == 1)


def test_conjugate():
    chi = ch.order_ell_characters(5)[2]
    for u in (2, 3, 7):
        assert abs(chi.conjugate()(u) - chi(u).conjugate()) < 1e-12


def test_local_factor_values_are_rational():
    chi = ch.order_ell_characters(3)[1]
    for p in (2, 7, 17, 19, 37):
        for w in ch.WEIGHTS:
            assert ch.local_factor_chi(p, chi, w).is_rational()


@settings(deadline=None, max_examples=25)
@given(st.integers(1, 3000), st.sampled_from(ch.WEIGHTS), st.sampled_from([3, 5]))
def test_fast_partial_sums_match_direct(Y, weight, ell):
    for chi in ch.order_ell_characters(ell):
        assert ch.F_chi_partial(chi, Y, weight) == ch.F_chi_partial_direct(chi, Y, weight)


def test_principal_partial_small():
    chi0 = ch.order_ell_characters(3)[0]
    assert ch.F_chi_partial(chi0, 10) == Z.from_int(3, 11)


def test_orthogonality():
    sums = ch.character_orthogonality(3)
    for u, s in sums.items():
        want = 3 if pow(u, 2, 9) == 1 else 0
        assert s == Z.from_int(3, want)


def test_table_check_small():
    r = ch.table_check_f_chi(5, 10**4, 10**5)
    assert r.passed and not r.mismatches
    assert set(r.to_json()) == {"check", "ell", "bound", "mismatches", "pass", "details"}


@pytest.mark.parametrize("weight", ch.WEIGHTS)
def test_big_identity(weight):
    assert ch.big_identity_check(3, 10**6, weight).passed
    assert ch.big_identity_check(5, 10**9, weight).passed


def test_mertens_partial_reasonable():
    v = ch.mertens_partial([1], 3, 10**6)
    full = ch.mertens_partial([1, 2], 3, 10**6)
    assert 0 < v < full
    assert ch.mertens_partial([0], 1, 10**6) == pytest.approx(2.8873, abs=1e-3)


def test_tame_classes():
    assert ch.tame_classes(3) == [1, 8]
    assert ch.expected_mertens_slope([1], 5) == pytest.approx(0.25)
