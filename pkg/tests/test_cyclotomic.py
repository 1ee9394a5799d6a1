import cmath

import pytest
from hypothesis import given, strategies as st

from purecensus.cyclotomic import CyclotomicInteger as Z

ells = st.sampled_from([3, 5, 7])


def elements(ell):
    return st.lists(st.integers(-50, 50), min_size=ell - 1, max_size=ell - 1).map(lambda c: Z(ell, c))


pairs = ells.flatmap(lambda l: st.tuples(elements(l), elements(l)))


@given(pairs)
def test_embedding_is_ring_homomorphism(pair):
    u, v = pair
    assert abs((u + v).to_complex() - (u.to_complex() + v.to_complex())) < 1e-9
    assert abs((u * v).to_complex() - u.to_complex() * v.to_complex()) < 1e-9 * max(1, abs(u.to_complex() * v.to_complex()))
    assert abs((u - v).to_complex() - (u.to_complex() - v.to_complex())) < 1e-9


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_zeta_powers(ell):
    z = Z.zeta_power(ell, 1)
    assert z**ell == Z.from_int(ell, 1)
    assert abs(z.to_complex() - cmath.exp(2j * cmath.pi / ell)) < 1e-12
    total = sum((Z.zeta_power(ell, k) for k in range(ell)), Z.from_int(ell, 0))
    assert total == Z.from_int(ell, 0)


def test_rationality_and_division():
    a = Z.from_int(5, 10)
    assert a.is_rational() and a.rational_value() == 10
    assert a.exact_div(5) == Z.from_int(5, 2)
    assert not Z.zeta_power(5, 2).is_rational()
    with pytest.raises(Exception):
        Z.from_int(5, 7).exact_div(5)


def test_hash_consistent():
    assert hash(Z(3, [1, 2])) == hash(Z(3, [1, 2]))
