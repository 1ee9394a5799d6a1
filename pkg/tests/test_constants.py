import math
from fractions import Fraction

import pytest

from purecensus import constants as K
from purecensus.characters import characters_mod_ell
from purecensus.errors import CrossCheckError, DomainError


def test_L_quadratic_mod_3():
    chi = characters_mod_ell(3)[1]
    want = math.pi / (3 * math.sqrt(3))
    for m in ("finite-closed-form", "tail-accelerated-series"):
        assert abs(K.L_one(chi, m) - want) < 1e-12


@pytest.mark.parametrize("ell", [5, 7, 11])
def test_L_methods_agree_and_conjugate(ell):
    for chi in characters_mod_ell(ell)[1:]:
        a = K.L_one(chi, "finite-closed-form")
        b = K.L_one(chi, "tail-accelerated-series")
        assert abs(a - b) < 1e-10
        assert abs(K.L_one(chi.conjugate()) - a.conjugate()) < 1e-12
    v1, v2 = K.L_product(ell)
    assert v1 > 0 and abs(v1 - v2) < 1e-10


def test_L_rejects_principal():
    with pytest.raises(DomainError):
        K.L_one(characters_mod_ell(5)[0])


def test_local_factor_exact():
    for fam in K.FAMILIES:
        assert isinstance(K.local_factor(fam, 3, 5), Fraction)


def test_absolute_two_truncations():
    a = K.eval_absolute("D", 3, 10**5)
    b = K.eval_absolute("D", 3, 10**6)
    assert abs(a.value - b.value) / b.value < 3e-6
    assert b.tail > 0


@pytest.mark.parametrize("ell", [3, 5, 7])
def test_C_forms(ell):
    c = K.eval_C(ell, 10**5)
    assert c.rel_delta < 1e-12
    assert c.c == Fraction(ell, 2 * ell - 1)


def test_conditional_requires_large_P():
    with pytest.raises(DomainError):
        K.eval_conditional("A", 3, 1000)


def test_conditional_cross_check():
    r = K.eval_conditional("A", 3, 10**6)
    assert r.cross_check_delta <= 1e-4 * r.value
    assert set(r.to_json()) == {"family", "ell", "P", "method", "value", "tail", "cross_check_delta"}


def test_threads_do_not_change_values():
    a = K.eval_absolute("D6hat", 5, 10**6, threads=1).value
    b = K.eval_absolute("D6hat", 5, 10**6, threads=4).value
    assert a == b


def test_mertens_third():
    assert abs(K.mertens_third_check(1, 10**6) - 1) < 0.03


def test_record_roundtrip():
    res = K.all_constants(3, 10**6, check=False)
    rec = K.constants_record(3, 10**6, res)
    assert {"D", "D5hat", "D6hat", "A", "B", "C"} <= set(rec)
    assert K.dumps(rec) == K.dumps(rec)
