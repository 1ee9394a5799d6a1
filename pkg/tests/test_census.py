import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from purecensus import census, kummer
from purecensus.errors import CapacityError


@pytest.mark.parametrize("ell,X", [(3, 10**4), (3, 10**6), (5, 10**7), (7, 10**8)])
def test_radical_matches_brute(ell, X):
    assert census.enumerate_radical(ell, X) == census.enumerate_brute(ell, X)


def test_first_cubic_fields():
    fs = census.enumerate_radical(3, 300)
    assert [(f.canonical_a, f.disc_magnitude) for f in fs] == [(2, 108), (3, 243), (10, 300)]


def test_boundary_is_inclusive():
    assert len(census.enumerate_radical(3, 300)) == 3
    assert len(census.enumerate_radical(3, 299)) == 2


def test_empty_and_brute_cap():
    assert census.enumerate_radical(3, 0) == []
    with pytest.raises(CapacityError):
        census.enumerate_brute(3, 10**30)


def test_cutoffs_exact():
    tame, wild = census.radical_cutoffs(3, 300)
    assert (tame, wild) == (10, 3)


@settings(deadline=None, max_examples=30)
@given(st.integers(1, 2 * 10**5))
def test_identity_exact(X):
    assert census.parametrization_identity_check(3, X).passed


@pytest.mark.parametrize("threads", [1, 3])
def test_thread_independence(threads):
    assert census.enumerate_radical(5, 10**9, threads=threads) == census.enumerate_radical(5, 10**9)


def test_summary_matches_fields():
    X = 10**7
    cps = [10**4, 10**5, 10**6]
    fields = census.enumerate_radical(3, X)
    a = census.count_summary(3, X, cps)
    b = census.summary_from_fields(3, X, fields, cps)
    assert a.to_json() == b.to_json()
    assert a.genus_sum >= a.n_fields >= a.n_genus_one


def test_summary_json_keys():
    d = json.loads(census.summary_json(census.count_summary(3, 10**5, [10**3])))
    assert set(d) >= {"ell", "X", "checkpoints"}
    assert set(d["checkpoints"][0]) == {"X", "n_fields", "n_genus_one", "genus_sum"}


def test_csv_roundtrip():
    fields = census.enumerate_radical(3, 10**5)
    text = census.fields_to_csv(fields)
    assert text.splitlines()[0] == ",".join(census.CSV_HEADER)
    assert census.fields_from_csv(io.StringIO(text)) == fields


def test_comparison_ratios_positive():
    s = census.count_summary(3, 10**8, [10**4, 10**6, 10**8])
    rows = census.asymptotic_comparison(s, 0.0193, 0.1297, 0.00217)
    for r in rows:
        assert r["ratio_count"] > 0 and r["ratio_genus_one"] > 0 and r["ratio_genus_avg"] > 0


def test_every_field_has_canonical_rep():
    for f in census.enumerate_radical(5, 10**9):
        assert kummer.canonical_rep(f.canonical_a, 5) == f.canonical_a
        assert kummer.make_field(f.canonical_a, 5) == f
