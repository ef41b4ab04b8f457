from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilcert.effective_search import (
    EnumerationQuery,
    Filters,
    NotPositiveDefinite,
    brute_force_oracle,
    certify_positive_definite,
    enumerate_effective,
    fincke_pohst_decomposition,
    interval_cholesky_positive,
    is_positive_definite,
    short_effective_vectors,
)
from weilcert.intervals import Interval
from weilcert.odlyzko import TestFunctionSpec


def _key(res):
    return sorted(str(u) for u in res.elements)


@pytest.mark.parametrize("ell", [Fraction(2), Fraction(3), Fraction(9, 2)])
@pytest.mark.parametrize("wmax", [3, 4, 6])
@pytest.mark.parametrize(
    "bound, filters",
    [
        (("ratio", 1), Filters()),
        (("ratio", 2), Filters(det_one=True)),
        (("abs", 3), Filters(eps_one=True)),
        (None, Filters(multiplicity_free=True)),
        (("ratio", 1), Filters(multiplicity_free=True, min_dim=3)),
    ],
)
def test_fincke_pohst_matches_brute_force(ell, wmax, bound, filters):
    q = EnumerationQuery(wmax, TestFunctionSpec("F", ell), bound, filters)
    assert _key(enumerate_effective(q)) == _key(brute_force_oracle(q))


def test_contains_filter():
    q = EnumerationQuery(5, TestFunctionSpec("F", Fraction(3)), ("ratio", Fraction(1, 4)), Filters(contains=(5,)))
    res = enumerate_effective(q)
    assert res.elements and all(u.coeff_I(5) >= 1 for u in res.elements)


def test_unbounded_needs_multiplicity_free():
    with pytest.raises(ValueError):
        enumerate_effective(EnumerationQuery(3, TestFunctionSpec("F", Fraction(2)), None))


def test_oracle_refuses_large_weights():
    with pytest.raises(ValueError):
        brute_force_oracle(EnumerationQuery(10, TestFunctionSpec("F", Fraction(2))))


def test_not_positive_definite():
    with pytest.raises(NotPositiveDefinite):
        fincke_pohst_decomposition([[Fraction(1), Fraction(2)], [Fraction(2), Fraction(1)]])
    assert not is_positive_definite([[Fraction(0)]])


small = st.integers(min_value=-3, max_value=3)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, min_size=4, max_size=4), st.integers(min_value=0, max_value=30))
def test_short_vectors_are_exact(entries, c):
    a, b, cc, d = entries
    # B^T B + I is positive definite
    q = [
        [Fraction(a * a + cc * cc + 1), Fraction(a * b + cc * d)],
        [Fraction(a * b + cc * d), Fraction(b * b + d * d + 1)],
    ]
    got = set(short_effective_vectors(q, Fraction(c)))
    want = {
        (x, y)
        for x in range(8)
        for y in range(8)
        if q[0][0] * x * x + 2 * q[0][1] * x * y + q[1][1] * y * y <= c
    }
    assert got == want


def test_interval_cholesky():
    one = Interval(1)
    half = Interval(Fraction(1, 2))
    assert interval_cholesky_positive([[one, half], [half, one]])
    assert not interval_cholesky_positive([[one, Interval(2)], [Interval(2), one]])
    wide = Interval(Fraction(-1, 10), Fraction(1, 10))
    assert not interval_cholesky_positive([[wide]])


@pytest.mark.parametrize("ell", [Fraction(2), Fraction(4)])
def test_gram_positive_definite(ell):
    assert certify_positive_definite(8, TestFunctionSpec("F", ell))
