from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilcert.intervals import BoxC, Interval, Tri

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=10**6)
positive = st.fractions(min_value=Fraction(1, 1000), max_value=1000, max_denominator=10**6)


def hp(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


@given(rationals, rationals)
def test_field_operations_enclose_exact_result(a, b):
    A, B = Interval(a, prec=53), Interval(b, prec=53)
    assert (A + B).contains(a + b)
    assert (A - B).contains(a - b)
    assert (A * B).contains(a * b)
    if b:
        assert (A / B).contains(a / b)


@given(rationals, rationals)
def test_hull_and_intersection(a, b):
    lo, hi = min(a, b), max(a, b)
    x = Interval(lo, hi)
    assert x.contains(a) and x.contains(b)
    assert x.intersect(Interval(lo)).contains(lo)


@settings(max_examples=60)
@given(st.fractions(min_value=-20, max_value=20, max_denominator=1000))
def test_transcendental_enclosures(x):
    mpmath.mp.dps = 60
    X = Interval(x, prec=80)
    for f, ref in ((Interval.exp, mpmath.exp), (Interval.cos, mpmath.cos), (Interval.sin, mpmath.sin), (Interval.atan, mpmath.atan)):
        v = f(X)
        assert hp(v.lo_fraction()) <= ref(hp(x)) <= hp(v.hi_fraction())


@given(positive)
def test_log_and_sqrt(x):
    mpmath.mp.dps = 60
    X = Interval(x, prec=80)
    for f, ref in ((Interval.log, mpmath.log), (Interval.sqrt, mpmath.sqrt)):
        v = f(X)
        assert hp(v.lo_fraction()) <= ref(hp(x)) <= hp(v.hi_fraction())


def test_pi_is_tight():
    mpmath.mp.dps = 80
    p = Interval.pi(200)
    assert hp(p.lo_fraction()) <= mpmath.pi <= hp(p.hi_fraction())
    assert p.width_float() < 1e-55


@pytest.mark.parametrize(
    "lo, hi, expected",
    [(1, 2, Tri.PROVEN), (-2, -1, Tri.REFUTED), (-1, 1, Tri.INCONCLUSIVE), (0, 1, Tri.INCONCLUSIVE)],
)
def test_sign_decisions(lo, hi, expected):
    assert Interval(lo, hi).is_positive() is expected


def test_tri_truthiness():
    assert Tri.PROVEN and not Tri.INCONCLUSIVE and not Tri.REFUTED


def test_reversed_endpoints_rejected():
    with pytest.raises(ValueError):
        Interval(2, 1)


@given(rationals, rationals, rationals, rationals)
def test_complex_box_product(a, b, c, d):
    z = BoxC(Interval(a), Interval(b)) * BoxC(Interval(c), Interval(d))
    assert z.re.contains(a * c - b * d)
    assert z.im.contains(a * d + b * c)
