from fractions import Fraction

import mpmath
import pytest

from weilcert.intervals import BoxC, Interval
from weilcert.special import bernoulli, digamma, kernel_series_s1, kernel_series_s2, phi, trigamma

POINTS = [(Fraction(1, 2), 0), (1, 0), (Fraction(3, 4), Fraction(5, 2)), (7, -3), (Fraction(1, 10), 40), (25, Fraction(1, 3))]


def _box(re, im, prec=128):
    return BoxC(Interval(Fraction(re), prec=prec), Interval(Fraction(im), prec=prec))


def _inside(box, value):
    mpmath.mp.dps = 50
    re = mpmath.mpf(box.re.lo_fraction().numerator) / box.re.lo_fraction().denominator
    re_hi = mpmath.mpf(box.re.hi_fraction().numerator) / box.re.hi_fraction().denominator
    im = mpmath.mpf(box.im.lo_fraction().numerator) / box.im.lo_fraction().denominator
    im_hi = mpmath.mpf(box.im.hi_fraction().numerator) / box.im.hi_fraction().denominator
    return re <= value.real <= re_hi and im <= value.imag <= im_hi


@pytest.mark.parametrize("re, im", POINTS)
def test_digamma_matches_mpmath(re, im):
    mpmath.mp.dps = 50
    z = mpmath.mpc(mpmath.mpf(Fraction(re).numerator) / Fraction(re).denominator, mpmath.mpf(Fraction(im).numerator) / Fraction(im).denominator)
    box = digamma(_box(re, im))
    assert _inside(box, mpmath.digamma(z))
    assert box.re.width_float() < 1e-30


@pytest.mark.parametrize("re, im", POINTS)
def test_trigamma_matches_mpmath(re, im):
    mpmath.mp.dps = 50
    z = mpmath.mpc(mpmath.mpf(Fraction(re).numerator) / Fraction(re).denominator, mpmath.mpf(Fraction(im).numerator) / Fraction(im).denominator)
    assert _inside(trigamma(_box(re, im)), mpmath.psi(1, z))


def test_phi_is_a_digamma_difference():
    # phi(z) = (psi((z+1)/2) - psi(z/2)) / 2 in the convention used by the kernel
    z = _box(Fraction(3, 2), 2)
    lhs = phi(z)
    mpmath.mp.dps = 50
    w = mpmath.mpc(1.5, 2)
    ref = (mpmath.digamma((w + 1) / 2) - mpmath.digamma(w / 2)) / 2
    assert _inside(lhs, ref)


@pytest.mark.parametrize("n, value", [(0, 1), (1, Fraction(-1, 2)), (2, Fraction(1, 6)), (12, Fraction(-691, 2730)), (13, 0)])
def test_bernoulli(n, value):
    assert bernoulli(n) == value


@pytest.mark.parametrize("ell", [Fraction(1), Fraction(4), Fraction(487, 50)])
def test_kernel_series_are_tight(ell):
    s1 = kernel_series_s1(Interval(Fraction(1, 2)), Interval(ell))
    s2 = kernel_series_s2(Interval(ell))
    assert s1.width_float() < 1e-25 and s2.width_float() < 1e-25
