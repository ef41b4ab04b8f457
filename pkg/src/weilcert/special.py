"""Certified digamma, trigamma and the rapidly converging kernel series.

Digamma and trigamma use the recurrence psi(z) = psi(z + n) - sum 1/(z + k)
to reach a point w with Re w >= max(T, |Im w|), where Stirling's series is
applied with the remainder bounds coming from Binet's second formula.  For
|arg w| <= pi/4 one has |t^2 + w^2| >= |w|^2 for real t, which gives

    |R_psi(K)|  <= |B_{2K+2}| / ((2K+2) |w|^{2K+2})
    |R_psi'(K)| <= |B_{2K+2}| / |w|^{2K+3} + K |B_{2K+4}| / ((K+2) |w|^{2K+5})

after truncating psi(w) = log w - 1/(2w) - sum_{k<=K} B_{2k} / (2k w^{2k})
and psi'(w) = 1/w + 1/(2w^2) + sum_{k<=K} B_{2k} / w^{2k+1}.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import bernfrac

from .intervals import BoxC, Interval, Tri, interval


class DomainError(ValueError):
    """Argument box may contain a pole of the function."""


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    p, q = bernfrac(n)
    return Fraction(int(p), int(q))


def _radius_box(rad: Interval) -> BoxC:
    r = Interval.hull(-rad, rad)
    return BoxC(r, r)


def _shift_count(z: BoxC, threshold: float) -> int:
    re_lo = float(z.re.lo_fraction())
    im_hi = float(abs(z.im).hi_fraction())
    target = max(threshold, im_hi + 1.0)
    return max(0, math.ceil(target - re_lo))


def _threshold(prec: int) -> float:
    # the optimally truncated Stirling error is about exp(-2 pi |w|)
    return max(16.0, prec * math.log(2) / (2 * math.pi) + 6.0)


def _prepare(z: BoxC):
    prec = z.prec
    n = _shift_count(z, _threshold(prec))
    w = z + n
    # |arg w| <= pi/4 needs Re w >= |Im w| on the whole box
    if (w.re - abs(w.im)).is_negative() is not Tri.REFUTED:
        raise DomainError("could not shift the argument into the Stirling sector")
    return prec, n, w


def _shift_terms(z: BoxC, n: int, power: int):
    """sum_{k<n} (z+k)^{-power}, raising DomainError if some z+k may vanish."""
    total = BoxC(Interval(0, prec=z.prec), Interval(0, prec=z.prec))
    for k in range(n):
        zk = z + k
        if zk.re.contains_zero() and zk.im.contains_zero():
            raise DomainError("argument box may contain a nonpositive integer")
        inv = zk.inv()
        total = total + (inv if power == 1 else inv.square())
    return total


def digamma(z) -> BoxC:
    """Enclosure of psi(z) for a complex box z avoiding the poles."""
    z = _as_box(z)
    prec, n, w = _prepare(z)
    shift = _shift_terms(z, n, 1)
    absw = w.abs_lower()
    winv = w.inv()
    winv2 = winv.square()
    acc = w.log() - winv * Fraction(1, 2)
    power = winv2
    target = Fraction(1, 2 ** (prec + 8))
    k = 1
    while True:
        b2k = bernoulli(2 * k)
        acc = acc - power * (b2k / (2 * k))
        # remainder after K = k terms
        b_next = abs(bernoulli(2 * k + 2))
        rad = Interval(b_next / (2 * k + 2), prec=prec) / absw ** (2 * k + 2)
        if rad.hi_fraction() < target or k >= 4 * prec:
            break
        power = power * winv2
        k += 1
    return acc + _radius_box(rad) - shift


def trigamma(z) -> BoxC:
    """Enclosure of psi'(z) for a complex box z avoiding the poles."""
    z = _as_box(z)
    prec, n, w = _prepare(z)
    shift = _shift_terms(z, n, 2)
    absw = w.abs_lower()
    winv = w.inv()
    winv2 = winv.square()
    acc = winv + winv2 * Fraction(1, 2)
    power = winv2 * winv
    target = Fraction(1, 2 ** (prec + 8))
    k = 1
    while True:
        acc = acc + power * bernoulli(2 * k)
        b1 = abs(bernoulli(2 * k + 2))
        b2 = abs(bernoulli(2 * k + 4))
        rad = Interval(b1, prec=prec) / absw ** (2 * k + 3) + Interval(k * b2 / (k + 2), prec=prec) / absw ** (
            2 * k + 5
        )
        if rad.hi_fraction() < target or k >= 4 * prec:
            break
        power = power * winv2
        k += 1
    return acc + _radius_box(rad) + shift


def _as_box(z) -> BoxC:
    if isinstance(z, BoxC):
        return z
    if isinstance(z, complex):
        return BoxC(Interval(z.real), Interval(z.imag))
    return BoxC(interval(z), Interval(0))


def phi(z) -> BoxC:
    """phi(z) = (psi((z+1)/2) - psi(z/2)) / 2 = sum_{n>=0} (-1)^n / (n + z)."""
    z = _as_box(z)
    half = Fraction(1, 2)
    return (digamma((z + 1) * half) - digamma(z * half)) * half


def phi_prime(z) -> BoxC:
    z = _as_box(z)
    half = Fraction(1, 2)
    return (trigamma((z + 1) * half) - trigamma(z * half)) * Fraction(1, 4)


# kernel series -------------------------------------------------------------------


def r_kernel(x: Interval) -> Interval:
    """r(x) = 2 pi^2 e^{-x} / (x^2 + pi^2)^2."""
    pi2 = Interval.pi(x.prec).square()
    return 2 * pi2 * (-x).exp() / (x.square() + pi2).square()


def _terms_needed(ell: Interval, offset: float, prec: int) -> int:
    ell_lo = float(ell.lo_fraction())
    if ell_lo <= 0:
        raise ValueError("ell must be positive")
    n = math.ceil((prec * math.log(2) + 8) / ell_lo - offset) + 1
    return max(n, 1)


def kernel_series_s1(b, ell) -> Interval:
    """s1(b, l) = l * sum_{n>=0} r(l (b + n)), with a geometric tail bound."""
    b = interval(b)
    ell = interval(ell, b.prec) if not isinstance(ell, Interval) else ell
    prec = max(b.prec, ell.prec)
    if b.is_positive() is not Tri.PROVEN:
        raise ValueError("b must be positive")
    n_terms = _terms_needed(ell, float(b.lo_fraction()), prec)
    total = Interval(0, prec=prec)
    for n in range(n_terms):
        total = total + r_kernel(ell * (b + n))
    # r(l(b+n)) <= r(l(b+N)) e^{-l(n-N)} for n >= N
    first = r_kernel(ell * (b + n_terms))
    tail = first / (1 - (-ell).exp())
    return ell * (total + Interval.hull(Interval(0, prec=prec), tail))


def kernel_series_s2(ell) -> Interval:
    """s2(l) = l * sum_{n>=0} (-1)^n r(l (n + 1/2)); alternating tail bound."""
    ell = interval(ell)
    prec = ell.prec
    n_terms = _terms_needed(ell, 0.5, prec)
    total = Interval(0, prec=prec)
    half = Fraction(1, 2)
    for n in range(n_terms):
        term = r_kernel(ell * (n + half))
        total = total + term if n % 2 == 0 else total - term
    first = r_kernel(ell * (n_terms + half))
    tail = Interval.hull(-first, first)
    return ell * (total + tail)


def kernel_series_s3(ell) -> Interval:
    """s3(l) = sum_{n>=1} (-1)^{n+1} (n l) r(n l).

    x r(x) is decreasing for x >= 1, so once n l >= 1 the alternating tail is
    bounded by its first term.
    """
    ell = interval(ell)
    prec = ell.prec
    ell_lo = float(ell.lo_fraction())
    n_terms = max(_terms_needed(ell, 0.0, prec), math.ceil(1.0 / ell_lo) + 1)
    total = Interval(0, prec=prec)
    for n in range(1, n_terms + 1):
        x = ell * n
        term = x * r_kernel(x)
        total = total + term if n % 2 == 1 else total - term
    x = ell * (n_terms + 1)
    first = x * r_kernel(x)
    return total + Interval.hull(-first, first)
