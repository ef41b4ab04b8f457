"""Outward-rounded real intervals and complex boxes.

Endpoints are raw mpmath binary floats (exact dyadics).  Field operations
are rounded outward at the working precision; transcendental functions are
evaluated with a few guard bits and then padded by a relative margin, so the
enclosure does not depend on mpmath returning correctly rounded results.
"""

from __future__ import annotations

import enum
import os
from fractions import Fraction
from numbers import Rational

from mpmath.libmp import (
    fzero,
    finf,
    fninf,
    from_int,
    from_rational,
    from_float,
    from_str,
    to_float,
    to_rational,
    mpf_abs,
    mpf_add,
    mpf_sub,
    mpf_mul,
    mpf_div,
    mpf_neg,
    mpf_shift,
    mpf_lt,
    mpf_le,
    mpf_exp,
    mpf_log,
    mpf_atan,
    mpf_sqrt,
    mpf_pi,
    mpf_pos,
    round_floor,
    round_ceiling,
    round_nearest,
)
from mpmath.libmp.libmpi import mpi_cos_sin, mpi_cosh_sinh

DEFAULT_PREC = int(os.environ.get("WEILCERT_PREC", "128"))

_GUARD = 24


class Tri(enum.Enum):
    """Three-valued outcome of an interval comparison."""

    PROVEN = "Proven"
    REFUTED = "Refuted"
    INCONCLUSIVE = "Inconclusive"

    def __bool__(self):
        return self is Tri.PROVEN


def _pad_down(x, prec):
    if x == fzero or x in (finf, fninf):
        return x
    eps = mpf_shift(mpf_abs(x), -(prec - 4))
    return mpf_sub(x, eps, prec, round_floor)


def _pad_up(x, prec):
    if x == fzero or x in (finf, fninf):
        return x
    eps = mpf_shift(mpf_abs(x), -(prec - 4))
    return mpf_add(x, eps, prec, round_ceiling)


def _to_mpf(value, prec, rnd):
    if isinstance(value, tuple):
        return mpf_pos(value, prec, rnd)
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, int):
        return from_int(value, prec, rnd)
    if isinstance(value, Rational):
        return from_rational(int(value.numerator), int(value.denominator), prec, rnd)
    if isinstance(value, float):
        return mpf_pos(from_float(value), prec, rnd)
    if isinstance(value, str):
        return from_str(value, prec, rnd)
    raise TypeError(f"cannot convert {type(value).__name__} to an interval endpoint")


class Interval:
    """Closed real interval [lo, hi] with dyadic endpoints."""

    __slots__ = ("lo", "hi", "prec")

    def __init__(self, lo, hi=None, prec=None):
        prec = DEFAULT_PREC if prec is None else prec
        if hi is None:
            hi = lo
        lo_m = _to_mpf(lo, prec, round_floor)
        hi_m = _to_mpf(hi, prec, round_ceiling)
        if mpf_lt(hi_m, lo_m):
            raise ValueError("interval with lo > hi")
        self.lo = lo_m
        self.hi = hi_m
        self.prec = prec

    @classmethod
    def _raw(cls, lo, hi, prec):
        obj = object.__new__(cls)
        obj.lo = lo
        obj.hi = hi
        obj.prec = prec
        return obj

    # construction helpers -------------------------------------------------

    @classmethod
    def pi(cls, prec=None):
        prec = DEFAULT_PREC if prec is None else prec
        return cls._raw(mpf_pi(prec, round_floor), mpf_pi(prec, round_ceiling), prec)

    @classmethod
    def hull(cls, *items):
        items = [_coerce(x, None) for x in items]
        prec = max(x.prec for x in items)
        lo = items[0].lo
        hi = items[0].hi
        for x in items[1:]:
            if mpf_lt(x.lo, lo):
                lo = x.lo
            if mpf_lt(hi, x.hi):
                hi = x.hi
        return cls._raw(lo, hi, prec)

    def with_prec(self, prec):
        return Interval._raw(mpf_pos(self.lo, prec, round_floor), mpf_pos(self.hi, prec, round_ceiling), prec)

    # inspection -----------------------------------------------------------

    def mid(self):
        """Midpoint as an mpmath raw float (rounded to nearest)."""
        return mpf_shift(mpf_add(self.lo, self.hi, self.prec + 2, round_nearest), -1)

    def mid_float(self):
        return to_float(self.mid())

    def width(self):
        return mpf_sub(self.hi, self.lo, self.prec, round_ceiling)

    def width_float(self):
        return to_float(self.width(), rnd=round_ceiling)

    def lo_fraction(self):
        return _mpf_fraction(self.lo)

    def hi_fraction(self):
        return _mpf_fraction(self.hi)

    def is_finite(self):
        return self.lo not in (finf, fninf) and self.hi not in (finf, fninf)

    def contains(self, x):
        if isinstance(x, Interval):
            return mpf_le(self.lo, x.lo) and mpf_le(x.hi, self.hi)
        lo = _to_mpf(x, self.prec + 64, round_floor)
        hi = _to_mpf(x, self.prec + 64, round_ceiling)
        return mpf_le(self.lo, lo) and mpf_le(hi, self.hi)

    def overlaps(self, other):
        other = _coerce(other, self.prec)
        return mpf_le(self.lo, other.hi) and mpf_le(other.lo, self.hi)

    def intersect(self, other):
        other = _coerce(other, self.prec)
        lo = self.lo if mpf_lt(other.lo, self.lo) else other.lo
        hi = self.hi if mpf_lt(self.hi, other.hi) else other.hi
        if mpf_lt(hi, lo):
            raise ValueError("empty intersection")
        return Interval._raw(lo, hi, max(self.prec, other.prec))

    def contains_zero(self):
        return mpf_le(self.lo, fzero) and mpf_le(fzero, self.hi)

    # three-valued comparisons ------------------------------------------------

    def is_negative(self):
        if mpf_lt(self.hi, fzero):
            return Tri.PROVEN
        if mpf_le(fzero, self.lo):
            return Tri.REFUTED
        return Tri.INCONCLUSIVE

    def is_positive(self):
        return (-self).is_negative()

    def lt(self, other):
        return (self - other).is_negative()

    def gt(self, other):
        return (self - other).is_positive()

    # arithmetic -------------------------------------------------------------

    def __neg__(self):
        return Interval._raw(mpf_neg(self.hi), mpf_neg(self.lo), self.prec)

    def __pos__(self):
        return self

    def __add__(self, other):
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return other
        p = max(self.prec, other.prec)
        return Interval._raw(
            mpf_add(self.lo, other.lo, p, round_floor), mpf_add(self.hi, other.hi, p, round_ceiling), p
        )

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return other
        p = max(self.prec, other.prec)
        return Interval._raw(
            mpf_sub(self.lo, other.hi, p, round_floor), mpf_sub(self.hi, other.lo, p, round_ceiling), p
        )

    def __rsub__(self, other):
        return _coerce(other, self.prec) - self

    def __mul__(self, other):
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return other
        p = max(self.prec, other.prec)
        lo, hi = mul_bounds(self.lo, self.hi, other.lo, other.hi, p)
        return Interval._raw(lo, hi, p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other, self.prec)
        if other is NotImplemented:
            return other
        if other.contains_zero():
            raise ZeroDivisionError("interval division by an interval containing 0")
        p = max(self.prec, other.prec)
        a, b, c, d = self.lo, self.hi, other.lo, other.hi
        lows = [mpf_div(x, y, p, round_floor) for x in (a, b) for y in (c, d)]
        highs = [mpf_div(x, y, p, round_ceiling) for x in (a, b) for y in (c, d)]
        return Interval._raw(_min(lows), _max(highs), p)

    def __rtruediv__(self, other):
        return _coerce(other, self.prec) / self

    def square(self):
        p = self.prec
        a, b = self.lo, self.hi
        if mpf_le(fzero, a):
            return Interval._raw(mpf_mul(a, a, p, round_floor), mpf_mul(b, b, p, round_ceiling), p)
        if mpf_le(b, fzero):
            return Interval._raw(mpf_mul(b, b, p, round_floor), mpf_mul(a, a, p, round_ceiling), p)
        m = a if mpf_lt(b, mpf_neg(a)) else b
        return Interval._raw(fzero, mpf_mul(m, m, p, round_ceiling), p)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        if n == 0:
            return Interval(1, prec=self.prec)
        if n % 2 == 0:
            return self.square() ** (n // 2) if n > 2 else self.square()
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def __abs__(self):
        if mpf_le(fzero, self.lo):
            return self
        if mpf_le(self.hi, fzero):
            return -self
        hi = self.hi if mpf_lt(mpf_neg(self.lo), self.hi) else mpf_neg(self.lo)
        return Interval._raw(fzero, hi, self.prec)

    def mag(self):
        """Upper bound of |x| as an interval [0, m] endpoint (returns the raw upper bound)."""
        return abs(self).hi

    # elementary functions ------------------------------------------------------

    def sqrt(self):
        if mpf_lt(self.lo, fzero):
            raise ValueError("sqrt of an interval with negative part")
        p = self.prec
        return Interval._raw(mpf_sqrt(self.lo, p, round_floor), mpf_sqrt(self.hi, p, round_ceiling), p)

    def exp(self):
        p = self.prec
        q = p + _GUARD
        lo = _pad_down(mpf_exp(self.lo, q, round_floor), q)
        hi = _pad_up(mpf_exp(self.hi, q, round_ceiling), q)
        if mpf_lt(lo, fzero):
            lo = fzero
        return Interval._raw(mpf_pos(lo, p, round_floor), mpf_pos(hi, p, round_ceiling), p)

    def log(self):
        if not mpf_lt(fzero, self.lo):
            raise ValueError("log of an interval reaching 0 or below")
        p = self.prec
        q = p + _GUARD
        lo = _pad_down(mpf_log(self.lo, q, round_floor), q)
        hi = _pad_up(mpf_log(self.hi, q, round_ceiling), q)
        return Interval._raw(mpf_pos(lo, p, round_floor), mpf_pos(hi, p, round_ceiling), p)

    def atan(self):
        p = self.prec
        q = p + _GUARD
        lo = _pad_down(mpf_atan(self.lo, q, round_floor), q)
        hi = _pad_up(mpf_atan(self.hi, q, round_ceiling), q)
        return Interval._raw(mpf_pos(lo, p, round_floor), mpf_pos(hi, p, round_ceiling), p)

    def cos_sin(self):
        p = self.prec
        q = p + _GUARD
        (clo, chi), (slo, shi) = mpi_cos_sin((self.lo, self.hi), q)
        c = _clip_unit(_pad_down(clo, q), _pad_up(chi, q), p)
        s = _clip_unit(_pad_down(slo, q), _pad_up(shi, q), p)
        return c, s

    def cos(self):
        return self.cos_sin()[0]

    def sin(self):
        return self.cos_sin()[1]

    def cosh(self):
        p = self.prec
        q = p + _GUARD
        (clo, chi), _ = mpi_cosh_sinh((self.lo, self.hi), q)
        lo = _pad_down(clo, q)
        if mpf_lt(lo, from_int(1)):
            lo = from_int(1)
        return Interval._raw(mpf_pos(lo, p, round_floor), mpf_pos(_pad_up(chi, q), p, round_ceiling), p)

    # presentation ---------------------------------------------------------------

    def __float__(self):
        return self.mid_float()

    def __repr__(self):
        return f"Interval([{to_float(self.lo, rnd=round_floor)!r}, {to_float(self.hi, rnd=round_ceiling)!r}])"

    def format(self, digits=6):
        return f"[{to_float(self.lo, rnd=round_floor):.{digits}f}, {to_float(self.hi, rnd=round_ceiling):.{digits}f}]"



def mul_bounds(a, b, c, d, p):
    """Outward-rounded endpoints of [a, b] * [c, d] on raw mpf values."""
    # sign-case analysis: two products except when both factors straddle 0
    if a[0] == 0:
        if c[0] == 0:
            x, y, u, v = a, c, b, d
        elif d[0] == 1 or d == fzero:
            x, y, u, v = b, c, a, d
        else:
            x, y, u, v = b, c, b, d
    elif b[0] == 1 or b == fzero:
        if c[0] == 0:
            x, y, u, v = a, d, b, c
        elif d[0] == 1 or d == fzero:
            x, y, u, v = b, d, a, c
        else:
            x, y, u, v = a, d, a, c
    else:
        if c[0] == 0:
            x, y, u, v = a, d, b, d
        elif d[0] == 1 or d == fzero:
            x, y, u, v = b, c, a, c
        else:
            lo1 = mpf_mul(a, d, p, round_floor)
            lo2 = mpf_mul(b, c, p, round_floor)
            hi1 = mpf_mul(a, c, p, round_ceiling)
            hi2 = mpf_mul(b, d, p, round_ceiling)
            return (lo1 if mpf_lt(lo1, lo2) else lo2), (hi2 if mpf_lt(hi1, hi2) else hi1)
    return mpf_mul(x, y, p, round_floor), mpf_mul(u, v, p, round_ceiling)

def _min(values):
    best = values[0]
    for v in values[1:]:
        if mpf_lt(v, best):
            best = v
    return best


def _max(values):
    best = values[0]
    for v in values[1:]:
        if mpf_lt(best, v):
            best = v
    return best


def _clip_unit(lo, hi, p):
    one = from_int(1)
    mone = from_int(-1)
    if mpf_lt(lo, mone):
        lo = mone
    if mpf_lt(one, hi):
        hi = one
    return Interval._raw(mpf_pos(lo, p, round_floor), mpf_pos(hi, p, round_ceiling), p)


def _mpf_fraction(x):
    if x in (finf, fninf):
        raise OverflowError("infinite endpoint")
    num, den = to_rational(x)
    return Fraction(num, den)


def _coerce(value, prec):
    if isinstance(value, Interval):
        return value
    if isinstance(value, (int, Rational, float, str)):
        return Interval(value, prec=prec)
    return NotImplemented


def interval(value, prec=None):
    """Enclosure of an exact number (int, Fraction, decimal string, float)."""
    if isinstance(value, Interval):
        return value if prec is None else value.with_prec(prec)
    return Interval(value, prec=prec)


class BoxC:
    """Rectangular enclosure re + i*im of a complex number."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        re = re if isinstance(re, Interval) else Interval(re)
        im = im if isinstance(im, Interval) else Interval(im, prec=re.prec)
        self.re = re
        self.im = im

    @property
    def prec(self):
        return max(self.re.prec, self.im.prec)

    def __add__(self, other):
        other = _coerce_c(other, self.prec)
        return BoxC(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_c(other, self.prec)
        return BoxC(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce_c(other, self.prec) - self

    def __neg__(self):
        return BoxC(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, (Interval, int, Rational, float)):
            return BoxC(self.re * other, self.im * other)
        other = _coerce_c(other, self.prec)
        return BoxC(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def abs2(self):
        return self.re.square() + self.im.square()

    def conj(self):
        return BoxC(self.re, -self.im)

    def inv(self):
        d = self.abs2()
        return BoxC(self.re / d, -self.im / d)

    def __truediv__(self, other):
        if isinstance(other, (Interval, int, Rational, float)):
            return BoxC(self.re / other, self.im / other)
        other = _coerce_c(other, self.prec)
        return self * other.inv()

    def __rtruediv__(self, other):
        return _coerce_c(other, self.prec) * self.inv()

    def square(self):
        return BoxC(self.re.square() - self.im.square(), 2 * self.re * self.im)

    def log(self):
        """Principal logarithm, for boxes in the open right half-plane."""
        if self.re.is_positive() is not Tri.PROVEN:
            raise ValueError("complex log implemented for Re z > 0 only")
        modulus = self.abs2().log() / 2
        return BoxC(modulus, (self.im / self.re).atan())

    def abs_lower(self):
        """Rigorous lower bound for |z| as an Interval point."""
        a2 = self.abs2()
        return Interval._raw(mpf_sqrt(a2.lo, a2.prec, round_floor), mpf_sqrt(a2.lo, a2.prec, round_floor), a2.prec)

    def contains(self, z):
        return self.re.contains(z.real) and self.im.contains(z.imag)

    def __repr__(self):
        return f"BoxC({self.re!r}, {self.im!r})"


def _coerce_c(value, prec):
    if isinstance(value, BoxC):
        return value
    if isinstance(value, Interval):
        return BoxC(value, Interval(0, prec=value.prec))
    return BoxC(Interval(value, prec=prec), Interval(0, prec=prec))
