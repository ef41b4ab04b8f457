"""Certified integration with interval Taylor jets.

On a piece [m - h, m + h] an integrand f is expanded at the midpoint to
order N - 1, and its N-th Taylor coefficient is enclosed over the whole
piece by evaluating the same expression on a jet whose base point is the
piece itself.  With N even, Taylor's theorem with Lagrange remainder gives

    int f = sum_{k < N, k even} 2 c_k(m) h^{k+1} / (k+1) + [c_N(piece)] 2 h^{N+1} / (N+1).

Pieces whose enclosure is too wide are bisected.  Running out of budget
returns a wide (but still valid) enclosure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from mpmath.libmp import fzero, mpf_add, round_ceiling, round_floor

from .intervals import Interval, interval, mul_bounds


def _convolve(xs, ys):
    """Cauchy product of two interval coefficient lists, on raw endpoints for speed."""
    p = max(xs[0].prec, ys[0].prec)
    xl = [x.lo for x in xs]
    xh = [x.hi for x in xs]
    yl = [y.lo for y in ys]
    yh = [y.hi for y in ys]
    out = []
    raw = Interval._raw
    for k in range(len(xs)):
        lo = hi = fzero
        for j in range(k + 1):
            a, b = mul_bounds(xl[j], xh[j], yl[k - j], yh[k - j], p)
            lo = mpf_add(lo, a, p, round_floor)
            hi = mpf_add(hi, b, p, round_ceiling)
        out.append(raw(lo, hi, p))
    return out


class Jet:
    """Truncated Taylor series with interval coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = list(coeffs)

    @property
    def order(self):
        return len(self.c) - 1

    @classmethod
    def variable(cls, base: Interval, order: int):
        prec = base.prec
        coeffs = [base, Interval(1, prec=prec)] + [Interval(0, prec=prec)] * (order - 1)
        return cls(coeffs[: order + 1])

    @classmethod
    def constant(cls, value, order: int, prec: int):
        v = interval(value, prec)
        return cls([v] + [Interval(0, prec=prec)] * order)

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order, self.c[0].prec)

    def __add__(self, other):
        if not isinstance(other, Jet):
            return Jet([self.c[0] + other] + self.c[1:])
        return Jet([a + b for a, b in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-a for a in self.c])

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return Jet([self.c[0] - other] + self.c[1:])
        return Jet([a - b for a, b in zip(self.c, other.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet([a * other for a in self.c])
        return Jet(_convolve(self.c, other.c))

    __rmul__ = __mul__

    def reciprocal(self):
        n = len(self.c)
        a0 = self.c[0]
        out = [1 / a0]
        for k in range(1, n):
            acc = self.c[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + self.c[j] * out[k - j]
            out.append(-acc / a0)
        return Jet(out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet([a / other for a in self.c])
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def exp(self):
        n = len(self.c)
        out = [self.c[0].exp()]
        for k in range(1, n):
            acc = self.c[1] * out[k - 1]
            for j in range(2, k + 1):
                acc = acc + (self.c[j] * j) * out[k - j]
            out.append(acc / k)
        return Jet(out)

    def cos_sin(self):
        n = len(self.c)
        c0, s0 = self.c[0].cos_sin()
        cos_c, sin_c = [c0], [s0]
        for k in range(1, n):
            acc_s = self.c[1] * cos_c[k - 1]
            acc_c = self.c[1] * sin_c[k - 1]
            for j in range(2, k + 1):
                acc_s = acc_s + (self.c[j] * j) * cos_c[k - j]
                acc_c = acc_c + (self.c[j] * j) * sin_c[k - j]
            sin_c.append(acc_s / k)
            cos_c.append(-acc_c / k)
        return Jet(cos_c), Jet(sin_c)

    def cos(self):
        return self.cos_sin()[0]

    def sin(self):
        return self.cos_sin()[1]

    def cosh(self):
        e = self.exp()
        return (e + e.reciprocal()) * Fraction(1, 2)


Integrand = Callable[[Jet], "Jet | Sequence[Jet]"]


@dataclass
class QuadResult:
    values: list
    pieces: int
    exhausted: bool = False
    widths: list = field(default_factory=list)


def _moments(h: Interval, order: int):
    out = []
    hp = h
    for k in range(order + 1):
        if k % 2 == 0:
            out.append(2 * hp / (k + 1))
        else:
            out.append(None)
        hp = hp * h
    return out


def _piece(f, lo: Fraction, hi: Fraction, order: int, prec: int):
    mid = (lo + hi) / 2
    h = Interval((hi - lo) / 2, prec=prec)
    point = f(Jet.variable(Interval(mid, prec=prec), order - 1))
    box = f(Jet.variable(Interval(lo, hi, prec=prec), order))
    if isinstance(point, Jet):
        point, box = [point], [box]
    mom = _moments(h, order)
    vals = []
    for pj, bj in zip(point, box):
        acc = Interval(0, prec=prec)
        for k in range(0, order, 2):
            acc = acc + pj.c[k] * mom[k]
        acc = acc + bj.c[order] * mom[order]
        vals.append(acc)
    return vals


def integrate_certified(
    f: Integrand,
    a,
    b,
    *,
    tol=Fraction(1, 10**20),
    order: int = 24,
    prec: int | None = None,
    max_pieces: int = 4000,
    breakpoints: Sequence = (),
) -> QuadResult:
    """Enclose int_a^b f(x) dx for an integrand given on jets.

    ``f`` receives a Jet for the variable x and returns a Jet (or a list of
    Jets for a vector of integrands sharing the same pieces).  ``a``, ``b``
    and the breakpoints are exact rationals; f must be smooth on each piece
    between consecutive breakpoints.
    """
    if order % 2:
        raise ValueError("order must be even")
    a = Fraction(a)
    b = Fraction(b)
    if b < a:
        raise ValueError("b < a")
    prec = 128 if prec is None else prec
    cuts = sorted({a, b} | {Fraction(x) for x in breakpoints if a < Fraction(x) < b})
    tol = Fraction(tol)
    total_len = b - a if b > a else Fraction(1)
    stack = [(cuts[i], cuts[i + 1]) for i in range(len(cuts) - 1)][::-1]
    totals = None
    pieces = 0
    exhausted = False
    while stack:
        lo, hi = stack.pop()
        vals = _piece(f, lo, hi, order, prec)
        pieces += 1
        # proportional share, with a floor so tiny pieces near a cut are not over-refined
        allowed = tol * max((hi - lo) / total_len, Fraction(1, 1024))
        wide = any(not v.is_finite() or v.hi_fraction() - v.lo_fraction() > allowed for v in vals)
        if wide and pieces + len(stack) < max_pieces:
            mid = (lo + hi) / 2
            stack.append((mid, hi))
            stack.append((lo, mid))
            continue
        if wide:
            exhausted = True
        totals = vals if totals is None else [t + v for t, v in zip(totals, vals)]
    if totals is None:
        probe = f(Jet.variable(Interval(a, prec=prec), 0))
        n = 1 if isinstance(probe, Jet) else len(probe)
        totals = [Interval(0, prec=prec) for _ in range(n)]
    return QuadResult(totals, pieces, exhausted, [t.width_float() for t in totals])


def integrate(f: Integrand, a, b, **kwargs) -> Interval:
    """Scalar convenience wrapper around integrate_certified."""
    res = integrate_certified(f, a, b, **kwargs)
    if len(res.values) != 1:
        raise ValueError("vector integrand passed to the scalar wrapper")
    return res.values[0]
