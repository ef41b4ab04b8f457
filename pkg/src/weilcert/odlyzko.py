"""Odlyzko test functions and the Archimedean functionals of the explicit formula.

Two even, compactly supported families are provided, both built from

    g(x) = (1 - |x|) cos(pi x) + sin(pi |x|) / pi      (|x| <= 1),

which is twice the convolution square of cos(pi x) on [-1/2, 1/2]:

* family ``F``: F_l(x) = g(x / l) / cosh(x / 2), usable unconditionally;
* family ``G``: G_l(x) = g(x / l), only usable under GRH.

For each family the table stores J(I_w), J(1), J(eps), the value at 0 of
the Fourier transform and its value at i/(4 pi).  Every quantity is computed
by two independent routes and the enclosures are intersected:

* closed forms in digamma, trigamma and rapidly convergent kernel series;
* direct certified quadrature of the defining kernel integrals

      J(I_w) = log 2 pi + S((1 + w) / 2),
      S(b) = int_0^oo (F(x) e^{-bx} / (1 - e^{-x}) - e^{-x} / x) dx,
      J(1 - eps) = 1/2 int_0^oo F(x) / cosh(x / 2) dx.

A pair of enclosures that fails to overlap signals a bug and raises
InternalInconsistency.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from mpmath.libmp import mpf_euler, round_nearest, to_rational

from .intervals import DEFAULT_PREC, BoxC, Interval
from .kinf import KInf
from .quadrature import Jet, integrate_certified
from .special import (
    digamma,
    kernel_series_s1,
    kernel_series_s2,
    kernel_series_s3,
    phi,
    phi_prime,
    trigamma,
)

FAMILIES = ("F", "G")


class InternalInconsistency(RuntimeError):
    """Two independent enclosures of the same number are disjoint."""


@dataclass(frozen=True)
class TestFunctionSpec:
    family: str
    ell: Fraction

    __test__ = False

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        ell = Fraction(self.ell)
        if ell <= 0:
            raise ValueError("ell must be positive")
        object.__setattr__(self, "ell", ell)

    @property
    def grh_only(self) -> bool:
        return self.family == "G"

    def __str__(self):
        return f"{self.family}_{self.ell}"


@dataclass(frozen=True)
class JTable:
    spec: TestFunctionSpec
    wmax: int
    prec: int
    j_I: Mapping[int, Interval]
    j_one: Interval
    j_eps: Interval
    fhat0: Interval
    fhat_i4pi: Interval
    routes: tuple = ("closed",)
    extra: dict = field(default_factory=dict, compare=False, repr=False)

    def J(self, w: int) -> Interval:
        if w == 0:
            return self.j_one + self.j_eps
        if w not in self.j_I:
            raise ValueError(f"I{w} is outside this table (wmax={self.wmax})")
        return self.j_I[w]


def j_value(table: JTable, u: KInf) -> Interval:
    """Linear extension of J to an element of the ring."""
    acc = table.j_one * u.c_one + table.j_eps * u.c_eps
    for w, c in u.c_I:
        if w > table.wmax:
            raise ValueError(f"I{w} is outside this table (wmax={table.wmax})")
        acc = acc + table.j_I[w] * c
    return acc


# the function g ------------------------------------------------------------------


def g_float(x: float) -> float:
    x = abs(x)
    if x >= 1:
        return 0.0
    return (1 - x) * math.cos(math.pi * x) + math.sin(math.pi * x) / math.pi


def _g_jet(x: Jet, pi: Interval) -> Jet:
    """g on jets with base point in [0, 1]."""
    c, s = (x * pi).cos_sin()
    return (1 - x) * c + s / pi


def _profile_jet(spec: TestFunctionSpec, x: Jet, pi: Interval) -> Jet:
    g = _g_jet(x / spec.ell, pi)
    if spec.family == "G":
        return g
    return g / (x * Fraction(1, 2)).cosh()


# closed forms -------------------------------------------------------------------


def _s_closed(b: Interval, ell: Interval, pi: Interval) -> Interval:
    z = BoxC(b, pi / ell)
    psi = digamma(z)
    dpsi = trigamma(z)
    return -psi.re + psi.im / pi - dpsi.re / ell + kernel_series_s1(b, ell)


def _phi_closed(ell: Interval, pi: Interval) -> Interval:
    z = BoxC(Interval(Fraction(1, 2), prec=ell.prec), pi / ell)
    p = phi(z)
    dp = phi_prime(z)
    return p.re - p.im / pi + dp.re / ell + kernel_series_s2(ell)


def _closed_route(spec: TestFunctionSpec, ws, prec: int) -> dict:
    pi = Interval.pi(prec)
    ell = Interval(spec.ell, prec=prec)
    out = {}
    if spec.family == "G":
        log2pi = (2 * pi).log()
        for w in ws:
            out[("I", w)] = log2pi + _s_closed(Interval(Fraction(1 + w, 2), prec=prec), ell, pi)
        out["one_minus_eps"] = _phi_closed(ell, pi)
        out["fhat0"] = 8 * ell / pi.square()
        pi2 = pi.square()
        out["fhat_i4pi"] = 4 * pi2 * ell * (1 + (ell * Fraction(1, 2)).cosh()) / (ell.square() / 4 + pi2).square()
    else:
        logpi = pi.log()
        two_ell = 2 * ell
        for w in ws:
            out[("I", w)] = logpi + _s_closed(Interval(Fraction(w + 2, 4), prec=prec), two_ell, pi)
        z = BoxC(Interval(1, prec=prec), pi / ell)
        p = phi(z)
        dp = phi_prime(z)
        out["one_minus_eps"] = 1 + 2 * pi / ell * p.im + 2 * pi / ell.square() * dp.im + 2 * kernel_series_s3(ell)
        out["fhat0"] = 4 * _phi_closed(ell, pi)
        out["fhat_i4pi"] = 8 * ell / pi.square()
    return out


# kernel-integral route ------------------------------------------------------------------


def _euler_gamma(prec: int) -> Interval:
    num, den = to_rational(mpf_euler(prec + 16, round_nearest))
    mid = Fraction(num, den)
    rad = Fraction(1, 2 ** (prec + 8))
    return Interval(mid - rad, mid + rad, prec=prec)


def exp_integral_e1(x: Fraction, prec: int) -> Interval:
    """E1(x) = int_x^oo e^{-t}/t dt for rational x > 0, from its alternating power series."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("x must be positive")
    work = prec + int(2 * float(x)) + 16
    X = Interval(x, prec=work)
    target = Fraction(1, 2 ** (prec + 8))
    acc = -_euler_gamma(work) - X.log()
    term = Interval(1, prec=work)
    k = 1
    while True:
        term = term * X / k
        piece = term / k
        acc = acc + piece if k % 2 else acc - piece
        k += 1
        if k > x + 1:
            nxt = term * X / k / k
            if nxt.hi_fraction() < target:
                break
    res = acc + Interval.hull(-nxt, nxt)
    return res.with_prec(prec)


def _kernel_route(spec: TestFunctionSpec, ws, prec: int, tol) -> dict:
    """Certified quadrature of the defining integrals (slow but independent)."""
    ell = spec.ell
    # cancellation between the two 1/x singularities costs up to -log2(delta) bits
    delta_exp = 64
    work = prec + delta_exp + 16
    pi = Interval.pi(work)
    bs = [Fraction(1 + w, 2) for w in ws]

    def smooth(x: Jet):
        f = _profile_jet(spec, x, pi)
        half = (x * Fraction(1, 2)).cosh()
        return [2 * f, 2 * f * half, f / half * Fraction(1, 2)]

    res = integrate_certified(smooth, 0, ell, tol=tol, prec=work)
    fhat0, fhat_i4pi, ome = res.values

    top = max(ws) if ws else 0
    ell_i = Interval(ell, prec=work)

    # x = l e^u turns the 1/x behaviour at 0 into exponential decay in u
    def kernel(u: Jet):
        x = u.exp() * ell_i
        f = _profile_jet(spec, x, pi)
        em = (-x).exp()
        base = f / (1 - em) * x
        sing = em
        step = (x * Fraction(-1, 2)).exp()
        powers = {}
        power = step
        for w in range(0, top + 1):
            powers[w] = power
            power = power * step
        return [base * powers[w] - sing for w in ws]

    u_lo = -math.ceil(delta_exp * math.log(2) + max(0.0, math.log(float(ell)))) - 1
    res = integrate_certified(kernel, u_lo, 0, tol=tol, prec=work, breakpoints=range(u_lo, 0))
    delta_hi = (Interval(u_lo, prec=work).exp() * ell_i).hi_fraction()
    e1 = exp_integral_e1(ell, work)
    log2pi = (2 * pi).log()
    out = {"fhat0": fhat0, "fhat_i4pi": fhat_i4pi, "one_minus_eps": ome}
    fprime = Fraction(2) / ell + (Fraction(1, 2) if spec.family == "F" else 0)
    for w, b, val in zip(ws, bs, res.values):
        # |integrand| <= sup|F'| + b + 2 on [0, delta] by the mean value theorem
        near0 = Interval(-1, 1, prec=work) * (delta_hi * (fprime + b + 2))
        out[("I", w)] = log2pi + val + near0 - e1
    return {k: v.with_prec(prec) for k, v in out.items()}


# tables ---------------------------------------------------------------------------------


def _intersect(label, a: Interval, b: Interval) -> Interval:
    if not a.overlaps(b):
        raise InternalInconsistency(f"{label}: routes disagree, {a!r} vs {b!r}")
    return a.intersect(b)


_CACHE: dict = {}
_LOCK = threading.Lock()


def default_routes(family: str) -> tuple:
    # quadrature of the F kernels is the expensive part of a search; it is cross-checked
    # in the test suite and available on request
    return ("closed", "kernel") if family == "G" else ("closed",)


def build_jtable(spec: TestFunctionSpec, wmax: int, *, prec: int | None = None, routes=None, kernel_tol=None) -> JTable:
    """Certified table of J(I_w) for w <= wmax, J(1), J(eps) and the two Fourier values."""
    if wmax < 0:
        raise ValueError("wmax must be >= 0")
    prec = DEFAULT_PREC if prec is None else prec
    routes = tuple(routes) if routes is not None else default_routes(spec.family)
    if not routes or any(r not in ("closed", "kernel") for r in routes):
        raise ValueError(f"bad routes {routes!r}")
    key = (spec, wmax, prec, routes)
    with _LOCK:
        hit = _CACHE.get(key)
        if hit is None:
            # a cached table for a larger wmax serves as well
            bigger = [t for (s, w, p, r), t in _CACHE.items() if s == spec and p == prec and r == routes and w >= wmax]
            hit = min(bigger, key=lambda t: t.wmax) if bigger else None
    if hit is not None:
        return hit
    ws = list(range(0, wmax + 1))
    results = []
    if "closed" in routes:
        results.append(_closed_route(spec, ws, prec))
    if "kernel" in routes:
        tol = Fraction(1, 10**15) if kernel_tol is None else Fraction(kernel_tol)
        results.append(_kernel_route(spec, ws, prec, tol))
    merged = dict(results[0])
    for other in results[1:]:
        for k in merged:
            merged[k] = _intersect(f"{spec} {k}", merged[k], other[k])
    j0 = merged[("I", 0)]
    ome = merged["one_minus_eps"]
    table = JTable(
        spec=spec,
        wmax=wmax,
        prec=prec,
        j_I={w: merged[("I", w)] for w in ws if w > 0},
        j_one=(j0 + ome) * Fraction(1, 2),
        j_eps=(j0 - ome) * Fraction(1, 2),
        fhat0=merged["fhat0"],
        fhat_i4pi=merged["fhat_i4pi"],
        routes=routes,
        extra={"routes": results},
    )
    with _LOCK:
        _CACHE[key] = table
    return table


def clear_cache() -> None:
    with _LOCK:
        _CACHE.clear()
