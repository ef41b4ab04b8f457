"""Short effective vectors of the explicit-formula quadratic form.

The form q(U) = J(U . U) is positive definite on K^{<=w} for suitable l.
Effective elements have nonnegative integer coordinates, so replacing every
Gram coefficient by a rational lower bound can only decrease q on the cone:
the short vectors of the rational form contain the true ones.  They are
enumerated exactly (Fincke-Pohst with the nonnegativity condition inside the
recursion), then re-tested against q with interval arithmetic.  Candidates
whose interval straddles the bound are kept and flagged.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .intervals import Interval, Tri
from .kinf import KInf, basis_leq, from_coordinates
from .odlyzko import JTable, TestFunctionSpec, build_jtable, j_value

GRAM_DENOMINATOR = 10**6


class NotPositiveDefinite(ValueError):
    """The rational lower-bound Gram matrix is not positive definite."""


@dataclass(frozen=True)
class Filters:
    contains: tuple = ()
    det_one: bool = False
    eps_one: bool = False
    multiplicity_free: bool = False
    min_dim: int = 0

    def accepts(self, u: KInf) -> bool:
        if any(u.coeff_I(w) < 1 for w in self.contains):
            return False
        if self.det_one and not u.det_is_one():
            return False
        if self.eps_one and u.epsilon().k != 0:
            return False
        if self.multiplicity_free and not u.is_regular():
            return False
        return u.dim() >= self.min_dim


@dataclass(frozen=True)
class EnumerationQuery:
    """Effective u in K^{<=wmax} with J(u.u) <= bound.

    ``bound`` is ("ratio", k) for F^(i/4pi)/k, ("abs", c) for a rational c,
    or None (only allowed for multiplicity-free searches, which are finite).
    """

    wmax: int
    spec: TestFunctionSpec
    bound: tuple | None = ("ratio", 1)
    filters: Filters = field(default_factory=Filters)
    prec: int | None = None

    def basis(self) -> list[KInf]:
        return basis_leq(self.wmax)

    def table(self) -> JTable:
        return build_jtable(self.spec, 2 * self.wmax, prec=self.prec)


@dataclass
class EnumerationResult:
    elements: list
    flagged: list
    candidates: int = 0


def interval_gram(basis: Sequence[KInf], table: JTable) -> list[list[Interval]]:
    n = len(basis)
    g = [[None] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            g[a][b] = g[b][a] = j_value(table, basis[a] * basis[b])
    return g


def rational_lower_gram(g: list[list[Interval]], scale: Interval, denominator: int = GRAM_DENOMINATOR):
    """Entrywise lower bounds in (1/denominator)Z of g / scale."""
    out = []
    for row in g:
        out.append([Fraction(math.floor((x / scale).lo_fraction() * denominator), denominator) for x in row])
    return out


def fincke_pohst_decomposition(q: list[list[Fraction]]):
    """Exact q(x) = sum_i d_i (x_i + sum_{j>i} m_ij x_j)^2; raises if q is not positive definite."""
    n = len(q)
    d = [Fraction(0)] * n
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = q[i][i] - sum(d[k] * m[k][i] ** 2 for k in range(i))
        if d[i] <= 0:
            raise NotPositiveDefinite(f"rational Gram matrix is not positive definite (pivot {i}); try another ell")
        for j in range(i + 1, n):
            m[i][j] = (q[i][j] - sum(d[k] * m[k][i] * m[k][j] for k in range(i))) / d[i]
    return d, m


def is_positive_definite(q: list[list[Fraction]]) -> bool:
    try:
        fincke_pohst_decomposition(q)
    except NotPositiveDefinite:
        return False
    return True


def _int_range(c: Fraction, t: Fraction, cap: int | None):
    """Integers x >= 0 with (x + c)^2 <= t."""
    if t < 0:
        return range(0)
    r = math.sqrt(float(t)) if t < 2**1000 else float("inf")
    lo = max(0, math.floor(-float(c) - r) - 1)
    hi = math.ceil(-float(c) + r) + 1
    while lo <= hi and (lo + c) ** 2 > t and lo + c < 0:
        lo += 1
    while hi >= lo and (hi + c) ** 2 > t:
        hi -= 1
    if cap is not None:
        hi = min(hi, cap)
    return range(lo, hi + 1)


def short_effective_vectors(q: list[list[Fraction]], c: Fraction, cap: int | None = None) -> list[tuple]:
    """All x in Z_{>=0}^n with x^T q x <= c (coordinates <= cap if given), exactly."""
    n = len(q)
    d, m = fincke_pohst_decomposition(q)
    out = []
    x = [0] * n

    def rec(i: int, remaining: Fraction):
        centre = sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        for v in _int_range(centre, remaining / d[i], cap):
            x[i] = v
            rest = remaining - d[i] * (v + centre) ** 2
            if rest < 0:
                continue
            if i == 0:
                out.append(tuple(x))
            else:
                rec(i - 1, rest)
        x[i] = 0

    rec(n - 1, Fraction(c))
    return out


def _quad_form(q, x) -> Fraction:
    n = len(x)
    return sum((q[a][b] * x[a] * x[b] for a in range(n) for b in range(n) if x[a] and x[b]), Fraction(0))


def _prepare(query: EnumerationQuery):
    if query.wmax < 0:
        raise ValueError("wmax must be >= 0")
    if query.bound is None and not query.filters.multiplicity_free:
        raise ValueError("an unbounded search needs the multiplicity_free filter")
    basis = query.basis()
    table = query.table()
    g = interval_gram(basis, table)
    scale = table.fhat_i4pi
    if query.bound is None:
        return basis, g, None, None, None
    kind, value = query.bound
    if kind == "ratio":
        c_norm = Fraction(1) / Fraction(value)
        c_int = scale / Fraction(value)
    elif kind == "abs":
        c_int = Interval(Fraction(value), prec=scale.prec)
        c_norm = None
    else:
        raise ValueError(f"unknown bound kind {kind!r}")
    q_low = rational_lower_gram(g, scale)
    if c_norm is None:
        # rational upper bound of c / F^(i/4pi)
        c_norm = (c_int / scale).hi_fraction()
    return basis, g, q_low, c_norm, c_int


def _exact_filter(query, basis, g, c_int, coords: Iterable[tuple]) -> EnumerationResult:
    elements, flagged = [], []
    count = 0
    for x in coords:
        count += 1
        u = from_coordinates(basis, x)
        if not query.filters.accepts(u):
            continue
        if c_int is None:
            elements.append(u)
            continue
        val = _interval_form(g, x)
        status = (val - c_int).is_positive()
        if status is Tri.PROVEN:
            continue
        elements.append(u)
        if status is Tri.INCONCLUSIVE:
            flagged.append(u)
    return EnumerationResult(elements, flagged, count)


def _interval_form(g, x) -> Interval:
    n = len(x)
    acc = Interval(0, prec=g[0][0].prec)
    for a in range(n):
        if not x[a]:
            continue
        acc = acc + g[a][a] * (x[a] * x[a])
        for b in range(a + 1, n):
            if x[b]:
                acc = acc + g[a][b] * (2 * x[a] * x[b])
    return acc


def enumerate_effective(query: EnumerationQuery) -> EnumerationResult:
    """Effective elements within the bound that pass the filters (flagged ones included)."""
    basis, g, q_low, c_norm, c_int = _prepare(query)
    cap = 1 if query.filters.multiplicity_free else None
    if c_int is None:
        coords = itertools.product((0, 1), repeat=len(basis))
        return _exact_filter(query, basis, g, None, coords)
    # enumerate heavy coordinates first: the decomposition handles the last index first
    rev = list(reversed(range(len(basis))))
    q_rev = [[q_low[a][b] for b in rev] for a in rev]
    raw = short_effective_vectors(q_rev, c_norm, cap)
    coords = (tuple(x[len(basis) - 1 - i] for i in range(len(basis))) for x in raw)
    return _exact_filter(query, basis, g, c_int, coords)


def brute_force_oracle(query: EnumerationQuery) -> EnumerationResult:
    """Independent check for small wmax: scan a coordinate box, test every point exactly."""
    if query.wmax > 8:
        raise ValueError("the brute force oracle is limited to wmax <= 8")
    basis, g, q_low, c_norm, c_int = _prepare(query)
    cap = 1 if query.filters.multiplicity_free else None
    if c_int is None:
        return _exact_filter(query, basis, g, None, itertools.product((0, 1), repeat=len(basis)))
    if not is_positive_definite(q_low):
        raise NotPositiveDefinite("rational Gram matrix is not positive definite; try another ell")
    inv = _inverse(q_low)
    # on the ellipsoid x^T q x <= c one has x_i^2 <= c (q^{-1})_ii
    bounds = []
    for i in range(len(basis)):
        b = math.isqrt(math.floor(c_norm * inv[i][i])) + 1
        bounds.append(b if cap is None else min(b, cap))
    box = itertools.product(*(range(b + 1) for b in bounds))
    coords = (x for x in box if _quad_form(q_low, x) <= c_norm)
    return _exact_filter(query, basis, g, c_int, coords)


def _inverse(q: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(q)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(q)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [row[n:] for row in a]


def certify_positive_definite(wmax: int, spec: TestFunctionSpec, prec: int | None = None) -> bool:
    """True when the rational lower-bound Gram matrix of J on K^{<=wmax} is positive definite.

    Positive definiteness of the lower-bound matrix on the whole lattice implies it for the
    exact form only on the effective cone; the interval Gram matrix itself is certified by an
    interval Cholesky factorisation.
    """
    basis = basis_leq(wmax)
    table = build_jtable(spec, 2 * wmax, prec=prec)
    g = interval_gram(basis, table)
    return interval_cholesky_positive(g)


def interval_cholesky_positive(g: list[list[Interval]]) -> bool:
    """Interval Cholesky: every symmetric matrix inside the interval matrix is positive definite
    when all pivots are certified positive."""
    n = len(g)
    lmat = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = g[i][j]
            for k in range(j):
                s = s - lmat[i][k] * lmat[j][k]
            if i == j:
                if s.is_positive() is not Tri.PROVEN:
                    return False
                lmat[i][i] = s.sqrt()
            else:
                lmat[i][j] = s / lmat[j][j]
    return True
