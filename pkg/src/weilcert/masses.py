"""Masses of torsion classes from elliptic terms, by exact linear algebra.

The elliptic term of the trace formula is T_ell(G; lambda) = sum_P e_P m_P tr(P; lambda)
over P(G)/~.  Given enough weights lambda whose T_ell is known, the masses m_P
are the unique solution of a rational linear system.  For SO_3 the spectral
side is explicit, which gives a complete pipeline down to dim S_k(SL_2(Z)).
"""

from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .explicit_formula import basic_bounds, default_ell_grid
from .groups import ClassRep, CycloProduct, GroupId, enumerate_classes, enumerate_dominant, parse_class, trace, u_of_lambda
from .odlyzko import TestFunctionSpec, build_jtable


class RankDeficient(ValueError):
    """The trace matrix does not determine the masses; ``kernel`` is a nonzero null vector."""

    def __init__(self, message, kernel):
        super().__init__(message)
        self.kernel = kernel


class Inconsistent(ValueError):
    """An overdetermined system has no solution; ``row`` is the first failing row index."""

    def __init__(self, message, row):
        super().__init__(message)
        self.row = row


@dataclass(frozen=True)
class SpectralTargets:
    group: GroupId
    rows: tuple  # ((lambda, t_ell), ...)


@dataclass(frozen=True)
class MassTable:
    group: GroupId
    classes: tuple  # ClassRep, in solver order
    masses: tuple  # Fraction, aligned with classes

    def mass(self, p: CycloProduct) -> Fraction:
        for c, m in zip(self.classes, self.masses):
            if c.poly == p:
                return m
        return Fraction(0)

    def t_ell(self, lam: Sequence[int]) -> Fraction:
        return sum((c.e * m * trace(c.poly, self.group, lam) for c, m in zip(self.classes, self.masses) if m), Fraction(0))

    def lines(self) -> list[str]:
        return [f"class={c.text} e={c.e} mass={_frac(m)}" for c, m in zip(self.classes, self.masses)]

    def dumps(self) -> str:
        return "".join(line + "\n" for line in self.lines())


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# exact linear algebra -----------------------------------------------------------------------


def _solve_square(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [list(row) + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [v / p for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [v - f * w for v, w in zip(m[r], m[col])]
    return [m[i][n] for i in range(n)]


def _null_vector(rows: list[list[Fraction]], ncols: int) -> list[Fraction]:
    """A nonzero x with row . x = 0 for every row (rows of rank < ncols)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][col]
        m[r] = [v / p for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [v - f * w for v, w in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = next(j for j in range(ncols) if j not in pivots)
    x = [Fraction(0)] * ncols
    x[free] = Fraction(1)
    for i, pc in enumerate(pivots):
        x[pc] = -m[i][free]
    return x


def _independent_rows(rows: list[list[Fraction]], ncols: int):
    """Greedy choice of rows spanning the row space; returns (chosen indices, null vector or None)."""
    basis: list[tuple[int, list[Fraction]]] = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(rows):
        v = list(row)
        for pc, brow in basis:
            if v[pc] != 0:
                f = v[pc] / brow[pc]
                v = [x - f * y for x, y in zip(v, brow)]
        pc = next((j for j in range(ncols) if v[j] != 0), None)
        if pc is None:
            continue
        basis.append((pc, v))
        chosen.append(idx)
        if len(chosen) == ncols:
            return chosen, None
    return chosen, _null_vector([rows[i] for i in chosen], ncols)


def solve_masses(targets: SpectralTargets, unknowns: Sequence[ClassRep]) -> MassTable:
    """Unique rational masses with sum_P e_P m_P tr(P; lambda) = T_ell(lambda) on every row."""
    g = targets.group
    lams = [lam for lam, _ in targets.rows]
    rhs = [Fraction(t) for _, t in targets.rows]
    mat = [[Fraction(c.e * trace(c.poly, g, lam)) for c in unknowns] for lam in lams]
    n = len(unknowns)
    chosen, kernel = _independent_rows(mat, n)
    if kernel is not None:
        raise RankDeficient(f"{g}: trace matrix has rank {len(chosen)} < {n} unknowns", kernel)
    sol = _solve_square([mat[i] for i in chosen], [rhs[i] for i in chosen])
    for i, (row, t) in enumerate(zip(mat, rhs)):
        if sum(x * y for x, y in zip(row, sol)) != t:
            raise Inconsistent(f"{g}: row {i} (lambda={lams[i]}) is not satisfied", i)
    return MassTable(g, tuple(unknowns), tuple(sol))


# the SO3 pipeline -------------------------------------------------------------------------------

SO3 = GroupId("B", 1)


def so3_spectral(kmax: int, dims: Callable[[int], int] | None = None) -> SpectralTargets:
    """T_ell(SO3; k) = -N(w(k)) + delta_{k,0} - 1/2 with N(w(k)) = dim S_{2k+2}; N = 0 if ``dims`` is None."""
    rows = []
    for k in range(kmax + 1):
        n = 0 if dims is None else dims(2 * k + 2)
        rows.append(((k,), Fraction(-n + (1 if k == 0 else 0)) - Fraction(1, 2)))
    return SpectralTargets(SO3, tuple(rows))


def so3_masses() -> MassTable:
    """Masses of all five torsion classes of SO3, from the weights 0..4 (no cusp forms of weight <= 10)."""
    return solve_masses(so3_spectral(4), enumerate_classes(SO3, "all"))


def modular_dims_from_masses(table: MassTable, kmax: int) -> list[tuple[int, int]]:
    """(weight 2k+2, dim S_{2k+2}(SL2(Z))) for k <= kmax, read off the SO3 elliptic terms."""
    if table.group != SO3:
        raise ValueError("modular dimensions need the SO3 mass table")
    out = []
    for k in range(kmax + 1):
        n = -table.t_ell((k,)) - Fraction(1, 2) + (1 if k == 0 else 0)
        if n.denominator != 1 or n < 0:
            raise Inconsistent(f"N(w({k})) = {n} is not a nonnegative integer", k)
        out.append((2 * k + 2, int(n)))
    return out


def dim_cusp_forms_oracle(k: int) -> int:
    """Classical dimension formula for S_k(SL2(Z))."""
    if k < 0 or k % 2:
        return 0
    if k < 12:
        return 0
    return k // 12 - 1 if k % 12 == 2 else k // 12


# vanishing weights -----------------------------------------------------------------------------


def _accepted_at(args):
    ell, us, wmax, prec = args
    table = build_jtable(TestFunctionSpec("F", ell), wmax, prec=prec)
    return [i for i, u in enumerate(us) if basic_bounds(u, table, 1).proven]


def select_vanishing_weights(
    g: GroupId,
    wbound: int,
    ell_grid: Iterable[Fraction] | None = None,
    *,
    prec: int | None = None,
    jobs: int = 1,
) -> list[tuple]:
    """Lambda_w^test: weights of Lambda_G(w) whose U(lambda) is excluded by the basic bound at some ell."""
    grid = list(default_ell_grid() if ell_grid is None else ell_grid)
    lams = enumerate_dominant(g, wbound)
    if not lams:
        return []
    us = [u_of_lambda(g, lam) for lam in lams]
    wmax = max(2 * u.motivic_weight() for u in us)
    wmax = max(8, -(-wmax // 8) * 8)
    accepted = set()
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            for hits in pool.map(_accepted_at, [(ell, us, wmax, prec) for ell in grid]):
                accepted.update(hits)
    else:
        for ell in grid:
            todo = [i for i in range(len(us)) if i not in accepted]
            if not todo:
                break
            hits = _accepted_at((ell, [us[i] for i in todo], wmax, prec))
            accepted.update(todo[i] for i in hits)
    return [lams[i] for i in sorted(accepted)]


# files ---------------------------------------------------------------------------------------


def _parse_vector(text: str) -> tuple:
    body = text.strip().strip("()[]")
    return tuple(int(x) for x in body.split(",") if x.strip())


_TARGET = re.compile(r"^lambda=(\S+)\s+t_ell=(\S+)$")
_MASS = re.compile(r"^class=(\S+)\s+e=([12])\s+mass=(\S+)$")


def loads_targets(text: str, group: GroupId) -> SpectralTargets:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _TARGET.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'lambda=<vector> t_ell=<p/q>', got {raw!r}")
        rows.append((_parse_vector(m.group(1)), Fraction(m.group(2))))
    return SpectralTargets(group, tuple(rows))


def dumps_targets(targets: SpectralTargets) -> str:
    return "".join(f"lambda={','.join(map(str, lam))} t_ell={_frac(Fraction(t))}\n" for lam, t in targets.rows)


def loads_mass_table(text: str, group: GroupId) -> MassTable:
    classes, masses = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _MASS.match(line)
        if not m:
            raise ValueError(f"line {lineno}: expected 'class=<text> e=<1|2> mass=<p/q>', got {raw!r}")
        classes.append(ClassRep(parse_class(m.group(1)), int(m.group(2))))
        masses.append(Fraction(m.group(3)))
    return MassTable(group, tuple(classes), tuple(masses))


def load_targets(path, group: GroupId) -> SpectralTargets:
    return loads_targets(Path(path).read_text(), group)
