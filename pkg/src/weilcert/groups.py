"""Split classical groups over Z: dominant weights, torsion classes and exact character traces.

Torsion conjugacy classes are handled through their characteristic
polynomials, which are products of cyclotomic polynomials.  Traces of such a
class in an irreducible representation are computed over Z from the
complete homogeneous symmetric functions of the eigenvalues, plugged into
the determinantal character formulas of the symplectic and orthogonal groups.
"""

from __future__ import annotations

import cmath
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .kinf import KInf

SERIES = ("B", "C", "D")


# groups ----------------------------------------------------------------------------


@dataclass(frozen=True)
class GroupId:
    """B: SO_{2n+1}, C: Sp_{2n}, D: SO_{2n}."""

    series: str
    n: int

    def __post_init__(self):
        if self.series not in SERIES:
            raise ValueError(f"unknown series {self.series!r}")
        if self.n < (2 if self.series == "D" else 1):
            raise ValueError(f"rank {self.n} is too small for series {self.series}")

    @property
    def n_G(self) -> int:
        return 2 * self.n + 1 if self.series == "B" else 2 * self.n

    @property
    def n_dual(self) -> int:
        return 2 * self.n + 1 if self.series == "C" else 2 * self.n

    @property
    def has_central_minus_one(self) -> bool:
        return self.series in ("C", "D")

    @property
    def name(self) -> str:
        return f"Sp{self.n_G}" if self.series == "C" else f"SO{self.n_G}"

    def __str__(self):
        return self.name

    @classmethod
    def parse(cls, text: str) -> "GroupId":
        m = re.fullmatch(r"(SO|Sp)_?(\d+)", text.strip())
        if not m:
            raise ValueError(f"cannot parse group {text!r} (expected e.g. SO7 or Sp4)")
        kind, dim = m.group(1), int(m.group(2))
        if kind == "Sp":
            if dim % 2 or dim < 2:
                raise ValueError(f"Sp{dim}: dimension must be even and positive")
            return cls("C", dim // 2)
        if dim % 2:
            if dim < 3:
                raise ValueError(f"SO{dim}: dimension must be at least 3")
            return cls("B", dim // 2)
        return cls("D", dim // 2)

    def rho(self) -> tuple:
        n = self.n
        if self.series == "B":
            return tuple(Fraction(2 * (n - i) + 1, 2) for i in range(1, n + 1))
        if self.series == "C":
            return tuple(Fraction(n + 1 - i) for i in range(1, n + 1))
        return tuple(Fraction(n - i) for i in range(1, n + 1))

    def positive_roots(self) -> list[tuple]:
        n = self.n
        out = []
        for i in range(n):
            for j in range(i + 1, n):
                for s in (1, -1):
                    v = [0] * n
                    v[i], v[j] = 1, s
                    out.append(tuple(v))
        for i in range(n):
            v = [0] * n
            if self.series == "B":
                v[i] = 1
                out.append(tuple(v))
            elif self.series == "C":
                v[i] = 2
                out.append(tuple(v))
        return out


# dominant weights ---------------------------------------------------------------------


def check_dominant(g: GroupId, lam: Sequence[int]) -> tuple:
    lam = tuple(int(x) for x in lam)
    if len(lam) != g.n:
        raise ValueError(f"{g}: a dominant weight has {g.n} coordinates, got {len(lam)}")
    if any(lam[i] < lam[i + 1] for i in range(g.n - 2)):
        raise ValueError(f"{lam} is not dominant for {g}")
    if g.series == "D":
        if g.n >= 2 and lam[-2] < abs(lam[-1]):
            raise ValueError(f"{lam} is not dominant for {g}")
    else:
        if g.n >= 2 and lam[-2] < lam[-1]:
            raise ValueError(f"{lam} is not dominant for {g}")
        if lam[-1] < 0:
            raise ValueError(f"{lam} is not dominant for {g}")
    return lam


def infinitesimal_weights(g: GroupId, lam: Sequence[int]) -> tuple:
    """w(lambda) = lambda + rho, with |lambda_n| in series D."""
    lam = check_dominant(g, lam)
    rho = g.rho()
    vals = list(lam)
    if g.series == "D":
        vals[-1] = abs(vals[-1])
    return tuple(Fraction(v) + r for v, r in zip(vals, rho))


def u_of_lambda(g: GroupId, lam: Sequence[int]) -> KInf:
    """The unique effective U with det 1 whose weights are the +-w_i (and 0 for Sp)."""
    w = infinitesimal_weights(g, lam)
    if g.series == "D" and g.n % 2:
        raise ValueError(f"{g} has no discrete series; U(lambda) is only defined for SO_4n")
    acc = KInf.zero()
    for x in w:
        acc = acc + KInf.I(int(2 * x))
    if g.series == "C":
        # the zero weight: 1 or eps, whichever makes the determinant trivial
        acc = acc + (KInf.one() if acc.det_is_one() else KInf.eps())
    assert acc.det_is_one() and acc.dim() == g.n_dual
    return acc


def central_character(g: GroupId, lam: Sequence[int]) -> int:
    """lambda(-1) for groups whose centre contains -1, else 1."""
    if not g.has_central_minus_one:
        return 1
    return -1 if sum(lam) % 2 else 1


def enumerate_dominant(g: GroupId, wbound: int) -> list[tuple]:
    """Lambda_G(w): dominant lambda with 2 w(lambda)_1 <= w, trivial central character, lambda_n >= 0."""
    rho1 = g.rho()[0]
    top = math.floor(Fraction(wbound, 2) - rho1)
    out = []
    if top < 0:
        return out

    def rec(prefix, cap):
        if len(prefix) == g.n:
            if central_character(g, prefix) == 1:
                out.append(tuple(prefix))
            return
        for v in range(cap, -1, -1):
            rec(prefix + [v], v)

    rec([], top)
    out.sort()
    return out


# cyclotomic polynomials --------------------------------------------------------------


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (coefficients low to high, den monic)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def poly_eval(p: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple:
    """Coefficients of Phi_m, low degree first."""
    if m < 1:
        raise ValueError("m must be >= 1")
    num = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            num = _poly_divexact(num, list(cyclotomic(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def euler_phi(m: int) -> int:
    return len(cyclotomic(m)) - 1


def _indices_up_to_degree(nmax: int) -> list[int]:
    # phi(m) >= sqrt(m / 2), so phi(m) <= nmax forces m <= 2 nmax^2
    return [m for m in range(1, 2 * nmax * nmax + 3) if euler_phi(m) <= nmax]


def _negated_index(m: int) -> int:
    """Phi_m(-X) = +-Phi_{m'}(X)."""
    if m % 2:
        return 2 * m
    if m % 4 == 2:
        return m // 2
    return m


# classes -----------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class CycloProduct:
    """prod Phi_m^{d_m}, stored as a sorted tuple of (m, d_m) with d_m > 0."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(sorted((int(m), int(d)) for m, d in self.factors if d))
        if any(m < 1 or d < 0 for m, d in fs) or len({m for m, _ in fs}) != len(fs):
            raise ValueError(f"bad cyclotomic factors {self.factors!r}")
        object.__setattr__(self, "factors", fs)

    @classmethod
    def from_map(cls, mapping) -> "CycloProduct":
        return cls(tuple(mapping.items()))

    def mult(self, m: int) -> int:
        return dict(self.factors).get(m, 0)

    @property
    def degree(self) -> int:
        return sum(euler_phi(m) * d for m, d in self.factors)

    def poly(self) -> list[int]:
        out = [1]
        for m, d in self.factors:
            for _ in range(d):
                out = _poly_mul(out, list(cyclotomic(m)))
        return out

    def value_at(self, x: int) -> int:
        acc = 1
        for m, d in self.factors:
            acc *= poly_eval(cyclotomic(m), x) ** d
        return acc

    def q_part(self) -> "CycloProduct":
        return CycloProduct(tuple((m, d) for m, d in self.factors if m >= 3))

    def order(self) -> int:
        return math.lcm(*(m for m, _ in self.factors)) if self.factors else 1

    def negate(self) -> "CycloProduct":
        """(-1)^deg P(-X)."""
        d: dict[int, int] = {}
        for m, k in self.factors:
            m2 = _negated_index(m)
            d[m2] = d.get(m2, 0) + k
        return CycloProduct.from_map(d)

    def text(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"phi{m}" if d == 1 else f"phi{m}^{d}" for m, d in self.factors)

    def __str__(self):
        return self.text()


_FACTOR = re.compile(r"^phi(\d+)(?:\^(\d+))?$")


def parse_class(text: str) -> CycloProduct:
    d: dict[int, int] = {}
    for part in text.strip().split("*"):
        m = _FACTOR.match(part.strip())
        if not m:
            raise ValueError(f"bad class factor {part!r} in {text!r}")
        idx = int(m.group(1))
        d[idx] = d.get(idx, 0) + int(m.group(2) or 1)
    return CycloProduct.from_map(d)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def in_P(g: GroupId, p: CycloProduct) -> bool:
    return p.degree == g.n_G and p.mult(2) % 2 == 0


def spinor_admissible(g: GroupId, p: CycloProduct) -> bool:
    """Membership in P_1(G): square conditions on Q(1), Q(-1) for special orthogonal groups."""
    if g.series == "C":
        return True
    q = p.q_part()
    a, b2 = p.mult(1), p.mult(2)
    if not _is_square(q.value_at(-1)) and b2 == 0:
        return False
    if not _is_square(q.value_at(1)) and a == 0:
        return False
    return True


def all_polynomials(g: GroupId) -> list[CycloProduct]:
    """P(G): products of cyclotomic polynomials of degree n_G with even multiplicity of Phi_2."""
    n = g.n_G
    idx = _indices_up_to_degree(n)
    out = []

    def rec(k, remaining, acc):
        if remaining == 0:
            out.append(CycloProduct(tuple(acc)))
            return
        if k == len(idx):
            return
        m = idx[k]
        deg = euler_phi(m)
        step = 2 if m == 2 else 1
        for d in range(0, remaining // deg + 1, step):
            rec(k + 1, remaining - d * deg, acc + [(m, d)] if d else acc)

    rec(0, n, [])
    return out


@dataclass(frozen=True)
class ClassRep:
    poly: CycloProduct
    e: int

    @property
    def text(self) -> str:
        return self.poly.text()


def _class_key(p: CycloProduct):
    return (p.order(), p.factors)


@lru_cache(maxsize=None)
def _classes(g: GroupId, spinor: bool) -> tuple:
    polys = set(all_polynomials(g))
    reps = []
    for p in polys:
        q = p.negate()
        partner = q if q in polys else p
        canon = min(p.factors, partner.factors)
        if canon != p.factors:
            continue
        if spinor and not spinor_admissible(g, p):
            continue
        reps.append(ClassRep(p, 1 if partner == p else 2))
    reps.sort(key=lambda r: _class_key(r.poly))
    return tuple(reps)


def enumerate_classes(g: GroupId, filter: str = "all") -> list[ClassRep]:
    """Representatives of P(G)/~ (filter="all") or P_1(G)/~ (filter="spinor"), with class sizes e_P."""
    if filter not in ("all", "spinor"):
        raise ValueError(f"unknown class filter {filter!r}")
    return list(_classes(g, filter == "spinor"))


# traces ------------------------------------------------------------------------------


@lru_cache(maxsize=4096)
def complete_symmetric(p: CycloProduct, kmax: int) -> tuple:
    """h_0..h_kmax of the roots of P, from 1 / (t^n P(1/t)) = sum h_k t^k."""
    coeffs = p.poly()
    n = len(coeffs) - 1
    r = [coeffs[n - j] for j in range(n + 1)]
    h = [1]
    for k in range(1, kmax + 1):
        h.append(-sum(r[j] * h[k - j] for j in range(1, min(k, n) + 1)))
    return tuple(h)


def _det(mat: list[list[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    n = len(mat)
    if n == 0:
        return 1
    a = [list(row) for row in mat]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _symplectic_character(h: Sequence[int], lam: Sequence[int]) -> int:
    def H(k):
        return h[k] if k >= 0 else 0

    size = len(lam)
    mat = []
    for i in range(1, size + 1):
        li = lam[i - 1]
        row = [H(li - i + 1)]
        for j in range(2, size + 1):
            row.append(H(li - i + j) + H(li - i - j + 2))
        mat.append(row)
    return _det(mat)


def _orthogonal_character(h: Sequence[int], lam: Sequence[int]) -> int:
    def H(k):
        return h[k] if k >= 0 else 0

    size = len(lam)
    mat = [[H(lam[i - 1] - i + j) - H(lam[i - 1] - i - j) for j in range(1, size + 1)] for i in range(1, size + 1)]
    return _det(mat)


def trace(p: CycloProduct, g: GroupId, lam: Sequence[int]) -> int:
    """tr(P; lambda), exact.  In series D with P(1)P(-1) != 0 both classes above P are summed."""
    lam = check_dominant(g, lam)
    if p.degree != g.n_G:
        raise ValueError(f"{p} has degree {p.degree}, expected {g.n_G}")
    part = [abs(x) for x in lam]
    while part and part[-1] == 0:
        part.pop()
    h = complete_symmetric(p, (part[0] if part else 0) + len(part) + 1)
    if g.series == "C":
        return _symplectic_character(h, part)
    val = _orthogonal_character(h, part)
    if g.series == "B":
        return val
    # the O(2n)-character equals tr(V_lam) + tr(V_theta(lam)) when lam_n != 0
    doubled = p.value_at(1) * p.value_at(-1) != 0
    num = val * (2 if doubled else 1)
    den = 2 if lam[-1] != 0 else 1
    if num % den:
        raise ArithmeticError(f"non-integral trace for {p} at {lam}")
    return num // den


def trace_matrix(g: GroupId, lams: Iterable[Sequence[int]], classes: Sequence[ClassRep]) -> list[list[int]]:
    """Rows lambda, columns P: e_P tr(P; lambda)."""
    return [[c.e * trace(c.poly, g, lam) for c in classes] for lam in lams]


# oracles ----------------------------------------------------------------------------


def weyl_dimension(g: GroupId, lam: Sequence[int]) -> int:
    lam = check_dominant(g, lam)
    rho = g.rho()
    lr = [Fraction(x) + r for x, r in zip(lam, rho)]
    num = den = Fraction(1)
    for a in g.positive_roots():
        num *= sum(x * y for x, y in zip(lr, a))
        den *= sum(x * y for x, y in zip(rho, a))
    val = num / den
    assert val.denominator == 1
    return int(val)


def freudenthal_multiplicities(g: GroupId, lam: Sequence[int]) -> dict:
    """Weight multiplicities of V_lambda by Freudenthal's recursion (independent of the trace code)."""
    lam = check_dominant(g, lam)
    n = g.n
    rho = g.rho()
    pos = g.positive_roots()
    bound = max(abs(x) for x in lam) if lam else 0

    def dot(a, b):
        return sum(Fraction(x) * y for x, y in zip(a, b))

    lr = tuple(Fraction(x) + r for x, r in zip(lam, rho))
    norm_lr = dot(lr, lr)
    parity = sum(lam) % 2
    cands = []
    for mu in itertools.product(range(-bound, bound + 1), repeat=n):
        if g.series in ("C", "D") and sum(mu) % 2 != parity:
            continue
        cands.append(mu)
    # higher weights first: mu + k alpha pairs larger with rho
    cands.sort(key=lambda mu: -dot(mu, rho))
    mult: dict = {}
    for mu in cands:
        if mu == lam:
            mult[mu] = 1
            continue
        mr = tuple(Fraction(x) + r for x, r in zip(mu, rho))
        den = norm_lr - dot(mr, mr)
        if den == 0:
            continue
        acc = Fraction(0)
        for a in pos:
            k = 1
            while True:
                nu = tuple(x + k * y for x, y in zip(mu, a))
                if any(abs(x) > bound for x in nu):
                    break
                m_nu = mult.get(nu, 0)
                if m_nu:
                    acc += m_nu * dot(nu, a)
                k += 1
        val = 2 * acc / den
        if val:
            assert val.denominator == 1 and val > 0
            mult[mu] = int(val)
    return mult


def torus_trace_oracle(p: CycloProduct, g: GroupId, lam: Sequence[int]) -> int:
    """tr(P; lambda) from Freudenthal multiplicities evaluated at an explicit torus element."""
    import numpy as np

    if p.degree != g.n_G:
        raise ValueError("degree mismatch")
    roots = []
    for m, d in p.factors:
        for k in range(1, m + 1):
            if math.gcd(k, m) == 1:
                roots += [Fraction(k, m)] * d
    # pair eigenvalues x, 1/x; for SO_odd one eigenvalue 1 is left over
    angles = sorted(r % 1 for r in roots)
    pairs = []
    pool = list(angles)
    if g.series == "B":
        pool.remove(Fraction(0))
    while pool:
        x = pool.pop(0)
        y = (-x) % 1
        pool.remove(y)
        pairs.append(x)
    assert len(pairs) == g.n
    mult = freudenthal_multiplicities(g, lam)

    def evaluate(ts):
        z = sum(c * cmath.exp(2j * cmath.pi * float(sum(Fraction(mu_i) * t for mu_i, t in zip(mu, ts)))) for mu, c in mult.items())
        return z

    total = evaluate(pairs)
    if g.series == "D" and p.value_at(1) * p.value_at(-1) != 0:
        total += evaluate(pairs[:-1] + [(-pairs[-1]) % 1])
    val = round(total.real)
    if abs(total.real - val) > 1e-6 or abs(total.imag) > 1e-6:
        raise ArithmeticError(f"oracle trace is not an integer: {total}")
    return int(np.int64(val))
