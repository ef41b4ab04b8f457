"""The Grothendieck ring of Archimedean parameters.

Elements are integer combinations of the trivial character 1, the sign
character eps and the two-dimensional representations I_w (w > 0).  The
product is determined by eps^2 = 1, eps I_w = I_w and
I_a I_b = I_{a+b} + I_{|a-b|}, where I_0 stands for 1 + eps.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class ParseError(ValueError):
    pass


class NotEffectiveError(ValueError):
    pass


@dataclass(frozen=True)
class FourthRoot:
    """i**k for k in Z/4."""

    k: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % 4)

    def __mul__(self, other: "FourthRoot") -> "FourthRoot":
        return FourthRoot(self.k + other.k)

    def __pow__(self, n: int) -> "FourthRoot":
        return FourthRoot(self.k * n)

    def is_real(self) -> bool:
        return self.k % 2 == 0

    def sign(self) -> int:
        """+1 or -1; only for real values."""
        if not self.is_real():
            raise ValueError(f"{self} is not real")
        return 1 if self.k == 0 else -1

    def __str__(self):
        return ("1", "i", "-1", "-i")[self.k]


class KInf:
    """Immutable element c_one * 1 + c_eps * eps + sum c_I[w] * I_w."""

    __slots__ = ("c_one", "c_eps", "c_I", "_hash")

    def __init__(self, c_one: int = 0, c_eps: int = 0, c_I: Mapping[int, int] | None = None):
        one, eps = int(c_one), int(c_eps)
        terms: dict[int, int] = {}
        for w, c in (c_I or {}).items():
            w, c = int(w), int(c)
            if w < 0:
                raise ValueError("I_w needs w >= 0 (use I_{|w|})")
            if c == 0:
                continue
            if w == 0:
                one += c
                eps += c
                continue
            terms[w] = terms.get(w, 0) + c
        self.c_one = one
        self.c_eps = eps
        self.c_I = tuple(sorted(((w, c) for w, c in terms.items() if c), reverse=True))
        self._hash = None

    # constructors -------------------------------------------------------------

    @classmethod
    def one(cls) -> "KInf":
        return cls(1, 0)

    @classmethod
    def eps(cls) -> "KInf":
        return cls(0, 1)

    @classmethod
    def I(cls, w: int) -> "KInf":
        return cls(0, 0, {w: 1})

    @classmethod
    def zero(cls) -> "KInf":
        return cls()

    @classmethod
    def parse(cls, text: str) -> "KInf":
        return parse_kinf(text)

    # basic structure --------------------------------------------------------------

    @property
    def I_coeffs(self) -> dict[int, int]:
        return dict(self.c_I)

    def coeff_I(self, w: int) -> int:
        for v, c in self.c_I:
            if v == w:
                return c
        return 0

    def _key(self):
        return (self.c_one, self.c_eps, self.c_I)

    def __eq__(self, other):
        return isinstance(other, KInf) and self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __add__(self, other: "KInf") -> "KInf":
        d = dict(self.c_I)
        for w, c in other.c_I:
            d[w] = d.get(w, 0) + c
        return KInf(self.c_one + other.c_one, self.c_eps + other.c_eps, d)

    def __neg__(self) -> "KInf":
        return KInf(-self.c_one, -self.c_eps, {w: -c for w, c in self.c_I})

    def __sub__(self, other: "KInf") -> "KInf":
        return self + (-other)

    def scale(self, n: int) -> "KInf":
        return KInf(n * self.c_one, n * self.c_eps, {w: n * c for w, c in self.c_I})

    def __rmul__(self, n):
        if isinstance(n, int):
            return self.scale(n)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    def __bool__(self):
        return bool(self.c_one or self.c_eps or self.c_I)

    # invariants ----------------------------------------------------------------------

    def dim(self) -> int:
        return self.c_one + self.c_eps + 2 * sum(c for _, c in self.c_I)

    def is_effective(self) -> bool:
        return self.c_one >= 0 and self.c_eps >= 0 and all(c >= 0 for _, c in self.c_I)

    def det_exponent(self) -> int:
        """det U = eps^(returned value mod 2), using det I_v = eps^(v+1)."""
        return (sum((v + 1) * c for v, c in self.c_I) + self.c_eps) % 2

    def det_is_one(self) -> bool:
        return self.det_exponent() == 0

    def motivic_weight(self) -> int:
        ws = [w for w, c in self.c_I if c > 0]
        return max(ws) if ws else 0

    def doubled_weights(self) -> list[int]:
        """Weights times two, as a sorted multiset (needs an effective element)."""
        if not self.is_effective():
            raise NotEffectiveError(str(self))
        out = [0] * (self.c_one + self.c_eps)
        for w, c in self.c_I:
            out += [w, -w] * c
        return sorted(out)

    def weights(self) -> list[Fraction]:
        return [Fraction(x, 2) for x in self.doubled_weights()]

    def is_regular(self) -> bool:
        if not self.is_effective():
            raise NotEffectiveError(str(self))
        return self.c_one <= 1 and self.c_eps <= 1 and all(c <= 1 for _, c in self.c_I)

    def epsilon(self) -> FourthRoot:
        """Archimedean root number: eps(1)=1, eps(eps)=i, eps(I_w)=i^(w+1), multiplicative on sums."""
        return FourthRoot(self.c_eps + sum((w + 1) * c for w, c in self.c_I))

    def contains(self, other: "KInf") -> bool:
        return (self - other).is_effective()

    def gamma_factors(self) -> list[tuple[str, Fraction, int]]:
        """Symbolic Gamma factor: (kind, shift, multiplicity) with
        Gamma(s, 1) = G_R(s), Gamma(s, eps) = G_R(s+1), Gamma(s, I_w) = G_C(s + w/2)."""
        out = []
        if self.c_one:
            out.append(("R", Fraction(0), self.c_one))
        if self.c_eps:
            out.append(("R", Fraction(1), self.c_eps))
        for w, c in self.c_I:
            out.append(("C", Fraction(w, 2), c))
        return out

    def support_weights(self) -> list[int]:
        return [w for w, _ in self.c_I]

    # text ----------------------------------------------------------------------------

    def __str__(self):
        return format_kinf(self)

    def __repr__(self):
        return f"KInf({format_kinf(self)!r})"


def multiply(u: KInf, v: KInf) -> KInf:
    one = u.c_one * v.c_one + u.c_eps * v.c_eps
    eps = u.c_one * v.c_eps + u.c_eps * v.c_one
    terms: dict[int, int] = {}

    def add(w, c):
        terms[w] = terms.get(w, 0) + c

    su = u.c_one + u.c_eps
    sv = v.c_one + v.c_eps
    for w, c in v.c_I:
        add(w, su * c)
    for w, c in u.c_I:
        add(w, sv * c)
    for a, ca in u.c_I:
        for b, cb in v.c_I:
            add(a + b, ca * cb)
            add(abs(a - b), ca * cb)
    return KInf(one, eps, terms)


def symplectic_or_orthogonal(motivic_weight: int) -> str:
    """Duality type forced by the parity of the motivic weight."""
    return "symplectic" if motivic_weight % 2 else "orthogonal"


def basis_leq(w: int) -> list[KInf]:
    """Basis of the subgroup of elements of motivic weight <= w (parity of w),
    ordered by decreasing weight, then 1, eps."""
    out = [KInf.I(v) for v in range(w, 0, -1) if (w - v) % 2 == 0]
    if w % 2 == 0:
        out += [KInf.one(), KInf.eps()]
    return out


def from_coordinates(basis: list[KInf], coords: Iterable[int]) -> KInf:
    acc = KInf.zero()
    for b, c in zip(basis, coords):
        if c:
            acc = acc + b.scale(c)
    return acc


_TERM = re.compile(r"^(?:(-?\d+)\*)?(I\d+|1|eps)$")


def parse_kinf(text: str) -> KInf:
    s = text.replace(" ", "")
    if not s:
        raise ParseError("empty K-infinity expression")
    if s == "0":
        return KInf.zero()
    acc_one = acc_eps = 0
    terms: dict[int, int] = {}
    for part in s.split("+"):
        m = _TERM.match(part)
        if not m:
            raise ParseError(f"bad term {part!r} in {text!r}")
        coeff = int(m.group(1)) if m.group(1) is not None else 1
        sym = m.group(2)
        if sym == "1":
            acc_one += coeff
        elif sym == "eps":
            acc_eps += coeff
        else:
            w = int(sym[1:])
            if w == 0:
                raise ParseError("I0 is not allowed; write 1+eps")
            terms[w] = terms.get(w, 0) + coeff
    return KInf(acc_one, acc_eps, terms)


def format_kinf(u: KInf) -> str:
    parts = []

    def term(c, sym):
        if c == 1:
            parts.append(sym)
        elif c != 0:
            parts.append(f"{c}*{sym}")

    for w, c in u.c_I:
        term(c, f"I{w}")
    term(u.c_one, "1")
    term(u.c_eps, "eps")
    return "+".join(parts) if parts else "0"
