"""Level one Arthur parameters for Sp_2g and dimensions of Siegel cusp form spaces.

A parameter psi = sum_i pi_i[d_i] is built from catalog entries.  Its
infinitesimal character is the multiset of numbers w + (d_i - 1)/2 - r for
w a weight of pi_i and 0 <= r < d_i.  A Siegel weight determines that
multiset, so candidate parameters are found by exact cover.  A candidate is
accepted when Arthur's multiplicity formula holds, i.e. the global character
eps_psi agrees with the local character chi of the holomorphic module on the
generators of C_psi.  The local character is evaluated for both classes of
Whittaker datum (the sign delta) and the two results must agree.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

from .catalog import Catalog, CatalogEntry, builtin_L24
from .kinf import KInf

KMAX_SUPPORTED = 13


class DeltaDependence(AssertionError):
    """The restriction of chi to C_psi changed with the Whittaker sign (a bug)."""


class UnsupportedShape(ValueError):
    pass


# weights -------------------------------------------------------------------------------------


@dataclass(frozen=True)
class SiegelWeight:
    """Either a vector k_1 >= ... >= k_g, or a scalar weight k in genus g (stored as (k,)*g)."""

    k: tuple
    scalar: bool = False

    def __post_init__(self):
        k = tuple(int(x) for x in self.k)
        if not k:
            raise ValueError("genus must be >= 1")
        if any(k[i] < k[i + 1] for i in range(len(k) - 1)):
            raise ValueError(f"weight {k} is not non-increasing")
        if self.scalar and len(set(k)) != 1:
            raise ValueError("a scalar weight has equal entries")
        object.__setattr__(self, "k", k)

    @classmethod
    def vector(cls, k: Sequence[int]) -> "SiegelWeight":
        k = tuple(k)
        return cls(k, scalar=len(set(k)) == 1)

    @classmethod
    def of_scalar(cls, k: int, g: int) -> "SiegelWeight":
        return cls((k,) * g, scalar=True)

    @property
    def g(self) -> int:
        return len(self.k)

    @property
    def k1(self) -> int:
        return self.k[0]

    @property
    def regular(self) -> bool:
        return self.k[-1] > self.g

    def eigenvalues(self) -> Counter:
        """Doubled eigenvalues: 0 and +-2(k_i - i)."""
        c = Counter({0: 1})
        for i, ki in enumerate(self.k, start=1):
            c[2 * (ki - i)] += 1
            c[-2 * (ki - i)] += 1
        return c

    def text(self) -> str:
        return ",".join(map(str, self.k))


# parameters ---------------------------------------------------------------------------------


def _doubled_weights(L: KInf) -> list[int]:
    return L.doubled_weights()


@dataclass(frozen=True)
class Summand:
    entry: CatalogEntry
    d: int

    @property
    def n(self) -> int:
        return self.entry.dim

    @property
    def nd(self) -> int:
        return self.n * self.d

    def eigenvalues(self) -> list[int]:
        out = []
        for w in _doubled_weights(self.entry.L):
            for r in range(self.d):
                out.append(w + (self.d - 1) - 2 * r)
        return out

    def top(self) -> int:
        return max(self.eigenvalues())

    def has_zero_weight(self) -> bool:
        return self.entry.L.c_one + self.entry.L.c_eps > 0

    def positive_weights(self) -> list[int]:
        """Doubled positive weights of pi."""
        return [w for w in _doubled_weights(self.entry.L) if w > 0]

    def text(self) -> str:
        if self.entry.name == "1":
            return f"[{self.d}]"
        return self.entry.name if self.d == 1 else f"{self.entry.name}[{self.d}]"


@dataclass(frozen=True)
class ArthurParameter:
    summands: tuple

    def __post_init__(self):
        keys = [(s.entry.name, s.d) for s in self.summands]
        if len(set(keys)) != len(keys):
            raise ValueError("summands of an Arthur parameter are pairwise distinct")
        for s in self.summands:
            if s.d < 1:
                raise ValueError("d must be >= 1")
            orth = s.entry.duality_type == "orthogonal"
            if orth != (s.d % 2 == 1):
                raise ValueError(f"{s.text()}: orthogonal pi needs odd d, symplectic pi needs even d")
        order = sorted(self.summands, key=lambda s: (-s.top(), s.entry.name, s.d))
        object.__setattr__(self, "summands", tuple(order))

    @property
    def dim(self) -> int:
        return sum(s.nd for s in self.summands)

    @property
    def g(self) -> int:
        if self.dim % 2 == 0:
            raise ValueError("an Sp_2g parameter has odd dimension")
        return (self.dim - 1) // 2

    def eigenvalues(self) -> Counter:
        c = Counter()
        for s in self.summands:
            c.update(s.eigenvalues())
        return c

    @property
    def I_even(self) -> list[int]:
        return [i for i, s in enumerate(self.summands) if s.nd % 2 == 0]

    @property
    def I_odd(self) -> list[int]:
        return [i for i, s in enumerate(self.summands) if s.nd % 2 == 1]

    @property
    def I_zero(self) -> list[int]:
        return [i for i, s in enumerate(self.summands) if s.has_zero_weight()]

    def text(self) -> str:
        return "+".join(s.text() for s in self.summands)

    def __str__(self):
        return self.text()


def root_number_pair(a: CatalogEntry, b: CatalogEntry) -> int:
    """eps(pi_a x pi_b), the Archimedean root number of L(pi_a) L(pi_b)."""
    return (a.L * b.L).epsilon().sign()


def epsilon_signs(psi: ArthurParameter) -> list[int]:
    """eps(i) = prod_{j != i} eps(pi_i x pi_j)^min(d_i, d_j)."""
    out = []
    for i, si in enumerate(psi.summands):
        acc = 1
        for j, sj in enumerate(psi.summands):
            if j != i and min(si.d, sj.d) % 2:
                acc *= root_number_pair(si.entry, sj.entry)
        out.append(acc)
    return out


def epsilon_character(psi: ArthurParameter) -> dict:
    """eps_psi on the generators: ('s', i) for i in I_even and ('s', i, j) for i < j in I_odd."""
    eps = epsilon_signs(psi)
    out = {}
    for i in psi.I_even:
        out[("s", i)] = eps[i]
    odd = psi.I_odd
    for a in range(len(odd)):
        for b in range(a + 1, len(odd)):
            i, j = odd[a], odd[b]
            out[("s", i, j)] = eps[i] * eps[j]
    return out


# exact cover ------------------------------------------------------------------------------------


def _summand_candidates(catalog: Catalog, target: Counter, dmax: int) -> list[Summand]:
    out = []
    for e in catalog:
        for d in range(1, dmax + 1):
            if (e.duality_type == "orthogonal") != (d % 2 == 1):
                continue
            s = Summand(e, d)
            ev = Counter(s.eigenvalues())
            if any(v % 2 for v in ev):
                continue
            if all(target[v] >= c for v, c in ev.items()):
                out.append(s)
    return out


def parameters_with_eigenvalues(target: Counter, catalog: Catalog | None = None) -> list[ArthurParameter]:
    """All parameters built from the catalog whose doubled eigenvalue multiset is ``target``."""
    catalog = builtin_L24() if catalog is None else catalog
    size = sum(target.values())
    cands = _summand_candidates(catalog, target, size)
    by_top: dict[int, list[tuple[int, Summand, Counter]]] = {}
    for idx, s in enumerate(cands):
        by_top.setdefault(s.top(), []).append((idx, s, Counter(s.eigenvalues())))
    found = set()
    out = []

    def rec(remaining: Counter, used: tuple):
        if not +remaining:
            key = tuple(sorted(used))
            if key not in found:
                found.add(key)
                out.append(ArthurParameter(tuple(cands[i] for i in key)))
            return
        v = max(x for x, c in remaining.items() if c > 0)
        for idx, s, ev in by_top.get(v, []):
            if idx in used:
                continue
            if all(remaining[x] >= c for x, c in ev.items()):
                rec(remaining - ev, used + (idx,))

    rec(Counter(target), ())
    out.sort(key=lambda p: p.text())
    return out


# the regular (vector-valued) case -----------------------------------------------------------------

_ODD_CENTRES = ("1", "Sym2Delta11", "Oo24_16_8")


def _regular_shape_ok(psi: ArthurParameter) -> bool:
    # all eigenvalues distinct and a unique odd summand, with d = 1 (holomorphic module in the packet)
    if any(c > 1 for c in psi.eigenvalues().values()):
        return False
    odd = psi.I_odd
    if len(odd) != 1:
        return False
    s0 = psi.summands[odd[0]]
    return s0.d == 1 and s0.n % 2 == 1


def weight_of_regular(psi: ArthurParameter) -> SiegelWeight:
    pos = sorted((v // 2 for v in psi.eigenvalues() if v > 0), reverse=True)
    return SiegelWeight.vector([e + i for i, e in enumerate(pos, start=1)])


def enumerate_regular(catalog: Catalog | None = None, kmax: int = KMAX_SUPPORTED) -> list[tuple[ArthurParameter, SiegelWeight]]:
    """All (psi, k) with k_g > g >= 1, k_1 <= kmax and psi built from the catalog with rho_k in its packet."""
    if kmax > KMAX_SUPPORTED:
        raise ValueError(f"k_1 <= {KMAX_SUPPORTED} is the range where the catalog is complete")
    catalog = builtin_L24() if catalog is None else catalog
    top = 2 * (kmax - 1)
    cands = []
    for e in catalog:
        for d in range(1, top + 2):
            if (e.duality_type == "orthogonal") != (d % 2 == 1):
                continue
            s = Summand(e, d)
            ev = s.eigenvalues()
            if any(v % 2 for v in ev) or max(ev) > top or len(set(ev)) != len(ev):
                continue
            if s.nd % 2 == 1 and (d != 1 or 0 not in ev):
                continue
            cands.append(s)
    odd = [s for s in cands if s.nd % 2 == 1]
    even = [s for s in cands if s.nd % 2 == 0]
    out = []

    def rec(k, chosen, used):
        if k == len(even):
            if len(chosen) > 1 or chosen[0].entry.name != "1":
                psi = ArthurParameter(tuple(chosen))
                if _regular_shape_ok(psi):
                    out.append((psi, weight_of_regular(psi)))
            return
        rec(k + 1, chosen, used)
        ev = set(even[k].eigenvalues())
        if not (ev & used):
            rec(k + 1, chosen + [even[k]], used | ev)

    for s0 in odd:
        rec(0, [s0], set(s0.eigenvalues()))
    out.sort(key=lambda t: (t[1].g, tuple(-x for x in t[1].k), t[0].text()))
    return out


def chi_regular(psi: ArthurParameter, weight: SiegelWeight, delta: int = 1) -> dict | None:
    """chi_rho_k on C_psi for k_g > g; None when rho_k is not in the packet (d_{i0} != 1)."""
    if not _regular_shape_ok(psi):
        return None
    out = {}
    g = weight.g
    for i in psi.I_even:
        s = psi.summands[i]
        if s.d % 2 == 0:
            out[("s", i)] = (-1) ** (s.nd // 4)
        else:
            # e_i: odd j <= g with k_j - j a weight of pi_i (the parity of j does not matter)
            parity = 1 if delta == 1 else 0
            weights = set(s.positive_weights()) | {-w for w in s.positive_weights()}
            e = sum(1 for j in range(1, g + 1) if j % 2 == parity and 2 * (weight.k[j - 1] - j) in weights)
            out[("s", i)] = (-1) ** e
    return out


# the scalar case g >= k --------------------------------------------------------------------------


def _sign_sequence(case: str, k: int, g: int, delta: int) -> dict:
    """frak s_j for the indices j of the alternating sign sequence of the given case."""
    seq = {}
    if case == "I":
        for i in range(1, g + 1):
            seq[k - i] = delta * (-1) ** (i - 1)
    elif case == "H1":
        for i in range(1, k + 1):
            seq[k - i] = delta * (-1) ** (i - 1)
    elif case == "H2":
        omit = g - k + 1
        for i in range(1, k + 1):
            j = k - i
            if j == omit:
                continue
            seq[j] = delta * (-1) ** (i - 1) if j > omit else delta * (-1) ** i
    else:
        raise ValueError(case)
    return seq


def e_count(s: Summand, case: str, k: int, g: int, sign: int) -> int:
    """e_s(pi_i): number of positions j of the given parity whose weight w_j is a weight of pi_i."""
    pos = set(s.positive_weights())
    if case in ("I", "H1"):
        return sum(1 for j in range(1, k) if (-1) ** j == sign and 2 * (k - j) in pos)
    # case H2: w_1 > ... > w_{k'-1} is k-1, ..., 1 with g-k+1 omitted
    ws = [w for w in range(k - 1, 0, -1) if w != g - k + 1]
    return sum(1 for j, w in enumerate(ws, start=1) if (-1) ** j == sign and 2 * w in pos)


def _case_I(psi: ArthurParameter, k: int, g: int):
    z = psi.I_zero
    if len(z) != 1:
        return None
    i0 = z[0]
    s0 = psi.summands[i0]
    if s0.d != 1 or s0.entry.L.c_one + s0.entry.L.c_eps != 1:
        return None
    if max(psi.summands[i].d for i in z) != 1:
        return None
    if not k - 1 > g - k:
        return None
    chain = []
    for s in psi.summands:
        for w in s.positive_weights():
            for r in range(s.d):
                chain.append(w + (s.d - 1) - 2 * r)
    if sorted(chain) != [2 * x for x in range(k - g, k)]:
        return None
    return i0


def _case_H(psi: ArthurParameter, k: int, g: int, which: str):
    z = psi.I_zero
    if not z:
        return None
    dmax = max(psi.summands[i].d for i in z)
    need = 2 * (g - k) + (1 if which == "H1" else 3)
    power = k if which == "H1" else k - 1
    for i in z:
        s = psi.summands[i]
        if s.d != dmax or dmax != need:
            continue
        L = s.entry.L
        # L(pi_i0) contains eps^power
        if (L.c_eps if power % 2 else L.c_one) >= 1:
            return i
    return None


def classify_scalar(psi: ArthurParameter, k: int, g: int) -> tuple[str, int] | None:
    """('I' | 'H1' | 'H2', i0) when rho_k(g) lies in the packet of psi, else None.

    When (I) and (H1) both hold (only for k = g) the (H1) formulas are used; they agree with (I).
    """
    for case in ("H1", "H2"):
        i0 = _case_H(psi, k, g, case)
        if i0 is not None:
            return case, i0
    i0 = _case_I(psi, k, g)
    if i0 is not None:
        return "I", i0
    return None


def _pair_property(a: CatalogEntry, b: CatalogEntry) -> bool:
    """L(pi_a) + L(pi_b) contains 1 + eps."""
    L = a.L + b.L
    return L.c_one >= 1 and L.c_eps >= 1


def _floor_half(x: int) -> int:
    return x // 2


def chi_scalar(psi: ArthurParameter, k: int, g: int, delta: int) -> dict | None:
    cls = classify_scalar(psi, k, g)
    if cls is None:
        return None
    case, i0 = cls
    kp = k - 1 if case == "H2" else k
    S = psi.summands

    def e(i):
        return e_count(S[i], case, k, g, delta)

    out = {}
    zero = set(psi.I_zero)
    for i in psi.I_even:
        s = S[i]
        if case == "I" or (i != i0 and i not in zero):
            out[("s", i)] = (-1) ** (s.nd // 4) if s.d % 2 == 0 else (-1) ** e(i)
        elif i != i0:
            if s.d != 1:
                raise UnsupportedShape(f"{psi}: zero-weight summand with d > 1 outside i0")
            out[("s", i)] = (-1) ** e(i) * delta * (-1) ** (kp - 1)
        else:
            if s.n % 4 == 0:
                out[("s", i)] = (-1) ** e(i) * delta * (-1) ** (k - 1)
            else:
                out[("s", i)] = (-1) ** e(i)
    odd = psi.I_odd
    if len(odd) == 1:
        return out
    if case == "I" or len(odd) != 3 or i0 not in odd:
        raise UnsupportedShape(f"{psi}: unexpected odd part for case {case}")
    rest = [i for i in odd if i != i0]
    # i1 has d = 1, i2 = the other one (d = 2a - 1)
    rest.sort(key=lambda i: (S[i].d, i))
    i1, i2 = rest
    if S[i1].d != 1:
        raise UnsupportedShape(f"{psi}: no odd summand with d = 1 besides i0")
    a = (S[i2].d + 1) // 2
    chi12 = (-1) ** (e(i1) + e(i2) + _floor_half(delta * (-1) ** (kp - a) * a))
    if _pair_property(S[i0].entry, S[i2].entry):
        chi02 = (-1) ** (e(i0) + e(i2)) * delta * (-1) ** (k - 1)
    else:
        chi02 = (-1) ** (e(i0) + e(i2)) * (-1) ** (k - kp)
    chi01 = chi02 * chi12
    vals = {frozenset((i1, i2)): chi12, frozenset((i0, i2)): chi02, frozenset((i0, i1)): chi01}
    for x in range(len(odd)):
        for y in range(x + 1, len(odd)):
            out[("s", odd[x], odd[y])] = vals[frozenset((odd[x], odd[y]))]
    return out


# the multiplicity formula ---------------------------------------------------------------------------


def chi_character(psi: ArthurParameter, weight: SiegelWeight) -> dict | None:
    """chi restricted to C_psi (None if rho is not in the packet); checked at both Whittaker signs."""
    vals = []
    for delta in (1, -1):
        if weight.regular:
            vals.append(chi_regular(psi, weight, delta))
        else:
            vals.append(chi_scalar(psi, weight.k1, weight.g, delta))
    if vals[0] != vals[1]:
        raise DeltaDependence(f"{psi} at k={weight.text()}: chi depends on the Whittaker sign")
    return vals[0]


def satisfies_amf(psi: ArthurParameter, weight: SiegelWeight) -> bool:
    chi = chi_character(psi, weight)
    if chi is None:
        return False
    eps = epsilon_character(psi)
    return all(eps[key] == chi[key] for key in eps)


@dataclass
class SiegelResult:
    weight: SiegelWeight
    candidates: list = field(default_factory=list)
    square_integrable: list = field(default_factory=list)
    cuspidal: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.cuspidal)


def theta_degree(psi_rest: Sequence[Summand], k: int) -> int | None:
    """Smallest g0 with [2k - 1 - 2 g0] a summand; Delta11[12] alone has degree 12."""
    if len(psi_rest) == 1 and psi_rest[0].entry.name == "Delta11" and psi_rest[0].d == 12:
        return 12
    for g0 in range(0, k):
        if any(s.entry.name == "1" and s.d == 2 * k - 1 - 2 * g0 for s in psi_rest):
            return g0
    return None


def is_cuspidal(psi: ArthurParameter, weight: SiegelWeight) -> bool:
    if weight.regular:
        return True
    k, g = weight.k1, weight.g
    if k % 2:
        return True  # M_k = S_k for odd k
    case, i0 = classify_scalar(psi, k, g)
    if case == "I":
        return True
    if case == "H1":
        rest = [s for i, s in enumerate(psi.summands) if i != i0]
        g0 = theta_degree(rest, k)
        if g0 is None:
            raise UnsupportedShape(f"{psi}: cannot read off the theta degree")
        return g == g0
    raise UnsupportedShape(f"{psi}: case (H2) with even k")


def enumerate_parameters(weight: SiegelWeight, catalog: Catalog | None = None) -> list[ArthurParameter]:
    if weight.k1 > KMAX_SUPPORTED:
        raise ValueError(f"k_1 = {weight.k1} > {KMAX_SUPPORTED}: the catalog is only complete up to motivic weight 24")
    if not weight.regular and not weight.scalar:
        raise ValueError("only scalar weights or weights with k_g > g are supported")
    params = parameters_with_eigenvalues(weight.eigenvalues(), catalog)
    if weight.regular:
        return [p for p in params if _regular_shape_ok(p)]
    return [p for p in params if classify_scalar(p, weight.k1, weight.g) is not None]


def dimension(weight: SiegelWeight, catalog: Catalog | None = None) -> SiegelResult:
    """dim S_k(Gamma_g) as the number of accepted parameters."""
    res = SiegelResult(weight)
    if weight.scalar and (weight.k1 * weight.g) % 2:
        return res  # -1 in Gamma_g kills every form of odd weight k in odd genus
    res.candidates = enumerate_parameters(weight, catalog)
    for psi in res.candidates:
        if satisfies_amf(psi, weight):
            res.square_integrable.append(psi)
            if is_cuspidal(psi, weight):
                res.cuspidal.append(psi)
    return res


def regular_table(catalog: Catalog | None = None, kmax: int = KMAX_SUPPORTED):
    """(candidates, accepted) pooled over all weights with k_g > g and k_1 <= kmax."""
    cands = enumerate_regular(catalog, kmax)
    accepted = [(psi, w) for psi, w in cands if satisfies_amf(psi, w)]
    return cands, accepted


def scalar_table(k: int, gmax: int | None = None, catalog: Catalog | None = None) -> list[tuple[ArthurParameter, SiegelWeight]]:
    """Cuspidal eigenform parameters of scalar weight k in genus 1..gmax (default 2k)."""
    gmax = 2 * k if gmax is None else gmax
    rows = []
    for g in range(1, gmax + 1):
        w = SiegelWeight.of_scalar(k, g)
        for psi in dimension(w, catalog).cuspidal:
            rows.append((psi, w))
    return rows


def format_row(psi: ArthurParameter, weight: SiegelWeight) -> str:
    k = str(weight.k1) if weight.scalar else weight.text()
    return f"psi={psi.text()} g={weight.g} k={k}"


_ROW = re.compile(r"^psi=(\S+)\s+g=(\d+)\s+k=(\S+)$")


def parse_row(line: str) -> tuple[str, int, tuple]:
    m = _ROW.match(line.strip())
    if not m:
        raise ValueError(f"bad table row {line!r}")
    g = int(m.group(2))
    ks = tuple(int(x) for x in m.group(3).split(","))
    if len(ks) == 1 and g > 1:
        ks = ks * g
    return m.group(1), g, ks


def parse_parameter(text: str, catalog: Catalog | None = None) -> ArthurParameter:
    """Inverse of ArthurParameter.text: 'Delta19_7[2]+[1]'."""
    catalog = builtin_L24() if catalog is None else catalog
    out = []
    for part in text.split("+"):
        m = re.fullmatch(r"(\w*)(?:\[(\d+)\])?", part.strip())
        if not m or (not m.group(1) and not m.group(2)):
            raise ValueError(f"bad summand {part!r}")
        name = m.group(1) or "1"
        d = int(m.group(2) or 1)
        out.append(Summand(catalog[name], d))
    return ArthurParameter(tuple(out))
