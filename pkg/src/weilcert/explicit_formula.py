"""Quadratic forms attached to quadruples, face minimisation and certificates.

A quadruple lists r candidate parameters (U_i, delta_i, m_i): U_i is an
Archimedean parameter, delta_i = 1 when the representation is assumed
self-dual and m_i counts distinct representations sharing that parameter.
The associated symmetric form on R^r is

    beta(e_i, e_j) = F^(i/4pi) [i = j] / m_i - J(U_i U_j)
                     - F^(0) delta_i delta_j (1 - eps(U_i U_j)) / 4.

A nonnegative vector t with beta(t, t) < 0 rules out the existence of the
listed representations.  ``minimize`` looks for such vectors heuristically;
only ``verify_certificate`` decides, by evaluating beta(t, t) in interval
arithmetic.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .catalog import Catalog, CatalogEntry, builtin_L24
from .intervals import Interval, Tri
from .kinf import KInf, ParseError, format_kinf, parse_kinf
from .odlyzko import JTable, TestFunctionSpec, build_jtable, j_value

T_DENOMINATOR = 10**6
JACOBI_TOL = 1e-12
FACE_TOL = 1e-9


class CertificateError(ValueError):
    """A certificate that cannot be parsed or whose references do not resolve."""


@dataclass(frozen=True)
class QEntry:
    U: KInf
    delta: int = 1
    m: int = 1
    ref: str | None = None

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError("delta must be 0 or 1")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not self.U.is_effective():
            raise ValueError(f"{self.U} is not effective")


@dataclass(frozen=True)
class Quadruple:
    entries: tuple

    def __init__(self, entries: Iterable[QEntry]):
        object.__setattr__(self, "entries", tuple(entries))
        if not self.entries:
            raise ValueError("a quadruple needs at least one entry")

    @property
    def r(self) -> int:
        return len(self.entries)

    def required_wmax(self, subset: Sequence[int] | None = None) -> int:
        idx = range(self.r) if subset is None else subset
        return 2 * max(self.entries[i].U.motivic_weight() for i in idx)

    def collapse(self) -> "Quadruple":
        """Merge entries with equal (U, delta), adding their multiplicities."""
        merged: dict = {}
        order = []
        for e in self.entries:
            key = (e.U, e.delta)
            if key in merged:
                merged[key] = (merged[key][0], merged[key][1] + e.m)
            else:
                merged[key] = (e.ref, e.m)
                order.append(key)
        return Quadruple(QEntry(U, d, merged[(U, d)][1], merged[(U, d)][0]) for U, d in order)


@dataclass(frozen=True)
class Verdict:
    status: Tri
    witness: Interval | None = None
    message: str = ""

    @property
    def proven(self) -> bool:
        return self.status is Tri.PROVEN

    def __str__(self):
        w = "" if self.witness is None else " " + self.witness.format(6)
        m = f" ({self.message})" if self.message else ""
        return f"{self.status.value}{w}{m}"


# Gram matrices -------------------------------------------------------------------------


def _eps_sign(u: KInf) -> int:
    e = u.epsilon()
    if not e.is_real():
        raise ValueError(f"epsilon({u}) = {e} is not a sign; inconsistent self-duality data")
    return e.sign()


def gram(q: Quadruple, table: JTable, subset: Sequence[int] | None = None) -> list[list[Interval]]:
    """Interval Gram matrix of beta on the given index subset (default: all)."""
    idx = list(range(q.r)) if subset is None else list(subset)
    need = q.required_wmax(idx)
    if need > table.wmax:
        raise ValueError(f"table covers weights <= {table.wmax}, quadruple needs {need}")
    n = len(idx)
    out = [[None] * n for _ in range(n)]
    quarter_f0 = table.fhat0 * Fraction(1, 4)
    for a in range(n):
        ea = q.entries[idx[a]]
        for b in range(a, n):
            eb = q.entries[idx[b]]
            prod = ea.U * eb.U
            val = -j_value(table, prod)
            if ea.delta and eb.delta:
                val = val - quarter_f0 * (1 - _eps_sign(prod))
            if a == b:
                val = val + table.fhat_i4pi / ea.m
            out[a][b] = val
            out[b][a] = val
    return out


def beta_value(g: list[list[Interval]], t: Sequence[Fraction]) -> Interval:
    """beta(t, t) for exact rational t, as one interval."""
    n = len(t)
    acc = Interval(0, prec=g[0][0].prec)
    for a in range(n):
        if t[a]:
            acc = acc + g[a][a] * (t[a] * t[a])
        for b in range(a + 1, n):
            if t[a] and t[b]:
                acc = acc + g[a][b] * (2 * t[a] * t[b])
    return acc


def midpoint_matrix(g) -> np.ndarray:
    return np.array([[x.mid_float() for x in row] for row in g], dtype=float)


# minimisation ------------------------------------------------------------------------------


def jacobi_eigen(a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100):
    """Cyclic Jacobi method: eigenvalues and column eigenvectors of a symmetric matrix."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    scale = max(1.0, float(np.abs(a).max()) if n else 1.0)
    for _ in range(max_sweeps):
        off = math.sqrt(float(np.sum((a - np.diag(np.diag(a))) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for r in range(p + 1, n):
                apr = a[p, r]
                if abs(apr) <= 1e-300:
                    continue
                theta = (a[r, r] - a[p, p]) / (2 * apr)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1))
                c = 1 / math.sqrt(t * t + 1)
                s = t * c
                rot = np.eye(n)
                rot[p, p] = rot[r, r] = c
                rot[p, r] = s
                rot[r, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    return np.diag(a).copy(), v


@dataclass
class MinResult:
    mu: float
    subset: tuple = ()
    t: tuple = ()
    tried: int = 0

    @property
    def found(self) -> bool:
        return self.mu < 0


def _face_candidates(r: int, required: Sequence[int], max_size: int | None):
    required = sorted(set(required))
    others = [i for i in range(r) if i not in required]
    top = r if max_size is None else min(r, max_size)
    for size in range(max(1, len(required)), top + 1):
        for extra in itertools.combinations(others, size - len(required)):
            yield tuple(sorted(required + list(extra)))


def minimize_matrix(
    mat: np.ndarray, *, required: Sequence[int] = (), max_size: int | None = None, max_subsets: int | None = None
) -> MinResult:
    """Best negative face minimum of a symmetric matrix over faces of the nonnegative orthant."""
    r = mat.shape[0]
    best = MinResult(math.inf)
    tried = 0
    for face in _face_candidates(r, required, max_size):
        if max_subsets is not None and tried >= max_subsets:
            break
        tried += 1
        sub = mat[np.ix_(face, face)]
        vals, vecs = jacobi_eigen(sub)
        k = int(np.argmin(vals))
        lam = float(vals[k])
        vec = vecs[:, k]
        if vec.sum() < 0:
            vec = -vec
        if lam < best.mu and np.all(vec > FACE_TOL):
            best = MinResult(lam, face, tuple(float(x) for x in vec / np.linalg.norm(vec)))
    best.tried = tried
    return best


def minimize(
    q: Quadruple,
    table: JTable,
    subset_budget: int | None = None,
    *,
    required: Sequence[int] = (0,),
    max_subsets: int | None = None,
) -> MinResult:
    """Heuristic search for the most negative face minimum of beta.

    Faces (index subsets) always contain ``required`` and are tried by
    increasing size, up to ``subset_budget`` elements.
    """
    mat = midpoint_matrix(gram(q, table))
    return minimize_matrix(mat, required=required, max_size=subset_budget, max_subsets=max_subsets)


def rational_vector(t: Sequence[float], denominator: int = T_DENOMINATOR) -> tuple:
    out = []
    for x in t:
        k = max(1, round(x * denominator))
        out.append(Fraction(k, denominator))
    return tuple(out)


# certificates ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class CertEntry:
    """An entry of a certificate: a catalog reference or a literal parameter."""

    delta: int
    m: int
    ref: str | None = None
    U: KInf | None = None

    def __post_init__(self):
        if (self.ref is None) == (self.U is None):
            raise CertificateError("an entry is either a catalog reference or a literal parameter")

    def text(self) -> str:
        head = f"{self.ref}@catalog" if self.ref is not None else format_kinf(self.U)
        return f"entry {head} delta={self.delta} m={self.m}"


@dataclass(frozen=True)
class Certificate:
    family: str
    ell: Fraction
    entries: tuple
    subset: tuple
    t: tuple
    claimed_bound: str | None = None
    comment: str = field(default="", compare=False)

    @property
    def spec(self) -> TestFunctionSpec:
        return TestFunctionSpec(self.family, self.ell)

    def dumps(self) -> str:
        lines = []
        if self.comment:
            lines += [f"# {c}" for c in self.comment.splitlines()]
        lines.append(f"family {self.family}")
        lines.append(f"ell {self.ell.numerator}/{self.ell.denominator}")
        lines += [e.text() for e in self.entries]
        lines.append("I " + " ".join(str(i + 1) for i in self.subset))
        lines.append("t " + " ".join(f"{x.numerator}/{x.denominator}" for x in self.t))
        if self.claimed_bound is not None:
            lines.append(f"claimed_bound {self.claimed_bound}")
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())

    def resolve(self, catalog: Catalog | None = None) -> Quadruple:
        catalog = builtin_L24() if catalog is None else catalog
        out = []
        for e in self.entries:
            if e.ref is not None:
                try:
                    U = catalog[e.ref].L
                except Exception as exc:
                    raise CertificateError(str(exc)) from None
            else:
                U = e.U
            out.append(QEntry(U, e.delta, e.m, e.ref))
        return Quadruple(out)


_ENTRY = re.compile(r"^entry\s+(\S+)\s+delta=([01])\s+m=(\d+)$")
_RAT = re.compile(r"^-?\d+(?:/\d+)?$")


def _rational(tok: str, lineno: int) -> Fraction:
    if not _RAT.match(tok):
        raise CertificateError(f"line {lineno}: {tok!r} is not a rational number")
    return Fraction(tok)


def loads_certificate(text: str) -> Certificate:
    family = ell = subset = t = bound = None
    entries = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        key, _, rest = line.partition(" ")
        rest = rest.strip()
        if key == "family":
            family = rest
        elif key == "ell":
            ell = _rational(rest, lineno)
        elif key == "entry":
            m = _ENTRY.match(line)
            if not m:
                raise CertificateError(f"line {lineno}: bad entry {raw!r}")
            head, d, mult = m.groups()
            if int(mult) < 1:
                raise CertificateError(f"line {lineno}: m must be >= 1")
            if head.endswith("@catalog"):
                entries.append(CertEntry(int(d), int(mult), ref=head[: -len("@catalog")]))
            else:
                try:
                    entries.append(CertEntry(int(d), int(mult), U=parse_kinf(head)))
                except ParseError as exc:
                    raise CertificateError(f"line {lineno}: {exc}") from None
        elif key == "I":
            try:
                subset = tuple(int(x) - 1 for x in rest.split())
            except ValueError:
                raise CertificateError(f"line {lineno}: bad index list") from None
        elif key == "t":
            t = tuple(_rational(x, lineno) for x in rest.split())
        elif key == "claimed_bound":
            try:
                Decimal(rest)
            except InvalidOperation:
                raise CertificateError(f"line {lineno}: bad claimed_bound {rest!r}") from None
            bound = rest
        else:
            raise CertificateError(f"line {lineno}: unknown field {key!r}")
    missing = [n for n, v in (("family", family), ("ell", ell), ("I", subset), ("t", t)) if v is None]
    if missing or not entries:
        raise CertificateError("missing fields: " + ", ".join(missing or ["entry"]))
    try:
        spec = TestFunctionSpec(family, ell)
    except ValueError as exc:
        raise CertificateError(str(exc)) from None
    return Certificate(spec.family, spec.ell, tuple(entries), subset, t, bound, "\n".join(comments))


def load_certificate(path) -> Certificate:
    return loads_certificate(Path(path).read_text())


def builtin_certificate_paths() -> list[Path]:
    """The certificates shipped with the package (weight 22 exclusions)."""
    return sorted((Path(__file__).parent / "data" / "certificates").glob("*.cert"))


def _table_for(spec: TestFunctionSpec, wmax: int, prec: int | None) -> JTable:
    # round wmax up so nearby certificates share one cached table
    return build_jtable(spec, max(8, -(-wmax // 8) * 8), prec=prec)


def verify_certificate(cert: Certificate, catalog: Catalog | None = None, *, prec: int | None = None) -> Verdict:
    """Rigorous replay: Proven iff the interval beta(t, t) lies below 0 and below the claimed bound."""
    q = cert.resolve(catalog)
    sub = list(cert.subset)
    if not sub or len(set(sub)) != len(sub) or any(i < 0 or i >= q.r for i in sub):
        return Verdict(Tri.REFUTED, None, "index set is empty, repeated or out of range")
    if len(cert.t) != len(sub):
        return Verdict(Tri.REFUTED, None, "t and I have different lengths")
    if any(x < 0 for x in cert.t):
        return Verdict(Tri.REFUTED, None, "t has a negative coordinate")
    if not any(cert.t):
        return Verdict(Tri.REFUTED, None, "t is zero")
    table = _table_for(cert.spec, q.required_wmax(sub), prec)
    g = gram(q, table, sub)
    val = beta_value(g, cert.t)
    target = Fraction(0)
    if cert.claimed_bound is not None:
        target = min(target, Fraction(Decimal(cert.claimed_bound)))
    hi, lo = val.hi_fraction(), val.lo_fraction()
    if hi < 0 and (cert.claimed_bound is None or hi <= Fraction(Decimal(cert.claimed_bound))):
        return Verdict(Tri.PROVEN, val)
    if lo > target:
        return Verdict(Tri.REFUTED, val, "value is not below the claimed bound")
    return Verdict(Tri.INCONCLUSIVE, val, "interval straddles the bound; retry at higher precision")


def certificate_value(cert: Certificate, catalog: Catalog | None = None, *, prec: int | None = None) -> Interval:
    """beta(t, t) for the certificate's own (possibly unnormalised) t."""
    q = cert.resolve(catalog)
    table = _table_for(cert.spec, q.required_wmax(cert.subset), prec)
    return beta_value(gram(q, table, cert.subset), cert.t)


# basic inequality -----------------------------------------------------------------------------


def basic_bounds(u: KInf, table: JTable, m: int = 1) -> Verdict:
    """Proven when J(u.u) > F^(i/4pi)/m, which excludes m distinct representations with parameter u."""
    if not u.is_effective():
        raise ValueError(f"{u} is not effective")
    val = j_value(table, u * u) - table.fhat_i4pi / m
    status = val.is_positive()
    return Verdict(status, val)


# search ---------------------------------------------------------------------------------------


def default_ell_grid() -> list[Fraction]:
    return [Fraction(k, 4) for k in range(2, 81)]


def parse_grid(text: str) -> list[Fraction]:
    """'lo:hi:step' with exact rationals, or a comma separated list."""
    try:
        if ":" in text:
            lo, hi, step = (Fraction(x) for x in text.split(":"))
            if step <= 0 or hi < lo:
                raise ValueError
            n = int((hi - lo) / step)
            return [lo + k * step for k in range(n + 1)]
        return [Fraction(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad grid {text!r}") from None


def known_slots(known: Iterable[CatalogEntry]) -> list[QEntry]:
    """Group catalog entries with equal (L, sd) into one slot with multiplicity."""
    entries = [QEntry(e.L, int(e.self_dual), 1, e.name) for e in known]
    return list(Quadruple(entries).collapse().entries) if entries else []


def search(
    u: KInf,
    delta: int,
    m: int,
    known: Iterable[CatalogEntry | QEntry],
    ell_grid: Sequence | None = None,
    subset_budget: int | None = None,
    *,
    family: str = "F",
    catalog: Catalog | None = None,
    prec: int | None = None,
    max_subsets: int | None = None,
) -> Certificate | None:
    """Look for a verified certificate excluding m distinct representations with parameter u."""
    known = list(known)
    slots = known_slots([k for k in known if isinstance(k, CatalogEntry)])
    literal = [k for k in known if isinstance(k, QEntry)]
    if literal:
        slots += list(Quadruple(literal).collapse().entries)
    q = Quadruple([QEntry(u, delta, m)] + slots)
    grid = default_ell_grid() if ell_grid is None else [Fraction(x) for x in ell_grid]
    for ell in grid:
        spec = TestFunctionSpec(family, ell)
        table = _table_for(spec, q.required_wmax(), prec)
        res = minimize(q, table, subset_budget, required=(0,), max_subsets=max_subsets)
        if not res.found:
            continue
        cert = make_certificate(q, spec, res.subset, res.t)
        if verify_certificate(cert, catalog, prec=prec).proven:
            return cert
    return None


def make_certificate(q: Quadruple, spec: TestFunctionSpec, subset, t, claimed_bound: str | None = None, comment=""):
    entries = tuple(
        CertEntry(e.delta, e.m, ref=e.ref) if e.ref is not None else CertEntry(e.delta, e.m, U=e.U) for e in q.entries
    )
    return Certificate(spec.family, spec.ell, entries, tuple(subset), rational_vector(t), claimed_bound, comment)


def exclude_double(w: int, known_mult: int, ell=Fraction(5), *, prec: int | None = None) -> Verdict:
    """Exclude a representation with parameter 2 I_w, given ``known_mult`` eigenforms with parameter I_w.

    With no known forms the basic inequality is enough; otherwise a certificate is searched at ``ell``.
    """
    u = KInf.I(w) + KInf.I(w)
    spec = TestFunctionSpec("F", Fraction(ell))
    if known_mult == 0:
        return basic_bounds(u, _table_for(spec, 2 * w, prec))
    cert = search(u, 1, 1, [QEntry(KInf.I(w), 1, known_mult)], [spec.ell], prec=prec)
    if cert is None:
        return Verdict(Tri.INCONCLUSIVE, None, "no certificate found")
    return verify_certificate(cert, prec=prec)

