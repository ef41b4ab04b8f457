"""Registry of known algebraic cuspidal representations and their Archimedean parameters."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .kinf import KInf, ParseError, format_kinf, parse_kinf, symplectic_or_orthogonal

TYPE_CODES = {"S": "symplectic", "O": "orthogonal", "N": "none"}
_CODE_OF = {v: k for k, v in TYPE_CODES.items()}


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    L: KInf
    self_dual: bool = True
    duality_type: str = "orthogonal"

    def __post_init__(self):
        if not self.L.is_effective():
            raise CatalogError(f"{self.name}: L must be effective")
        if not self.L.det_is_one():
            raise CatalogError(f"{self.name}: det L must be 1")
        if self.duality_type not in _CODE_OF:
            raise CatalogError(f"{self.name}: unknown duality type {self.duality_type!r}")
        if self.self_dual and self.duality_type == "none":
            raise CatalogError(f"{self.name}: self-dual entries need a duality type")
        if self.self_dual and self.L.is_regular() and self.L.dim() > 1:
            expected = symplectic_or_orthogonal(self.L.motivic_weight())
            if expected != self.duality_type:
                raise CatalogError(f"{self.name}: duality type contradicts motivic weight parity")

    @property
    def dim(self) -> int:
        return self.L.dim()

    @property
    def motivic_weight(self) -> int:
        return self.L.motivic_weight()

    def to_line(self) -> str:
        return f"{self.name} sd={int(self.self_dual)} type={_CODE_OF[self.duality_type]} L={format_kinf(self.L)}"


def _delta(*weights: int) -> KInf:
    acc = KInf.zero()
    for w in weights:
        acc = acc + KInf.I(w)
    return acc


def _builtin_rows():
    S, O = "symplectic", "orthogonal"
    rows = [("1", KInf.one(), O)]
    for w in (11, 15, 17, 19):
        rows.append((f"Delta{w}", _delta(w), S))
    rows.append(("Delta19_7", _delta(19, 7), S))
    rows.append(("Delta21", _delta(21), S))
    for v in (5, 9, 13):
        rows.append((f"Delta21_{v}", _delta(21, v), S))
    rows.append(("Sym2Delta11", _delta(22) + KInf.eps(), O))
    rows.append(("Delta23a", _delta(23), S))
    rows.append(("Delta23b", _delta(23), S))
    for rest in ((7,), (9,), (13,), (13, 5), (15, 3), (15, 7), (17, 5), (19, 3), (17, 9), (19, 11), (21, 17, 11, 3)):
        rows.append(("Delta23_" + "_".join(map(str, rest)), _delta(23, *rest), S))
    rows.append(("Oo24_16_8", _delta(24, 16, 8) + KInf.eps(), O))
    rows.append(("Oe24_18_10_4", _delta(24, 18, 10, 4), O))
    rows.append(("Oe24_20_14_2", _delta(24, 20, 14, 2), O))
    return rows


class Catalog:
    """Ordered, immutable collection of entries with lookup by name."""

    def __init__(self, entries: Iterable[CatalogEntry]):
        self._entries = list(entries)
        self._by_name = {}
        for e in self._entries:
            if e.name in self._by_name:
                raise CatalogError(f"duplicate catalog name {e.name!r}")
            self._by_name[e.name] = e

    def __iter__(self) -> Iterator[CatalogEntry]:
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, name: str) -> CatalogEntry:
        try:
            return self._by_name[name]
        except KeyError:
            raise CatalogError(f"unknown catalog entry {name!r}") from None

    def __contains__(self, name):
        return name in self._by_name

    def __eq__(self, other):
        return isinstance(other, Catalog) and self._entries == other._entries

    @property
    def names(self) -> list[str]:
        return [e.name for e in self._entries]

    def with_max_weight(self, w: int) -> "Catalog":
        return Catalog(e for e in self._entries if e.motivic_weight <= w)

    def select(self, names: Iterable[str]) -> list[CatalogEntry]:
        return [self[n] for n in names]

    def dumps(self) -> str:
        return "".join(e.to_line() + "\n" for e in self._entries)

    def save(self, path) -> None:
        Path(path).write_text(self.dumps())


def builtin_L24() -> Catalog:
    """The 27 known level-one algebraic regular self-dual representations of motivic weight <= 24."""
    return Catalog(CatalogEntry(name, L, True, t) for name, L, t in _builtin_rows())


_LINE = re.compile(r"^(\S+)\s+sd=([01])\s+type=([SON])\s+L=(\S+)$")


def loads(text: str) -> Catalog:
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise CatalogError(f"line {lineno}: cannot parse {raw!r}")
        name, sd, code, ltext = m.groups()
        try:
            L = parse_kinf(ltext)
        except ParseError as exc:
            raise CatalogError(f"line {lineno}: {exc}") from None
        try:
            entries.append(CatalogEntry(name, L, sd == "1", TYPE_CODES[code]))
        except CatalogError as exc:
            raise CatalogError(f"line {lineno}: {exc}") from None
    try:
        return Catalog(entries)
    except CatalogError as exc:
        raise CatalogError(str(exc)) from None


def load(path) -> Catalog:
    return loads(Path(path).read_text())


def save(catalog: Catalog, path) -> None:
    catalog.save(path)
