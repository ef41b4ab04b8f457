"""Command line interface: ``weilcert <command> ...``.

Exit status: 0 when every claim is proven or consistent, 2 when something is
inconclusive, 1 on a refuted claim or an error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import catalog as catalog_mod
from .explicit_formula import (
    CertificateError,
    builtin_certificate_paths,
    load_certificate,
    parse_grid,
    search,
    verify_certificate,
)
from .intervals import Tri
from .kinf import ParseError, format_kinf, parse_kinf

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(rows, fmt: str, out) -> None:
    """rows: list of (text line, tsv fields)."""
    for text, fields in rows:
        print(text if fmt == "text" else "\t".join(map(str, fields)), file=out)


def _catalog(args):
    return catalog_mod.load(args.catalog) if args.catalog else catalog_mod.builtin_L24()


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


# certify -------------------------------------------------------------------------------------


def cmd_certify(args, out) -> int:
    paths = [Path(p) for p in args.files]
    if args.builtin:
        paths += builtin_certificate_paths()
    if not paths:
        raise UsageError("certify needs at least one certificate file (or --builtin)")
    cat = _catalog(args)
    worst = EXIT_OK
    rows = []
    for path in paths:
        try:
            verdict = verify_certificate(load_certificate(path), cat, prec=args.prec)
        except (OSError, CertificateError, ValueError) as exc:
            rows.append((f"{path}: error: {exc}", [path, "Error", "", "", exc]))
            worst = EXIT_FAIL
            continue
        w = verdict.witness
        lo = hi = ""
        if w is not None:
            lo, hi = f"{float(w.lo_fraction()):.9f}", f"{float(w.hi_fraction()):.9f}"
        rows.append((f"{path}: {verdict}", [path, verdict.status.value, lo, hi, verdict.message]))
        if verdict.status is Tri.REFUTED:
            worst = EXIT_FAIL
        elif verdict.status is Tri.INCONCLUSIVE and worst == EXIT_OK:
            worst = EXIT_INCONCLUSIVE
    _emit(rows, args.format, out)
    return worst


# search --------------------------------------------------------------------------------------


def cmd_search(args, out) -> int:
    cat = _catalog(args)
    try:
        u = parse_kinf(args.param)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    known = [cat[n] for n in args.known]
    if args.known_upto is not None:
        names = {e.name for e in known}
        known += [e for e in cat if e.motivic_weight <= args.known_upto and e.name not in names]
    grid = parse_grid(args.grid) if args.grid else None
    cert = search(
        u,
        int(args.selfdual),
        args.mult,
        known,
        grid,
        args.budget,
        family=args.family,
        catalog=cat,
        prec=args.prec,
    )
    if cert is None:
        print(f"no certificate found for {format_kinf(u)}", file=out)
        return EXIT_INCONCLUSIVE
    text = cert.dumps()
    if args.output:
        Path(args.output).write_text(text)
        print(f"wrote {args.output}", file=out)
    else:
        out.write(text)
    return EXIT_OK


# enumerate -----------------------------------------------------------------------------------

_FILTERS = ("det1", "eps1", "multfree")


def _bound(args):
    if args.bound is None:
        return ("ratio", args.mult)
    if args.bound == "none":
        return None
    kind, _, value = args.bound.partition(":")
    if kind not in ("ratio", "abs") or not value:
        raise UsageError("--bound is ratio:<k>, abs:<c> or none")
    return (kind, _fraction(value))


def cmd_enumerate(args, out) -> int:
    from .effective_search import EnumerationQuery, Filters, NotPositiveDefinite, enumerate_effective
    from .odlyzko import TestFunctionSpec

    flags = set()
    for f in args.filter:
        flags.update(x for x in f.split(",") if x)
    unknown = flags - set(_FILTERS)
    if unknown:
        raise UsageError(f"unknown filter(s) {sorted(unknown)}; choose from {', '.join(_FILTERS)}")
    contains = []
    for c in args.contains:
        c = c[1:] if c.startswith("I") else c
        contains.append(int(c))
    filters = Filters(
        contains=tuple(contains),
        det_one="det1" in flags,
        eps_one="eps1" in flags,
        multiplicity_free="multfree" in flags,
        min_dim=args.min_dim,
    )
    query = EnumerationQuery(args.wmax, TestFunctionSpec(args.family, _fraction(args.ell)), _bound(args), filters, args.prec)
    try:
        res = enumerate_effective(query)
    except NotPositiveDefinite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    flagged = {format_kinf(u) for u in res.flagged}
    rows = []
    if args.list:
        for u in sorted(res.elements, key=lambda v: (v.dim(), format_kinf(v))):
            s = format_kinf(u)
            tag = " flagged" if s in flagged else ""
            rows.append((f"{s}{tag}", [s, int(bool(tag))]))
    rows.append((f"count={len(res.elements)} flagged={len(res.flagged)}", ["count", len(res.elements), len(res.flagged)]))
    _emit(rows, args.format, out)
    return EXIT_INCONCLUSIVE if res.flagged else EXIT_OK


# classes -------------------------------------------------------------------------------------


def _group(text):
    from .groups import GroupId

    try:
        return GroupId.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_classes(args, out) -> int:
    from .groups import enumerate_classes

    g = _group(args.group)
    classes = enumerate_classes(g, args.filter)
    rows = []
    if args.list:
        for c in classes:
            rows.append((f"class={c.text} e={c.e} order={c.poly.order()}", [c.text, c.e, c.poly.order()]))
    label = "P1(G)/~" if args.filter == "spinor" else "P(G)/~"
    rows.append((f"{g.name} |{label}| = {len(classes)}", [g.name, args.filter, len(classes)]))
    _emit(rows, args.format, out)
    return EXIT_OK


# masses --------------------------------------------------------------------------------------


def cmd_masses(args, out) -> int:
    from .groups import enumerate_classes
    from .masses import (
        SO3,
        Inconsistent,
        RankDeficient,
        load_targets,
        modular_dims_from_masses,
        so3_masses,
        solve_masses,
    )

    g = _group(args.group)
    try:
        if args.targets:
            table = solve_masses(load_targets(args.targets, g), enumerate_classes(g, args.filter))
        elif g == SO3:
            table = so3_masses()
        else:
            raise UsageError(f"masses for {g.name} need --targets (only SO3 has a built-in spectral side)")
    except RankDeficient as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except Inconsistent as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    rows = [(line, [c.text, c.e, f"{m.numerator}/{m.denominator}"]) for line, c, m in zip(table.lines(), table.classes, table.masses)]
    if args.kmax is not None:
        if g != SO3:
            raise UsageError("--kmax reads off dim S_k(SL2(Z)) and needs --group SO3")
        for k, n in modular_dims_from_masses(table, args.kmax):
            rows.append((f"dim S_{k} = {n}", ["dimS", k, n]))
    _emit(rows, args.format, out)
    return EXIT_OK


def cmd_vanishing(args, out) -> int:
    from .masses import select_vanishing_weights

    g = _group(args.group)
    grid = parse_grid(args.grid) if args.grid else None
    lams = select_vanishing_weights(g, args.wbound, grid, prec=args.prec, jobs=args.jobs)
    rows = [("lambda=" + ",".join(map(str, lam)), [",".join(map(str, lam))]) for lam in lams]
    rows.append((f"{g.name} w<={args.wbound} |Lambda_test| = {len(lams)}", [g.name, args.wbound, len(lams)]))
    _emit(rows, args.format, out)
    return EXIT_OK


# siegel --------------------------------------------------------------------------------------


def _genus_range(text: str | None, default_hi: int) -> range:
    if text is None:
        return range(1, default_hi + 1)
    lo, sep, hi = text.partition(":")
    try:
        return range(int(lo), int(hi) + 1) if sep else range(int(lo), int(lo) + 1)
    except ValueError:
        raise UsageError(f"bad genus range {text!r}") from None


def cmd_siegel(args, out) -> int:
    from .siegel import SiegelWeight, dimension, format_row, regular_table

    cat = _catalog(args)
    rows = []
    if args.weight:
        try:
            w = SiegelWeight.vector([int(x) for x in args.weight.split(",")])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        res = dimension(w, cat)
        rows = [(format_row(p, w), [p.text(), w.g, w.text()]) for p in res.cuspidal]
        rows.append((f"dim={res.dim} candidates={len(res.candidates)}", ["dim", res.dim, len(res.candidates)]))
    elif args.scalar:
        if args.k is None:
            raise UsageError("--scalar needs --k")
        total = 0
        for g in _genus_range(args.genus, 2 * args.k):
            w = SiegelWeight.of_scalar(args.k, g)
            for p in dimension(w, cat).cuspidal:
                rows.append((format_row(p, w), [p.text(), g, args.k]))
                total += 1
        rows.append((f"rows={total}", ["rows", total]))
    else:
        cands, accepted = regular_table(cat, args.kmax)
        rows = [(format_row(p, w), [p.text(), w.g, w.text()]) for p, w in accepted]
        rows.append((f"candidates={len(cands)} accepted={len(accepted)}", ["count", len(cands), len(accepted)]))
    _emit(rows, args.format, out)
    return EXIT_OK


# parser --------------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=int, default=None, help="working precision in bits (default $WEILCERT_PREC or 128)")
    common.add_argument("--catalog", help="catalog file replacing the built-in list of 27 representations")
    common.add_argument("--format", choices=("text", "tsv"), default="text")
    common.add_argument("--jobs", type=int, default=1)

    p = argparse.ArgumentParser(prog="weilcert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("certify", parents=[common], help="replay certificates with interval arithmetic")
    c.add_argument("files", nargs="*")
    c.add_argument("--builtin", action="store_true", help="also replay the shipped certificates")
    c.set_defaults(func=cmd_certify)

    s = sub.add_parser("search", parents=[common], help="look for a certificate excluding a parameter")
    s.add_argument("--param", required=True, help="Archimedean parameter, e.g. I23+I9")
    s.add_argument("--selfdual", type=int, choices=(0, 1), default=1)
    s.add_argument("--mult", type=int, default=1)
    s.add_argument("--known", nargs="*", default=[], help="catalog names assumed to exist")
    s.add_argument("--known-upto", type=int, default=None, help="add every catalog entry of motivic weight <= W")
    s.add_argument("--grid", help="ell grid 'lo:hi:step' or a comma list (default 1/2:20:1/4)")
    s.add_argument("--family", choices=("F", "G"), default="F")
    s.add_argument("--budget", type=int, default=None, help="largest face size tried by the minimiser")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_search)

    e = sub.add_parser("enumerate", parents=[common], help="effective parameters with small J(U.U)")
    e.add_argument("--wmax", type=int, required=True)
    e.add_argument("--ell", required=True)
    e.add_argument("--family", choices=("F", "G"), default="F")
    e.add_argument("--bound", help="ratio:<k> (J <= F^(i/4pi)/k), abs:<c> or none (default ratio:--mult)")
    e.add_argument("--mult", type=int, default=1)
    e.add_argument("--contains", action="append", default=[], help="required summand I<w>, repeatable")
    e.add_argument("--filter", action="append", default=[], help="comma list of det1, eps1, multfree")
    e.add_argument("--min-dim", type=int, default=0)
    e.add_argument("--list", action="store_true", help="print the elements, not only the count")
    e.set_defaults(func=cmd_enumerate)

    k = sub.add_parser("classes", parents=[common], help="torsion classes P(G)/~ of a classical group")
    k.add_argument("--group", required=True, help="SO<2n+1>, Sp<2n> or SO<2n>")
    k.add_argument("--filter", choices=("all", "spinor"), default="all")
    k.add_argument("--list", action="store_true")
    k.set_defaults(func=cmd_classes)

    m = sub.add_parser("masses", parents=[common], help="solve for masses of torsion classes")
    m.add_argument("--group", required=True)
    m.add_argument("--targets", help="file of 'lambda=<v> t_ell=<p/q>' lines")
    m.add_argument("--filter", choices=("all", "spinor"), default="all", help="unknown classes")
    m.add_argument("--kmax", type=int, default=None, help="(SO3) print dim S_k for k = 2, ..., 2 kmax + 2")
    m.set_defaults(func=cmd_masses)

    v = sub.add_parser("vanishing", parents=[common], help="weights excluded by the basic bound")
    v.add_argument("--group", required=True)
    v.add_argument("--wbound", type=int, required=True)
    v.add_argument("--grid")
    v.set_defaults(func=cmd_vanishing)

    g = sub.add_parser("siegel", parents=[common], help="Siegel cusp form parameters")
    g.add_argument("--weight", help="vector weight k1,...,kg")
    g.add_argument("--scalar", action="store_true")
    g.add_argument("--k", type=int)
    g.add_argument("--genus", help="genus or range lo:hi for --scalar (default 1:2k)")
    g.add_argument("--kmax", type=int, default=13, help="pooled table over k_1 <= kmax, k_g > g")
    g.set_defaults(func=cmd_siegel)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except (catalog_mod.CatalogError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
