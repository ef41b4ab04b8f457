"""End-to-end acceptance checks, one test per criterion.

Reference values are frozen here and every computed value goes through the
same public API as the CLI.  The summary at
the end of the pytest run lists PASS/FAIL per criterion.
"""

import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

from weilcert.catalog import builtin_L24
from weilcert.effective_search import EnumerationQuery, Filters, certify_positive_definite, enumerate_effective
from weilcert.explicit_formula import builtin_certificate_paths, exclude_double, load_certificate, verify_certificate
from weilcert.groups import GroupId, enumerate_classes
from weilcert.masses import dim_cusp_forms_oracle, modular_dims_from_masses, so3_masses
from weilcert.masses import select_vanishing_weights
from weilcert.odlyzko import TestFunctionSpec
from weilcert.siegel import SiegelWeight, dimension, format_row, regular_table, scalar_table

ROOT = Path(__file__).resolve().parent.parent


class Checks:
    """Collects named sub-checks so a red criterion says exactly what differed."""

    def __init__(self):
        self.failures = []
        self.start = time.perf_counter()

    def eq(self, label, got, want):
        if got != want:
            self.failures.append(f"{label}: got {got}, expected {want}")

    def true(self, label, ok, note=""):
        if not ok:
            self.failures.append(f"{label}{': ' + note if note else ''}")

    def runtime(self, limit):
        secs = time.perf_counter() - self.start
        self.true(f"runtime {secs:.1f}s > {limit}s", secs <= limit)
        return secs

    def finish(self, number, criterion, limit, summary):
        secs = self.runtime(limit)
        ok = not self.failures
        detail = summary if ok else "; ".join(self.failures)
        criterion(number, ok, f"{detail} [{secs:.1f}s]")
        assert ok, detail


def test_criterion_1_so3_masses(criterion):
    c = Checks()
    table = so3_masses()
    c.eq("masses", list(table.masses), [Fraction(-1, 12), Fraction(1, 4), Fraction(1, 3), Fraction(0), Fraction(0)])
    dims = dict(modular_dims_from_masses(table, 11))
    got = [dims[k] for k in range(12, 25, 2)]
    c.eq("dim S_k, k=12..24", got, [1, 0, 1, 1, 1, 1, 2])
    c.eq("oracle", got, [dim_cusp_forms_oracle(k) for k in range(12, 25, 2)])
    c.finish(1, criterion, 1, "SO3 masses -1/12, 1/4, 1/3, 0, 0; dim S_12..S_24 = 1,0,1,1,1,1,2")


# reference values of |P(G)/~| and |P_1(G)/~|
SP_CLASSES = {2: 3, 4: 12, 6: 32, 8: 92, 10: 219, 12: 530, 14: 1157, 16: 2521}
SO_CLASSES = {
    3: (5, 3),
    4: (12, 6),
    5: (19, 12),
    7: (59, 34),
    8: (92, 40),
    9: (165, 99),
    11: (419, 244),
    12: (530, 211),
    13: (1001, 598),
    15: (2257, 1339),
    16: (2521, 992),
    17: (4877, 2948),
}


def test_criterion_2_class_counts(criterion):
    c = Checks()
    for n, want in SP_CLASSES.items():
        c.eq(f"Sp{n}", len(enumerate_classes(GroupId.parse(f"Sp{n}"))), want)
    for n, (want, want1) in SO_CLASSES.items():
        g = GroupId.parse(f"SO{n}")
        c.eq(f"SO{n}", len(enumerate_classes(g)), want)
        c.eq(f"SO{n} spinor", len(enumerate_classes(g, "spinor")), want1)
    c.finish(2, criterion, 30, f"all {len(SP_CLASSES) + 2 * len(SO_CLASSES)} table entries match")


ENUMERATIONS = [
    ("158", 158, EnumerationQuery(22, TestFunctionSpec("F", Fraction("4.38")), ("ratio", 1), Filters(contains=(22,), det_one=True))),
    ("265", 265, EnumerationQuery(23, TestFunctionSpec("F", Fraction("9.74")), ("ratio", 2), Filters(contains=(23,)))),
    (
        "1260",
        1260,
        EnumerationQuery(
            24,
            TestFunctionSpec("F", Fraction(4)),
            None,
            Filters(contains=(24,), det_one=True, eps_one=True, multiplicity_free=True, min_dim=13),
        ),
    ),
]


def test_criterion_3_effective_enumeration(criterion):
    c = Checks()
    parts = []
    for label, want, query in ENUMERATIONS:
        t0 = time.perf_counter()
        res = enumerate_effective(query)
        secs = time.perf_counter() - t0
        c.eq(f"count {label}", len(res.elements), want)
        c.eq(f"flagged {label}", len(res.flagged), 0)
        c.true(f"{label} took {secs:.0f}s", secs <= 300)
        parts.append(f"{len(res.elements)}")
    c.finish(3, criterion, 900, "counts " + "/".join(parts) + ", no borderline flags")


TABLE_VALUES = [-0.427, -0.511, -0.204, -0.037, -0.246, -0.204, -0.047]
PAIR_VALUES = {"weight22_pair_I22_I10.cert": -0.198, "weight22_pair_I22_I12.cert": -0.173}


def test_criterion_4_certificate_replay(criterion):
    c = Checks()
    cat = builtin_L24()
    by_name = {p.name: p for p in builtin_certificate_paths()}
    expected = {f"weight22_table_{i}.cert": v for i, v in enumerate(TABLE_VALUES, start=1)}
    expected.update(PAIR_VALUES)
    for name, value in expected.items():
        cert = load_certificate(by_name[name])
        verdict = verify_certificate(cert, cat)
        c.true(name, verdict.proven, str(verdict.status))
        if verdict.witness is not None:
            lo, hi = float(verdict.witness.lo_fraction()), float(verdict.witness.hi_fraction())
            c.true(f"{name} witness [{lo:.5f}, {hi:.5f}]", lo >= value - 1e-3 and hi <= value + 1e-3)
        if name in PAIR_VALUES:
            c.eq(f"{name} ell", cert.ell, Fraction(7, 2))
    c.finish(4, criterion, 10, "7 table certificates and 2 pair certificates Proven within 1e-3")


def test_criterion_5_double_sweep(criterion):
    c = Checks()
    for w in range(1, 54, 2):
        verdict = exclude_double(w, dim_cusp_forms_oracle(w + 1), Fraction(5))
        c.true(f"2I_{w}", verdict.proven, str(verdict.status))
    c.finish(5, criterion, 120, "2I_w excluded for every odd w <= 53 at ell = 5")


def test_criterion_6_positive_definite(criterion):
    c = Checks()
    c.true("K<=22 at 4.38", certify_positive_definite(22, TestFunctionSpec("F", Fraction("4.38"))))
    c.true("K<=23 at 9.74", certify_positive_definite(23, TestFunctionSpec("F", Fraction("9.74"))))
    c.finish(6, criterion, 60, "interval Cholesky succeeds on K<=22 (4.38) and K<=23 (9.74)")


def _golden(name):
    lines = (line.strip() for line in (ROOT / "tests" / "data" / name).read_text().splitlines())
    return sorted(line for line in lines if line and not line.startswith("#"))


def test_criterion_7_siegel_tables(criterion):
    c = Checks()
    cands, accepted = regular_table()
    c.eq("pooled candidates", len(cands), 199)
    c.eq("pooled accepted", len(accepted), 59)
    vector = sorted(format_row(p, w) for p, w in accepted if not w.scalar)
    c.true("vector-valued table", vector == _golden("siegel_vector_table.txt"))
    scalar = sorted(format_row(p, w) for k in range(1, 14) for p, w in scalar_table(k))
    c.true("scalar-valued table", scalar == _golden("siegel_scalar_table.txt"))
    dims13 = {g for g in range(1, 27) if dimension(SiegelWeight.of_scalar(13, g)).dim}
    c.eq("genera with dim S_13 = 1", dims13, {8, 12, 16, 24})
    c.eq("dim S_12(Gamma_12)", dimension(SiegelWeight.of_scalar(12, 12)).dim, 1)
    c.finish(7, criterion, 60, "199/59 pooled; both tables row-for-row; weight 13 and 12 dimensions")


VANISHING = [("SO3", 5, 3), ("Sp2", 14, 4), ("SO4", 26, 30), ("SO5", 23, 44), ("Sp4", 28, 28)]


def test_criterion_8_vanishing_weights(criterion):
    c = Checks()
    grid = [Fraction(k, 4) for k in range(2, 81)]
    for name, w, want in VANISHING:
        c.eq(f"({name},{w})", len(select_vanishing_weights(GroupId.parse(name), w, grid)), want)
    c.finish(8, criterion, 900, "Lambda_test sizes 3, 4, 30, 44, 28")


PROPERTY_SUITES = [
    "tests/test_kinf.py",
    "tests/test_effective_search.py::test_fincke_pohst_matches_brute_force",
    "tests/test_groups.py::test_traces_match_torus_oracle",
    "tests/test_groups.py::test_freudenthal_total_is_weyl_dimension",
    "tests/test_siegel.py::test_regular_candidates_are_delta_independent",
    "tests/test_siegel.py::test_scalar_candidates_are_delta_independent",
    "tests/test_siegel.py::test_epsilon_is_a_character_on_odd_pairs",
    "tests/test_explicit_formula.py::test_collapse_never_increases_beta",
    "tests/test_explicit_formula.py::test_self_duality_only_lowers_beta",
    "tests/test_explicit_formula.py::test_no_certificate_against_a_catalog_entry",
    "tests/test_explicit_formula.py::test_basic_bound_never_excludes_an_existing_form",
]


def test_criterion_9_property_suites(criterion):
    c = Checks()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", *PROPERTY_SUITES],
        cwd=ROOT,
        capture_output=True,
        text=True,
    )
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    c.true("property suites", proc.returncode == 0, tail)
    c.finish(9, criterion, 600, f"{len(PROPERTY_SUITES)} property suites: {tail}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))
