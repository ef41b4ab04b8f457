from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weilcert.catalog import builtin_L24
from weilcert.explicit_formula import (
    CertificateError,
    QEntry,
    Quadruple,
    basic_bounds,
    beta_value,
    builtin_certificate_paths,
    certificate_value,
    exclude_double,
    gram,
    jacobi_eigen,
    known_slots,
    load_certificate,
    loads_certificate,
    minimize,
    parse_grid,
    search,
    verify_certificate,
)
from weilcert.intervals import Tri
from weilcert.kinf import parse_kinf
from weilcert.odlyzko import TestFunctionSpec, build_jtable

CAT = builtin_L24()
F4 = TestFunctionSpec("F", Fraction(4))

CERT_TEXT = """\
# sample
family F
ell 4/1
entry I22+I16+1 delta=1 m=1
entry Delta19@catalog delta=1 m=1
entry Sym2Delta11@catalog delta=1 m=1
I 1 2 3
t 31243/50000 76437/125000 485409/1000000
claimed_bound -0.426
"""


@pytest.fixture(scope="module")
def table4():
    return build_jtable(F4, 48)


def test_certificate_roundtrip():
    cert = loads_certificate(CERT_TEXT)
    assert cert.family == "F" and cert.ell == 4 and cert.subset == (0, 1, 2)
    assert loads_certificate(cert.dumps()) == cert


def test_certificate_verifies():
    v = verify_certificate(loads_certificate(CERT_TEXT), CAT)
    assert v.status is Tri.PROVEN
    assert abs(float(v.witness.mid_float()) + 0.4278) < 1e-3


@pytest.mark.parametrize(
    "old, new, status",
    [
        ("claimed_bound -0.426", "claimed_bound -0.9", Tri.REFUTED),
        ("t 31243/50000 76437/125000 485409/1000000", "t 0 1 0", Tri.REFUTED),
        ("t 31243/50000 76437/125000 485409/1000000", "t 1 -1 1", Tri.REFUTED),
        ("I 1 2 3", "I 1 2 2", Tri.REFUTED),
        ("I 1 2 3", "I 1 2", Tri.REFUTED),
    ],
)
def test_tampered_certificates_fail(old, new, status):
    cert = loads_certificate(CERT_TEXT.replace(old, new))
    assert verify_certificate(cert, CAT).status is status


@pytest.mark.parametrize(
    "old, new",
    [
        ("family F", "family H"),
        ("ell 4/1", "ell four"),
        ("entry Delta19@catalog delta=1 m=1", "entry Delta19@catalog delta=2 m=1"),
        ("entry I22+I16+1", "entry I22+J16"),
        ("claimed_bound -0.426", "claimed_bound x"),
        ("I 1 2 3", "I a b"),
        ("family F\n", ""),
    ],
)
def test_malformed_certificates(old, new):
    with pytest.raises(CertificateError):
        loads_certificate(CERT_TEXT.replace(old, new))


def test_unresolved_reference():
    cert = loads_certificate(CERT_TEXT.replace("Delta19@", "Delta13@"))
    with pytest.raises(CertificateError):
        cert.resolve(CAT)


def test_shipped_certificates():
    paths = builtin_certificate_paths()
    assert len(paths) == 10
    for p in paths:
        assert verify_certificate(load_certificate(p), CAT).proven, p.name


def test_collapse_merges_multiplicities():
    u = parse_kinf("I11")
    q = Quadruple([QEntry(u, 1, 1), QEntry(parse_kinf("I15"), 1, 1), QEntry(u, 1, 2), QEntry(u, 0, 1)])
    c = q.collapse()
    assert [(str(e.U), e.delta, e.m) for e in c.entries] == [("I11", 1, 3), ("I15", 1, 1), ("I11", 0, 1)]
    slots = known_slots([CAT["Delta23a"], CAT["Delta23b"], CAT["Delta11"]])
    assert [(str(e.U), e.m) for e in slots] == [("I23", 2), ("I11", 1)]


fractions01 = st.fractions(min_value=0, max_value=1, max_denominator=1000)


@settings(max_examples=25, deadline=None)
@given(fractions01, fractions01)
def test_collapse_never_increases_beta(a, b):
    table = build_jtable(F4, 48)
    u = parse_kinf("I22+I12")
    split = Quadruple([QEntry(u, 1, 1), QEntry(u, 1, 1)])
    merged = split.collapse()
    lhs = beta_value(gram(merged, table), [a + b])
    rhs = beta_value(gram(split, table), [a, b])
    assert lhs.hi_fraction() <= rhs.hi_fraction() + Fraction(1, 10**20)
    if a == b:
        assert lhs.overlaps(rhs)


@settings(max_examples=25, deadline=None)
@given(st.lists(fractions01, min_size=3, max_size=3))
def test_self_duality_only_lowers_beta(t):
    table = build_jtable(F4, 48)
    us = [parse_kinf("I22+I16+I2"), CAT["Delta19"].L, CAT["Delta15"].L]
    with_sd = Quadruple(QEntry(u, 1, 1) for u in us)
    without = Quadruple(QEntry(u, 0, 1) for u in us)
    assert beta_value(gram(with_sd, table), t).lo_fraction() <= beta_value(gram(without, table), t).hi_fraction()


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(7)
    a = rng.normal(size=(6, 6))
    a = a + a.T
    vals, vecs = jacobi_eigen(a)
    assert np.allclose(sorted(vals), np.linalg.eigvalsh(a), atol=1e-10)
    assert np.allclose(a @ vecs, vecs * vals, atol=1e-9)


def test_minimize_finds_known_face(table4):
    q = Quadruple([QEntry(parse_kinf("I22+I16+1")), QEntry(CAT["Delta19"].L), QEntry(CAT["Sym2Delta11"].L)])
    res = minimize(q, table4)
    assert res.found and res.subset == (0, 1, 2)
    assert res.mu < -0.4


@pytest.mark.parametrize("name", ["1", "Delta11", "Delta17", "Delta21_9", "Sym2Delta11", "Delta23_7"])
def test_basic_bound_never_excludes_an_existing_form(name):
    u = CAT[name].L
    for ell in (Fraction(2), Fraction(4), Fraction(8)):
        t = build_jtable(TestFunctionSpec("F", ell), 48)
        assert basic_bounds(u, t).status is not Tri.PROVEN


@pytest.mark.parametrize("w", [1, 3, 9, 13])
def test_basic_bound_excludes_small_weights(w):
    assert exclude_double(w, 0).proven


def test_search_excludes_double_I11():
    assert exclude_double(11, 1).proven


def test_search_respects_grid():
    assert search(parse_kinf("I11"), 1, 1, [], [Fraction(4)]) is None


@pytest.mark.parametrize(
    "text, expected",
    [("1/2:1:1/4", [Fraction(1, 2), Fraction(3, 4), Fraction(1)]), ("4,9.74", [Fraction(4), Fraction(487, 50)])],
)
def test_parse_grid(text, expected):
    assert parse_grid(text) == expected


@pytest.mark.parametrize("text", ["1:0:1", "1:2:0", "a"])
def test_parse_grid_rejects(text):
    with pytest.raises(ValueError):
        parse_grid(text)


def test_certificate_value_is_the_witness():
    cert = loads_certificate(CERT_TEXT)
    assert certificate_value(cert, CAT).overlaps(verify_certificate(cert, CAT).witness)


@pytest.mark.parametrize("name", CAT.names)
def test_no_certificate_against_a_catalog_entry(name):
    entry = CAT[name]
    others = [e for e in CAT if e.name != name]
    assert search(entry.L, 1, 1, others, [Fraction(2), Fraction(4), Fraction(7)], 3, catalog=CAT) is None
