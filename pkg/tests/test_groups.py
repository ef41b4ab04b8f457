import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weilcert.groups import (
    CycloProduct,
    GroupId,
    all_polynomials,
    cyclotomic,
    enumerate_classes,
    enumerate_dominant,
    freudenthal_multiplicities,
    in_P,
    parse_class,
    spinor_admissible,
    torus_trace_oracle,
    trace,
    u_of_lambda,
    weyl_dimension,
)

sympy = pytest.importorskip("sympy")
X = sympy.symbols("X")


def _sympy_classes(n):
    """Class count of P(G) via sympy's cyclotomic polynomials, for an independent check."""
    ms = [m for m in range(1, 4 * n + 8) if sympy.totient(m) <= n]
    factorisations = []

    def rec(k, rem, acc):
        if rem == 0:
            factorisations.append(acc)
            return
        if k == len(ms):
            return
        d = int(sympy.totient(ms[k]))
        for e in range(rem // d + 1):
            rec(k + 1, rem - e * d, acc + [(ms[k], e)] if e else acc)

    rec(0, n, [])
    polys = set()
    for f in factorisations:
        if dict(f).get(2, 0) % 2:
            continue
        p = sympy.Integer(1)
        for m, e in f:
            p *= sympy.cyclotomic_poly(m, X) ** e
        polys.add(tuple(sympy.Poly(p, X).all_coeffs()))
    seen, count = set(), 0
    for c in polys:
        if c in seen:
            continue
        q = sympy.Poly(sympy.expand((-1) ** n * sympy.Poly(c, X).as_expr().subs(X, -X)), X)
        seen.update({c, tuple(q.all_coeffs())})
        count += 1
    return len(polys), count


@pytest.mark.parametrize("name", ["Sp2", "SO3", "Sp4", "SO5", "Sp6", "SO8", "SO9", "Sp10"])
def test_class_counts_match_sympy(name):
    g = GroupId.parse(name)
    n_polys, n_classes = _sympy_classes(g.n_G)
    assert len(all_polynomials(g)) == n_polys
    classes = enumerate_classes(g)
    assert len(classes) == n_classes
    assert sum(c.e for c in classes) == n_polys


@pytest.mark.parametrize("m", range(1, 40))
def test_cyclotomic_matches_sympy(m):
    assert list(cyclotomic(m)) == [int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, X), X).all_coeffs())]


@pytest.mark.parametrize("text", ["SO7", "Sp4", "SO_8", "Sp_2"])
def test_group_roundtrip(text):
    g = GroupId.parse(text)
    assert GroupId.parse(str(g)) == g


@pytest.mark.parametrize("text", ["Sp3", "SO2", "SO1", "GL3", "Sp0"])
def test_group_parse_errors(text):
    with pytest.raises(ValueError):
        GroupId.parse(text)


def test_class_text_roundtrip():
    for c in enumerate_classes(GroupId.parse("SO9")):
        assert parse_class(c.text) == c.poly
    assert parse_class("phi1*phi1*phi3") == CycloProduct(((1, 2), (3, 1)))
    with pytest.raises(ValueError):
        parse_class("phi1*psi2")


def test_negation_is_an_involution():
    g = GroupId.parse("Sp8")
    for p in all_polynomials(g):
        assert p.negate().negate() == p
        assert p.negate().degree == p.degree
        assert in_P(g, p.negate())


def test_spinor_filter():
    g = GroupId.parse("SO3")
    assert len(enumerate_classes(g, "spinor")) <= len(enumerate_classes(g))
    assert all(spinor_admissible(GroupId.parse("Sp6"), c.poly) for c in enumerate_classes(GroupId.parse("Sp6")))
    # Q = Phi_3: Q(-1) = 1 is a square, and Phi_1 is present to absorb Q(1) = 3
    assert spinor_admissible(g, parse_class("phi1*phi3"))
    # Q = Phi_6: Q(-1) = 3 is not a square and Phi_2 is absent
    assert not spinor_admissible(g, parse_class("phi1*phi6"))


def _dominant(g, top):
    for lam in itertools.product(range(top + 1), repeat=g.n):
        if all(lam[i] >= lam[i + 1] for i in range(g.n - 1)):
            yield lam
            if g.series == "D" and lam[-1] > 0:
                yield lam[:-1] + (-lam[-1],)


@pytest.mark.parametrize("name", ["SO3", "SO5", "Sp2", "Sp4", "SO4"])
def test_traces_match_torus_oracle(name):
    g = GroupId.parse(name)
    identity = CycloProduct(((1, g.n_G),))
    for lam in _dominant(g, 3):
        assert trace(identity, g, lam) == weyl_dimension(g, lam)
        for p in all_polynomials(g):
            assert trace(p, g, lam) == torus_trace_oracle(p, g, lam), (lam, p)


@pytest.mark.parametrize("name", ["SO3", "SO5", "Sp4", "SO6", "Sp6", "SO7"])
def test_freudenthal_total_is_weyl_dimension(name):
    g = GroupId.parse(name)
    for lam in _dominant(g, 2):
        assert sum(freudenthal_multiplicities(g, lam).values()) == weyl_dimension(g, lam)


def test_minus_identity_acts_by_central_character():
    g = GroupId.parse("Sp4")
    minus = CycloProduct(((2, 4),))
    for lam in _dominant(g, 3):
        assert trace(minus, g, lam) == (-1) ** sum(lam) * weyl_dimension(g, lam)


def test_dominant_enumeration():
    assert enumerate_dominant(GroupId.parse("SO3"), 5) == [(0,), (1,), (2,)]
    assert enumerate_dominant(GroupId.parse("SO3"), 0) == []
    for lam in enumerate_dominant(GroupId.parse("Sp4"), 15):
        assert sum(lam) % 2 == 0


@given(st.integers(0, 10), st.integers(0, 10))
def test_u_of_lambda_for_Sp4(a, b):
    a, b = max(a, b), min(a, b)
    u = u_of_lambda(GroupId.parse("Sp4"), (a, b))
    assert u.dim() == 5 and u.det_is_one()
    assert u.coeff_I(2 * a + 4) == 1 and u.coeff_I(2 * b + 2) == 1


def test_u_of_lambda_rejects_SO6():
    with pytest.raises(ValueError):
        u_of_lambda(GroupId.parse("SO6"), (0, 0, 0))


def test_weyl_dimension_samples():
    assert weyl_dimension(GroupId.parse("Sp4"), (1, 1)) == 5
    assert weyl_dimension(GroupId.parse("SO7"), (1, 1, 1)) == 35
    assert weyl_dimension(GroupId.parse("SO8"), (1, 1, 1, 1)) == 35
    assert weyl_dimension(GroupId.parse("SO3"), (Fraction(4),)) == 9
