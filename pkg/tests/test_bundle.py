import pytest
from hypothesis import given, settings

from conftest import polys
from qbundle.bundle import NotLeftInvariant, check_vertical
from qbundle.catalog import load_example
from qbundle.comodule import coinvariants
from qbundle.linalg import same_span
from qbundle.parser import parse_element, parse_scalar, parse_tensor

TORUS = load_example("torus")
SU2 = load_example("qsu2_hopf")
GZ = load_example("group_z")


def el(ex, src):
    return parse_element(src, calc=ex.calc_A)


def vert(ex, src):
    return parse_tensor(src, [ex.A, ex.invariant.pres])


@pytest.mark.parametrize("ex,src,expected", [
    (TORUS, "du", "(u | w)"),
    (TORUS, "u*dv", "-(u*v | w)"),
    (TORUS, "du*dv", "0"),
    (SU2, "e0", "(1 | w)"),
    (SU2, "ep", "0"),
    (SU2, "alpha*d(gamma)", "(alpha*gamma | w)"),
    (GZ, "dg", "(g | w)"),
])
def test_pi_ver_values(ex, src, expected):
    got = ex.bundle.pi_ver(el(ex, src))
    assert got == (vert(ex, expected) if expected != "0" else got.zero(got.components))


def test_torus_ver_components():
    b = TORUS.bundle
    comps = [TORUS.calc_A.pres, TORUS.calc_H.pres]
    assert b.ver(el(TORUS, "du"), 0, 1) == parse_tensor("(u | dt)", comps)
    assert b.ver(el(TORUS, "du"), 1, 0) == parse_tensor("(du | t)", comps)
    # ver^{1,1}(du dv) is -d(uv) (x) t^-1 dt
    expected = parse_tensor("-(u*dv | t^-1*dt) + -l^-1*(v*du | t^-1*dt)", comps)
    assert b.ver(el(TORUS, "du*dv"), 1, 1) == expected
    total = b.ver(el(TORUS, "du*dv"), 1, 1) + b.ver(el(TORUS, "dv*du"), 1, 1).scale(parse_scalar("l^-1"))
    assert not total


@pytest.mark.parametrize("ex", [TORUS, SU2, GZ], ids=lambda e: e.name)
def test_pi_ver_matches_explicit_formula(ex):
    b = ex.bundle
    calc = ex.calc_A
    letters = [x for x in ex.A.alphabet.letters]
    for a0 in letters:
        for a1 in letters:
            omega = calc.pres.mul(calc.pres.poly((a0,)), calc.d_word((a1,)))
            assert b.pi_ver(omega) == b.pi_ver_explicit([(a0,), (a1,)])


@settings(max_examples=25)
@given(polys(TORUS.calc_A.pres, 2, degree=0), polys(TORUS.calc_A.pres, 2, degree=1))
def test_pi_ver_is_left_linear(a, omega):
    b = TORUS.bundle
    P = TORUS.calc_A.pres
    lhs = b.pi_ver(P.mul(a, omega))
    A = TORUS.A
    a_A = a.with_alphabet(A.alphabet)
    rhs = b.vertical((A.mul(a_A, A.poly(w1)), TORUS.invariant.pres.poly(w2), c)
                     for (w1, w2), c in b.pi_ver(omega).items())
    assert lhs == rhs


@pytest.mark.parametrize("ex", [TORUS, SU2], ids=lambda e: e.name)
def test_pi_ver_kills_differentials_of_coinvariants(ex):
    for bpoly in coinvariants(ex.A, ex.coaction, 2):
        db = ex.calc_A.d(bpoly.with_alphabet(ex.calc_A.alphabet))
        assert not ex.bundle.pi_ver(db)


def test_horizontal_forms():
    assert SU2.bundle.is_horizontal(el(SU2, "ep"))
    assert SU2.bundle.is_horizontal(el(SU2, "em"))
    assert not SU2.bundle.is_horizontal(el(SU2, "e0"))
    assert TORUS.bundle.is_horizontal(el(TORUS, "u*dv + l^-1*v*du"))


def test_torus_base_forms_match_powers_of_uv():
    b = TORUS.bundle
    P = TORUS.calc_A.pres
    uv = el(TORUS, "u*v")
    inv = el(TORUS, "u^-1*v^-1")
    def power(k):
        out = P.one()
        for _ in range(abs(k)):
            out = P.mul(out, uv if k > 0 else inv)
        return out
    zero = [dict(power(k).items()) for k in range(-2, 3)]
    assert same_span([dict(f.items()) for f in b.base_forms(4, 0)], zero)
    d_uv = TORUS.calc_A.d(uv)
    one = [dict(P.mul(power(k), d_uv).items()) for k in range(-2, 2)]
    assert same_span([dict(f.items()) for f in b.base_forms(4, 1)], one)


@pytest.mark.parametrize("ex", [TORUS, SU2, GZ], ids=lambda e: e.name)
def test_bundle_reports(ex):
    b = ex.bundle
    for rep in (b.check_completeness(2), b.check_exact_sequence(2, 1), b.check_bm(2), check_vertical(b, 2)):
        assert rep.ok, rep.failures


def test_corrupted_torus_completeness_names_relation():
    rep = load_example("torus").bundle.check_completeness(2)
    assert rep.ok
    from qbundle.catalog import _torus
    bad = _torus(corrupt=True).bundle.check_completeness(2)
    assert not bad.ok
    assert bad.failures[0].check_id == "completeness.well-defined[du*u -> q^1*u*du]"


def test_invariant_forms():
    lam = TORUS.invariant
    H = TORUS.calc_H
    w = lam.pres.poly(("w",))
    assert lam.embed(w) == H.pres.poly(("t^-1", "dt"))
    assert lam.to_lambda(H.pres.poly(("t^-1", "dt"))) == w
    assert lam.is_left_invariant(lam.embed(w))
    assert not lam.is_left_invariant(H.pres.poly(("dt",)))
    with pytest.raises(NotLeftInvariant):
        lam.to_lambda(H.pres.poly(("dt",)))
    assert lam.check(3).ok
    assert SU2.invariant.check(3).ok
