from fractions import Fraction

import pytest
from hypothesis import given

from conftest import polys, scalars
from qbundle.catalog import load_example, load_hopf
from qbundle.coeff import ParamScalar, lam, q
from qbundle.freealg import NcPoly
from qbundle.parser import (ExpressionSyntaxError, UnknownGenerator, parse_element, parse_expression,
                            parse_scalar, parse_tensor, tokenize)

TORUS = load_example("torus").calc_A
SU2 = load_example("qsu2_hopf").calc_A
GZ = load_example("group_z").calc_A


def test_tokenizer_positions():
    toks = tokenize("q^-1*d(g) /\\ dg")
    assert [t.text for t in toks] == ["q", "^", "-", "1", "*", "d", "(", "g", ")", "/\\", "dg", ""]
    assert toks[10].pos == 13


@pytest.mark.parametrize("src,expected", [
    ("3/4", ParamScalar.const(Fraction(3, 4))),
    ("q^-2", q(-2)),
    ("l^3*q", lam(3) * q(1)),
    ("(1 + q)^2", ParamScalar.const(1) + q(1) * 2 + q(2)),
    ("-q + - 1", -q(1) - ParamScalar.const(1)),
])
def test_scalars(src, expected):
    assert parse_scalar(src) == expected


def test_elements_are_normal_forms():
    assert parse_element("v*u", calc=TORUS) == parse_element("l*u*v", calc=TORUS)
    assert parse_element("u*u^-1", calc=TORUS) == TORUS.pres.one()
    assert parse_element("g^-2*g^3", calc=GZ) == GZ.pres.poly(("g",))


def test_juxtaposition_and_wedge():
    assert parse_element("u v", calc=TORUS) == parse_element("u*v", calc=TORUS)
    assert parse_element("du /\\ dv", calc=TORUS) == parse_element("du*dv", calc=TORUS)
    assert parse_element("d(u*v)", calc=TORUS) == parse_element("u*dv + l^-1*v*du", calc=TORUS)
    assert parse_element("q^-1*g*d(g) /\\ d(g)", calc=GZ).is_zero()


def test_parenthesized_products():
    assert parse_element("(alpha + beta)*gamma", calc=SU2) == parse_element("alpha*gamma + beta*gamma", calc=SU2)
    assert parse_element("2*(e0 - e0)", calc=SU2).is_zero()


def test_tensors():
    comps = [SU2.pres, SU2.pres]
    t = parse_tensor("(alpha | alpha) + q^-1*(beta | gamma)", comps)
    assert len(t) == 2
    assert parse_tensor("((alpha + beta) | 1)", comps) == parse_tensor("(alpha | 1) + (beta | 1)", comps)
    assert not parse_tensor("(alpha | beta) - (alpha | beta)", comps)


@pytest.mark.parametrize("src,pos", [
    ("u * * v", 4),
    ("(u + v", 6),
    ("u^x", 2),
    ("u $ v", 2),
    ("(u*v)^-1", 5),
])
def test_syntax_errors_report_position(src, pos):
    with pytest.raises(ExpressionSyntaxError) as err:
        parse_element(src, calc=TORUS)
    assert err.value.pos == pos
    assert f"position {pos}" in str(err.value)


def test_unknown_generator():
    with pytest.raises(UnknownGenerator, match="'z' at position 2"):
        parse_element("u*z", calc=TORUS)
    with pytest.raises(ExpressionSyntaxError):
        parse_element("d(u)", TORUS.base)


def test_non_invertible_scalar_power():
    with pytest.raises(ExpressionSyntaxError, match="not invertible"):
        parse_scalar("(1 + q)^-1")


@given(scalars())
def test_scalar_round_trip(c):
    assert parse_scalar(c.render()) == c


@given(polys(TORUS.pres, 3, degree=None))
def test_round_trip_torus(p):
    p = TORUS.nf(p)
    assert parse_element(p.render(), calc=TORUS) == p


@given(polys(SU2.pres, 3, degree=None))
def test_round_trip_su2(p):
    p = SU2.nf(p)
    assert parse_element(p.render(), calc=SU2) == p


@given(polys(load_hopf("cz").pres, 4))
def test_round_trip_group(p):
    pres = load_hopf("cz").pres
    assert parse_element(p.render(), pres) == pres.nf(p)


def test_parse_expression_keeps_scalars():
    assert parse_expression("2*q") == q(1) * 2
    assert isinstance(parse_expression("u", TORUS.base), NcPoly)
