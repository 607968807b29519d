import pytest
import sympy
from hypothesis import given, strategies as st

from conftest import polys
from qbundle.catalog import (circle_calculus, group_z_calculus, load_hopf, su2_calculus, torus_calculus)
from qbundle.calculus import (DegreeOverflow, IdealNotInKernel, NotInAugmentationIdeal, NotInKernel,
                              WoronowiczCalculus, first_order_relations, maurer_cartan, maurer_cartan_equation,
                              maurer_cartan_kernel, maximal_prolongation_check, pi_eps, prolongation_image,
                              universal_d, universal_quotient)
from qbundle.coeff import ONE, ParamScalar, q
from qbundle.freealg import NcPoly

CZ = load_hopf("cz")
GZ = group_z_calculus()
SU2 = su2_calculus()
TORUS = torus_calculus()


@pytest.mark.parametrize("calc", [GZ, circle_calculus(0), circle_calculus(2), TORUS, SU2],
                         ids=lambda c: c.name)
def test_calculus_checks_pass(calc):
    rep = calc.check(3)
    assert rep.ok, rep.failures


def test_corrupted_torus_is_still_a_calculus():
    assert torus_calculus(corrupt=True).check(3).ok


def _sympy_scalar(x: ParamScalar):
    Q = sympy.Symbol("q")
    return sum((sympy.Rational(c.numerator, c.denominator) * Q**a for (a, _), c in x.items()), sympy.Integer(0))


@pytest.mark.parametrize("n", range(-4, 6))
def test_group_z_differential_of_powers(n):
    """d(g^n) = [n]_q g^(n-1) dg with [n]_q = (q^n - 1)/(q - 1), also for negative n."""
    P = GZ.pres
    dn = GZ.d(P.letter_power("g", n))
    expected_word = P.mul(P.letter_power("g", n - 1), P.poly(("dg",)))
    if n == 0:
        assert dn.is_zero()
        return
    (w, c), = dn.items()
    (w2, c2), = expected_word.items()
    assert w == w2
    Q = sympy.Symbol("q")
    assert sympy.simplify(_sympy_scalar(c) / _sympy_scalar(c2) - (Q**n - 1) / (Q - 1)) == 0


@given(polys(SU2.pres, 2, degree=0), polys(SU2.pres, 2, degree=0))
def test_leibniz_on_su2(a, b):
    P = SU2.pres
    assert SU2.d(P.mul(a, b)) == P.mul(SU2.d(a), b) + P.mul(a, SU2.d(b))


@given(polys(SU2.pres, 2, degree=1))
def test_d_squared_vanishes_on_su2_one_forms(w):
    assert SU2.d(SU2.d(w)).is_zero()


def test_su2_differentials():
    X = SU2.alphabet
    w = lambda *l, c=1: NcPoly.word(l, c, X)
    assert SU2.d(w("alpha")) == w("alpha", "e0") + w("beta", "ep", c=q(1))
    assert SU2.d(w("e0")) == w("ep", "em", c=q(3))
    # the left-invariant form e+ = q^-1 alpha d(gamma) - q^-2 gamma d(alpha)
    ep = SU2.pres.mul(w("alpha", c=q(-1)), SU2.d(w("gamma"))) - SU2.pres.mul(w("gamma", c=q(-2)), SU2.d(w("alpha")))
    assert ep == w("ep")


def test_wedge_degree_overflow():
    X = TORUS.alphabet
    du = NcPoly.word(("du",), 1, X)
    assert TORUS.wedge(du, NcPoly.word(("dv",), 1, X)) == NcPoly.word(("du", "dv"), 1, X)
    with pytest.raises(DegreeOverflow):
        TORUS.wedge(TORUS.wedge(du, NcPoly.word(("dv",), 1, X)), du)


def test_restriction_lowers_degree():
    r = SU2.restricted(1)
    assert r.max_degree == 1
    assert r.pres.nf(NcPoly.word(("ep", "em"), 1, r.alphabet)).is_zero()


def test_universal_calculus_quotient():
    P = TORUS.base
    for w in P.basis_words(3):
        a = P.poly(w)
        assert universal_quotient(universal_d(a, P), TORUS) == TORUS.d(a)
    from qbundle.freealg import TensorElement
    with pytest.raises(NotInKernel):
        universal_quotient(TensorElement.pure((P.alphabet, P.alphabet), [("u",), ()]), TORUS)


def test_surjectivity_witness():
    wit = SU2.surjectivity_witness(3)
    assert set(wit) == {"ep", "em", "e0"}
    s, terms = wit["ep"]
    P = SU2.pres
    total = P.zero()
    for a, b, c in terms:
        total = total + P.mul(P.poly(a), SU2.d_word(b)).scale(c)
    assert total == P.poly(("ep",), s)


def test_maurer_cartan_form():
    P = CZ.pres
    g = P.poly(("g",))
    assert pi_eps(g, CZ.maps) == g - P.one()
    assert maurer_cartan(pi_eps(g, CZ.maps), GZ, CZ.maps) == GZ.pres.poly(("g^-1", "dg"))
    with pytest.raises(NotInAugmentationIdeal):
        maurer_cartan(g, GZ, CZ.maps)


def test_maurer_cartan_equation_on_group_z():
    for w in CZ.pres.basis_words(3):
        assert maurer_cartan_equation(w, GZ, CZ.maps)


def test_woronowicz_ideal_for_group_z():
    P = CZ.pres
    g = P.poly(("g",))
    gen = P.mul(g - P.one(), g - P.one().scale(q(1)))
    calc = WoronowiczCalculus(CZ.maps, [gen], 4)
    assert calc.dimension == 1
    assert calc.bicovariant().ok
    kernel = maurer_cartan_kernel(GZ, CZ.maps, 3)
    assert kernel and all(calc.in_ideal(k) for k in kernel)
    with pytest.raises(IdealNotInKernel):
        WoronowiczCalculus(CZ.maps, [g], 2)


def test_prolongation_of_free_group_z_calculus():
    free = group_z_calculus(truncate_squares=False)
    rel = [((), ("g^-1",), ONE), (("g^-1", "g^-1"), ("g",), q(-1))]
    P = free.pres
    first = sum((P.mul(P.poly(a), free.d_word(b)).scale(c) for a, b, c in rel), P.zero())
    assert first.is_zero()
    image = prolongation_image(free, rel)
    (word, coeff), = image.items()
    assert word[-2:] == ("dg", "dg") and coeff
    assert first_order_relations(free, 3)


@pytest.mark.parametrize("calc", [TORUS, SU2, GZ], ids=lambda c: c.name)
def test_maximal_prolongation(calc):
    assert maximal_prolongation_check(calc, 3).ok


def test_witness_scalars_are_units_at_larger_bounds():
    for bound in (3, 4):
        wit = SU2.surjectivity_witness(bound)
        assert all(s.is_monomial() for s, _ in wit.values())
