import pytest

from qbundle.catalog import load_example, load_hopf, torus_algebra, torus_cleaving
from qbundle.coeff import LAM, ONE, q
from qbundle.comodule import (Coaction, CoactionError, CocycleViolation, CrossedData, check_cleaving,
                              check_galois_roundtrip, check_theta, check_translation_map, coinvariants,
                              crossed_product_build, doi_takeuchi_from_cleft, galois_chi, translation_map)
from qbundle.freealg import NcPoly, TensorElement

TORUS = load_example("torus")
A = TORUS.A
U1 = TORUS.hopf
J, J_INV = TORUS.cleaving


def pure(a, h, c=1):
    return TensorElement.pure((A.alphabet, U1.pres.alphabet), [a, h], c)


def test_torus_coaction_images():
    assert TORUS.coaction.on_word(("u",)) == pure(("u",), ("t",))
    assert TORUS.coaction.on_word(("v",)) == pure(("v",), ("t^-1",))
    assert TORUS.coaction.on_word(("u", "v")) == pure(("u", "v"), ())


def test_coaction_checks_pass():
    assert TORUS.coaction.check(3).ok
    assert load_example("qsu2_hopf").coaction.check(3).ok


def test_noncoassociative_coaction_rejected():
    from qbundle.catalog import polynomial_calculus
    B = polynomial_calculus().base
    comps = (B.alphabet, U1.pres.alphabet)
    image = TensorElement.pure(comps, [("x",), ("t",)]) + TensorElement.pure(comps, [("x",), ()])
    with pytest.raises(CoactionError):
        Coaction(B, U1.maps, {"x": image})


def test_coinvariants_of_torus_are_powers_of_uv():
    basis = coinvariants(A, TORUS.coaction, 4)
    expected = {A.nf_word(()), A.nf_word(("u", "v")), A.nf_word(("u^-1", "v^-1")),
                A.mul(A.poly(("u", "v")), A.poly(("u", "v"))), A.mul(A.poly(("u^-1", "v^-1")), A.poly(("u^-1", "v^-1")))}
    from qbundle.linalg import same_span
    assert same_span([dict(p.items()) for p in basis], [dict(p.items()) for p in expected])


def test_cleaving_suite():
    assert check_cleaving(J, J_INV, TORUS.coaction, U1.maps, 3).ok
    assert J(U1.pres.poly(("t", "t"))) == A.poly(("u", "u"))
    assert J(U1.pres.poly(("t^-1", "t^-1"))) == A.poly(("v", "v"))


def test_non_colinear_cleaving_detected():
    from qbundle.hopf import AlgebraTarget, LinearMapSpec
    bad = LinearMapSpec(U1.pres, AlgebraTarget(A), {"t": A.poly(("v",)), "t^-1": A.poly(("u",))}, "power")
    bad_inv = LinearMapSpec(U1.pres, AlgebraTarget(A), {"t": A.poly(("v^-1",)), "t^-1": A.poly(("u^-1",))},
                            "power")
    rep = check_cleaving(bad, bad_inv, TORUS.coaction, U1.maps, 2)
    assert not rep.get("cleaving.colinear").status == "pass"


def test_galois_and_translation():
    assert check_galois_roundtrip(J, J_INV, TORUS.coaction, 2).ok
    assert check_translation_map(J, J_INV, TORUS.coaction, 2).ok
    kappa = translation_map(U1.pres.poly(("t",)), J, J_INV, TORUS.coaction)
    AA = (A.alphabet, A.alphabet)
    assert kappa == TensorElement.pure(AA, [("u^-1",), ("u",)])
    assert galois_chi(kappa, TORUS.coaction) == pure((), ("t",))


def test_doi_takeuchi_data_and_theta():
    data = doi_takeuchi_from_cleft(J, J_INV, TORUS.coaction)
    b = [A.one(), A.poly(("u", "v")), A.poly(("u^-1", "v^-1"))]
    cp, rep = crossed_product_build(A, U1.maps, data, b, 2)
    assert rep.ok
    # t.(uv) = u (uv) u^-1 = l^-1 uv
    assert data.measure(("t",), A.poly(("u", "v"))) == A.poly(("u", "v"), LAM ** -1)
    assert check_theta(J, J_INV, TORUS.coaction, cp, 2).ok


def test_bad_cocycle_raises():
    data = doi_takeuchi_from_cleft(J, J_INV, TORUS.coaction)
    bad = CrossedData(data.measure, lambda h, g: A.one().scale(q(1) if h and g else ONE), data.sigma_inv)
    with pytest.raises(CocycleViolation):
        crossed_product_build(A, U1.maps, bad, [A.one()], 2)
    _, rep = crossed_product_build(A, U1.maps, bad, [A.one()], 2, raise_on_failure=False)
    assert not rep.ok
