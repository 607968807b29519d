import pytest
from hypothesis import given, strategies as st

from conftest import polys
from qbundle.catalog import load_hopf, su2_calculus, torus_algebra, torus_calculus
from qbundle.coeff import LAM, ONE, ZERO, ParamScalar, q
from qbundle.freealg import Alphabet, Generator, NcPoly
from qbundle.rewrite import Presentation, PresentationError, check_local_confluence, tensor_normal_form

TORUS = torus_algebra()
SU2 = load_hopf("suq2").pres


@pytest.mark.parametrize("pres", [TORUS, SU2, load_hopf("slq2").pres, load_hopf("u1").pres,
                                  torus_calculus().pres, su2_calculus().pres],
                         ids=["torus", "suq2", "slq2", "u1", "torus-forms", "suq2-forms"])
def test_catalog_presentations_are_confluent(pres):
    report = check_local_confluence(pres, 6)
    assert report.ok, report.failures[0].describe()
    assert report.checked > 0 or len(pres.rules) <= 2


def test_failed_confluence_is_reported():
    A = Alphabet.of(Generator("a"), Generator("b"))
    w = lambda *l, c=1: NcPoly.word(l, c, A)
    # ab -> a and ba -> b overlap in aba: (ab)a -> aa but a(ba) -> ab -> a
    pres = Presentation(A, {("a", "b"): w("a"), ("b", "a"): w("b")})
    report = check_local_confluence(pres, 4)
    assert not report.ok
    assert any(f.word == ("a", "b", "a") for f in report.failures)


def test_rules_must_decrease():
    A = Alphabet.of(Generator("a"), Generator("b"))
    with pytest.raises(PresentationError):
        Presentation(A, {("a", "b"): NcPoly.word(("b", "a"), 1, A)})
    with pytest.raises(PresentationError):
        Presentation(A, [(("b", "a"), NcPoly.word(("a", "b"), 1, A))] * 2)


# torus oracle: (u^a v^b)(u^c v^d) = l^(bc) u^(a+c) v^(b+d)

def torus_monomial(a: int, b: int) -> NcPoly:
    return TORUS.mul(TORUS.letter_power("u", a), TORUS.letter_power("v", b))


@given(*[st.integers(-3, 3)] * 4)
def test_torus_products_match_closed_form(a, b, c, d):
    lhs = TORUS.mul(torus_monomial(a, b), torus_monomial(c, d))
    assert lhs == torus_monomial(a + c, b + d).scale(LAM ** (b * c))


def test_torus_normal_words():
    assert TORUS.nf(NcPoly.word(("v", "u"), 1, TORUS.alphabet)) == NcPoly.word(("u", "v"), LAM, TORUS.alphabet)
    assert TORUS.nf(NcPoly.word(("u", "u^-1"), 1, TORUS.alphabet)) == TORUS.one()
    assert all(TORUS.is_irreducible(w) for w in TORUS.basis_words(3))
    # u^a v^b with |a| + |b| <= 3
    assert len(TORUS.basis_words(3)) == 1 + 4 + 8 + 12


# SU(2) oracle: an exact representation on finitely supported vectors e_(n,k), n >= 0.
#   delta e_(n,k) = e_(n+1,k)          alpha e_(n,k) = (1 - q^-2n) e_(n-1,k)
#   beta e_(n,k) = -q^(-1-n) e_(n,k-1) gamma e_(n,k) = q^-n e_(n,k+1)

def _act(letter, vec):
    out = {}
    for (n, k), c in vec.items():
        if letter == "delta":
            key, f = (n + 1, k), ONE
        elif letter == "alpha":
            key, f = (n - 1, k), ONE - q(-2 * n)
        elif letter == "beta":
            key, f = (n, k - 1), -q(-1 - n)
        else:
            key, f = (n, k + 1), q(-n)
        s = out.get(key, ZERO) + c * f
        if s:
            out[key] = s
        else:
            out.pop(key, None)
    return out


def represent(p: NcPoly, vec):
    total = {}
    for w, c in p.items():
        v = dict(vec)
        for x in reversed(w):
            v = _act(x, v)
        for key, d in v.items():
            s = total.get(key, ZERO) + c * d
            if s:
                total[key] = s
            else:
                total.pop(key, None)
    return total


def test_su2_representation_respects_relations():
    for lhs, rhs in SU2.rules.items():
        for n in range(4):
            v = {(n, 0): ONE}
            assert represent(NcPoly.word(lhs, 1, SU2.alphabet), v) == represent(rhs, v), lhs


@given(st.lists(st.sampled_from(["alpha", "beta", "gamma", "delta"]), max_size=5).map(tuple),
       st.integers(0, 3))
def test_su2_normal_form_agrees_with_representation(word, n):
    v = {(n, 0): ONE}
    raw = NcPoly.word(word, 1, SU2.alphabet)
    assert represent(SU2.nf(raw), v) == represent(raw, v)


@given(polys(SU2, 3), polys(SU2, 3), polys(SU2, 2))
def test_su2_multiplication_is_associative(a, b, c):
    assert SU2.mul(SU2.mul(a, b), c) == SU2.mul(a, SU2.mul(b, c))


@given(polys(SU2, 4))
def test_normal_form_is_idempotent(a):
    assert SU2.nf(SU2.nf(a)) == SU2.nf(a)


def test_max_degree_truncation():
    calc = torus_calculus()
    X = calc.alphabet
    assert calc.pres.nf(NcPoly.word(("du", "dv", "du"), 1, X)).is_zero()
    assert calc.pres.nf(NcPoly.word(("dv", "du"), 1, X)) == NcPoly.word(("du", "dv"), -LAM, X)


def test_tensor_normal_form_per_factor():
    from qbundle.freealg import TensorElement
    A = TORUS.alphabet
    t = TensorElement.pure((A, A), [("v", "u"), ("u", "u^-1")])
    assert tensor_normal_form(t, [TORUS, TORUS]) == TensorElement.pure((A, A), [("u", "v"), ()], LAM)
