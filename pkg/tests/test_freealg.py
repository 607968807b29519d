import pytest
from hypothesis import given, strategies as st

from conftest import monomials
from qbundle.coeff import ONE, q
from qbundle.freealg import (Alphabet, AlphabetMismatch, ArityMismatch, Generator, NcPoly, TensorElement,
                             flip, inverse_name, koszul_sign, poly_mul, tensor_mul)

A = Alphabet.of(Generator("x"), Generator("y", invertible=True), Generator("dx", kind="form"))
letters = st.sampled_from(A.letters)
words = st.lists(letters, max_size=4).map(tuple)


@st.composite
def free_polys(draw):
    p = NcPoly.zero(A)
    for _ in range(draw(st.integers(0, 3))):
        p = p + NcPoly.word(draw(words), draw(monomials(2)), A)
    return p


def test_alphabet_layout():
    assert A.letters == ("x", "y", "y^-1", "dx")
    assert A.degree(("x", "dx", "dx")) == 2
    assert A.is_inverse_letter("y^-1") and not A.is_inverse_letter("y")
    assert inverse_name("y") == "y^-1" and inverse_name("y^-1") == "y"
    assert A.form_letters() == ["dx"]
    with pytest.raises(ValueError):
        Alphabet.of(Generator("x"), Generator("x"))
    with pytest.raises(ValueError):
        Generator("dz", invertible=True, kind="form")


def test_unknown_letter_rejected():
    with pytest.raises(AlphabetMismatch):
        NcPoly.word(("z",), 1, A)


@given(free_polys(), free_polys(), free_polys())
def test_free_product_is_associative_and_distributive(a, b, c):
    assert poly_mul(poly_mul(a, b), c) == poly_mul(a, poly_mul(b, c))
    assert poly_mul(a, b + c) == poly_mul(a, b) + poly_mul(a, c)


@given(free_polys(), free_polys())
def test_vector_space_laws(a, b):
    assert a + b == b + a
    assert a - a == NcPoly.zero(A)
    assert a.scale(q(1)).scale(q(-1)) == a
    assert poly_mul(NcPoly.one(A), a) == a


def test_render():
    p = NcPoly.word(("x", "y"), q(-1), A) - NcPoly.word((), 1, A)
    assert "q^-1*x*y" in p.render()
    assert NcPoly.zero(A).render() == "0"
    assert NcPoly.word(("x",), ONE + q(1), A).render() == "(1 + q^1)*x"


def test_koszul_sign():
    assert koszul_sign((0, 1), (1, 0)) == -1
    assert koszul_sign((1, 0), (0, 1)) == 1
    assert koszul_sign((0, 0), (1, 1)) == 1


def test_tensor_product_sign():
    s = TensorElement.pure((A, A), [(), ("dx",)])
    t = TensorElement.pure((A, A), [("dx",), ()])
    assert tensor_mul(s, t) == TensorElement.pure((A, A), [("dx",), ("dx",)], -1)
    assert tensor_mul(t, s) == TensorElement.pure((A, A), [("dx",), ("dx",)])


def test_flip_is_an_involution():
    t = TensorElement.pure((A, A), [("dx",), ("x", "dx")], q(2)) + TensorElement.pure((A, A), [("x",), ("y",)])
    assert flip(flip(t)) == t
    assert flip(TensorElement.pure((A, A), [("dx",), ("dx",)])) == TensorElement.pure((A, A), [("dx",), ("dx",)], -1)
    with pytest.raises(ArityMismatch):
        flip(TensorElement.pure((A,), [("x",)]))


def test_from_polys_expands():
    a = NcPoly.word(("x",), 1, A) + NcPoly.word(("y",), 1, A)
    b = NcPoly.word(("x",), q(1), A)
    t = TensorElement.from_polys([a, b])
    assert dict(t.terms) == {(("x",), ("x",)): q(1), (("y",), ("x",)): q(1)}


def test_tensor_arity_mismatch():
    s = TensorElement.pure((A, A), [(), ()])
    t = TensorElement.pure((A, A, A), [(), (), ()])
    with pytest.raises(ArityMismatch):
        tensor_mul(s, t)
