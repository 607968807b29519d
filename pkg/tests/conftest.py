import random
from fractions import Fraction

import pytest
from hypothesis import settings, strategies as st

from qbundle.coeff import ParamScalar

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@st.composite
def scalars(draw, max_terms=3, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = []
    for _ in range(n):
        key = (draw(st.integers(-max_exp, max_exp)), draw(st.integers(-max_exp, max_exp)))
        terms.append((key, Fraction(draw(st.integers(-5, 5)), draw(st.integers(1, 4)))))
    return ParamScalar(terms)


@st.composite
def monomials(draw, max_exp=4):
    num = draw(st.integers(1, 5)) * draw(st.sampled_from([1, -1]))
    return ParamScalar.monomial(num, draw(st.integers(-max_exp, max_exp)), draw(st.integers(-max_exp, max_exp)))


def words_of(pres, max_len=3, degree=None):
    return st.sampled_from(pres.basis_words(max_len, degree=degree))


@st.composite
def polys(draw, pres, max_len=3, max_terms=3, degree=None):
    basis = pres.basis_words(max_len, degree=degree)
    n = draw(st.integers(0, max_terms))
    acc = pres.zero()
    for _ in range(n):
        w = draw(st.sampled_from(basis))
        acc = acc + pres.poly(w, draw(monomials(2)))
    return acc


def random_poly(rng: random.Random, pres, max_len=3, max_terms=4, degree=None):
    """A reproducible random element, used where hypothesis would be too slow."""
    basis = pres.basis_words(max_len, degree=degree)
    acc = pres.zero()
    for _ in range(rng.randint(1, max_terms)):
        c = ParamScalar.monomial(rng.randint(1, 5) * rng.choice([1, -1]), rng.randint(-3, 3), rng.randint(-2, 2))
        if rng.random() < 0.3:
            c = c + ParamScalar.monomial(rng.randint(1, 3), rng.randint(-3, 3), 0)
        acc = acc + pres.poly(rng.choice(basis), c)
    return acc


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_linear_map(maps, seed: int, max_len: int = 2):
    """A linear map H -> H with reproducible random values on every basis word."""
    from qbundle.hopf import AlgebraTarget, LinearMapSpec
    pres = maps.pres
    table = {}

    def fn(word):
        if word not in table:
            r = random.Random(f"{seed}:{word}")
            table[word] = random_poly(r, pres, max_len, 2)
        return table[word]

    return LinearMapSpec(pres, AlgebraTarget(pres), mode="linear", fn=fn, name=f"f{seed}")
