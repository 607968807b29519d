"""Exact coefficients: Laurent polynomials in q and l (l stands for e^{i theta}).

A ParamScalar is a finite sum of terms c * q^a * l^b with rational c and
integer a, b.  Values are immutable and always stored in canonical form, so
structural equality is mathematical equality.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = tuple[int, int]
Number = Union[int, Fraction]


class NotAUnit(ArithmeticError):
    """Raised when inverting something other than a nonzero monomial."""


class ParamScalar:
    """Rational Laurent polynomial in q and l."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Number] | Iterable[tuple[Exponent, Number]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Exponent, Fraction] = {}
        for (a, b), c in items:
            key = (int(a), int(b))
            acc[key] = acc.get(key, Fraction(0)) + Fraction(c)
        self._terms = tuple(sorted((k, v) for k, v in acc.items() if v != 0))
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _raw(cls, items: tuple) -> "ParamScalar":
        obj = cls.__new__(cls)
        obj._terms = items
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Number) -> "ParamScalar":
        c = Fraction(c)
        return cls._raw((((0, 0), c),) if c else ())

    @classmethod
    def monomial(cls, c: Number = 1, qexp: int = 0, lexp: int = 0) -> "ParamScalar":
        c = Fraction(c)
        return cls._raw((((qexp, lexp), c),) if c else ())

    @classmethod
    def coerce(cls, x: "ParamScalar | Number") -> "ParamScalar":
        if isinstance(x, ParamScalar):
            return x
        return cls.const(x)

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_one(self) -> bool:
        return self._terms == (((0, 0), Fraction(1)),)

    def constant_value(self) -> Fraction | None:
        """The rational value if this scalar has no q or l dependence."""
        if not self._terms:
            return Fraction(0)
        if len(self._terms) == 1 and self._terms[0][0] == (0, 0):
            return self._terms[0][1]
        return None

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = ParamScalar.coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for k, v in other._terms:
            s = acc.get(k, 0) + v
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        return ParamScalar._raw(tuple(sorted(acc.items())))

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar._raw(tuple((k, -v) for k, v in self._terms))

    def __sub__(self, other):
        return self + (-ParamScalar.coerce(other))

    def __rsub__(self, other):
        return ParamScalar.coerce(other) - self

    def __mul__(self, other):
        other = ParamScalar.coerce(other)
        if not self._terms or not other._terms:
            return ZERO
        if len(other._terms) == 1 and len(self._terms) == 1:
            (a, c), = self._terms
            (b, d), = other._terms
            return ParamScalar._raw((((a[0] + b[0], a[1] + b[1]), c * d),))
        acc: dict[Exponent, Fraction] = {}
        for (a1, b1), c1 in self._terms:
            for (a2, b2), c2 in other._terms:
                key = (a1 + a2, b1 + b2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return ParamScalar._raw(tuple(sorted((k, v) for k, v in acc.items() if v)))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return scalar_inverse(self) ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, ParamScalar):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self._terms == ParamScalar.const(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def content_monomial(self) -> "ParamScalar":
        """Monomial with the minimal exponents of this scalar and its first coefficient.

        Dividing by it leaves a polynomial with nonnegative exponents whose
        first coefficient is 1; used to normalize kernel vectors.
        """
        if not self._terms:
            raise NotAUnit("zero has no content")
        qmin = min(k[0] for k, _ in self._terms)
        lmin = min(k[1] for k, _ in self._terms)
        return ParamScalar.monomial(self._terms[0][1], qmin, lmin)

    def render(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(_render_monomial(c, a, b) for (a, b), c in self._terms)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"ParamScalar({self.render()!r})"


def _render_monomial(c: Fraction, a: int, b: int) -> str:
    parts = []
    if a:
        parts.append(f"q^{a}")
    if b:
        parts.append(f"l^{b}")
    if not parts:
        return str(c)
    if c == 1:
        return "*".join(parts)
    if c == -1:
        return "-" + "*".join(parts)
    return "*".join([str(c)] + parts)


ZERO = ParamScalar._raw(())
ONE = ParamScalar.const(1)
Q = ParamScalar.monomial(1, 1, 0)
LAM = ParamScalar.monomial(1, 0, 1)


def q(n: int = 1) -> ParamScalar:
    return ParamScalar.monomial(1, n, 0)


def lam(n: int = 1) -> ParamScalar:
    return ParamScalar.monomial(1, 0, n)


def qint(n: int, base: ParamScalar = Q) -> ParamScalar:
    """The quantum integer 1 + base + ... + base^(n-1) for n >= 0."""
    total = ZERO
    power = ONE
    for _ in range(n):
        total = total + power
        power = power * base
    return total


def scalar_add(a: ParamScalar, b: ParamScalar) -> ParamScalar:
    return a + b


def scalar_mul(a: ParamScalar, b: ParamScalar) -> ParamScalar:
    return a * b


def scalar_inverse(a: ParamScalar) -> ParamScalar:
    """Inverse of a nonzero monomial; the only units of the Laurent ring."""
    if len(a._terms) != 1:
        raise NotAUnit(f"{a.render()} is not a unit of the Laurent ring")
    (x, y), c = a._terms[0]
    return ParamScalar.monomial(1 / c, -x, -y)
