"""Expression parser for scalars, algebra elements, forms and tensors.

Grammar (``^`` binds tighter than ``*``, ``/\\`` and juxtaposition, which
bind tighter than ``+`` and ``-``)::

    expr    := ["-"] product (("+" | "-") product)*
    product := power (("*" | "/\\" | <juxtaposition>) power)*
    power   := atom ("^" ["-"] INT)?
    atom    := NUMBER ["/" NUMBER] | "q" | "l" | NAME | "d" "(" expr ")"
             | "(" expr ")" | "(" expr "|" expr ("|" expr)* ")"

Values are lowered as they are parsed: scalars stay ParamScalars until they
meet a word, words are multiplied in the presentation (so the result is in
normal form), and ``(x | y)`` builds a tensor over the given components.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .coeff import NotAUnit, ParamScalar, q as qpow, lam as lpow
from .freealg import NcPoly, TensorElement, inverse_name
from .rewrite import Presentation, tensor_normal_form


class ExpressionSyntaxError(SyntaxError):
    def __init__(self, message: str, source: str, pos: int):
        super().__init__(f"{message} at position {pos}: {source[:pos]}<here>{source[pos:]}")
        self.pos = pos
        self.source = source


class UnknownGenerator(KeyError):
    pass


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>/\\|[-+*^()|/]))")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    pos = 0
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m:
            raise ExpressionSyntaxError(f"unexpected character {src[pos:].lstrip()[0]!r}", src,
                                        pos + len(src[pos:]) - len(src[pos:].lstrip()))
        kind = m.lastgroup
        out.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    out.append(Token("end", "", n))
    return out


Value = Union[ParamScalar, NcPoly, TensorElement]


class _Parser:
    def __init__(self, src: str, pres: Optional[Presentation], calc=None,
                 components: Optional[Sequence[Presentation]] = None):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0
        self.pres = calc.pres if calc is not None else pres
        self.calc = calc
        self.components = list(components or [])
        self.in_factor = False

    # token helpers
    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.take()
        if t.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", self.src, t.pos)
        return t

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek()
        raise ExpressionSyntaxError(message, self.src, tok.pos)

    # arithmetic on values
    def lift(self, x: Value, pres: Optional[Presentation] = None) -> NcPoly:
        pres = pres or self.pres
        if isinstance(x, ParamScalar):
            if pres is None:
                self.error("a scalar cannot be used where an algebra element is expected")
            return pres.one().scale(x)
        return x

    def add(self, x: Value, y: Value, sign: int) -> Value:
        if sign < 0:
            y = self.neg(y)
        if isinstance(x, ParamScalar) and isinstance(y, ParamScalar):
            return x + y
        if isinstance(x, TensorElement) or isinstance(y, TensorElement):
            if not (isinstance(x, TensorElement) and isinstance(y, TensorElement)):
                if (isinstance(x, ParamScalar) and not x) or (isinstance(y, ParamScalar) and not y):
                    return x if isinstance(x, TensorElement) else y
                self.error("cannot add a tensor and a non-tensor")
            return x + y
        return self.lift(x) + self.lift(y)

    def neg(self, x: Value) -> Value:
        return -x if not isinstance(x, NcPoly) else x.scale(-1)

    def mul(self, x: Value, y: Value, wedge: bool, tok: Token) -> Value:
        if isinstance(x, ParamScalar) and isinstance(y, ParamScalar):
            return x * y
        if isinstance(x, ParamScalar):
            return y.scale(x)
        if isinstance(y, ParamScalar):
            return x.scale(y)
        if isinstance(x, TensorElement) or isinstance(y, TensorElement):
            self.error("tensors can only be scaled", tok)
        if wedge and self.calc is not None:
            return self.calc.wedge(x, y)
        return self.pres.mul(x, y)

    def power(self, x: Value, k: int, tok: Token) -> Value:
        if isinstance(x, ParamScalar):
            try:
                return x ** k
            except NotAUnit:
                self.error(f"{x.render()} is not invertible", tok)
        if isinstance(x, TensorElement):
            self.error("tensors cannot be raised to a power", tok)
        if k < 0:
            if len(x) != 1:
                self.error("only a single invertible letter has negative powers", tok)
            (w, c), = x.items()
            if len(w) != 1 or not c.is_one() or inverse_name(w[0]) not in self.pres.alphabet:
                self.error(f"{x.render()} is not invertible", tok)
            x = self.pres.poly((inverse_name(w[0]),))
            k = -k
        out = self.pres.one()
        for _ in range(k):
            out = self.pres.mul(out, x)
        return out

    # grammar
    def parse(self) -> Value:
        v = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.error(f"unexpected {t.text!r}")
        return v

    def expr(self) -> Value:
        sign = 1
        if self.peek().text in ("-", "+"):
            sign = -1 if self.take().text == "-" else 1
        v = self.product()
        if sign < 0:
            v = self.neg(v)
        while self.peek().text in ("+", "-"):
            s = 1 if self.take().text == "+" else -1
            if self.peek().text in ("-", "+"):
                s *= -1 if self.take().text == "-" else 1
            v = self.add(v, self.product(), s)
        return v

    def starts_atom(self, t: Token) -> bool:
        return t.kind in ("num", "name") or t.text == "("

    def product(self) -> Value:
        v = self.power_()
        while True:
            t = self.peek()
            if t.text in ("*", "/\\"):
                self.take()
                v = self.mul(v, self.power_(), t.text == "/\\", t)
            elif self.starts_atom(t):
                v = self.mul(v, self.power_(), False, t)
            else:
                return v

    def power_(self) -> Value:
        v = self.atom()
        if self.peek().text == "^":
            tok = self.take()
            neg = False
            if self.peek().text == "-":
                self.take()
                neg = True
            n = self.take()
            if n.kind != "num":
                self.error("expected an integer exponent", n)
            v = self.power(v, -int(n.text) if neg else int(n.text), tok)
        return v

    def atom(self) -> Value:
        t = self.take()
        if t.kind == "num":
            value = Fraction(int(t.text))
            if self.peek().text == "/":
                self.take()
                den = self.take()
                if den.kind != "num":
                    self.error("expected a denominator", den)
                if int(den.text) == 0:
                    self.error("division by zero", den)
                value = value / int(den.text)
            return ParamScalar.const(value)
        if t.kind == "name":
            if t.text == "q":
                return qpow(1)
            if t.text == "l":
                return lpow(1)
            if t.text == "d" and self.peek().text == "(":
                if self.calc is None:
                    self.error("d(...) needs a calculus", t)
                self.take()
                inner = self.expr()
                self.expect(")")
                return self.calc.d(self.lift(inner))
            if self.pres is None or t.text not in self.pres.alphabet:
                raise UnknownGenerator(f"unknown generator {t.text!r} at position {t.pos}")
            return self.pres.poly((t.text,))
        if t.text == "(":
            if self.components and not self.in_factor:
                return self.group()
            inner = self.expr()
            self.expect(")")
            return inner
        self.error(f"unexpected {t.text or 'end of input'!r}", t)

    def group(self) -> Value:
        """A parenthesized expression or a tensor (a | b | ...)."""
        start = self.i
        saved = self.pres
        parts = []
        self.in_factor = True
        try:
            for k, comp in enumerate(self.components):
                self.pres = comp
                try:
                    parts.append(self.expr())
                except (ExpressionSyntaxError, UnknownGenerator):
                    if k > 0:
                        raise
                    self.pres = saved
                    self.in_factor = False
                    self.i = start
                    inner = self.expr()
                    self.expect(")")
                    return inner
                if self.peek().text != "|":
                    break
                self.take()
        finally:
            self.in_factor = False
            self.pres = saved
        if len(parts) == 1:
            self.expect(")")
            return parts[0]
        if len(parts) != len(self.components):
            self.error(f"expected {len(self.components)} tensor factors")
        self.expect(")")
        polys = [self.lift(p, c) for p, c in zip(parts, self.components)]
        return TensorElement.from_polys(polys, [c.alphabet for c in self.components])


def parse_expression(src: str, pres: Optional[Presentation] = None, calc=None) -> Union[NcPoly, ParamScalar]:
    """Parse an element of an algebra (or of a calculus when ``calc`` is given)."""
    value = _Parser(src, pres, calc).parse()
    return value


def parse_element(src: str, pres: Optional[Presentation] = None, calc=None) -> NcPoly:
    """Like parse_expression but always returns an NcPoly in normal form."""
    p = _Parser(src, pres, calc)
    value = p.parse()
    value = p.lift(value)
    return p.pres.nf(value)


def parse_scalar(src: str) -> ParamScalar:
    value = _Parser(src, None).parse()
    if not isinstance(value, ParamScalar):
        raise ExpressionSyntaxError("expected a scalar", src, 0)
    return value


def parse_tensor(src: str, components: Sequence[Presentation]) -> TensorElement:
    """Parse a sum of scaled tensors such as ``(alpha|alpha) + q^-1*(beta|gamma)``."""
    p = _Parser(src, None, components=components)
    value = p.parse()
    if isinstance(value, ParamScalar) and not value:
        return TensorElement.zero([c.alphabet for c in components])
    if not isinstance(value, TensorElement):
        raise ExpressionSyntaxError("expected a tensor", src, 0)
    return tensor_normal_form(value, components)
