"""Words, noncommutative polynomials and tensors of them.

Nothing here knows about relations: products are plain concatenation.
Rewriting to normal form lives in :mod:`qbundle.rewrite`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .coeff import ONE, ZERO, Number, ParamScalar

Word = tuple[str, ...]
EMPTY: Word = ()
INV = "^-1"


class AlphabetMismatch(ValueError):
    pass


class ArityMismatch(ValueError):
    pass


def inverse_name(name: str) -> str:
    return name[: -len(INV)] if name.endswith(INV) else name + INV


@dataclass(frozen=True)
class Generator:
    name: str
    invertible: bool = False
    weight: int = 0
    kind: str = "algebra"

    def __post_init__(self):
        if self.kind not in ("algebra", "form"):
            raise ValueError(f"generator kind must be 'algebra' or 'form', got {self.kind!r}")
        if self.kind == "form" and self.invertible:
            raise ValueError(f"form letter {self.name} cannot be invertible")


@dataclass(frozen=True)
class Alphabet:
    """Ordered generators; the order of ``letters`` is the letter order.

    Each invertible generator contributes its inverse letter ``name^-1``
    directly after it.  Form letters have degree 1, all others degree 0.
    """

    generators: tuple[Generator, ...]
    letters: tuple[str, ...] = field(init=False, compare=False)
    index: Mapping[str, int] = field(init=False, compare=False, repr=False)
    degree_of: Mapping[str, int] = field(init=False, compare=False, repr=False)
    weight_of: Mapping[str, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        letters: list[str] = []
        degree: dict[str, int] = {}
        weight: dict[str, int] = {}
        for g in self.generators:
            if g.name in degree:
                raise ValueError(f"duplicate generator name {g.name!r}")
            letters.append(g.name)
            degree[g.name] = 1 if g.kind == "form" else 0
            weight[g.name] = g.weight
            if g.invertible:
                inv = g.name + INV
                if inv in degree:
                    raise ValueError(f"duplicate generator name {inv!r}")
                letters.append(inv)
                degree[inv] = 0
                weight[inv] = -g.weight
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "letters", tuple(letters))
        object.__setattr__(self, "index", MappingProxyType({x: i for i, x in enumerate(letters)}))
        object.__setattr__(self, "degree_of", MappingProxyType(degree))
        object.__setattr__(self, "weight_of", MappingProxyType(weight))

    @classmethod
    def of(cls, *gens: Generator) -> "Alphabet":
        return cls(tuple(gens))

    def __contains__(self, letter: str) -> bool:
        return letter in self.index

    def generator(self, name: str) -> Generator:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    def is_inverse_letter(self, letter: str) -> bool:
        return letter.endswith(INV) and letter in self.index

    def invertible_letters(self) -> list[str]:
        return [g.name for g in self.generators if g.invertible]

    def algebra_letters(self) -> list[str]:
        return [x for x in self.letters if self.degree_of[x] == 0]

    def form_letters(self) -> list[str]:
        return [x for x in self.letters if self.degree_of[x] == 1]

    def degree(self, word: Word) -> int:
        d = self.degree_of
        return sum(d[x] for x in word)

    def weight(self, word: Word) -> int:
        w = self.weight_of
        return sum(w[x] for x in word)

    def check_word(self, word: Word) -> None:
        for x in word:
            if x not in self.index:
                raise AlphabetMismatch(f"letter {x!r} is not in the alphabet {self.letters}")

    def extended(self, *gens: Generator) -> "Alphabet":
        return Alphabet(self.generators + tuple(gens))

    def restricted(self, kind: str) -> "Alphabet":
        return Alphabet(tuple(g for g in self.generators if g.kind == kind))


def render_word(word: Word) -> str:
    return "*".join(word) if word else "1"


def _render_coeff_term(c: ParamScalar, body: str, alone: bool) -> str:
    """Render c*body where body is a word or tensor rendering ("" for the unit)."""
    if not body:
        if c.is_monomial() or alone:
            return c.render()
        return "(" + c.render() + ")"
    if c.is_one():
        return body
    if c.is_monomial():
        if c == -1:
            return "-" + body
        return c.render() + "*" + body
    return "(" + c.render() + ")*" + body


class NcPoly:
    """Finite linear combination of words with ParamScalar coefficients."""

    __slots__ = ("_terms", "alphabet", "_hash")

    def __init__(self, terms: Mapping[Word, ParamScalar | Number] | None = None,
                 alphabet: Optional[Alphabet] = None):
        acc: dict[Word, ParamScalar] = {}
        if terms:
            for w, c in terms.items():
                c = ParamScalar.coerce(c)
                w = tuple(w)
                s = acc.get(w, ZERO) + c
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
        if alphabet is not None:
            for w in acc:
                alphabet.check_word(w)
        self._terms = acc
        self.alphabet = alphabet
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, alphabet: Optional[Alphabet] = None) -> "NcPoly":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.alphabet = alphabet
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, alphabet: Optional[Alphabet] = None) -> "NcPoly":
        return cls._raw({}, alphabet)

    @classmethod
    def one(cls, alphabet: Optional[Alphabet] = None) -> "NcPoly":
        return cls._raw({EMPTY: ONE}, alphabet)

    @classmethod
    def scalar(cls, c: ParamScalar | Number, alphabet: Optional[Alphabet] = None) -> "NcPoly":
        c = ParamScalar.coerce(c)
        return cls._raw({EMPTY: c} if c else {}, alphabet)

    @classmethod
    def word(cls, word: Sequence[str] | str, coeff: ParamScalar | Number = 1,
             alphabet: Optional[Alphabet] = None) -> "NcPoly":
        if isinstance(word, str):
            word = (word,)
        word = tuple(word)
        if alphabet is not None:
            alphabet.check_word(word)
        c = ParamScalar.coerce(coeff)
        return cls._raw({word: c} if c else {}, alphabet)

    # inspection -----------------------------------------------------------
    @property
    def terms(self) -> Mapping[Word, ParamScalar]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def words(self):
        return self._terms.keys()

    def coeff(self, word: Word) -> ParamScalar:
        return self._terms.get(tuple(word), ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def scalar_part(self) -> ParamScalar:
        return self._terms.get(EMPTY, ZERO)

    def is_scalar(self) -> bool:
        return all(not w for w in self._terms)

    def max_len(self) -> int:
        return max((len(w) for w in self._terms), default=0)

    def with_alphabet(self, alphabet: Optional[Alphabet]) -> "NcPoly":
        if alphabet is not None:
            for w in self._terms:
                alphabet.check_word(w)
        return NcPoly._raw(self._terms, alphabet)

    def _join_alphabet(self, other: "NcPoly") -> Optional[Alphabet]:
        a, b = self.alphabet, other.alphabet
        if a is None:
            return b
        if b is None or a is b or a == b:
            return a
        raise AlphabetMismatch("polynomials live over different alphabets")

    # arithmetic -----------------------------------------------------------
    def __add__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            other = NcPoly.scalar(other)
        alpha = self._join_alphabet(other)
        if not other._terms:
            return NcPoly._raw(self._terms, alpha)
        acc = dict(self._terms)
        for w, c in other._terms.items():
            s = acc.get(w)
            s = c if s is None else s + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
        return NcPoly._raw(acc, alpha)

    __radd__ = __add__

    def __neg__(self) -> "NcPoly":
        return NcPoly._raw({w: -c for w, c in self._terms.items()}, self.alphabet)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            other = NcPoly.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return NcPoly.scalar(other) - self

    def scale(self, c: ParamScalar | Number) -> "NcPoly":
        c = ParamScalar.coerce(c)
        if not c:
            return NcPoly._raw({}, self.alphabet)
        if c.is_one():
            return self
        out = {}
        for w, x in self._terms.items():
            y = x * c
            if y:
                out[w] = y
        return NcPoly._raw(out, self.alphabet)

    def __mul__(self, other) -> "NcPoly":
        if isinstance(other, NcPoly):
            return poly_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "NcPoly":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        if isinstance(other, NcPoly):
            return self._terms == other._terms
        if isinstance(other, (int, ParamScalar)):
            return self._terms == NcPoly.scalar(other)._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_words(self, fn: Callable[[Word], "NcPoly"]) -> "NcPoly":
        """Linear extension of a word-level map into NcPoly values."""
        acc: dict[Word, ParamScalar] = {}
        alpha = None
        for w, c in self._terms.items():
            img = fn(w)
            alpha = alpha or img.alphabet
            for v, d in img._terms.items():
                s = acc.get(v, ZERO) + c * d
                if s:
                    acc[v] = s
                else:
                    acc.pop(v, None)
        return NcPoly._raw(acc, alpha)

    def sorted_items(self, key: Optional[Callable[[Word], object]] = None):
        if key is None:
            if self.alphabet is not None:
                idx = self.alphabet.index
                key = lambda w: (len(w), tuple(idx.get(x, -1) for x in w), w)
            else:
                key = lambda w: (len(w), w)
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]))

    def render(self) -> str:
        if not self._terms:
            return "0"
        items = self.sorted_items()
        alone = len(items) == 1
        return " + ".join(_render_coeff_term(c, "*".join(w), alone) for w, c in items)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"NcPoly({self.render()!r})"


def poly_mul(p: NcPoly, r: NcPoly) -> NcPoly:
    """Bilinear concatenation product, with no rewriting."""
    alpha = p._join_alphabet(r)
    if not p._terms or not r._terms:
        return NcPoly._raw({}, alpha)
    acc: dict[Word, ParamScalar] = {}
    for w1, c1 in p._terms.items():
        for w2, c2 in r._terms.items():
            w = w1 + w2
            s = acc.get(w)
            c = c1 * c2
            s = c if s is None else s + c
            if s:
                acc[w] = s
            else:
                acc.pop(w, None)
    return NcPoly._raw(acc, alpha)


def word_degree(alphabet: Optional[Alphabet], word: Word) -> int:
    if alphabet is None:
        return 0
    return alphabet.degree(word)


class TensorElement:
    """Linear combination of tuples of words, one word per tensor factor.

    ``components`` holds the alphabet of each factor; form letters in a
    factor give it a degree, which drives the Koszul signs of products
    and flips.
    """

    __slots__ = ("components", "_terms", "_hash")

    def __init__(self, components: Sequence[Optional[Alphabet]],
                 terms: Mapping[tuple[Word, ...], ParamScalar | Number] | None = None):
        self.components = tuple(components)
        n = len(self.components)
        if n < 1:
            raise ArityMismatch("a tensor needs at least one factor")
        acc: dict[tuple[Word, ...], ParamScalar] = {}
        if terms:
            for key, c in terms.items():
                key = tuple(tuple(w) for w in key)
                if len(key) != n:
                    raise ArityMismatch(f"term {key} does not have {n} factors")
                for a, w in zip(self.components, key):
                    if a is not None:
                        a.check_word(w)
                c = ParamScalar.coerce(c)
                s = acc.get(key, ZERO) + c
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        self._terms = acc
        self._hash = None

    @classmethod
    def _raw(cls, components, terms) -> "TensorElement":
        obj = cls.__new__(cls)
        obj.components = tuple(components)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, components) -> "TensorElement":
        return cls._raw(components, {})

    @classmethod
    def pure(cls, components, words: Sequence[Word], coeff: ParamScalar | Number = 1) -> "TensorElement":
        return cls(components, {tuple(tuple(w) for w in words): coeff})

    @classmethod
    def from_polys(cls, polys: Sequence[NcPoly], components=None) -> "TensorElement":
        """The elementary tensor p1 (x) p2 (x) ... expanded over words."""
        if components is None:
            components = [p.alphabet for p in polys]
        acc: dict[tuple[Word, ...], ParamScalar] = {(): ONE}
        for p in polys:
            nxt: dict[tuple[Word, ...], ParamScalar] = {}
            for key, c in acc.items():
                for w, d in p.items():
                    k2 = key + (w,)
                    s = nxt.get(k2, ZERO) + c * d
                    if s:
                        nxt[k2] = s
                    else:
                        nxt.pop(k2, None)
            acc = nxt
        return cls._raw(components, acc)

    @property
    def arity(self) -> int:
        return len(self.components)

    @property
    def terms(self) -> Mapping[tuple[Word, ...], ParamScalar]:
        return MappingProxyType(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def degrees(self, key: tuple[Word, ...]) -> tuple[int, ...]:
        return tuple(word_degree(a, w) for a, w in zip(self.components, key))

    def _check_compatible(self, other: "TensorElement") -> None:
        if self.arity != other.arity:
            raise ArityMismatch(f"arity {self.arity} vs {other.arity}")

    def __add__(self, other: "TensorElement") -> "TensorElement":
        self._check_compatible(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            s = acc.get(k)
            s = c if s is None else s + c
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
        comps = tuple(a if a is not None else b for a, b in zip(self.components, other.components))
        return TensorElement._raw(comps, acc)

    def __neg__(self):
        return TensorElement._raw(self.components, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: ParamScalar | Number) -> "TensorElement":
        c = ParamScalar.coerce(c)
        if not c:
            return TensorElement.zero(self.components)
        out = {}
        for k, x in self._terms.items():
            y = x * c
            if y:
                out[k] = y
        return TensorElement._raw(self.components, out)

    def __mul__(self, other):
        if isinstance(other, TensorElement):
            return tensor_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, TensorElement):
            return self.arity == other.arity and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def map_slot(self, i: int, fn: Callable[[Word], Union[NcPoly, "TensorElement"]],
                 odd: bool = False, components: Optional[Sequence[Optional[Alphabet]]] = None
                 ) -> "TensorElement":
        """Apply a linear map to factor i, splicing tensor-valued images in place.

        With ``odd=True`` the map has odd degree and picks up the Koszul sign
        of the factors to its left.
        """
        acc: dict[tuple[Word, ...], ParamScalar] = {}
        new_comps = None
        for key, c in self._terms.items():
            img = fn(key[i])
            if odd:
                left = sum(word_degree(a, w) for a, w in zip(self.components[:i], key[:i]))
                if left % 2:
                    c = -c
            if isinstance(img, NcPoly):
                pieces = (((w,), d) for w, d in img.items())
                img_comps = (img.alphabet,)
            else:
                pieces = img.items()
                img_comps = img.components
            if new_comps is None:
                new_comps = self.components[:i] + tuple(img_comps) + self.components[i + 1:]
            for sub, d in pieces:
                k2 = key[:i] + tuple(sub) + key[i + 1:]
                s = acc.get(k2, ZERO) + c * d
                if s:
                    acc[k2] = s
                else:
                    acc.pop(k2, None)
        if components is not None:
            new_comps = tuple(components)
        elif new_comps is None:
            new_comps = self.components
        return TensorElement._raw(new_comps, acc)

    def with_components(self, components) -> "TensorElement":
        return TensorElement._raw(tuple(components), self._terms)

    def contract(self, fn: Callable[[tuple[Word, ...]], NcPoly], alphabet=None) -> NcPoly:
        """Send each tuple of words to an NcPoly and sum with coefficients."""
        acc: dict[Word, ParamScalar] = {}
        for key, c in self._terms.items():
            img = fn(key)
            alphabet = alphabet or img.alphabet
            for w, d in img.items():
                s = acc.get(w, ZERO) + c * d
                if s:
                    acc[w] = s
                else:
                    acc.pop(w, None)
        return NcPoly._raw(acc, alphabet)

    def sorted_items(self):
        def key(k):
            out = []
            for a, w in zip(self.components, k):
                idx = a.index if a is not None else {}
                out.append((len(w), tuple(idx.get(x, -1) for x in w), w))
            return tuple(out)
        return sorted(self._terms.items(), key=lambda kv: key(kv[0]))

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in self.sorted_items():
            body = "(" + " | ".join(render_word(w) for w in k) + ")"
            parts.append(_render_coeff_term(c, body, False))
        return " + ".join(parts)

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"TensorElement({self.render()!r})"


def koszul_sign(dx: Sequence[int], dy: Sequence[int]) -> int:
    """Sign of (x1..xn)(y1..yn) -> (x1y1..xnyn): each y_i passes x_j for j > i."""
    total = 0
    n = len(dx)
    for i in range(n):
        if dy[i]:
            for j in range(i + 1, n):
                total += dx[j] * dy[i]
    return -1 if total % 2 else 1


def tensor_mul(s: TensorElement, t: TensorElement) -> TensorElement:
    """Componentwise concatenation with the Koszul sign of the graded tensor product."""
    if s.arity != t.arity:
        raise ArityMismatch(f"arity {s.arity} vs {t.arity}")
    comps = tuple(a if a is not None else b for a, b in zip(s.components, t.components))
    acc: dict[tuple[Word, ...], ParamScalar] = {}
    sdeg = {k: tuple(word_degree(a, w) for a, w in zip(comps, k)) for k in s._terms}
    tdeg = {k: tuple(word_degree(a, w) for a, w in zip(comps, k)) for k in t._terms}
    for k1, c1 in s._terms.items():
        d1 = sdeg[k1]
        for k2, c2 in t._terms.items():
            c = c1 * c2
            if koszul_sign(d1, tdeg[k2]) < 0:
                c = -c
            key = tuple(a + b for a, b in zip(k1, k2))
            x = acc.get(key, ZERO) + c
            if x:
                acc[key] = x
            else:
                acc.pop(key, None)
    return TensorElement._raw(comps, acc)


def flip(t: TensorElement, i: int = 0) -> TensorElement:
    """Swap factors i and i+1, with the Koszul sign when both are odd."""
    if t.arity < 2 or not 0 <= i < t.arity - 1:
        raise ArityMismatch(f"cannot flip position {i} of an arity-{t.arity} tensor")
    comps = list(t.components)
    comps[i], comps[i + 1] = comps[i + 1], comps[i]
    acc = {}
    for k, c in t._terms.items():
        a = word_degree(t.components[i], k[i])
        b = word_degree(t.components[i + 1], k[i + 1])
        key = list(k)
        key[i], key[i + 1] = key[i + 1], key[i]
        acc[tuple(key)] = -c if (a * b) % 2 else c
    return TensorElement._raw(tuple(comps), acc)


def tensor_of(*polys: NcPoly) -> TensorElement:
    return TensorElement.from_polys(polys)


def letters_of(words: Iterable[Word]) -> set[str]:
    return {x for w in words for x in w}
