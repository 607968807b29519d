"""Hopf algebra structure maps, linear maps out of a coalgebra, convolution.

Structure maps are stored on letters only and extended word by word on
demand: the coproduct and counit multiplicatively, the antipode
anti-multiplicatively.  Results are cached per word.
"""

from __future__ import annotations

import threading
from typing import Callable, Mapping, Optional, Sequence

from .coeff import ONE, ZERO, ParamScalar, scalar_inverse
from .freealg import EMPTY, NcPoly, TensorElement, Word, flip, inverse_name, tensor_mul
from .report import Report
from .rewrite import Presentation, tensor_normal_form


class SignatureMismatch(TypeError):
    pass


class MissingImage(KeyError):
    pass


# targets ---------------------------------------------------------------------

class ScalarTarget:
    """The ground ring as the codomain of a linear map."""

    kind = "scalar"

    def one(self):
        return ONE

    def zero(self):
        return ZERO

    def mul(self, x, y):
        return x * y

    def scale(self, x, c):
        return x * c

    def nf(self, x):
        return x

    def same(self, other) -> bool:
        return isinstance(other, ScalarTarget)


class AlgebraTarget:
    """A presented algebra as codomain; values are NcPoly in normal form."""

    kind = "algebra"

    def __init__(self, pres: Presentation):
        self.pres = pres

    def one(self):
        return self.pres.one()

    def zero(self):
        return self.pres.zero()

    def mul(self, x, y):
        return self.pres.mul(x, y)

    def scale(self, x, c):
        return x.scale(c)

    def nf(self, x):
        return self.pres.nf(x)

    def same(self, other) -> bool:
        return isinstance(other, AlgebraTarget) and other.pres is self.pres


class TensorTarget:
    """A tensor product of presented algebras (graded by form degree)."""

    kind = "tensor"

    def __init__(self, presentations: Sequence[Presentation]):
        self.presentations = tuple(presentations)
        self.components = tuple(p.alphabet for p in self.presentations)

    def one(self):
        return TensorElement._raw(self.components, {tuple(EMPTY for _ in self.presentations): ONE})

    def zero(self):
        return TensorElement.zero(self.components)

    def mul(self, x, y):
        return tensor_normal_form(tensor_mul(x, y), self.presentations)

    def scale(self, x, c):
        return x.scale(c)

    def nf(self, x):
        return tensor_normal_form(x, self.presentations)

    def same(self, other) -> bool:
        return (isinstance(other, TensorTarget)
                and all(a is b for a, b in zip(self.presentations, other.presentations))
                and len(self.presentations) == len(other.presentations))


def _accumulate(target, acc, value, c):
    term = target.scale(value, c)
    return term if acc is None else acc + term


# linear maps -----------------------------------------------------------------

MODES = ("algebra", "anti-algebra", "linear", "power", "left-module")


class LinearMapSpec:
    """A linear map from a presented algebra, given on a spanning set.

    ``images`` maps letters (for the multiplicative modes) or words (for
    ``linear``) to values in the target; ``fn`` may be supplied instead of
    a word table.  Modes:

    * ``algebra``: multiplicative on letters.
    * ``anti-algebra``: multiplicative with the order reversed.
    * ``linear``: given on normal words, either by table or by ``fn``.
    * ``power``: multiplicative on the letters of each normal word; this is
      how maps like t^k -> u^k are described without being algebra maps.
    * ``left-module``: the leading algebra letters of a normal word act by
      left multiplication in the target and ``fn`` handles the rest.
    """

    def __init__(self, source: Presentation, target, images: Optional[Mapping] = None,
                 mode: str = "algebra", fn: Optional[Callable[[Word], object]] = None,
                 name: str = ""):
        if mode not in MODES:
            raise ValueError(f"unknown extension mode {mode!r}")
        self.source = source
        self.target = target
        self.mode = mode
        self.name = name
        self.images = dict(images or {})
        self.fn = fn
        self._memo: dict[Word, object] = {}
        self._lock = threading.Lock()
        if mode in ("algebra", "anti-algebra", "power"):
            self._complete_inverse_images()

    def _complete_inverse_images(self):
        """Fill in x^-1 from a monomial image of x built from invertible letters."""
        for x in self.source.alphabet.invertible_letters():
            xi = inverse_name(x)
            if xi in self.images or x not in self.images:
                continue
            img = self.images[x]
            inv = _invert_monomial(img, self.target)
            if inv is not None:
                self.images[xi] = inv

    def image(self, letter: str):
        try:
            return self.images[letter]
        except KeyError:
            raise MissingImage(f"{self.name or 'map'} has no image for {letter!r}") from None

    def on_word(self, word: Word):
        word = tuple(word)
        hit = self._memo.get(word)
        if hit is not None:
            return hit
        t = self.target
        if self.mode in ("algebra", "power"):
            if not word:
                val = t.one()
            else:
                val = t.mul(self.on_word(word[:-1]), self.image(word[-1]))
        elif self.mode == "anti-algebra":
            if not word:
                val = t.one()
            else:
                val = t.mul(self.image(word[-1]), self.on_word(word[:-1]))
        elif self.mode == "left-module":
            alpha = self.source.alphabet
            k = 0
            while k < len(word) and alpha.degree_of[word[k]] == 0:
                k += 1
            rest = self._table(word[k:])
            val = t.mul(NcPoly.word(word[:k], 1, t.pres.alphabet), rest) if k else rest
        else:
            val = self._table(word)
        with self._lock:
            self._memo[word] = val
        return val

    def _table(self, word: Word):
        if word in self.images:
            return self.images[word]
        if self.fn is not None:
            return self.fn(word)
        if not word:
            return self.target.one()
        raise MissingImage(f"{self.name or 'map'} has no image for word {word}")

    def __call__(self, x: NcPoly):
        if self.mode in ("linear", "power", "left-module"):
            x = self.source.nf(x)
        acc = None
        t = self.target
        for w, c in x.items():
            acc = _accumulate(t, acc, self.on_word(w), c)
        return t.zero() if acc is None else acc

    def same_signature(self, other: "LinearMapSpec") -> bool:
        return self.source is other.source and self.target.same(other.target)

    def __repr__(self):
        return f"LinearMapSpec({self.name or self.mode})"


def _invert_monomial(img, target):
    """Inverse of c*w where w is a product of invertible letters, or None."""
    if isinstance(img, ParamScalar):
        return scalar_inverse(img) if img.is_monomial() else None
    if isinstance(img, NcPoly):
        if len(img) != 1:
            return None
        (w, c), = img.items()
        if not c.is_monomial():
            return None
        alpha = img.alphabet
        if alpha is None or any(inverse_name(x) not in alpha for x in w):
            return None
        return NcPoly.word(tuple(inverse_name(x) for x in reversed(w)), scalar_inverse(c), alpha)
    if isinstance(img, TensorElement):
        if len(img) != 1:
            return None
        (key, c), = img.items()
        if not c.is_monomial():
            return None
        new = []
        for a, w in zip(img.components, key):
            if a is None or any(inverse_name(x) not in a for x in w):
                return None
            new.append(tuple(inverse_name(x) for x in reversed(w)))
        return TensorElement._raw(img.components, {tuple(new): scalar_inverse(c)})
    return None


# Hopf algebras ---------------------------------------------------------------

class StructureMaps:
    """Coproduct, counit and antipode of a presented Hopf algebra."""

    def __init__(self, pres: Presentation, coproduct: Mapping[str, TensorElement],
                 counit: Mapping[str, ParamScalar | int], antipode: Mapping[str, NcPoly],
                 name: str = ""):
        self.pres = pres
        self.name = name or pres.name
        self.tensor2 = TensorTarget([pres, pres])
        self.tensor3 = TensorTarget([pres, pres, pres])
        cop = {x: tensor_normal_form(v.with_components(self.tensor2.components), self.tensor2.presentations)
               for x, v in coproduct.items()}
        cou = {x: ParamScalar.coerce(v) for x, v in counit.items()}
        ant = {x: pres.nf(v.with_alphabet(pres.alphabet)) for x, v in antipode.items()}
        self.delta = LinearMapSpec(pres, self.tensor2, cop, "algebra", name="coproduct")
        self.eps = LinearMapSpec(pres, ScalarTarget(), cou, "algebra", name="counit")
        self.S = LinearMapSpec(pres, AlgebraTarget(pres), ant, "anti-algebra", name="antipode")
        for x in pres.alphabet.letters:
            for m in (self.delta, self.eps, self.S):
                m.image(x)

    # evaluation -----------------------------------------------------------
    def coproduct(self, h: NcPoly) -> TensorElement:
        return self.delta(h)

    def counit(self, h: NcPoly) -> ParamScalar:
        return self.eps(h)

    def antipode(self, h: NcPoly) -> NcPoly:
        return self.S(h)

    def coproduct2(self, h: NcPoly) -> TensorElement:
        """(Delta (x) id) Delta h as an arity-3 tensor."""
        return self.delta(h).map_slot(0, self.delta.on_word)

    def unit_map(self, c) -> NcPoly:
        return self.pres.one().scale(c)

    def identity(self) -> LinearMapSpec:
        return LinearMapSpec(self.pres, AlgebraTarget(self.pres), mode="linear",
                             fn=lambda w: self.pres.nf_word(w), name="id")

    def eta_eps(self, target=None) -> LinearMapSpec:
        """The unit of the convolution algebra Hom(H, target)."""
        target = target or AlgebraTarget(self.pres)
        return LinearMapSpec(self.pres, target, mode="linear",
                             fn=lambda w: target.scale(target.one(), self.eps.on_word(w)), name="eta.eps")

    def antipode_map(self) -> LinearMapSpec:
        return self.S

    def mul_tensor(self, t: TensorElement) -> NcPoly:
        """Multiply out the factors of a tensor in H."""
        return t.contract(lambda key: self.pres.nf_word(sum(key, ())), self.pres.alphabet)


HopfAlgebra = StructureMaps


def apply_coproduct(h: NcPoly, maps: StructureMaps) -> TensorElement:
    return maps.coproduct(h)


def convolution(f: LinearMapSpec, g: LinearMapSpec, maps: StructureMaps) -> LinearMapSpec:
    """(f * g)(x) = f(x1) g(x2), evaluated lazily."""
    if not f.same_signature(g):
        raise SignatureMismatch(f"cannot convolve {f!r} with {g!r}: different source or target")
    if f.source is not maps.pres:
        raise SignatureMismatch("the maps must be defined on the Hopf algebra")
    target = f.target

    def fn(word: Word):
        acc = None
        for (w1, w2), c in maps.delta.on_word(word).items():
            acc = _accumulate(target, acc, target.mul(f.on_word(w1), g.on_word(w2)), c)
        return target.zero() if acc is None else acc

    return LinearMapSpec(f.source, target, mode="linear", fn=fn,
                         name=f"({f.name or 'f'}*{g.name or 'g'})")



def convolution_inverse_check(f: LinearMapSpec, g: LinearMapSpec, maps: StructureMaps,
                              max_len: int) -> bool:
    fg = convolution(f, g, maps)
    gf = convolution(g, f, maps)
    unit = maps.eta_eps(f.target)
    for w in maps.pres.basis_words(max_len):
        e = unit.on_word(w)
        if fg.on_word(w) != e or gf.on_word(w) != e:
            return False
    return True


def adjoint_coaction(h: NcPoly, maps: StructureMaps) -> TensorElement:
    """ad_R(h) = h2 (x) S(h1) h3."""
    pres = maps.pres
    acc: dict = {}
    for (a, b, c), x in maps.coproduct2(h).items():
        right = pres.mul(maps.S.on_word(a), pres.nf_word(c))
        for v, d in right.items():
            for u, e in pres._nf_word(b).items():
                key = (u, v)
                s = acc.get(key, ZERO) + x * d * e
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return TensorElement._raw(maps.tensor2.components, acc)



def check_hopf_axioms(pres: Presentation, maps: StructureMaps, max_len: int) -> Report:
    """Verify the Hopf algebra axioms and the antipode identities on bounded words."""
    rep = Report(f"hopf:{maps.name}")
    basis = pres.basis_words(max_len)
    one = pres.one()
    D, E, S = maps.delta, maps.eps, maps.S

    def coassoc(w):
        d = D.on_word(w)
        return d.map_slot(0, D.on_word) == d.map_slot(1, D.on_word)

    def counit_left(w):
        acc = pres.zero()
        for (a, b), c in D.on_word(w).items():
            acc = acc + pres.nf_word(b).scale(c * E.on_word(a))
        return acc == pres.nf_word(w)

    def counit_right(w):
        acc = pres.zero()
        for (a, b), c in D.on_word(w).items():
            acc = acc + pres.nf_word(a).scale(c * E.on_word(b))
        return acc == pres.nf_word(w)

    def antipode_left(w):
        acc = pres.zero()
        for (a, b), c in D.on_word(w).items():
            acc = acc + pres.mul(S.on_word(a), pres.nf_word(b)).scale(c)
        return acc == one.scale(E.on_word(w))

    def antipode_right(w):
        acc = pres.zero()
        for (a, b), c in D.on_word(w).items():
            acc = acc + pres.mul(pres.nf_word(a), S.on_word(b)).scale(c)
        return acc == one.scale(E.on_word(w))

    rep.tally("coassociativity", ((w, coassoc(w)) for w in basis), "(Delta x id) Delta = (id x Delta) Delta")
    rep.tally("counit.left", ((w, counit_left(w)) for w in basis), "(eps x id) Delta = id")
    rep.tally("counit.right", ((w, counit_right(w)) for w in basis), "(id x eps) Delta = id")
    rep.tally("antipode.left", ((w, antipode_left(w)) for w in basis), "S(h1) h2 = eps(h) 1")
    rep.tally("antipode.right", ((w, antipode_right(w)) for w in basis), "h1 S(h2) = eps(h) 1")

    for lhs, rhs in pres.rules.items():
        label = pres.render_rule(lhs)
        ok_d = D.on_word(lhs) == D(rhs)
        ok_e = E.on_word(lhs) == E(rhs)
        ok_s = S.on_word(lhs) == S(rhs)
        bad = [n for n, ok in (("coproduct", ok_d), ("counit", ok_e), ("antipode", ok_s)) if not ok]
        rep.add(f"well-defined[{label}]", not bad,
                f"{', '.join(bad)} differ on {label}" if bad else "", "structure maps respect the relation")

    def pairs():
        for h in basis:
            for g in basis:
                if len(h) + len(g) <= max_len:
                    yield h, g

    def anti(h, g):
        return S(pres.nf_word(h + g)) == pres.mul(S.on_word(g), S.on_word(h))

    def multiplicative(h, g):
        return D(pres.nf_word(h + g)) == maps.tensor2.mul(D.on_word(h), D.on_word(g))

    rep.tally("coproduct.multiplicative", ((f"{h}.{g}", multiplicative(h, g)) for h, g in pairs()),
              "Delta(hg) = Delta(h) Delta(g)")
    rep.tally("antipode.anti-multiplicative", ((f"{h}.{g}", anti(h, g)) for h, g in pairs()),
              "S(hg) = S(g) S(h)")
    rep.add("antipode.unit", S(one) == one, "", "S(1) = 1")

    def s_coproduct(w):
        left = D.on_word(w).map_slot(0, S.on_word).map_slot(1, S.on_word)
        right = flip(D(S.on_word(w)))
        return left == right

    rep.tally("antipode.anti-comultiplicative", ((w, s_coproduct(w)) for w in basis),
              "(S x S) Delta = flip Delta S")
    rep.tally("antipode.counit", ((w, E(S.on_word(w)) == E.on_word(w)) for w in basis), "eps S = eps")
    return rep
