"""Differential calculi on presented algebras.

A calculus adds form letters (degree 1) to the alphabet of an algebra,
together with bimodule rules pushing form letters to the right of algebra
letters, wedge rules ordering form letters, and a differential given on
letters.  The first-order calculus is the case ``max_degree == 1``.
"""

from __future__ import annotations

import threading
from typing import Mapping, Optional, Sequence

from .coeff import ONE, ZERO, ParamScalar
from .freealg import EMPTY, Generator, NcPoly, TensorElement, Word, inverse_name, render_word
from .hopf import StructureMaps
from .linalg import Echelon, kernel
from .report import Report
from .rewrite import Presentation, check_local_confluence


class DegreeOverflow(ValueError):
    pass


class NotInKernel(ValueError):
    pass


class NotInAugmentationIdeal(ValueError):
    pass


class IdealNotInKernel(ValueError):
    pass


def _form_generators(forms) -> list[Generator]:
    out = []
    for f in forms:
        out.append(f if isinstance(f, Generator) else Generator(f, kind="form"))
    return out


class GradedCalculus:
    """Forms up to ``max_degree`` over a presented algebra with a differential."""

    def __init__(self, base: Presentation, forms: Sequence, right_mult: Mapping[Word, NcPoly],
                 d_images: Mapping[str, NcPoly], wedge_rules: Optional[Mapping[Word, NcPoly]] = None,
                 d_form_images: Optional[Mapping[str, NcPoly]] = None, max_degree: int = 1,
                 name: str = ""):
        self.base = base
        self.name = name or base.name
        self.max_degree = max_degree
        gens = _form_generators(forms)
        self.form_letters = tuple(g.name for g in gens)
        rules: dict[Word, NcPoly] = {}
        for lhs, rhs in right_mult.items():
            rules[tuple(lhs)] = rhs
        for lhs, rhs in (wedge_rules or {}).items():
            rules[tuple(lhs)] = rhs
        self.right_mult = {tuple(k): v for k, v in right_mult.items()}
        self.wedge_rules = {tuple(k): v for k, v in (wedge_rules or {}).items()}
        self.pres = base.extend(gens, rules, max_degree=max_degree, name=self.name)
        alpha = self.pres.alphabet
        self.alphabet = alpha
        self.d_images: dict[str, NcPoly] = {}
        for x, img in d_images.items():
            self.d_images[x] = self.pres.nf(img.with_alphabet(alpha))
        for x in base.alphabet.invertible_letters():
            xi = inverse_name(x)
            if xi not in self.d_images and x in self.d_images:
                inv = NcPoly.word((xi,), 1, alpha)
                self.d_images[xi] = -self.pres.mul(inv, self.d_images[x], inv)
        self.d_form_images: dict[str, NcPoly] = {}
        for f in self.form_letters:
            img = (d_form_images or {}).get(f)
            self.d_form_images[f] = self.pres.nf(img.with_alphabet(alpha)) if img is not None else self.pres.zero()
        for x in base.alphabet.letters:
            if x not in self.d_images:
                raise KeyError(f"no differential given for {x!r}")
        self._dmemo: dict[Word, NcPoly] = {}
        self._lock = threading.Lock()

    # basic structure ------------------------------------------------------
    def restricted(self, max_degree: int) -> "GradedCalculus":
        """The same calculus truncated at a lower degree."""
        return GradedCalculus(self.base, [self.alphabet.generator(f) for f in self.form_letters],
                              self.right_mult, self.d_images, self.wedge_rules,
                              self.d_form_images, max_degree, self.name)

    def degree(self, x: NcPoly) -> int:
        degs = {self.alphabet.degree(w) for w in x.words()}
        if len(degs) > 1:
            raise ValueError(f"{x.render()} is not homogeneous")
        return degs.pop() if degs else 0

    def form(self, word, coeff=1) -> NcPoly:
        return self.pres.poly(word, coeff)

    def nf(self, x: NcPoly) -> NcPoly:
        return self.pres.nf(x.with_alphabet(self.alphabet))

    # differential ---------------------------------------------------------
    def _letter_d(self, x: str) -> NcPoly:
        if x in self.d_images:
            return self.d_images[x]
        return self.d_form_images[x]

    def d_word(self, word: Word) -> NcPoly:
        """Graded Leibniz extension on a word (not necessarily normal)."""
        word = tuple(word)
        hit = self._dmemo.get(word)
        if hit is not None:
            return hit
        if not word:
            val = self.pres.zero()
        else:
            head, last = word[:-1], word[-1]
            pres = self.pres
            sign = -1 if self.alphabet.degree(head) % 2 else 1
            left = pres.mul(self.d_word(head), pres.poly(last)) if head else pres.zero()
            right = pres.mul(pres.poly(head), self._letter_d(last)).scale(sign)
            val = left + right
        with self._lock:
            self._dmemo[word] = val
        return val

    def d(self, x: NcPoly) -> NcPoly:
        acc = self.pres.zero()
        for w, c in x.items():
            acc = acc + self.d_word(w).scale(c)
        return acc

    def d_graded(self, x: NcPoly) -> NcPoly:
        for w in x.words():
            if self.alphabet.degree(w) > self.max_degree:
                raise DegreeOverflow(f"form of degree {self.alphabet.degree(w)} exceeds {self.max_degree}")
        return self.d(x)

    def wedge(self, x: NcPoly, y: NcPoly) -> NcPoly:
        dx = max((self.alphabet.degree(w) for w in x.words()), default=0)
        dy = max((self.alphabet.degree(w) for w in y.words()), default=0)
        if dx + dy > self.max_degree:
            raise DegreeOverflow(f"degree {dx}+{dy} exceeds {self.max_degree}")
        return self.pres.mul(x.with_alphabet(self.alphabet), y.with_alphabet(self.alphabet))

    def basis_forms(self, max_len: int, degree: int) -> list[Word]:
        return self.pres.basis_words(max_len, degree=degree)

    # checks ---------------------------------------------------------------
    def check(self, max_len: int, confluence_len: Optional[int] = None) -> Report:
        """Confluence, well-definedness of d, Leibniz, d^2 = 0 and surjectivity."""
        rep = Report(f"calculus:{self.name}")
        pres = self.pres
        conf = check_local_confluence(pres, confluence_len or max_len + 2)
        rep.add("calculus.confluent", conf.ok,
                conf.failures[0].describe() if conf.failures else f"{conf.checked} overlaps",
                "normal forms are unique")
        for lhs, rhs in pres.rules.items():
            if self.alphabet.degree(lhs) >= self.max_degree and lhs not in self.wedge_rules:
                continue
            label = pres.render_rule(lhs)
            ok = self.d_word(lhs) == self.d(rhs)
            rep.add(f"d.well-defined[{label}]", ok,
                    "" if ok else f"d({render_word(lhs)}) = {self.d_word(lhs).render()} vs {self.d(rhs).render()}",
                    "d respects the relation")
        basis0 = pres.basis_words(max_len, degree=0)

        def leibniz(a, b):
            ab = pres.nf_word(a + b)
            rhs = pres.mul(self.d_word(a), pres.poly(b)) + pres.mul(pres.poly(a), self.d_word(b))
            return self.d(ab) == rhs

        rep.tally("d.leibniz", ((f"{render_word(a)}|{render_word(b)}", leibniz(a, b))
                                for a in basis0 for b in basis0 if len(a) + len(b) <= max_len),
                  "d(ab) = d(a) b + a d(b)")
        rep.add("d.unit", not self.d(pres.one()), "", "d(1) = 0")
        if self.max_degree >= 2:
            gens = list(self.base.alphabet.letters) + list(self.form_letters)
            rep.tally("d.squared.generators", ((x, not self.d(self._letter_d(x))) for x in gens), "d d = 0")
            forms = [w for k in range(self.max_degree) for w in pres.basis_words(max_len, degree=k)]
            rep.tally("d.squared.basis", ((render_word(w), not self.d(self.d_word(w))) for w in forms), "d d = 0")
        witnesses = self.surjectivity_witness(max_len)
        missing = [f for f in self.form_letters if f not in witnesses]
        rep.add("calculus.surjective", not missing,
                f"no A dA expression for {', '.join(missing)}" if missing else "", "forms are spanned by A dA")
        right = self.surjectivity_witness(max_len, side="right")
        missing = [f for f in self.form_letters if f not in right]
        rep.add("calculus.surjective.right", not missing,
                f"no dA A expression for {', '.join(missing)}" if missing else "", "forms are spanned by dA A")
        return rep

    def surjectivity_witness(self, max_len: int, side: str = "left") -> dict[str, tuple]:
        """Express each form letter through words a d(b) (or d(b) a).

        Returns letter -> (s, [(a, b, c), ...]) with s * letter = sum c a d(b)
        (resp. sum c d(b) a); s is a nonzero scalar.  Short bounds are tried
        first and a unit s is preferred, so callers can divide by it.
        """
        out: dict[str, tuple] = {}
        for bound in range(2, max(2, max_len) + 1):
            for f, (s, terms) in self._witness_at(bound, side).items():
                if f not in out or (not out[f][0].is_monomial() and s.is_monomial()):
                    out[f] = (s, terms)
            if len(out) == len(self.form_letters) and all(s.is_monomial() for s, _ in out.values()):
                break
        return out

    def _witness_at(self, max_len: int, side: str) -> dict[str, tuple]:
        pres = self.pres
        basis = pres.basis_words(max(1, max_len // 2), degree=0)
        pairs = [(a, b) for a in basis for b in basis if b and len(a) + len(b) <= max_len]
        ech = Echelon()
        for i, (a, b) in enumerate(pairs):
            if side == "left":
                v = pres.mul(pres.poly(a), self.d_word(b))
            else:
                v = pres.mul(self.d_word(b), pres.poly(a))
            ech.add(dict(v.items()), {i: ONE})
        out = {}
        for f in self.form_letters:
            r, tag = ech.reduce({(f,): ONE}, {"self": ONE})
            if not r:
                s = tag.pop("self")
                out[f] = (s, [(pairs[i][0], pairs[i][1], -c) for i, c in tag.items()])
        return out

    def universal_d(self, a: NcPoly) -> TensorElement:
        return universal_d(a, self.base)

    def universal_quotient(self, x: TensorElement) -> NcPoly:
        return universal_quotient(x, self)


FirstOrderCalculus = GradedCalculus


# universal calculus ---------------------------------------------------------

def universal_d(a: NcPoly, pres: Presentation) -> TensorElement:
    """d_u(a) = 1 (x) a - a (x) 1."""
    comps = (pres.alphabet, pres.alphabet)
    acc: dict = {}
    for w, c in a.items():
        for key, s in (((EMPTY, w), c), ((w, EMPTY), -c)):
            x = acc.get(key, ZERO) + s
            if x:
                acc[key] = x
            else:
                acc.pop(key, None)
    return TensorElement._raw(comps, acc)


def multiply_out(x: TensorElement, pres: Presentation) -> NcPoly:
    return x.contract(lambda key: pres.nf_word(key[0] + key[1]), pres.alphabet)


def universal_quotient(x: TensorElement, calc: GradedCalculus) -> NcPoly:
    """sum a_i (x) b_i -> sum a_i d(b_i), defined on the kernel of multiplication."""
    if multiply_out(x, calc.base):
        raise NotInKernel("element is not in the kernel of multiplication")
    pres = calc.pres
    acc = pres.zero()
    for (a, b), c in x.items():
        acc = acc + pres.mul(pres.poly(a), calc.d_word(b)).scale(c)
    return acc


def differential(a: NcPoly, calc: GradedCalculus) -> NcPoly:
    return calc.d(a)


def wedge(x: NcPoly, y: NcPoly, calc: GradedCalculus) -> NcPoly:
    return calc.wedge(x, y)


def d_graded(x: NcPoly, calc: GradedCalculus) -> NcPoly:
    return calc.d_graded(x)


def check_fodc(calc: GradedCalculus, max_len: int) -> Report:
    return calc.check(max_len)


# Hopf algebra calculi -------------------------------------------------------

def pi_eps(h: NcPoly, maps: StructureMaps) -> NcPoly:
    """h - eps(h) 1."""
    return h - maps.pres.one().scale(maps.counit(h))


def maurer_cartan(h: NcPoly, calc: GradedCalculus, maps: StructureMaps) -> NcPoly:
    """S(h1) d(h2) for h in the augmentation ideal."""
    if maps.counit(h):
        raise NotInAugmentationIdeal(f"{h.render()} has nonzero counit")
    pres = calc.pres
    acc = pres.zero()
    for w, c in h.items():
        for (h1, h2), e in maps.delta.on_word(w).items():
            acc = acc + pres.mul(maps.S.on_word(h1).with_alphabet(pres.alphabet), calc.d_word(h2)).scale(c * e)
    return acc


def maurer_cartan_equation(word: Word, calc: GradedCalculus, maps: StructureMaps) -> bool:
    """d w(pi(a)) = - w(pi(a1)) ^ w(pi(a2))."""
    a = maps.pres.nf_word(word)
    lhs = calc.d(maurer_cartan(pi_eps(a, maps), calc, maps))
    rhs = calc.pres.zero()
    for (a1, a2), c in maps.delta.on_word(word).items():
        x = maurer_cartan(pi_eps(maps.pres.nf_word(a1), maps), calc, maps)
        y = maurer_cartan(pi_eps(maps.pres.nf_word(a2), maps), calc, maps)
        rhs = rhs - calc.pres.mul(x, y).scale(c)
    return lhs == rhs


class WoronowiczCalculus:
    """The calculus H (x) (H+/I) attached to a right ideal I in the augmentation ideal.

    Everything lives inside the span of normal words of length at most
    ``max_len``; the ideal is the span of the products g*w landing there.
    """

    def __init__(self, maps: StructureMaps, ideal_gens: Sequence[NcPoly], max_len: int):
        H = maps.pres
        self.maps = maps
        self.max_len = max_len
        for g in ideal_gens:
            if maps.counit(g):
                raise IdealNotInKernel(f"{g.render()} is not in the augmentation ideal")
        self.basis = H.basis_words(max_len)
        inside = set(self.basis)
        self.ideal_vectors = []
        ech = Echelon()
        for g in ideal_gens:
            for w in self.basis:
                v = H.mul(g, H.poly(w))
                if v and all(x in inside for x in v.words()):
                    if ech.add(dict(v.items()))[0]:
                        self.ideal_vectors.append(v)
        self._ideal = ech
        self.augmentation_dim = len(self.basis) - 1

    @property
    def dimension(self) -> int:
        """dim H+/I inside the bound."""
        return self.augmentation_dim - self._ideal.rank

    def in_ideal(self, x: NcPoly) -> bool:
        return self._ideal.contains(dict(x.items()))

    def cls(self, x: NcPoly) -> NcPoly:
        """Canonical representative of pi_eps(x) modulo I."""
        H = self.maps.pres
        r, _ = self._ideal.reduce(dict(pi_eps(x, self.maps).items()))
        return NcPoly._raw(r, H.alphabet)

    def d(self, h: NcPoly) -> TensorElement:
        """(id (x) pi)(Delta(h) - h (x) 1)."""
        H = self.maps.pres
        comps = (H.alphabet, H.alphabet)
        acc: dict = {}
        for w, c in h.items():
            for (h1, h2), e in self.maps.delta.on_word(w).items():
                for v, f in self.cls(H.nf_word(h2)).items():
                    key = (h1, v)
                    s = acc.get(key, ZERO) + c * e * f
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
        return TensorElement._raw(comps, acc)

    def bicovariant(self) -> Report:
        """ad_R(I) inside I (x) H, tested on the ideal vectors whose image stays in the bound."""
        from .hopf import adjoint_coaction
        rep = Report("woronowicz")
        H = self.maps.pres
        inside = set(self.basis)
        tested = 0
        for v in self.ideal_vectors:
            ad = adjoint_coaction(v, self.maps)
            slices: dict[Word, dict] = {}
            for (x, h), c in ad.items():
                slices.setdefault(h, {})[x] = c
            if any(x not in inside for s in slices.values() for x in s):
                continue
            tested += 1
            for h, s in slices.items():
                if not self._ideal.contains(s):
                    rep.add("woronowicz.ad-invariant", False, f"ad_R({v.render()}) leaves I (x) H")
                    return rep
        rep.add("woronowicz.ad-invariant", True, f"{tested} ideal elements")
        return rep


def woronowicz_from_ideal(maps: StructureMaps, ideal_gens: Sequence[NcPoly], max_len: int
                          ) -> tuple[WoronowiczCalculus, Report]:
    calc = WoronowiczCalculus(maps, ideal_gens, max_len)
    return calc, calc.bicovariant()


def maurer_cartan_kernel(calc: GradedCalculus, maps: StructureMaps, max_len: int) -> list[NcPoly]:
    """A basis of ker w on pi_eps of the bounded basis."""
    H = maps.pres
    words = [w for w in H.basis_words(max_len) if w]
    elems = [pi_eps(H.poly(w), maps) for w in words]
    cols = [dict(maurer_cartan(e, calc, maps).items()) for e in elems]
    out = []
    for vec in kernel(cols):
        p = H.zero()
        for i, c in vec.items():
            p = p + elems[i].scale(c)
        out.append(p)
    return out


# prolongation ---------------------------------------------------------------

def first_order_relations(calc: GradedCalculus, max_len: int) -> list[list[tuple[Word, Word, ParamScalar]]]:
    """Spanning relations sum c a d(b) = 0 among pairs of normal words with |a|+|b| <= max_len."""
    pres = calc.pres
    basis = pres.basis_words(max_len, degree=0)
    pairs = [(a, b) for a in basis for b in basis if b and len(a) + len(b) <= max_len]
    cols = [dict(pres.mul(pres.poly(a), calc.d_word(b)).items()) for a, b in pairs]
    return [[(pairs[i][0], pairs[i][1], c) for i, c in vec.items()] for vec in kernel(cols)]


def maximal_prolongation_check(calc: GradedCalculus, max_len: int) -> Report:
    """Every first-order relation sum a d(b) = 0 must give sum da ^ db = 0 in degree 2."""
    rep = Report("prolongation")
    if calc.max_degree < 2:
        rep.skip("prolongation.degree2", "calculus stops in degree 1")
        return rep
    pres = calc.pres
    relations = first_order_relations(calc, max_len)
    for rel in relations:
        img = pres.zero()
        for a, b, c in rel:
            img = img + pres.mul(calc.d_word(a), calc.d_word(b)).scale(c)
        if img:
            text = " + ".join(f"({c.render()})*{render_word(a)}*d({render_word(b)})" for a, b, c in rel)
            rep.add("prolongation.kills-relations", False, f"{text} maps to {img.render()}")
            return rep
    rep.add("prolongation.kills-relations", True, f"{len(relations)} relations")
    return rep


def prolongation_image(calc: GradedCalculus, rel: Sequence[tuple[Word, Word, ParamScalar]]) -> NcPoly:
    pres = calc.pres
    img = pres.zero()
    for a, b, c in rel:
        img = img + pres.mul(calc.d_word(a), calc.d_word(b)).scale(c)
    return img
