"""Comodule algebras, cleaving maps, Galois maps and crossed products."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional, Sequence

from .coeff import ONE, ZERO, ParamScalar
from .freealg import EMPTY, NcPoly, TensorElement, Word, render_word
from .hopf import AlgebraTarget, LinearMapSpec, StructureMaps, TensorTarget, convolution_inverse_check
from .linalg import kernel
from .report import Report
from .rewrite import Presentation, tensor_normal_form


class CoactionError(ValueError):
    pass


class CocycleViolation(ValueError):
    pass


def _tensor_from_pairs(components, pairs) -> TensorElement:
    """Sum of c * (x (x) y) over (x, y, c) with x, y NcPoly."""
    acc: dict = {}
    for x, y, c in pairs:
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                key = (w1, w2)
                s = acc.get(key, ZERO) + c * c1 * c2
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return TensorElement._raw(tuple(components), acc)


class Coaction:
    """A coaction of a Hopf algebra on a presented algebra, extended multiplicatively.

    For ``side="right"`` the images live in A (x) H, for ``side="left"`` in
    H (x) A.
    """

    def __init__(self, pres: Presentation, hopf: StructureMaps, images: Mapping[str, TensorElement],
                 side: str = "right", name: str = "", check: bool = True):
        if side not in ("right", "left"):
            raise ValueError("side must be 'right' or 'left'")
        self.pres = pres
        self.hopf = hopf
        self.side = side
        self.name = name
        order = [pres, hopf.pres] if side == "right" else [hopf.pres, pres]
        self.target = TensorTarget(order)
        imgs = {x: self.target.nf(v.with_components(self.target.components)) for x, v in images.items()}
        self.map = LinearMapSpec(pres, self.target, imgs, "algebra", name=f"coaction {name}")
        for x in pres.alphabet.letters:
            self.map.image(x)
        if check:
            for x in pres.alphabet.letters:
                if not self._coassociative((x,)):
                    raise CoactionError(f"coaction is not coassociative on {x}")
                if not self._counital((x,)):
                    raise CoactionError(f"coaction is not counital on {x}")

    @property
    def components(self):
        return self.target.components

    def on_word(self, w: Word) -> TensorElement:
        return self.map.on_word(w)

    def __call__(self, a: NcPoly) -> TensorElement:
        return self.map(a)

    def _coassociative(self, w: Word) -> bool:
        img = self.on_word(w)
        D = self.hopf.delta.on_word
        if self.side == "right":
            return img.map_slot(0, self.on_word) == img.map_slot(1, D)
        return img.map_slot(1, self.on_word) == img.map_slot(0, D)

    def _counital(self, w: Word) -> bool:
        E = self.hopf.eps.on_word
        a_slot, h_slot = (0, 1) if self.side == "right" else (1, 0)
        acc = self.pres.zero()
        for key, c in self.on_word(w).items():
            acc = acc + self.pres.nf_word(key[a_slot]).scale(c * E(key[h_slot]))
        return acc == self.pres.nf_word(w)

    def check(self, max_len: int) -> Report:
        rep = Report(f"coaction:{self.name}")
        basis = self.pres.basis_words(max_len)
        rep.tally("coaction.coassociative", ((w, self._coassociative(w)) for w in basis),
                  "(coaction x id) coaction = (id x Delta) coaction")
        rep.tally("coaction.counital", ((w, self._counital(w)) for w in basis), "(id x eps) coaction = id")
        for lhs, rhs in self.pres.rules.items():
            if self.pres.alphabet.degree(lhs):
                continue
            label = self.pres.render_rule(lhs)
            ok = self.on_word(lhs) == self.map(rhs)
            rep.add(f"coaction.well-defined[{label}]", ok, "" if ok else f"images differ on {label}",
                    "coaction respects the relation")
        return rep

    def is_coinvariant(self, a: NcPoly) -> bool:
        return self(a) == self.trivial(a)

    def trivial(self, a: NcPoly) -> TensorElement:
        """a (x) 1 (or 1 (x) a for a left coaction)."""
        one = self.hopf.pres.one()
        pair = (a, one) if self.side == "right" else (one, a)
        return _tensor_from_pairs(self.components, [(pair[0], pair[1], ONE)])


def coinvariants(pres: Presentation, coact: Coaction, max_len: int, degree: Optional[int] = None
                 ) -> list[NcPoly]:
    """A basis of the coinvariant elements inside the span of bounded normal words."""
    basis = pres.basis_words(max_len, degree=degree)
    columns = []
    for w in basis:
        diff = coact.on_word(w) - coact.trivial(NcPoly.word(w, 1, pres.alphabet))
        columns.append(dict(diff.items()))
    out = []
    for vec in kernel(columns):
        out.append(NcPoly._raw({basis[i]: c for i, c in vec.items()}, pres.alphabet))
    return sorted(out, key=lambda p: min(pres.word_key(w) for w in p.words()))


# cleaving maps ---------------------------------------------------------------

def check_cleaving(j: LinearMapSpec, j_inv: LinearMapSpec, coact: Coaction, maps: StructureMaps,
                   max_len: int) -> Report:
    """Colinearity, convolution inverse and the standard properties of a cleaving map."""
    rep = Report("cleaving")
    A, H = coact.pres, maps.pres
    target = coact.target
    hbasis = H.basis_words(max_len)
    abasis = A.basis_words(max_len)

    def j_tensor_id(t: TensorElement, f: LinearMapSpec) -> TensorElement:
        return target.nf(t.map_slot(0, f.on_word, components=target.components))

    def colinear(h):
        return coact(j.on_word(h)) == j_tensor_id(maps.delta.on_word(h), j)

    rep.tally("cleaving.colinear", ((h, colinear(h)) for h in hbasis), "Delta_A j = (j x id) Delta")
    rep.add("cleaving.convolution-inverse", convolution_inverse_check(j, j_inv, maps, max_len),
            "", "j * j^-1 = eta eps = j^-1 * j")

    def inverse_coaction(h):
        pairs = [(j_inv.on_word(h2), maps.S.on_word(h1), c) for (h1, h2), c in maps.delta.on_word(h).items()]
        return coact(j_inv.on_word(h)) == target.nf(_tensor_from_pairs(target.components, pairs))

    rep.tally("cleaving.inverse-coaction", ((h, inverse_coaction(h)) for h in hbasis),
              "Delta_A j^-1(h) = j^-1(h2) (x) S(h1)")

    def projection(a):
        x = A.zero()
        for (a0, a1), c in coact.on_word(a).items():
            x = x + A.mul(A.nf_word(a0), j_inv.on_word(a1)).scale(c)
        return coact.is_coinvariant(x)

    rep.tally("cleaving.projection-to-base", ((a, projection(a)) for a in abasis),
              "a0 j^-1(a1) is coinvariant")
    j1, ji1 = j.on_word(EMPTY), j_inv.on_word(EMPTY)
    rep.add("cleaving.unit-invertible", A.mul(j1, ji1) == A.one() == A.mul(ji1, j1),
            f"j(1) = {j1.render()}", "j(1) invertible with inverse j^-1(1)")
    rep.add("cleaving.unital", j1 == A.one() and ji1 == A.one(),
            f"j(1) = {j1.render()}", "normalized cleaving map is unital")

    pairs = [(h, g) for h in hbasis for g in hbasis if len(h) + len(g) <= max_len]
    multiplicative = all(j(H.nf_word(h + g)) == A.mul(j.on_word(h), j.on_word(g)) for h, g in pairs)
    if multiplicative:
        rep.tally("cleaving.inverse-anti-multiplicative",
                  ((f"{h}.{g}", j_inv(H.nf_word(h + g)) == A.mul(j_inv.on_word(g), j_inv.on_word(h)))
                   for h, g in pairs), "algebra map j gives anti-algebra map j^-1")
    else:
        rep.skip("cleaving.inverse-anti-multiplicative", "j is not an algebra map")
    return rep


# Galois maps -----------------------------------------------------------------

def galois_chi(x: TensorElement, coact: Coaction) -> TensorElement:
    """a (x) a' -> a a'0 (x) a'1."""
    A = coact.pres
    acc: dict = {}
    for (a, b), c in x.items():
        for (b0, b1), d in coact.on_word(b).items():
            for w, e in A._nf_word(a + b0).items():
                key = (w, b1)
                s = acc.get(key, ZERO) + c * d * e
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return TensorElement._raw(coact.components, acc)


def galois_chi_inverse_cleft(y: TensorElement, j: LinearMapSpec, j_inv: LinearMapSpec,
                             coact: Coaction) -> TensorElement:
    """a (x) h -> a j^-1(h1) (x) j(h2), a representative in A (x) A."""
    A = coact.pres
    comps = (A.alphabet, A.alphabet)
    pairs = []
    for (a, h), c in y.items():
        for (h1, h2), d in coact.hopf.delta.on_word(h).items():
            pairs.append((A.mul(A.nf_word(a), j_inv.on_word(h1)), j.on_word(h2), c * d))
    return _tensor_from_pairs(comps, pairs)


def translation_map(h: NcPoly, j: LinearMapSpec, j_inv: LinearMapSpec, coact: Coaction) -> TensorElement:
    """kappa(h) = chi^-1(1 (x) h)."""
    one = coact.pres.one()
    y = _tensor_from_pairs(coact.components, [(one, h, ONE)])
    return galois_chi_inverse_cleft(y, j, j_inv, coact)


def check_galois_roundtrip(j, j_inv, coact: Coaction, max_len: int) -> Report:
    rep = Report("galois")
    A, H = coact.pres, coact.hopf.pres
    abasis, hbasis = A.basis_words(max_len), H.basis_words(max_len)

    def chi_chi_inv(a, h):
        y = TensorElement._raw(coact.components, {(a, h): ONE})
        return galois_chi(galois_chi_inverse_cleft(y, j, j_inv, coact), coact) == y

    def chi_inv_chi(a, b):
        x = TensorElement._raw((A.alphabet, A.alphabet), {(a, b): ONE})
        back = galois_chi_inverse_cleft(galois_chi(x, coact), j, j_inv, coact)
        return galois_chi(back, coact) == galois_chi(x, coact)

    rep.tally("galois.chi-chi-inverse", ((f"{a}|{h}", chi_chi_inv(a, h)) for a in abasis for h in hbasis),
              "chi chi^-1 = id")
    rep.tally("galois.chi-inverse-chi", ((f"{a}|{b}", chi_inv_chi(a, b)) for a in abasis for b in abasis),
              "chi^-1 chi = id on balanced tensors")
    return rep


def check_translation_map(j, j_inv, coact: Coaction, max_len: int) -> Report:
    """The five standard identities of the translation map, compared through chi."""
    rep = Report("translation")
    A, maps = coact.pres, coact.hopf
    H = maps.pres
    hbasis = H.basis_words(max_len)
    abasis = A.basis_words(max_len)
    chi = lambda x: galois_chi(x, coact)
    kappa = lambda w: translation_map(H.nf_word(w), j, j_inv, coact)
    AA = (A.alphabet, A.alphabet)

    def item1(h):
        return chi(kappa(h)) == _tensor_from_pairs(coact.components, [(A.one(), H.nf_word(h), ONE)])

    def item2(a):
        pairs = []
        for (a0, a1), c in coact.on_word(a).items():
            for (k1, k2), d in kappa(a1).items():
                pairs.append((A.mul(A.nf_word(a0), A.nf_word(k1)), A.nf_word(k2), c * d))
        left = _tensor_from_pairs(AA, pairs)
        right = _tensor_from_pairs(AA, [(A.one(), A.nf_word(a), ONE)])
        return chi(left) == chi(right)

    def item3(h, g):
        pairs = []
        for (x1, x2), c in kappa(h).items():
            for (y1, y2), d in kappa(g).items():
                pairs.append((A.nf_word(y1 + x1), A.nf_word(x2 + y2), c * d))
        right = _tensor_from_pairs(AA, pairs)
        left = translation_map(H.nf_word(h + g), j, j_inv, coact)
        return chi(left) == chi(right)

    def item4(h):
        total = A.zero()
        for (x1, x2), c in kappa(h).items():
            total = total + A.nf_word(x1 + x2).scale(c)
        return total == A.one().scale(maps.eps.on_word(h))

    def chi_id(t: TensorElement) -> TensorElement:
        """(chi (x) id) on A (x) A (x) H."""
        acc: dict = {}
        for (a, b, h), c in t.items():
            for (w, k), d in chi(TensorElement._raw(AA, {(a, b): ONE})).items():
                key = (w, k, h)
                s = acc.get(key, ZERO) + c * d
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        return TensorElement._raw((A.alphabet, H.alphabet, H.alphabet), acc)

    def item5(h):
        k = kappa(h)
        comps3 = (A.alphabet, A.alphabet, H.alphabet)
        left = k.map_slot(1, coact.on_word, components=comps3)
        acc: dict = {}
        for (h1, h2), c in maps.delta.on_word(h).items():
            for (x1, x2), d in kappa(h1).items():
                key = (x1, x2, h2)
                s = acc.get(key, ZERO) + c * d
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        right = TensorElement._raw(comps3, acc)
        return chi_id(left) == chi_id(right)

    rep.tally("translation.item1", ((h, item1(h)) for h in hbasis), "h<1> h<2>0 (x) h<2>1 = 1 (x) h")
    rep.tally("translation.item2", ((a, item2(a)) for a in abasis), "a0 kappa(a1) = 1 (x)_B a")
    rep.tally("translation.item3", ((f"{h}.{g}", item3(h, g)) for h in hbasis for g in hbasis
                                    if len(h) + len(g) <= max_len), "kappa(hh') = h'<1>h<1> (x) h<2>h'<2>")
    rep.tally("translation.item4", ((h, item4(h)) for h in hbasis), "h<1> h<2> = eps(h) 1")
    rep.tally("translation.item5", ((h, item5(h)) for h in hbasis), "(id x coaction) kappa = kappa(h1) (x) h2")
    return rep


# crossed products ------------------------------------------------------------

@dataclass
class CrossedData:
    """A measure h.b and a 2-cocycle sigma with its convolution inverse.

    Each is a function of H-words (and a B element for the measure)
    returning an element of the ambient algebra holding B.
    """

    measure: Callable[[Word, NcPoly], NcPoly]
    sigma: Callable[[Word, Word], NcPoly]
    sigma_inv: Callable[[Word, Word], NcPoly]


class CrossedProduct:
    """B (x) H with the product (b (x) h)(b' (x) h') = b (h1.b') sigma(h2, h'1) (x) h3 h'2."""

    def __init__(self, ambient: Presentation, maps: StructureMaps, data: CrossedData):
        self.ambient = ambient
        self.maps = maps
        self.data = data
        self.components = (ambient.alphabet, maps.pres.alphabet)

    def element(self, b: NcPoly, h: Word | NcPoly) -> TensorElement:
        hp = h if isinstance(h, NcPoly) else self.maps.pres.nf_word(h)
        return _tensor_from_pairs(self.components, [(b, hp, ONE)])

    def one(self) -> TensorElement:
        return TensorElement._raw(self.components, {(EMPTY, EMPTY): ONE})

    def mul(self, x: TensorElement, y: TensorElement) -> TensorElement:
        A, H = self.ambient, self.maps.pres
        pairs = []
        for (b, h), c in x.items():
            d3 = self.maps.coproduct2(H.nf_word(h))
            for (b2, g), e in y.items():
                dg = self.maps.delta.on_word(g)
                bp = A.nf_word(b2)
                for (h1, h2, h3), f in d3.items():
                    acted = self.data.measure(h1, bp)
                    if not acted:
                        continue
                    for (g1, g2), k in dg.items():
                        left = A.mul(A.nf_word(b), acted, self.data.sigma(h2, g1))
                        if left:
                            pairs.append((left, H.nf_word(h3 + g2), c * e * f * k))
        return _tensor_from_pairs(self.components, pairs)

    def coaction(self, x: TensorElement) -> TensorElement:
        """id (x) Delta."""
        return x.map_slot(1, self.maps.delta.on_word)


def _measure_poly(data: CrossedData, h: Word, b: NcPoly, A: Presentation) -> NcPoly:
    acc = A.zero()
    for w, c in b.items():
        acc = acc + data.measure(h, A.nf_word(w)).scale(c)
    return acc


def crossed_product_build(ambient: Presentation, maps: StructureMaps, data: CrossedData,
                          b_elements: Sequence[NcPoly], max_len: int = 2,
                          raise_on_failure: bool = True) -> tuple[CrossedProduct, Report]:
    """Check measure, cocycle and twisted-module laws, then associativity of the product."""
    A, H = ambient, maps.pres
    rep = Report("crossed-product")
    hb = H.basis_words(max_len)
    eps = maps.eps.on_word
    D = maps.delta.on_word
    bs = [A.nf(b) for b in b_elements]
    one = A.one()
    act = lambda h, b: _measure_poly(data, h, b, A)

    def fail(check_id, witness):
        if raise_on_failure:
            raise CocycleViolation(f"{check_id} fails at {witness}")

    def record(check_id, cases, anchor):
        for label, ok in cases:
            if not ok:
                rep.add(check_id, False, f"fails at {label}", anchor)
                fail(check_id, label)
                return
        rep.add(check_id, True, "", anchor)

    record("measure.unit", ((h, act(h, one) == one.scale(eps(h))) for h in hb), "h.1 = eps(h) 1")

    def measure_mult(h, b, b2):
        right = A.zero()
        for (h1, h2), c in D(h).items():
            right = right + A.mul(act(h1, b), act(h2, b2)).scale(c)
        return act(h, A.mul(b, b2)) == right

    record("measure.multiplicative", ((f"{h},{b},{b2}", measure_mult(h, b, b2))
                                      for h in hb for b in bs for b2 in bs), "h.(bb') = (h1.b)(h2.b')")
    record("cocycle.normalized", ((h, data.sigma(h, EMPTY) == one.scale(eps(h)) == data.sigma(EMPTY, h))
                                  for h in hb), "sigma(h,1) = eps(h) 1 = sigma(1,h)")

    def cocycle(h, g, k):
        left = A.zero()
        right = A.zero()
        for (h1, h2), c in D(h).items():
            for (g1, g2), d in D(g).items():
                for (k1, k2), e in D(k).items():
                    left = left + A.mul(act(h1, data.sigma(g1, k1)),
                                        _sigma_poly(data, h2, H.nf_word(g2 + k2), A)).scale(c * d * e)
                right = right + A.mul(data.sigma(h1, g1), _sigma_poly_left(data, H.nf_word(h2 + g2), k, A)
                                      ).scale(c * d)
        return left == right

    triples = [(h, g, k) for h in hb for g in hb for k in hb]
    record("cocycle.law", ((f"{h},{g},{k}", cocycle(h, g, k)) for h, g, k in triples),
           "(h1.sigma(h'1,h''1)) sigma(h2,h'2h''2) = sigma(h1,h'1) sigma(h2h'2,h'')")

    def conv_inverse(h, g):
        left = A.zero()
        right = A.zero()
        for (h1, h2), c in D(h).items():
            for (g1, g2), d in D(g).items():
                left = left + A.mul(data.sigma(h1, g1), data.sigma_inv(h2, g2)).scale(c * d)
                right = right + A.mul(data.sigma_inv(h1, g1), data.sigma(h2, g2)).scale(c * d)
        e = one.scale(eps(h) * eps(g))
        return left == e and right == e

    record("cocycle.convolution-inverse", ((f"{h},{g}", conv_inverse(h, g)) for h in hb for g in hb),
           "sigma * sigma^-1 = eps = sigma^-1 * sigma")
    record("twisted.unit", ((b, act(EMPTY, b) == b) for b in bs), "1.b = b")

    def twisted(h, g, b):
        left = act(h, act(g, b))
        right = A.zero()
        for (h1, h2, h3), c in maps.coproduct2(H.nf_word(h)).items():
            for (g1, g2, g3), d in maps.coproduct2(H.nf_word(g)).items():
                mid = A.zero()
                for w, e in H.nf_word(h2 + g2).items():
                    mid = mid + act(w, b).scale(e)
                right = right + A.mul(data.sigma(h1, g1), mid, data.sigma_inv(h3, g3)).scale(c * d)
        return left == right

    record("twisted.module", ((f"{h},{g},{b}", twisted(h, g, b)) for h in hb for g in hb for b in bs),
           "h.(h'.b) = sigma(h1,h'1)((h2h'2).b) sigma^-1(h3,h'3)")

    cp = CrossedProduct(ambient, maps, data)
    elems = [cp.element(b, h) for b in bs for h in hb]

    def assoc(x, y, z):
        return cp.mul(cp.mul(x, y), z) == cp.mul(x, cp.mul(y, z))

    record("crossed.unit", ((x, cp.mul(cp.one(), x) == x == cp.mul(x, cp.one())) for x in elems),
           "1 (x) 1 is a unit")
    small = [cp.element(b, h) for b in bs for h in hb if len(h) <= 1]
    record("crossed.associative", ((f"{i},{j},{k}", assoc(x, y, z))
                                   for i, x in enumerate(small) for j, y in enumerate(small)
                                   for k, z in enumerate(small)), "associative product")
    return cp, rep


def _sigma_poly(data: CrossedData, h: Word, g: NcPoly, A: Presentation) -> NcPoly:
    acc = A.zero()
    for w, c in g.items():
        acc = acc + data.sigma(h, w).scale(c)
    return acc


def _sigma_poly_left(data: CrossedData, h: NcPoly, g: Word, A: Presentation) -> NcPoly:
    acc = A.zero()
    for w, c in h.items():
        acc = acc + data.sigma(w, g).scale(c)
    return acc


def doi_takeuchi_from_cleft(j: LinearMapSpec, j_inv: LinearMapSpec, coact: Coaction) -> CrossedData:
    """Measure h.b = j(h1) b j^-1(h2) and cocycle sigma(h,h') = j(h1) j(h'1) j^-1(h2 h'2)."""
    A, maps = coact.pres, coact.hopf
    H = maps.pres
    D = maps.delta.on_word
    memo: dict = {}

    def measure(h: Word, b: NcPoly) -> NcPoly:
        acc = A.zero()
        for (h1, h2), c in D(h).items():
            acc = acc + A.mul(j.on_word(h1), b, j_inv.on_word(h2)).scale(c)
        return acc

    def sigma(h: Word, g: Word) -> NcPoly:
        key = ("s", h, g)
        if key not in memo:
            acc = A.zero()
            for (h1, h2), c in D(h).items():
                for (g1, g2), d in D(g).items():
                    acc = acc + A.mul(j.on_word(h1), j.on_word(g1), j_inv(H.nf_word(h2 + g2))).scale(c * d)
            memo[key] = acc
        return memo[key]

    def sigma_inv(h: Word, g: Word) -> NcPoly:
        key = ("i", h, g)
        if key not in memo:
            acc = A.zero()
            for (h1, h2), c in D(h).items():
                for (g1, g2), d in D(g).items():
                    acc = acc + A.mul(j(H.nf_word(h1 + g1)), j_inv.on_word(g2), j_inv.on_word(h2)).scale(c * d)
            memo[key] = acc
        return memo[key]

    return CrossedData(measure, sigma, sigma_inv)


def check_theta(j: LinearMapSpec, j_inv: LinearMapSpec, coact: Coaction, cp: CrossedProduct,
                max_len: int) -> Report:
    """theta(a) = a0 j^-1(a1) (x) a2 is an algebra map and a comodule map into B # H."""
    rep = Report("doi-takeuchi")
    A, maps = coact.pres, coact.hopf

    def theta_word(a: Word) -> TensorElement:
        pairs = []
        for (a0, a1), c in coact.on_word(a).items():
            for (x1, x2), d in maps.delta.on_word(a1).items():
                pairs.append((A.mul(A.nf_word(a0), j_inv.on_word(x1)), maps.pres.nf_word(x2), c * d))
        return _tensor_from_pairs(cp.components, pairs)

    def theta(p: NcPoly) -> TensorElement:
        acc = TensorElement.zero(cp.components)
        for w, c in p.items():
            acc = acc + theta_word(w).scale(c)
        return acc

    basis = A.basis_words(max_len)
    rep.tally("theta.multiplicative", ((f"{a}.{b}", theta(A.nf_word(a + b)) == cp.mul(theta_word(a), theta_word(b)))
                                       for a in basis for b in basis if len(a) + len(b) <= max_len),
              "theta(aa') = theta(a) theta(a')")

    def comodule(a):
        left = TensorElement.zero((cp.components[0], cp.components[1], maps.pres.alphabet))
        for (a0, a1), c in coact.on_word(a).items():
            t = theta_word(a0)
            for (x, y), d in t.items():
                left = left + TensorElement._raw(left.components, {(x, y, a1): c * d})
        right = cp.coaction(theta_word(a))
        return left == right

    rep.tally("theta.colinear", ((a, comodule(a)) for a in basis), "(theta x id) Delta_A = Delta_# theta")
    return rep
