"""Quantum principal bundle layer.

Invariant forms with their right H-action, vertical forms with the twisted
wedge and differential, the graded coaction on all forms and its
components, horizontality, base forms, the degree-one exact sequence and
the comparison with the first-order bundle map.

Vertical forms are TensorElements over (A, Lambda): the first factor holds
a word of the algebra, the second a word of invariant form letters.
"""

from __future__ import annotations

import threading
from typing import Mapping, Optional, Sequence

from .calculus import GradedCalculus, first_order_relations, maurer_cartan, pi_eps
from .coeff import ONE, ZERO, NotAUnit, ParamScalar, scalar_inverse
from .comodule import Coaction, coinvariants
from .freealg import EMPTY, Alphabet, Generator, NcPoly, TensorElement, Word, render_word
from .hopf import AlgebraTarget, LinearMapSpec, StructureMaps, TensorTarget
from .linalg import Echelon, combine, kernel, same_span, span_contains
from .report import Report
from .rewrite import Presentation


class NotLeftInvariant(ValueError):
    pass


class IncompleteCalculus(ValueError):
    pass


def _add_into(acc: dict, key, c) -> None:
    s = acc.get(key, ZERO) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def _vec(x) -> dict:
    return dict(x.items())


# invariant forms ---------------------------------------------------------------

class InvariantForms:
    """Left-invariant forms on a Hopf algebra given by a small presentation.

    ``embedding`` sends each letter to a form on H, ``hook_table`` gives the
    right action of H letters on single letters.  The action on longer words
    uses the coproduct: (x y) <- a = (x <- a1)(y <- a2).
    """

    def __init__(self, calc: GradedCalculus, maps: StructureMaps, letters: Sequence[str],
                 embedding: Mapping[str, NcPoly], rules: Mapping[Word, NcPoly],
                 hook_table: Mapping[tuple[str, str], NcPoly], max_degree: Optional[int] = None,
                 name: str = ""):
        self.calc = calc
        self.maps = maps
        self.name = name or f"invariant forms of {calc.name}"
        alphabet = Alphabet.of(*(Generator(x, kind="form") for x in letters))
        self.max_degree = calc.max_degree if max_degree is None else max_degree
        self.pres = Presentation(alphabet, {tuple(k): v.with_alphabet(alphabet) for k, v in rules.items()},
                                 max_degree=self.max_degree, name=self.name)
        self.alphabet = alphabet
        self.embed_map = LinearMapSpec(self.pres, AlgebraTarget(calc.pres),
                                       {x: calc.nf(p) for x, p in embedding.items()}, "algebra",
                                       name="embedding")
        self.hook_table = {k: self.pres.nf(v.with_alphabet(alphabet)) for k, v in hook_table.items()}
        self.left = self._left_coaction()
        self._basis = self.pres.basis_words(self.max_degree)
        self._ech = Echelon()
        for i, w in enumerate(self._basis):
            self._ech.add(_vec(self.embed_map.on_word(w)), {i: ONE})
        self._hook_memo: dict = {}
        self._mc_memo: dict = {}
        self._lock = threading.Lock()

    # structure on Omega(H) -----------------------------------------------------
    def _left_coaction(self) -> LinearMapSpec:
        """The left coaction of H on its own forms: h -> h1 (x) h2, dh -> h1 (x) d h2."""
        calc, maps = self.calc, self.maps
        target = TensorTarget([maps.pres, calc.pres])
        images = {}
        for x in maps.pres.alphabet.letters:
            images[x] = target.nf(maps.delta.on_word((x,)).with_components(target.components))
        for f in calc.form_letters:
            source = [x for x in maps.pres.alphabet.letters
                      if calc.d_images.get(x) == calc.pres.poly((f,))]
            if not source:
                raise ValueError(f"form letter {f} is not the differential of a letter")
            x = source[0]
            images[f] = target.nf(maps.delta.on_word((x,)).map_slot(1, calc.d_word, odd=True,
                                                                     components=target.components))
        return LinearMapSpec(calc.pres, target, images, "algebra", name="left coaction on forms")

    def embed(self, theta: NcPoly) -> NcPoly:
        return self.embed_map(theta.with_alphabet(self.alphabet))

    def to_lambda(self, eta: NcPoly) -> NcPoly:
        """Coordinates of a left-invariant form in the letters of Lambda."""
        r, tag = self._ech.reduce(_vec(self.calc.nf(eta)), {"self": ONE})
        if r:
            raise NotLeftInvariant(f"{eta.render()} is not in the span of the invariant forms")
        s = tag.pop("self")
        try:
            inv = scalar_inverse(s)
        except NotAUnit:
            raise NotLeftInvariant(f"coordinates of {eta.render()} need division by {s.render()}") from None
        out: dict = {}
        for i, c in tag.items():
            _add_into(out, self._basis[i], -c * inv)
        return NcPoly._raw(out, self.alphabet)

    def is_left_invariant(self, eta: NcPoly) -> bool:
        one = (EMPTY,)
        expected = TensorElement._raw(self.left.target.components,
                                      {one + (w,): c for w, c in self.calc.nf(eta).items()})
        return self.left(eta) == expected

    def pi_inv(self, eta: NcPoly) -> NcPoly:
        """S(eta_-1) eta_0 expressed in Lambda."""
        calc = self.calc
        acc = calc.pres.zero()
        for (h, f), c in self.left(eta).items():
            acc = acc + calc.pres.mul(self.maps.S.on_word(h).with_alphabet(calc.alphabet),
                                      calc.pres.poly(f)).scale(c)
        return self.to_lambda(acc)

    def d(self, theta: NcPoly) -> NcPoly:
        return self.to_lambda(self.calc.d(self.embed(theta)))

    def mc(self, h: Word) -> NcPoly:
        """The Maurer-Cartan form of pi_eps(h) in Lambda coordinates."""
        h = tuple(h)
        hit = self._mc_memo.get(h)
        if hit is None:
            H = self.maps.pres
            hit = self.to_lambda(maurer_cartan(pi_eps(H.nf_word(h), self.maps), self.calc, self.maps))
            with self._lock:
                self._mc_memo[h] = hit
        return hit

    def mc_poly(self, h: NcPoly) -> NcPoly:
        acc = self.pres.zero()
        for w, c in h.items():
            acc = acc + self.mc(w).scale(c)
        return acc

    # the right action --------------------------------------------------------
    def hook_word(self, theta: Word, h: Word) -> NcPoly:
        key = (tuple(theta), tuple(h))
        hit = self._hook_memo.get(key)
        if hit is not None:
            return hit
        theta, h = key
        lam = self.pres
        if not theta:
            val = lam.one().scale(self.maps.eps.on_word(h))
        elif not h:
            val = lam.nf_word(theta)
        elif len(h) > 1:
            val = self.hook(self.hook_word(theta, h[:1]), h[1:])
        elif len(theta) == 1:
            try:
                val = self.hook_table[(theta[0], h[0])]
            except KeyError:
                raise KeyError(f"no action of {h[0]} on {theta[0]}") from None
        else:
            val = lam.zero()
            for (a1, a2), c in self.maps.delta.on_word(h).items():
                val = val + lam.mul(self.hook_word(theta[:1], a1), self.hook_word(theta[1:], a2)).scale(c)
        with self._lock:
            self._hook_memo[key] = val
        return val

    def hook(self, theta: NcPoly, h) -> NcPoly:
        """theta <- h for theta over Lambda and h a word or an element of H."""
        words = [(tuple(h), ONE)] if isinstance(h, tuple) else list(h.items())
        acc = self.pres.zero()
        for tw, c in theta.items():
            for hw, e in words:
                acc = acc + self.hook_word(tw, hw).scale(c * e)
        return acc

    def hook_by_formula(self, theta: Word, h: Word) -> NcPoly:
        """S(h1) theta h2 computed inside Omega(H), then read back in Lambda."""
        calc = self.calc
        emb = self.embed_map.on_word(theta)
        acc = calc.pres.zero()
        for (h1, h2), c in self.maps.delta.on_word(h).items():
            acc = acc + calc.pres.mul(self.maps.S.on_word(h1).with_alphabet(calc.alphabet), emb,
                                      calc.pres.poly(h2)).scale(c)
        return self.to_lambda(acc)

    def check(self, max_len: int) -> Report:
        rep = Report(f"invariant:{self.name}")
        H = self.maps.pres
        letters = self.alphabet.letters
        rep.tally("invariant.left-coinvariant",
                  ((x, self.is_left_invariant(self.embed_map.on_word((x,)))) for x in letters),
                  "generators are left coinvariant")
        rep.tally("invariant.hook-table",
                  ((f"{x}<-{h}", self.hook_word((x,), (h,)) == self.hook_by_formula((x,), (h,)))
                   for x in letters for h in H.alphabet.letters),
                  "theta <- a = S(a1) theta a2")
        hwords = H.basis_words(max_len)
        pairs = [(a, b) for a in hwords for b in hwords if len(a) + len(b) <= max_len]
        rep.tally("invariant.right-action",
                  ((f"{render_word(t)}<-{render_word(a)}|{render_word(b)}",
                    self.hook(self.hook_word(t, a), b) == self.hook(self.pres.nf_word(t), H.nf_word(a + b)))
                   for t in self._basis for a, b in pairs),
                  "(theta <- a) <- b = theta <- ab")
        rep.tally("invariant.unit-action",
                  ((render_word(a), self.hook_word(EMPTY, a) == self.pres.one().scale(self.maps.eps.on_word(a)))
                   for a in hwords), "1 <- a = eps(a) 1")

        def closed(t):
            try:
                self.d(self.pres.poly(t))
                return True
            except NotLeftInvariant:
                return False
        rep.tally("invariant.d-closed", ((render_word(t), closed(t)) for t in self._basis),
                  "d preserves invariant forms")
        aug = [w for w in hwords if w]

        def product_rule(a, b):
            pa, pb = pi_eps(H.poly(a), self.maps), pi_eps(H.poly(b), self.maps)
            lhs = self.mc_poly(H.mul(pa, pb))
            rhs = self.hook(self.mc_poly(pa), pb) + self.mc_poly(pb).scale(self.maps.counit(pa))
            return lhs == rhs
        rep.tally("invariant.mc-product",
                  ((f"{render_word(a)}|{render_word(b)}", product_rule(a, b))
                   for a in aug for b in aug if len(a) + len(b) <= max_len),
                  "w(ab) = w(a) <- b + eps(a) w(b) on the augmentation ideal")
        return rep


# the bundle ------------------------------------------------------------------

class QuantumPrincipalBundle:
    """A comodule algebra with calculi on both sides and the graded coaction.

    ``form_images`` gives the graded coaction on form letters of A; letters
    that are plain differentials d(x) may be omitted and are derived from
    the coaction of x.
    """

    def __init__(self, name: str, coaction: Coaction, calc_A: GradedCalculus, calc_H: GradedCalculus,
                 invariant: InvariantForms, form_images: Optional[Mapping[str, TensorElement]] = None,
                 anchor: str = ""):
        self.name = name
        self.coact = coaction
        self.A = coaction.pres
        self.H = coaction.hopf.pres
        self.maps = coaction.hopf
        self.calc_A = calc_A
        self.calc_H = calc_H
        self.lam = invariant
        self.anchor = anchor
        self.target = TensorTarget([calc_A.pres, calc_H.pres])
        self.vert_components = (self.A.alphabet, invariant.alphabet)
        comps = self.target.components
        images: dict[str, TensorElement] = {}
        for x in self.A.alphabet.letters:
            images[x] = self.target.nf(coaction.on_word((x,)).with_components(comps))
        for f in calc_A.form_letters:
            given = (form_images or {}).get(f)
            if given is not None:
                images[f] = self.target.nf(given.with_components(comps))
                continue
            source = [x for x in self.A.alphabet.letters if calc_A.d_images.get(x) == calc_A.pres.poly((f,))]
            if not source:
                raise IncompleteCalculus(f"no graded coaction given for {f}")
            images[f] = self.d_tensor(images[source[0]])
        self.delta_wedge = LinearMapSpec(calc_A.pres, self.target, images, "algebra",
                                         name=f"graded coaction {name}")

    # graded coaction ----------------------------------------------------------
    def d_tensor(self, t: TensorElement) -> TensorElement:
        """d(a (x) h) = da (x) h + (-1)^|a| a (x) dh."""
        comps = self.target.components
        first = t.map_slot(0, self.calc_A.d_word, components=comps)
        second = t.map_slot(1, self.calc_H.d_word, odd=True, components=comps)
        return self.target.nf(first + second)

    def coaction_wedge(self, omega: NcPoly) -> TensorElement:
        return self.delta_wedge(omega.with_alphabet(self.calc_A.alphabet))

    def _bidegree(self, key) -> tuple[int, int]:
        a, b = self.target.components
        return a.degree(key[0]), b.degree(key[1])

    def ver(self, omega: NcPoly, k: int, l: int) -> TensorElement:
        """The (k, l) component of the graded coaction."""
        img = self.coaction_wedge(omega)
        terms = {key: c for key, c in img.items() if self._bidegree(key) == (k, l)}
        return TensorElement._raw(img.components, terms)

    def split(self, t: TensorElement) -> dict[tuple[int, int], TensorElement]:
        out: dict[tuple[int, int], dict] = {}
        for key, c in t.items():
            out.setdefault(self._bidegree(key), {})[key] = c
        return {k: TensorElement._raw(t.components, v) for k, v in sorted(out.items())}

    def is_horizontal(self, omega: NcPoly) -> bool:
        return all(self._bidegree(key)[1] == 0 for key, _ in self.coaction_wedge(omega).items())

    # vertical forms -----------------------------------------------------------
    def vertical(self, pairs) -> TensorElement:
        """Build sum c a (x) theta from (a, theta, c) with a over A and theta over Lambda."""
        acc: dict = {}
        for a, theta, c in pairs:
            for w1, c1 in self.A.nf(a).items():
                for w2, c2 in self.lam.pres.nf(theta).items():
                    _add_into(acc, (w1, w2), ParamScalar.coerce(c) * c1 * c2)
        return TensorElement._raw(self.vert_components, acc)

    def pi_ver(self, omega: NcPoly) -> TensorElement:
        """(id (x) pi_inv) applied to the (0, n) component of the graded coaction."""
        acc: dict = {}
        calc = self.calc_A
        omega = calc.nf(omega)
        for n in sorted({calc.alphabet.degree(w) for w in omega.words()}):
            part = NcPoly._raw({w: c for w, c in omega.items() if calc.alphabet.degree(w) == n},
                               calc.alphabet)
            for (a, eta), c in self.ver(part, 0, n).items():
                for th, e in self.lam.pi_inv(self.calc_H.pres.poly(eta)).items():
                    _add_into(acc, (a, th), c * e)
        return TensorElement._raw(self.vert_components, acc)

    def pi_ver_explicit(self, words: Sequence[Word], coeff=1) -> TensorElement:
        """a0_0 ... ak_0 (x) S(a0_1 ... ak_1) a0_2 d(a1_2) ... d(ak_2) for a0 d(a1) ... d(ak)."""
        H = self.H
        calcH = self.calc_H
        legs = []
        for w in words:
            items = []
            for (a0, h), c in self.coact.on_word(tuple(w)).items():
                for (h1, h2), e in self.maps.delta.on_word(h).items():
                    items.append((a0, h1, h2, c * e))
            legs.append(items)
        acc: dict = {}

        def walk(i, a, h1, forms, c):
            if i == len(legs):
                left = self.A.nf_word(a)
                s = self.maps.S(H.nf_word(h1)).with_alphabet(calcH.alphabet)
                eta = calcH.pres.mul(s, forms)
                lam = self.lam.to_lambda(eta)
                for aw, ac in left.items():
                    for tw, tc in lam.items():
                        _add_into(acc, (aw, tw), ParamScalar.coerce(coeff) * c * ac * tc)
                return
            for a0, x1, x2, e in legs[i]:
                piece = calcH.pres.poly(x2) if i == 0 else calcH.d_word(x2)
                walk(i + 1, a + a0, h1 + x1, calcH.pres.mul(forms, piece), c * e)

        walk(0, EMPTY, EMPTY, calcH.pres.one(), ONE)
        return TensorElement._raw(self.vert_components, acc)

    def wedge_ver(self, x: TensorElement, y: TensorElement) -> TensorElement:
        """(a (x) theta)(b (x) eta) = a b0 (x) (theta <- b1) eta."""
        acc: dict = {}
        lam = self.lam
        for (a, th), c in x.items():
            for (b, eta), e in y.items():
                for (b0, b1), f in self.coact.on_word(b).items():
                    left = self.A.nf_word(a + b0)
                    right = lam.pres.mul(lam.hook_word(th, b1), lam.pres.poly(eta))
                    for w1, c1 in left.items():
                        for w2, c2 in right.items():
                            _add_into(acc, (w1, w2), c * e * f * c1 * c2)
        return TensorElement._raw(self.vert_components, acc)

    def d_ver(self, x: TensorElement) -> TensorElement:
        """d(a (x) theta) = a (x) d theta + a0 (x) w(pi_eps(a1)) theta."""
        acc: dict = {}
        lam = self.lam
        for (a, th), c in x.items():
            for w2, c2 in lam.d(lam.pres.poly(th)).items():
                _add_into(acc, (a, w2), c * c2)
            for (a0, a1), e in self.coact.on_word(a).items():
                right = lam.pres.mul(lam.mc(a1), lam.pres.poly(th))
                for w1, c1 in self.A.nf_word(a0).items():
                    for w2, c2 in right.items():
                        _add_into(acc, (w1, w2), c * e * c1 * c2)
        return TensorElement._raw(self.vert_components, acc)

    # completeness --------------------------------------------------------------
    def _difference_witness(self, left: TensorElement, right: TensorElement) -> str:
        for k, part in self.split(left - right).items():
            if part:
                return f"ver^{{{k[0]},{k[1]}}} differs by {part.render()}"
        return ""

    def check_completeness(self, max_len: int) -> Report:
        """Well-definedness of the graded coaction on every relation, multiplicativity and the chain map square."""
        rep = Report(f"completeness:{self.name}")
        pres = self.calc_A.pres
        top = self.calc_A.max_degree
        for lhs, rhs in pres.rules.items():
            if pres.alphabet.degree(lhs) > top:
                continue
            label = pres.render_rule(lhs)
            left = self.delta_wedge.on_word(lhs)
            right = self.delta_wedge(rhs)
            ok = left == right
            rep.add(f"completeness.well-defined[{label}]", ok,
                    "" if ok else f"degree {pres.alphabet.degree(lhs)}: {self._difference_witness(left, right)}",
                    "the graded coaction respects the relation")
        letters = pres.alphabet.letters

        def multiplicative(x, y):
            prod = self.delta_wedge(pres.nf_word((x, y)))
            pieces = self.target.mul(self.delta_wedge.on_word((x,)), self.delta_wedge.on_word((y,)))
            return prod == pieces
        rep.tally("completeness.multiplicative",
                  ((f"{x}|{y}", multiplicative(x, y)) for x in letters for y in letters
                   if pres.alphabet.degree((x, y)) <= top),
                  "ver^{k,l}(w ^ n) = sum of products of components")
        forms = [w for k in range(top) for w in self.calc_A.basis_forms(max_len, k)]

        def chain(w):
            return self.coaction_wedge(self.calc_A.d_word(w)) == self.d_tensor(self.delta_wedge.on_word(w))
        rep.tally("completeness.chain-map", ((render_word(w), chain(w)) for w in forms),
                  "the graded coaction commutes with d")
        allforms = [w for k in range(top + 1) for w in self.calc_A.basis_forms(max_len, k)]

        def coassociative(w):
            n = pres.alphabet.degree(w)
            top_part = self.ver(pres.poly(w), n, 0)
            lhs = top_part.map_slot(0, lambda a: self.ver(pres.poly(a), n, 0))
            rhs = top_part.map_slot(1, lambda h: self.maps.delta.on_word(h))
            return _same_tensor(lhs, rhs)
        rep.tally("completeness.form-coaction-coassociative", ((render_word(w), coassociative(w)) for w in allforms),
                  "the degree-preserving part is a coaction")
        return rep

    # horizontal and base forms --------------------------------------------------
    def _vertical_part(self, w: Word) -> dict:
        return {key: c for key, c in self.delta_wedge.on_word(w).items() if self._bidegree(key)[1] > 0}

    def horizontal_forms(self, max_len: int, degree: int) -> list[NcPoly]:
        words = self.calc_A.basis_forms(max_len, degree)
        return self._combos(words, kernel([self._vertical_part(w) for w in words]))

    def _combos(self, words, vectors) -> list[NcPoly]:
        alpha = self.calc_A.alphabet
        out = []
        for vec in vectors:
            out.append(NcPoly._raw({words[i]: c for i, c in vec.items()}, alpha))
        return out

    def base_forms(self, max_len: int, degree: int) -> list[NcPoly]:
        """Forms with graded coaction w (x) 1, inside the span of bounded normal words."""
        words = self.calc_A.basis_forms(max_len, degree)
        cols = []
        for w in words:
            v = dict(self.delta_wedge.on_word(w).items())
            _add_into(v, (w, EMPTY), -ONE)
            cols.append(v)
        return self._combos(words, kernel(cols))

    def is_base_form(self, omega: NcPoly) -> bool:
        omega = self.calc_A.nf(omega)
        expected = TensorElement._raw(self.target.components, {(w, EMPTY): c for w, c in omega.items()})
        return self.coaction_wedge(omega) == expected

    def check_base_forms(self, max_len: int, degree: int) -> Report:
        rep = Report(f"base:{self.name}")
        forms = self.base_forms(max_len, degree)
        rep.tally("base.horizontal", ((f.render(), self.is_horizontal(f)) for f in forms), "base forms are horizontal")
        rep.tally("base.coinvariant", ((f.render(), self.is_base_form(f)) for f in forms),
                  "base forms are coinvariant")
        return rep

    # exact sequence ----------------------------------------------------------
    def check_exact_sequence(self, max_len: int, degree: int = 1) -> Report:
        rep = Report(f"exact:{self.name}[{degree}]")
        words = self.calc_A.basis_forms(max_len, degree)
        pis = [_vec(self.pi_ver(self.calc_A.pres.poly(w))) for w in words]
        hor = kernel([self._vertical_part(w) for w in words])
        ker = kernel(pis)
        inclusion = span_contains(ker, hor)
        rep.add(f"exact.horizontal-in-kernel[{degree}]", inclusion, "" if inclusion else
                "a horizontal form has nonzero vertical projection", "hor is contained in ker pi_ver")
        if degree == 1:
            equal = inclusion and span_contains(hor, ker)
            rep.add("exact.kernel-is-horizontal[1]", equal, "" if equal else
                    "ker pi_ver is larger than hor^1 at the bound", "ker pi_ver = hor^1")
            targets = [((a, th), ONE) for a in self.A.basis_words(max(0, max_len - 2))
                       for th in self.lam.pres.basis_words(1, degree=1)]
            ech = Echelon()
            for v in pis:
                ech.add(v)
            missing = [key for key, c in targets if not ech.contains({key: c})]
            rep.add("exact.surjective[1]", not missing,
                    "" if not missing else f"{render_word(missing[0][0])} (x) {render_word(missing[0][1])} not reached",
                    "pi_ver is onto the vertical one-forms")
        else:
            rep.add(f"exact.kernel-dimension[{degree}]", True,
                    f"dim ker = {len(ker)}, dim hor = {len(hor)}", "the inclusion may be strict")
        return rep

    # first-order comparison -----------------------------------------------------
    def ver_bm_pair(self, a: Word, b: Word) -> TensorElement:
        """a d(b) -> a b0 (x) S(b1) d(b2) in A (x) Lambda."""
        acc: dict = {}
        calcH = self.calc_H
        for (b0, h), c in self.coact.on_word(b).items():
            eta = calcH.pres.zero()
            for (h1, h2), e in self.maps.delta.on_word(h).items():
                eta = eta + calcH.pres.mul(self.maps.S.on_word(h1).with_alphabet(calcH.alphabet),
                                           calcH.d_word(h2)).scale(e)
            lam = self.lam.to_lambda(eta)
            for w1, c1 in self.A.nf_word(tuple(a) + b0).items():
                for w2, c2 in lam.items():
                    _add_into(acc, (w1, w2), c * c1 * c2)
        return TensorElement._raw(self.vert_components, acc)

    def ver_bm(self, omega: NcPoly, witness: Optional[dict] = None) -> TensorElement:
        """The first-order vertical map on a one-form, through a surjectivity witness."""
        calc = self.calc_A
        witness = witness if witness is not None else calc.surjectivity_witness(4)
        acc = TensorElement.zero(self.vert_components)
        for w, c in calc.nf(omega).items():
            k = next(i for i, x in enumerate(w) if calc.alphabet.degree_of[x])
            prefix, f = w[:k], w[k]
            if w[k + 1:]:
                raise ValueError(f"{render_word(w)} is not a left-normal one-form word")
            s, terms = witness[f]
            inv = scalar_inverse(s)
            for a, b, e in terms:
                acc = acc + self.ver_bm_pair(prefix + a, b).scale(c * e * inv)
        return acc

    def check_bm(self, max_len: int, slack: int = 3) -> Report:
        """Compare the kernel of the first-order vertical map with A d(B) A.

        Products a d(b) a' are generated up to total length ``max_len + slack``
        so that kernel elements at the bound can be reached.
        """
        rep = Report(f"bm:{self.name}")
        calc = self.calc_A
        relations = first_order_relations(calc, max_len)
        bad = None
        for rel in relations:
            total = TensorElement.zero(self.vert_components)
            for a, b, c in rel:
                total = total + self.ver_bm_pair(a, b).scale(c)
            if total:
                bad = rel
                break
        rep.add("bm.well-defined", bad is None,
                "" if bad is None else " + ".join(f"({c.render()})*{render_word(a)}*d({render_word(b)})"
                                                  for a, b, c in bad) + " has nonzero image",
                f"{len(relations)} first-order relations")
        witness = calc.surjectivity_witness(max_len)
        words = calc.basis_forms(max_len, 1)
        cols = [_vec(self.ver_bm(calc.pres.poly(w), witness)) for w in words]
        ker_vectors = kernel(cols)
        ker = [_vec(p) for p in self._combos(words, ker_vectors)]
        B = coinvariants(self.A, self.coact, max_len)
        reach = max_len + slack
        abasis = self.A.basis_words(reach)
        gens = []
        for b in B:
            db = calc.d(b)
            if not db:
                continue
            for a in abasis:
                for a2 in abasis:
                    if len(a) + len(a2) + b.max_len() <= reach:
                        gens.append(calc.pres.mul(calc.pres.poly(a), db, calc.pres.poly(a2)))
        gen_vecs = [_vec(g) for g in gens]
        killed = all(not self.ver_bm(g, witness) for g in gens)
        rep.add("bm.kills-AdBA", killed, "" if killed else "some a d(b) a' has nonzero vertical part",
                "A d(B) A lies in the kernel")
        inside = span_contains(gen_vecs, ker)
        rep.add("bm.kernel-is-AdBA", inside, "" if inside else "a kernel element is not in A d(B) A",
                "ker ver_BM = A d(B) A")
        hor = [_vec(p) for p in self.horizontal_forms(max_len, 1)]
        agree = same_span(hor, ker)
        rep.add("bm.matches-horizontal", agree, "" if agree else "ker ver_BM differs from hor^1",
                "horizontal one-forms agree")
        return rep


def _same_tensor(x: TensorElement, y: TensorElement) -> bool:
    return dict(x.items()) == dict(y.items())


def delta_ver(bundle: QuantumPrincipalBundle, x: TensorElement,
              ad: Optional[Mapping[str, TensorElement]] = None) -> TensorElement:
    """Right coaction on vertical forms: a (x) theta -> a0 (x) theta0 (x) a1 theta1.

    ``ad`` gives the adjoint coaction of each invariant letter as a tensor
    over (Lambda, H); letters without an entry are coinvariant.
    """
    lam = bundle.lam
    H = bundle.H
    comps = (bundle.A.alphabet, lam.alphabet, H.alphabet)
    acc: dict = {}
    for (a, th), c in x.items():
        theta_parts = [(EMPTY, EMPTY, ONE)]
        for letter in th:
            img = (ad or {}).get(letter)
            pieces = [((letter,), EMPTY, ONE)] if img is None else [(k[0], k[1], e) for k, e in img.items()]
            theta_parts = [(t1 + t2, h1 + h2, e1 * e2) for t1, h1, e1 in theta_parts for t2, h2, e2 in pieces]
        for (a0, a1), e in bundle.coact.on_word(a).items():
            for t, h, f in theta_parts:
                for tw, tc in lam.pres.nf_word(t).items():
                    for hw, hc in H.nf_word(a1 + h).items():
                        for aw, ac in bundle.A.nf_word(a0).items():
                            _add_into(acc, (aw, tw, hw), c * e * f * tc * hc * ac)
    return TensorElement._raw(comps, acc)


def check_vertical(bundle: QuantumPrincipalBundle, max_len: int, ad=None) -> Report:
    """Algebraic laws of vertical forms and of the projection onto them."""
    rep = Report(f"vertical:{bundle.name}")
    b = bundle
    A, lam, calc = b.A, b.lam, b.calc_A
    top = min(calc.max_degree, lam.max_degree)
    abasis = A.basis_words(max(1, max_len - 1))
    tbasis = lam.pres.basis_words(top)
    elems = [b.vertical([(A.poly(a), lam.pres.poly(t), 1)]) for a in abasis for t in tbasis]
    rep.tally("vertical.d-squared", ((x.render(), not b.d_ver(b.d_ver(x))) for x in elems), "d_ver d_ver = 0")
    one = b.vertical([(A.one(), lam.pres.one(), 1)])
    rep.tally("vertical.unit", ((x.render(), b.wedge_ver(one, x) == x and b.wedge_ver(x, one) == x) for x in elems),
              "1 (x) 1 is the unit")
    small = [x for x in elems if sum(len(k[0]) for k, _ in x.items()) <= 1]

    def assoc(x, y, z):
        return b.wedge_ver(b.wedge_ver(x, y), z) == b.wedge_ver(x, b.wedge_ver(y, z))
    rep.tally("vertical.associative", ((f"{x.render()}|{y.render()}|{z.render()}", assoc(x, y, z))
                                       for x in small for y in small for z in small), "the vertical wedge is associative")

    def leibniz(x, y):
        k = max((lam.alphabet.degree(t) for (_, t), _ in x.items()), default=0)
        lhs = b.d_ver(b.wedge_ver(x, y))
        rhs = b.wedge_ver(b.d_ver(x), y) + b.wedge_ver(x, b.d_ver(y)).scale(-1 if k % 2 else 1)
        return lhs == rhs
    rep.tally("vertical.leibniz", ((f"{x.render()}|{y.render()}", leibniz(x, y)) for x in small for y in small),
              "d_ver is a graded derivation")
    forms = [w for k in range(top + 1) for w in calc.basis_forms(max_len, k)]
    P = calc.pres

    def multiplicative(v, w):
        return b.pi_ver(P.nf_word(v + w)) == b.wedge_ver(b.pi_ver(P.poly(v)), b.pi_ver(P.poly(w)))
    rep.tally("pi_ver.multiplicative",
              ((f"{render_word(v)}|{render_word(w)}", multiplicative(v, w)) for v in forms for w in forms
               if len(v) + len(w) <= max_len and P.alphabet.degree(v + w) <= top),
              "pi_ver(w ^ n) = pi_ver(w) ^ pi_ver(n)")
    rep.tally("pi_ver.chain-map",
              ((render_word(w), b.pi_ver(calc.d_word(w)) == b.d_ver(b.pi_ver(P.poly(w))))
               for w in forms if P.alphabet.degree(w) < top),
              "pi_ver d = d_ver pi_ver")
    letters = [(x,) for x in A.alphabet.letters]
    tuples = [[a] + list(rest) for a in [()] + letters for rest in
              ([[]] + [[y] for y in letters] + ([[y, z] for y in letters for z in letters] if top >= 2 else []))]

    def explicit(t):
        omega = P.poly(t[0])
        for x in t[1:]:
            omega = P.mul(omega, calc.d_word(x))
        return b.pi_ver(omega) == b.pi_ver_explicit(t)
    rep.tally("pi_ver.explicit", ((" ".join(render_word(x) for x in t), explicit(t)) for t in tuples),
              "pi_ver agrees with the closed formula on a0 da1 ... dak")

    def square(w):
        n = P.alphabet.degree(w)
        lhs = delta_ver(b, b.pi_ver(P.poly(w)), ad)
        acc: dict = {}
        for (f, h), c in b.ver(P.poly(w), n, 0).items():
            for (a, t), e in b.pi_ver(P.poly(f)).items():
                _add_into(acc, (a, t, h), c * e)
        return dict(lhs.items()) == acc
    gens = [(x,) for x in P.alphabet.letters] + [(x, y) for x in calc.form_letters for y in calc.form_letters]
    rep.tally("pi_ver.coaction-square", ((render_word(w), square(w)) for w in gens
                                          if P.alphabet.degree(w) <= min(2, top)),
              "Delta_ver pi_ver = (pi_ver x id) Delta")
    hor = b.horizontal_forms(max_len, 1)
    pairs = [(x, y) for x in hor for y in hor if x.max_len() + y.max_len() <= max_len + 1]
    rep.tally("horizontal.wedge-closed",
              ((f"{x.render()}|{y.render()}", b.is_horizontal(P.mul(x, y))) for x, y in pairs[:40]),
              "horizontal forms are closed under wedge")
    B = coinvariants(A, b.coact, 2)
    prods = []
    for b0 in B:
        prods.append(calc.nf(b0))
        for b1 in B:
            prods.append(P.mul(b0, calc.d(b1)))
            if top >= 2:
                for b2 in B:
                    prods.append(P.mul(b0, calc.d(b1), calc.d(b2)))
    rep.tally("base.BdB-coinvariant", ((p.render(), b.is_base_form(p)) for p in prods if p),
              "B dB ^ ... ^ dB consists of base forms")
    return rep
