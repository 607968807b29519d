"""Worked examples: Hopf algebras, calculi and quantum principal bundles.

Every builder is pure and cached; ``load_example`` returns a fully
populated bundle description, ``load_hopf`` a bare Hopf algebra.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .bundle import InvariantForms, QuantumPrincipalBundle
from .calculus import GradedCalculus
from .coeff import LAM, ONE, ParamScalar, q, scalar_inverse
from .comodule import Coaction, CrossedData
from .freealg import Alphabet, Generator, NcPoly, TensorElement
from .hopf import AlgebraTarget, LinearMapSpec, StructureMaps
from .report import Report
from .rewrite import Presentation


class UnknownExample(KeyError):
    pass


EXAMPLES = ("group_z", "torus", "qsu2_hopf", "smash_demo", "crossed_demo")
HOPF_ALGEBRAS = ("u1", "cz", "slq2", "suq2")


@dataclass
class HopfEntry:
    name: str
    pres: Presentation
    maps: StructureMaps


def _words(alphabet: Alphabet):
    def w(*letters, c=1):
        return NcPoly.word(letters, c, alphabet)
    return w


def _pure2(a: Alphabet, b: Alphabet):
    def t(x, y, c=1):
        return TensorElement.pure((a, b), [tuple(x.split()) if x else (), tuple(y.split()) if y else ()], c)
    return t


# Hopf algebras ---------------------------------------------------------------

def _group_like(name: str, letter: str) -> HopfEntry:
    A = Alphabet.of(Generator(letter, True, 1))
    pres = Presentation(A, {}, name=name)
    t = _pure2(A, A)
    maps = StructureMaps(pres, {letter: t(letter, letter)}, {letter: 1},
                         {letter: NcPoly.word((letter + "^-1",), 1, A)}, name=name)
    return HopfEntry(name, pres, maps)


def _matrix_hopf(name: str, sign: int) -> HopfEntry:
    """The 2x2 quantum matrix group with parameter q**sign in the commutation rules.

    sign = +1 gives O_q(SU(2)), sign = -1 gives SL_q(2).  Letters are ordered
    alpha, delta, beta, gamma with alpha and delta weighted 2, so the rules
    below terminate and are confluent.
    """
    A = Alphabet.of(Generator("alpha", weight=1), Generator("delta", weight=-1),
                    Generator("beta", weight=-1), Generator("gamma", weight=1))
    w = _words(A)
    one = NcPoly.one(A)
    s = sign
    rules = {
        ("beta", "alpha"): w("alpha", "beta", c=q(s)),
        ("gamma", "alpha"): w("alpha", "gamma", c=q(s)),
        ("beta", "delta"): w("delta", "beta", c=q(-s)),
        ("gamma", "delta"): w("delta", "gamma", c=q(-s)),
        ("gamma", "beta"): w("beta", "gamma"),
        ("alpha", "delta"): one + w("beta", "gamma", c=q(-s)),
        ("delta", "alpha"): one + w("beta", "gamma", c=q(s)),
    }
    pres = Presentation(A, rules, order_weights={"alpha": 2, "delta": 2}, name=name)
    t = _pure2(A, A)
    coproduct = {
        "alpha": t("alpha", "alpha") + t("beta", "gamma"),
        "beta": t("alpha", "beta") + t("beta", "delta"),
        "gamma": t("gamma", "alpha") + t("delta", "gamma"),
        "delta": t("gamma", "beta") + t("delta", "delta"),
    }
    counit = {"alpha": 1, "beta": 0, "gamma": 0, "delta": 1}
    antipode = {"alpha": w("delta"), "beta": w("beta", c=-q(s)),
                "gamma": w("gamma", c=-q(-s)), "delta": w("alpha")}
    maps = StructureMaps(pres, coproduct, counit, antipode, name=name)
    return HopfEntry(name, pres, maps)


@functools.lru_cache(maxsize=None)
def load_hopf(name: str) -> HopfEntry:
    if name == "u1":
        return _group_like("u1", "t")
    if name == "cz":
        return _group_like("cz", "g")
    if name == "suq2":
        return _matrix_hopf("suq2", 1)
    if name == "slq2":
        return _matrix_hopf("slq2", -1)
    raise UnknownExample(f"unknown Hopf algebra {name!r}; choose from {', '.join(HOPF_ALGEBRAS)}")


# calculi ---------------------------------------------------------------------

def _calc_alphabet(base: Presentation, forms) -> Alphabet:
    return base.alphabet.extended(*(Generator(f, kind="form") for f in forms))


@functools.lru_cache(maxsize=None)
def circle_calculus(alpha: int = 0, max_degree: int = 2) -> GradedCalculus:
    """O(U(1)) with dt t = q^alpha t dt and dt ^ dt = 0."""
    H = load_hopf("u1").pres
    X = _calc_alphabet(H, ["dt"])
    w = _words(X)
    rmul = {("dt", "t"): w("t", "dt", c=q(alpha))}
    wedge = {("dt", "dt"): NcPoly.zero(X)}
    return GradedCalculus(H, ["dt"], rmul, {"t": w("dt")}, wedge, max_degree=max_degree,
                          name=f"u1[alpha={alpha}]")


@functools.lru_cache(maxsize=None)
def group_z_calculus(max_degree: int = 2, truncate_squares: bool = True) -> GradedCalculus:
    """C[Z] with dg g = q g dg.

    With ``truncate_squares`` the 2-forms are declared zero; without it the
    free graded extension is returned, which is only useful for locating the
    relations a prolongation has to kill.
    """
    H = load_hopf("cz").pres
    X = _calc_alphabet(H, ["dg"])
    w = _words(X)
    rmul = {("dg", "g"): w("g", "dg", c=q(1))}
    wedge = {("dg", "dg"): NcPoly.zero(X)} if truncate_squares else {}
    return GradedCalculus(H, ["dg"], rmul, {"g": w("dg")}, wedge, max_degree=max_degree,
                          name="cz" if truncate_squares else "cz[free]")


@functools.lru_cache(maxsize=None)
def torus_algebra() -> Presentation:
    A = Alphabet.of(Generator("u", True, 1), Generator("v", True, -1))
    w = _words(A)
    return Presentation(A, {("v", "u"): w("u", "v", c=LAM)}, name="torus")


@functools.lru_cache(maxsize=None)
def torus_calculus(max_degree: int = 2, corrupt: bool = False) -> GradedCalculus:
    """Forms du, dv on the noncommutative torus.

    ``corrupt`` replaces du u = u du by du u = q u du, a deliberately broken
    variant used to exercise the failure paths.
    """
    A = torus_algebra()
    X = _calc_alphabet(A, ["du", "dv"])
    w = _words(X)
    rmul = {
        ("du", "u"): w("u", "du", c=q(1) if corrupt else 1),
        ("du", "v"): w("v", "du", c=LAM ** -1),
        ("dv", "u"): w("u", "dv", c=LAM),
        ("dv", "v"): w("v", "dv"),
    }
    wedge = {
        ("dv", "du"): w("du", "dv", c=-LAM),
        ("du", "du"): NcPoly.zero(X),
        ("dv", "dv"): NcPoly.zero(X),
    }
    return GradedCalculus(A, ["du", "dv"], rmul, {"u": w("du"), "v": w("dv")}, wedge,
                          max_degree=max_degree, name="torus[corrupt]" if corrupt else "torus")


SU2_DEGREE = {"alpha": 1, "beta": -1, "gamma": 1, "delta": -1}


@functools.lru_cache(maxsize=None)
def su2_calculus(max_degree: int = 3) -> GradedCalculus:
    """The three-dimensional calculus on O_q(SU(2)) in the left-invariant basis ep, em, e0."""
    A = load_hopf("suq2").pres
    forms = ["ep", "em", "e0"]
    X = _calc_alphabet(A, forms)
    w = _words(X)
    rmul = {}
    for f, k in SU2_DEGREE.items():
        rmul[("ep", f)] = w(f, "ep", c=q(k))
        rmul[("em", f)] = w(f, "em", c=q(k))
        rmul[("e0", f)] = w(f, "e0", c=q(2 * k))
    wedge = {
        ("em", "ep"): w("ep", "em", c=-q(2)),
        ("e0", "ep"): w("ep", "e0", c=-q(4)),
        ("e0", "em"): w("em", "e0", c=-q(-4)),
        ("ep", "ep"): NcPoly.zero(X),
        ("em", "em"): NcPoly.zero(X),
        ("e0", "e0"): NcPoly.zero(X),
    }
    d_images = {
        "alpha": w("alpha", "e0") + w("beta", "ep", c=q(1)),
        "beta": w("alpha", "em") - w("beta", "e0", c=q(-2)),
        "gamma": w("gamma", "e0") + w("delta", "ep", c=q(1)),
        "delta": w("gamma", "em") - w("delta", "e0", c=q(-2)),
    }
    d_forms = {
        "e0": w("ep", "em", c=q(3)),
        "ep": w("ep", "e0", c=-(q(2) + 1)),
        "em": w("em", "e0", c=q(-2) + q(-4)),
    }
    return GradedCalculus(A, forms, rmul, d_images, wedge, d_forms, max_degree=max_degree, name="suq2")


# bundles ---------------------------------------------------------------------

@dataclass
class ExampleBundle:
    name: str
    hopf: HopfEntry
    calc_H: GradedCalculus
    A: Presentation
    coaction: Coaction
    calc_A: GradedCalculus
    invariant: InvariantForms
    bundle: QuantumPrincipalBundle
    cleaving: Optional[tuple[LinearMapSpec, LinearMapSpec]] = None
    params: dict = field(default_factory=dict)
    named: dict = field(default_factory=dict)
    crossed: Optional[object] = None


def circle_forms(calc: GradedCalculus, maps: StructureMaps, letter: str, power: int) -> InvariantForms:
    """The single invariant form w = x^-1 dx on a group-like generator x with dx x = q^power x dx."""
    X = calc.alphabet
    inv = letter + "^-1"
    lam = Alphabet.of(Generator("w", kind="form"))
    emb = {"w": NcPoly.word((inv, "d" + letter), 1, X)}
    rules = {("w", "w"): NcPoly.zero(lam)}
    hook = {("w", letter): NcPoly.word(("w",), q(power), lam),
            ("w", inv): NcPoly.word(("w",), q(-power), lam)}
    return InvariantForms(calc, maps, ["w"], emb, rules, hook, name=f"w on {maps.name}")


def _coaction(A: Presentation, hopf: HopfEntry, table: dict[str, tuple[str, str]], name: str) -> Coaction:
    t = _pure2(A.alphabet, hopf.pres.alphabet)
    return Coaction(A, hopf.maps, {x: t(a, h) for x, (a, h) in table.items()}, name=name)


@functools.lru_cache(maxsize=None)
def _group_z() -> ExampleBundle:
    hopf = load_hopf("cz")
    calc = group_z_calculus()
    t = _pure2(hopf.pres.alphabet, hopf.pres.alphabet)
    coact = Coaction(hopf.pres, hopf.maps, {"g": t("g", "g")}, name="group_z")
    lam = circle_forms(calc, hopf.maps, "g", 1)
    bundle = QuantumPrincipalBundle("group_z", coact, calc, calc, lam)
    return ExampleBundle("group_z", hopf, calc, hopf.pres, coact, calc, lam, bundle,
                         params={"max_deg": 1, "q_power": 1})


def torus_cleaving(A: Presentation, hopf: HopfEntry) -> tuple[LinearMapSpec, LinearMapSpec]:
    """j(t^k) = u^k, j(t^-k) = v^k, and its convolution inverse."""
    X = A.alphabet
    H = hopf.pres
    j = LinearMapSpec(H, AlgebraTarget(A), {"t": NcPoly.word(("u",), 1, X), "t^-1": NcPoly.word(("v",), 1, X)},
                      "power", name="j")
    j_inv = LinearMapSpec(H, AlgebraTarget(A), {"t": NcPoly.word(("u^-1",), 1, X),
                                                "t^-1": NcPoly.word(("v^-1",), 1, X)}, "power", name="j^-1")
    return j, j_inv


@functools.lru_cache(maxsize=None)
def _torus(corrupt: bool = False) -> ExampleBundle:
    hopf = load_hopf("u1")
    calc_H = circle_calculus(0)
    A = torus_algebra()
    coact = _coaction(A, hopf, {"u": ("u", "t"), "v": ("v", "t^-1")}, "torus")
    calc_A = torus_calculus(corrupt=corrupt)
    lam = circle_forms(calc_H, hopf.maps, "t", 0)
    bundle = QuantumPrincipalBundle("torus", coact, calc_A, calc_H, lam)
    return ExampleBundle("torus", hopf, calc_H, A, coact, calc_A, lam, bundle,
                         cleaving=torus_cleaving(A, hopf), params={"alpha": 0, "max_deg": 2})


def podles_elements(calc: GradedCalculus) -> dict[str, NcPoly]:
    """Generators x, z, zbar of the sphere inside O_q(SU(2))."""
    X = calc.alphabet
    w = _words(X)
    raw = {"x": w("beta", "gamma", c=-q(-1)), "z": w("gamma", "delta"), "zbar": w("alpha", "beta", c=-q(1))}
    return {k: calc.nf(v) for k, v in raw.items()}


def podles_relations(calc: GradedCalculus, corrected: bool = False) -> list[tuple[str, NcPoly, NcPoly]]:
    """The four expressions of a e+/- through differentials of x, z, zbar.

    The second identity holds with d(zbar) in place of d(z); ``corrected``
    selects that form.
    """
    P = calc.pres
    w = _words(calc.alphabet)
    el = podles_elements(calc)
    dx, dz, dzb = calc.d(el["x"]), calc.d(el["z"]), calc.d(el["zbar"])
    m = P.mul
    second = dzb if corrected else dz
    return [
        ("delta e+ = alpha dz + q^-1 gamma dx", w("delta", "ep"), m(w("alpha"), dz) + m(w("gamma", c=q(-1)), dx)),
        ("beta e+ = q^-2 gamma d%s - q alpha dx" % ("zbar" if corrected else "z"), w("beta", "ep"),
         m(w("gamma", c=q(-2)), second) - m(w("alpha", c=q(1)), dx)),
        ("alpha e- = q^2 beta dx - q^-1 delta dzbar", w("alpha", "em"),
         m(w("beta", c=q(2)), dx) - m(w("delta", c=q(-1)), dzb)),
        ("gamma e- = -delta dx - q beta dz", w("gamma", "em"), -m(w("delta"), dx) - m(w("beta", c=q(1)), dz)),
    ]


@functools.lru_cache(maxsize=None)
def _qsu2_hopf() -> ExampleBundle:
    hopf = load_hopf("u1")
    calc_H = circle_calculus(2)
    A = load_hopf("suq2").pres
    coact = _coaction(A, hopf, {"alpha": ("alpha", "t"), "gamma": ("gamma", "t"),
                                "beta": ("beta", "t^-1"), "delta": ("delta", "t^-1")}, "qsu2_hopf")
    calc_A = su2_calculus()
    lam = circle_forms(calc_H, hopf.maps, "t", 2)
    comps = (calc_A.alphabet, calc_H.alphabet)
    pure = _pure2(*comps)
    forms = {
        "ep": pure("ep", "t t"),
        "em": pure("em", "t^-1 t^-1"),
        "e0": pure("e0", "") + pure("", "t^-1 dt"),
    }
    bundle = QuantumPrincipalBundle("qsu2_hopf", coact, calc_A, calc_H, lam, forms)
    return ExampleBundle("qsu2_hopf", hopf, calc_H, A, coact, calc_A, lam, bundle,
                         params={"alpha": 2, "max_deg": 3}, named=podles_elements(calc_A))


# crossed products ------------------------------------------------------------

class TwistedCalculusViolation(ValueError):
    pass


@functools.lru_cache(maxsize=None)
def polynomial_calculus() -> GradedCalculus:
    """C[x] with dx x = x dx and dx ^ dx = 0."""
    B = Presentation(Alphabet.of(Generator("x")), {}, name="cx")
    X = _calc_alphabet(B, ["dx"])
    w = _words(X)
    return GradedCalculus(B, ["dx"], {("dx", "x"): w("x", "dx")}, {"x": w("dx")},
                          {("dx", "dx"): NcPoly.zero(X)}, max_degree=2, name="cx")


def _diagonal_measure(B: Presentation, hopf: HopfEntry, action: dict[tuple[str, str], ParamScalar]):
    """h.b for a diagonal action g.b = c b of group-like letters on the letters of B."""
    scal: dict[tuple[str, str], ParamScalar] = {}
    for (g, b), c in action.items():
        c = ParamScalar.coerce(c)
        if not c.is_monomial():
            raise ValueError(f"the action of {g} on {b} must be a monomial scalar")
        scal[(g, b)] = c
        scal[(g + "^-1", b)] = scalar_inverse(c)

    def on_letter(g: str, word) -> ParamScalar:
        c = ONE
        for b in word:
            c = c * scal.get((g, b), ONE)
        return c

    def measure(h, b: NcPoly) -> NcPoly:
        acc = B.zero()
        for w, c in b.items():
            e = c
            for g in h:
                e = e * on_letter(g, w)
            acc = acc + B.poly(w, e)
        return acc
    return measure, scal


def build_crossed_example(calc_B: GradedCalculus, hopf: HopfEntry, calc_H: GradedCalculus,
                          action: Optional[dict] = None, name: str = "crossed") -> ExampleBundle:
    """The crossed product B # H with a diagonal measure and trivial cocycle, and its calculus.

    ``action`` maps (g, b) to a monomial scalar c with g.b = c b.  The forms
    are those of B and H; the cross relations g b = c b g, dg b = c b dg,
    g db = c db g and dg db = -c db dg come from the graded product
    (w (x) n)(w' (x) n') = (-1)^{|n||w'|} w (n_-1 . w') (x) n_0 n'.
    """
    from .comodule import crossed_product_build
    B = calc_B.base
    H = hopf.pres
    action = dict(action or {})
    for g in H.alphabet.generators:
        img = hopf.maps.delta.on_word((g.name,))
        if img != TensorElement.pure(img.components, [(g.name,), (g.name,)]):
            raise ValueError(f"{g.name} is not group-like; only group-like generators are supported")
    measure, scal = _diagonal_measure(B, hopf, action)
    one = lambda h, g: B.one().scale(hopf.maps.eps.on_word(h) * hopf.maps.eps.on_word(g))
    data = CrossedData(measure, one, one)
    b_elems = [B.poly(w) for w in B.basis_words(2)]
    _, rep = crossed_product_build(B, hopf.maps, data, b_elems, max_len=2)
    hwords = H.basis_words(1)
    if any(calc_B.d(data.sigma(h, g)) for h in hwords for g in hwords):
        raise TwistedCalculusViolation("d does not kill the cocycle")
    hgens = [g for g in H.alphabet.generators]
    alg = B.alphabet.generators + tuple(hgens)
    blet = [g.name for g in B.alphabet.generators]
    hlet = [g.name for g in hgens]
    form_of = {x: _single_letter(calc_B.d_images[x]) for x in blet}
    hform_of = {x: _single_letter(calc_H.d_images[x]) for x in hlet}
    sharp_alpha = Alphabet.of(*alg)
    w0 = _words(sharp_alpha)
    rules = {}
    for lhs, rhs in H.rules.items():
        if lhs in H.declared:
            rules[lhs] = rhs.with_alphabet(sharp_alpha)
    for lhs, rhs in B.rules.items():
        rules[lhs] = rhs.with_alphabet(sharp_alpha)
    for g in hlet:
        for b in blet:
            c = scal.get((g, b), ONE)
            rules[(g, b)] = w0(b, g, c=c)
    sharp = Presentation(sharp_alpha, rules, name=name)
    forms = list(calc_B.form_letters) + list(calc_H.form_letters)
    X = _calc_alphabet(sharp, forms)
    w = _words(X)
    rmul = {}
    wedge = {}
    for src in (calc_B, calc_H):
        for lhs, rhs in src.right_mult.items():
            rmul[lhs] = rhs.with_alphabet(X)
        for lhs, rhs in src.wedge_rules.items():
            wedge[lhs] = rhs.with_alphabet(X)
    for g in hlet:
        dg = hform_of[g]
        for b in blet:
            c = scal.get((g, b), ONE)
            rmul[(dg, b)] = w(b, dg, c=c)
            db = form_of[b]
            rmul[(db, g)] = w(g, db, c=scalar_inverse(c))
            wedge[(dg, db)] = w(db, dg, c=-c)
    d_images = {x: calc_B.d_images[x].with_alphabet(X) for x in blet}
    d_images.update({x: calc_H.d_images[x].with_alphabet(X) for x in hlet})
    d_forms = {f: p.with_alphabet(X) for src in (calc_B, calc_H) for f, p in src.d_form_images.items()}
    calc = GradedCalculus(sharp, forms, rmul, d_images, wedge, d_forms, max_degree=2, name=name)
    images = {b: (b, "") for b in blet}
    images.update({g: (g, g) for g in hlet})
    coact = _coaction(sharp, hopf, images, name)
    lam = circle_forms(calc_H, hopf.maps, hlet[0], _circle_power(calc_H, hlet[0]))
    bundle = QuantumPrincipalBundle(name, coact, calc, calc_H, lam)
    return ExampleBundle(name, hopf, calc_H, sharp, coact, calc, lam, bundle,
                         params={"max_deg": 2, "action": {f"{g}.{b}": c.render() for (g, b), c in scal.items()}},
                         crossed=(calc_B, data, rep))


def _single_letter(p: NcPoly) -> str:
    words = list(p.words())
    if len(words) != 1 or len(words[0]) != 1 or not p.coeff(words[0]).is_one():
        raise TwistedCalculusViolation(f"{p.render()} is not a single form letter")
    return words[0][0]


def _circle_power(calc: GradedCalculus, letter: str) -> int:
    """The exponent k in d(x) x = q^k x d(x)."""
    rhs = calc.right_mult[("d" + letter, letter)]
    (word, c), = rhs.items()
    (exps, _), = c.items()
    return exps[0]


@functools.lru_cache(maxsize=None)
def _smash_demo() -> ExampleBundle:
    return build_crossed_example(polynomial_calculus(), load_hopf("u1"), circle_calculus(0), {}, "smash_demo")


@functools.lru_cache(maxsize=None)
def _crossed_demo() -> ExampleBundle:
    return build_crossed_example(polynomial_calculus(), load_hopf("u1"), circle_calculus(0),
                                 {("t", "x"): q(1)}, "crossed_demo")


_BUILDERS: dict[str, Callable[[], ExampleBundle]] = {
    "group_z": _group_z,
    "torus": _torus,
    "qsu2_hopf": _qsu2_hopf,
    "smash_demo": _smash_demo,
    "crossed_demo": _crossed_demo,
}


def load_example(name: str) -> ExampleBundle:
    if name not in _BUILDERS:
        raise UnknownExample(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    return _BUILDERS[name]()


# verification ----------------------------------------------------------------

def _restricted(ex: ExampleBundle, max_deg: Optional[int]) -> ExampleBundle:
    if max_deg is None or max_deg >= ex.calc_A.max_degree:
        return ex
    calc_A = ex.calc_A.restricted(max_deg)
    forms = {f: v for f, v in ex.bundle.delta_wedge.images.items() if f in calc_A.form_letters}
    bundle = QuantumPrincipalBundle(ex.name, ex.coaction, calc_A, ex.calc_H, ex.invariant, forms)
    return ExampleBundle(ex.name, ex.hopf, ex.calc_H, ex.A, ex.coaction, calc_A, ex.invariant, bundle,
                         ex.cleaving, dict(ex.params, max_deg=max_deg), ex.named, ex.crossed)


def verify_example(ex: ExampleBundle, max_len: int = 4, max_deg: Optional[int] = None) -> Report:
    """Run every check that applies to the example and collect one report."""
    from .bundle import check_vertical
    from .calculus import maximal_prolongation_check
    from .comodule import (check_cleaving, check_galois_roundtrip, check_translation_map,
                           crossed_product_build, doi_takeuchi_from_cleft, coinvariants)
    from .hopf import check_hopf_axioms
    from .linalg import same_span

    ex = _restricted(ex, max_deg)
    rep = Report(ex.name)
    small = min(max_len, 3)
    rep.extend(check_hopf_axioms(ex.hopf.pres, ex.hopf.maps, max_len), "hopf/")
    rep.extend(ex.coaction.check(max_len), "comodule/")
    rep.extend(ex.calc_H.check(max_len), "calculus-H/")
    rep.extend(ex.calc_A.check(small), "calculus-A/")
    rep.extend(maximal_prolongation_check(ex.calc_A, small), "calculus-A/")
    rep.extend(ex.invariant.check(small), "invariant/")
    b = ex.bundle
    rep.extend(b.check_completeness(small), "bundle/")
    rep.extend(check_vertical(b, small), "bundle/")
    rep.extend(b.check_exact_sequence(small, 1), "bundle/")
    if ex.calc_A.max_degree >= 2:
        rep.extend(b.check_exact_sequence(small, 2), "bundle/")
    rep.extend(b.check_bm(small), "bundle/")
    for k in range(min(2, ex.calc_A.max_degree) + 1):
        rep.extend(b.check_base_forms(max_len if k < 2 else small, k), f"bundle/degree{k}/")
    if ex.cleaving is not None:
        j, j_inv = ex.cleaving
        rep.extend(check_cleaving(j, j_inv, ex.coaction, ex.hopf.maps, small), "cleft/")
        rep.extend(check_galois_roundtrip(j, j_inv, ex.coaction, small), "cleft/")
        rep.extend(check_translation_map(j, j_inv, ex.coaction, small), "cleft/")
        data = doi_takeuchi_from_cleft(j, j_inv, ex.coaction)
        _, cp = crossed_product_build(ex.A, ex.hopf.maps, data, coinvariants(ex.A, ex.coaction, 2), 2,
                                      raise_on_failure=False)
        rep.extend(cp, "cleft/")
    if ex.name == "qsu2_hopf":
        for label, lhs, rhs in podles_relations(ex.calc_A, corrected=True):
            ok = ex.calc_A.nf(lhs) == ex.calc_A.nf(rhs)
            rep.add(f"podles[{label}]", ok, "" if ok else (lhs - rhs).render(), "sphere one-forms")
    if ex.crossed is not None:
        calc_B, _, crossed_rep = ex.crossed
        rep.extend(crossed_rep, "crossed/")
        for k in range(min(2, ex.calc_A.max_degree) + 1):
            base = [dict(f.items()) for f in b.base_forms(max_len, k)]
            own = [dict(ex.calc_A.nf(calc_B.pres.poly(w)).items()) for w in calc_B.basis_forms(max_len, k)]
            ok = same_span(base, own)
            rep.add(f"crossed/base-forms[{k}]", ok, "" if ok else f"{len(base)} base forms vs {len(own)} forms of B",
                    "base forms are the forms of B")
    return rep
