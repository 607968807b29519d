"""Acceptance criteria, one test per criterion.

Each test prints a ``PASS criterion N: ...`` or ``FAIL criterion N: ...`` line.
Run ``python3 tests/test_acceptance.py`` for the summary without pytest.
"""

import random
import sys

import pytest

sys.path.insert(0, __file__.rsplit("/", 1)[0])

from conftest import random_linear_map, random_poly  # noqa: E402
from qbundle.calculus import (maurer_cartan_equation, prolongation_image, universal_d,  # noqa: E402
                              universal_quotient)
from qbundle.catalog import (EXAMPLES, group_z_calculus, load_example, load_hopf,  # noqa: E402
                             podles_relations, verify_example)
from qbundle.comodule import (check_cleaving, check_galois_roundtrip, check_theta, check_translation_map,  # noqa: E402
                              coinvariants, crossed_product_build, doi_takeuchi_from_cleft)
from qbundle.coeff import ONE, q  # noqa: E402
from qbundle.hopf import check_hopf_axioms, convolution  # noqa: E402
from qbundle.linalg import same_span  # noqa: E402
from qbundle.parser import parse_element, parse_scalar, parse_tensor  # noqa: E402

_capsys = None


def report(n: int, ok: bool, label: str, detail: str = "") -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {label}" + (f" ({detail})" if detail else "")
    if _capsys is not None:
        with _capsys.disabled():
            print("\n" + line)
    else:
        print(line)


@pytest.fixture(autouse=True)
def _announce(capsys):
    global _capsys
    _capsys = capsys
    yield
    _capsys = None


def _failures(rep) -> str:
    return ", ".join(e.check_id for e in rep.failures[:3])


# 1 -----------------------------------------------------------------------------

def test_criterion_01_hopf_axioms():
    bad = {}
    for name in ("u1", "cz", "slq2", "suq2"):
        h = load_hopf(name)
        rep = check_hopf_axioms(h.pres, h.maps, 4)
        if not rep.ok:
            bad[name] = _failures(rep)
    report(1, not bad, "Hopf axioms on O(U(1)), C[Z], SL_q(2), O_q(SU(2)) at length 4", str(bad) if bad else "")
    assert not bad


# 2 -----------------------------------------------------------------------------

def test_criterion_02_convolution_algebra():
    h = load_hopf("cz")
    unit = h.maps.eta_eps(random_linear_map(h.maps, 0).target)
    words = h.pres.basis_words(4)
    ok = True
    for seed in range(5):
        f, g, k = (random_linear_map(h.maps, 3 * seed + i) for i in range(3))
        left = convolution(convolution(f, g, h.maps), k, h.maps)
        right = convolution(f, convolution(g, k, h.maps), h.maps)
        fu, uf = convolution(f, unit, h.maps), convolution(unit, f, h.maps)
        ok &= all(left.on_word(w) == right.on_word(w) for w in words)
        ok &= all(fu.on_word(w) == f.on_word(w) == uf.on_word(w) for w in words)
    report(2, ok, "convolution associativity and unit on C[Z], 5 random triples, length 4")
    assert ok


# 3 -----------------------------------------------------------------------------

def test_criterion_03_cleft_galois_translation():
    ex = load_example("torus")
    j, j_inv = ex.cleaving
    A, H = ex.A, ex.hopf.pres
    values = all(j(H.poly(("t",) * k)) == A.poly(("u",) * k) and j(H.poly(("t^-1",) * k)) == A.poly(("v",) * k)
                 for k in range(4))
    reps = [check_cleaving(j, j_inv, ex.coaction, ex.hopf.maps, 3), check_galois_roundtrip(j, j_inv, ex.coaction, 3),
            check_translation_map(j, j_inv, ex.coaction, 3)]
    items = {e.check_id for e in reps[2].entries if e.status == "pass"}
    ok = values and all(r.ok for r in reps) and len(items) >= 5
    report(3, ok, "torus cleaving, chi chi^-1 = id and translation map at length 3",
           "" if ok else ", ".join(_failures(r) for r in reps))
    assert ok


# 4 -----------------------------------------------------------------------------

def test_criterion_04_doi_takeuchi():
    ex = load_example("torus")
    j, j_inv = ex.cleaving
    data = doi_takeuchi_from_cleft(j, j_inv, ex.coaction)
    cp, rep = crossed_product_build(ex.A, ex.hopf.maps, data, coinvariants(ex.A, ex.coaction, 2), 2,
                                    raise_on_failure=False)
    theta = check_theta(j, j_inv, ex.coaction, cp, 2)
    ok = rep.ok and theta.ok and len(rep.passed) >= 4
    report(4, ok, "measure, 2-cocycle, twisted module and associative crossed product from the torus cleaving",
           "" if ok else _failures(rep) + _failures(theta))
    assert ok


# 5 -----------------------------------------------------------------------------

def test_criterion_05_universal_quotient():
    bad = []
    for ex in (load_example("torus"), load_example("group_z")):
        calc = ex.calc_A
        P = calc.base
        for w in P.basis_words(4):
            a = P.poly(w)
            if universal_quotient(universal_d(a, P), calc) != calc.d(a):
                bad.append(f"{ex.name}:{w}")
    report(5, not bad, "pi(d_u a) = d a on basis words of length 4 for torus and C[Z]", ", ".join(bad[:3]))
    assert not bad


# 6 -----------------------------------------------------------------------------

def test_criterion_06_maurer_cartan():
    ex = load_example("group_z")
    words = ex.hopf.pres.basis_words(4)
    bad = [w for w in words if not maurer_cartan_equation(w, ex.calc_H, ex.hopf.maps)]
    report(6, not bad, f"Maurer-Cartan equation on {len(words)} words of C[Z]", str(bad[:3]) if bad else "")
    assert not bad


# 7 -----------------------------------------------------------------------------

def test_criterion_07_prolongation_kills_two_forms():
    free = group_z_calculus(truncate_squares=False)
    P = free.pres
    rel = [((), ("g^-1",), ONE), (("g^-1", "g^-1"), ("g",), q(-1))]
    first = sum((P.mul(P.poly(a), free.d_word(b)).scale(c) for a, b, c in rel), P.zero())
    image = prolongation_image(free, rel)
    (word, coeff), = image.items() if len(image) == 1 else ((None, None),)
    forced = first.is_zero() and word is not None and word[-2:] == ("dg", "dg") and bool(coeff)
    truncated = group_z_calculus()
    no_two_forms = truncated.basis_forms(4, 2) == []
    ok = forced and no_two_forms
    report(7, ok, "the relation d(g^-1) + q^-1 g^-2 dg = 0 forces dg dg = 0; no 2-forms remain",
           f"image {image.render()}")
    assert ok


# 8 -----------------------------------------------------------------------------

def test_criterion_08_torus_completeness():
    ex = load_example("torus")
    b, calc = ex.bundle, ex.calc_A
    rep = b.check_completeness(4)
    comps = [calc.pres, ex.calc_H.pres]
    ver11 = b.ver(parse_element("du*dv", calc=calc), 1, 1)
    d_uv = calc.d(parse_element("u*v", calc=calc))
    expected = parse_tensor("-(u*dv | t^-1*dt) + -l^-1*(v*du | t^-1*dt)", comps)
    from_d = parse_tensor(" + ".join(f"{'' if c.is_one() else '(' + c.render() + ')*'}({' * '.join(w) or '1'} | t^-1*dt)"
                                     for w, c in d_uv.items()), comps).scale(-ONE)
    cancel = ver11 + b.ver(parse_element("dv*du", calc=calc), 1, 1).scale(parse_scalar("l^-1"))
    ok = rep.ok and ver11 == expected == from_d and not cancel
    report(8, ok, "torus completeness identities, ver^{1,1}(du dv) = -d(uv) (x) t^-1 dt and its cancellation",
           _failures(rep))
    assert ok


# 9 -----------------------------------------------------------------------------

def test_criterion_09_torus_base_calculus():
    ex = load_example("torus")
    calc = ex.calc_A
    P = calc.pres
    uv, vu_inv = parse_element("u*v", calc=calc), parse_element("u^-1*v^-1", calc=calc)
    d_uv = calc.d(uv)
    expected = []
    for k in range(-4, 4):
        base = P.one()
        for _ in range(abs(k)):
            base = P.mul(base, uv if k > 0 else vu_inv)
        form = P.mul(base, d_uv)
        if form.max_len() <= 4:
            expected.append(dict(form.items()))
    got = [dict(f.items()) for f in ex.bundle.base_forms(4, 1)]
    ok = same_span(got, expected) and len(got) == len(expected) == 4
    report(9, ok, "degree-1 base forms of the torus at length 4 are (uv)^k d(uv)", f"{len(got)} forms")
    assert ok


# 10 ----------------------------------------------------------------------------

HOPF_TABLE = [
    ("ep", 0, 1, "0"),
    ("em", 0, 1, "0"),
    ("e0", 0, 1, "(1 | t^-1*dt)"),
    ("ep*e0", 1, 1, "(ep | t*dt)"),
    ("em*e0", 1, 1, "(em | t^-3*dt)"),
    ("d(e0)", 1, 1, "0"),
    ("d(ep)", 1, 1, "-(q^2 + 1)*(ep | t*dt)"),
    ("d(em)", 1, 1, "q^-2*(1 + q^-2)*(em | t^-3*dt)"),
    ("ep*em*e0", 2, 1, "(ep*em | t^-1*dt)"),
    ("d(ep*em)", 2, 1, "0"),
]


def test_criterion_10_hopf_fibration_table():
    ex = load_example("qsu2_hopf")
    b, calc = ex.bundle, ex.calc_A
    comps = [calc.pres, ex.calc_H.pres]
    bad = []
    for src, k, l, expected in HOPF_TABLE:
        got = b.ver(parse_element(src, calc=calc), k, l)
        want = parse_tensor(expected, comps)
        if got != want:
            bad.append(f"ver^{{{k},{l}}}({src}) = {got.render()}")
    rep = b.check_completeness(3)
    ok = not bad and rep.ok
    report(10, ok, f"quantum Hopf fibration table ({len(HOPF_TABLE)} identities) and completeness",
           "; ".join(bad) or _failures(rep))
    assert ok


# 11 ----------------------------------------------------------------------------

def test_criterion_11_exact_sequence():
    reps = []
    for name in ("torus", "qsu2_hopf"):
        b = load_example(name).bundle
        reps.append(b.check_exact_sequence(4, 1))
        reps.append(b.check_exact_sequence(3, 2))
    ok = all(r.ok for r in reps)
    report(11, ok, "ker pi_ver = hor^1 at length 4 and hor^2 inside ker pi_ver at length 3 for both bundles",
           ", ".join(_failures(r) for r in reps if not r.ok))
    assert ok


# 12 ----------------------------------------------------------------------------

def test_criterion_12_brzezinski_majid():
    reps = [load_example(name).bundle.check_bm(4) for name in ("torus", "qsu2_hopf")]
    ok = all(r.ok for r in reps) and all(len(r.passed) == 4 for r in reps)
    report(12, ok, "ver_BM well defined with kernel A d(B) A at length 4 for both bundles",
           ", ".join(_failures(r) for r in reps if not r.ok))
    assert ok


# 13 ----------------------------------------------------------------------------

def _podles(corrected: bool):
    calc = load_example("qsu2_hopf").calc_A
    return [(label, calc.nf(lhs) == calc.nf(rhs), (lhs - rhs).render())
            for label, lhs, rhs in podles_relations(calc, corrected)]


@pytest.mark.xfail(strict=True, reason="the second identity holds with d(zbar), not d(z)")
def test_criterion_13_podles_relations_with_dz():
    rows = _podles(corrected=False)
    bad = [label for label, ok, _ in rows if not ok]
    report(13, not bad, "the four Podles one-form identities, the second one using d(z)",
           f"fails: {', '.join(bad)}" if bad else "")
    assert not bad


def test_criterion_13_podles_relations_corrected():
    rows = _podles(corrected=True)
    with_dz = _podles(corrected=False)
    assert [ok for _, ok, _ in with_dz] == [True, False, True, True]
    assert all(ok for _, ok, _ in rows)


# 14 ----------------------------------------------------------------------------

def test_criterion_14_smash_product_base_forms():
    ex = load_example("smash_demo")
    calc_B = ex.crossed[0]
    ok = True
    sizes = []
    for k in range(3):
        base = [dict(f.items()) for f in ex.bundle.base_forms(4, k)]
        own = [dict(ex.calc_A.nf(calc_B.pres.poly(w)).items()) for w in calc_B.basis_forms(4, k)]
        sizes.append(len(base))
        ok &= same_span(base, own)
    report(14, ok, "smash demo base forms in degrees 0-2 are the forms of B", f"dimensions {sizes}")
    assert ok


# 15 ----------------------------------------------------------------------------

def test_criterion_15_round_trip_and_determinism():
    rng = random.Random(15)
    bad = []
    for name in EXAMPLES:
        calc = load_example(name).calc_A
        degrees = [k for k in range(calc.max_degree + 1) if calc.basis_forms(3, k)]
        for _ in range(100):
            degree = rng.choice(degrees)
            p = calc.nf(random_poly(rng, calc.pres, 3, 3, degree))
            if parse_element(p.render(), calc=calc) != p:
                bad.append(f"{name}: {p.render()}")
    ex = load_example("torus")
    same = verify_example(ex, 3).to_json() == verify_example(ex, 3).to_json()
    ok = not bad and same
    report(15, ok, f"render/parse round trip on {100 * len(EXAMPLES)} random expressions and byte-identical JSON",
           "; ".join(bad[:3]))
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
