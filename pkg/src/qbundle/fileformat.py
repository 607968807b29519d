"""Plain-text presentation files for bundles.

A file is a sequence of sections.  Each section starts with a header line
``[kind]`` or ``[kind name]`` and holds ``;``-terminated statements; ``#``
starts a comment.  Rule left-hand sides are words written with ``*``, right
hand sides are expressions in the syntax of :mod:`qbundle.parser`::

    example torus;
    param alpha 0;

    [hopf u1]
    gen t inv weight 1;
    coproduct t -> (t | t);
    counit t -> 1;
    antipode t -> t^-1;

    [algebra torus]
    gen u inv weight 1;
    gen v inv weight -1;
    rule v*u -> l^1*u*v;

Sections: ``hopf``, ``calculus-H``, ``algebra``, ``calculus-A``,
``coaction``, ``invariant``, ``forms`` (graded coaction of form letters that
are not the differential of a generator), ``cleaving``, ``named``, and for
crossed products ``base-algebra``, ``base-calculus`` and ``action``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .bundle import InvariantForms, QuantumPrincipalBundle
from .calculus import GradedCalculus
from .catalog import ExampleBundle, HopfEntry, build_crossed_example
from .comodule import Coaction
from .freealg import Alphabet, Generator, NcPoly, TensorElement, render_word
from .hopf import AlgebraTarget, LinearMapSpec, StructureMaps
from .parser import parse_element, parse_scalar, parse_tensor
from .rewrite import Presentation


class FileFormatError(ValueError):
    def __init__(self, message: str, line: int = 0, path: str = ""):
        where = f"{path}:{line}: " if line else (f"{path}: " if path else "")
        super().__init__(where + message)
        self.line = line
        self.path = path


@dataclass
class Statement:
    keyword: str
    args: list[str]
    rhs: Optional[str]
    line: int


@dataclass
class Section:
    kind: str
    name: str
    line: int
    statements: list[Statement] = field(default_factory=list)

    def all(self, keyword: str) -> list[Statement]:
        return [s for s in self.statements if s.keyword == keyword]


SECTION_KINDS = ("hopf", "calculus-H", "algebra", "calculus-A", "coaction", "invariant", "forms",
                 "cleaving", "named", "base-algebra", "base-calculus", "action")

_HEADER = re.compile(r"^\[\s*([A-Za-z-]+)(?:\s+(.*?))?\s*\]$")


# reading ---------------------------------------------------------------------

def _split_statements(text: str):
    """Yield (line, text) for every statement and header, with comments removed."""
    buf, start = [], 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and not buf:
            yield lineno, line
            continue
        for piece in re.split(r"(;)", line):
            if piece == ";":
                stmt = " ".join(buf).strip()
                if stmt:
                    yield start, stmt + ";"
                buf = []
            elif piece.strip():
                if not buf:
                    start = lineno
                buf.append(piece.strip())
    if buf:
        raise FileFormatError("missing ';' at the end of a statement", start)


def parse_sections(text: str, path: str = "") -> tuple[list[Statement], list[Section]]:
    """Split a file into top-level statements and sections."""
    top: list[Statement] = []
    sections: list[Section] = []
    try:
        items = list(_split_statements(text))
    except FileFormatError as e:
        raise FileFormatError(str(e).split(": ", 1)[-1], e.line, path) from None
    for lineno, item in items:
        if not item.endswith(";"):
            m = _HEADER.match(item)
            if not m:
                raise FileFormatError(f"malformed section header {item!r}", lineno, path)
            kind = m.group(1)
            if kind not in SECTION_KINDS:
                raise FileFormatError(f"unknown section {kind!r}", lineno, path)
            sections.append(Section(kind, (m.group(2) or "").strip(), lineno))
            continue
        body = item[:-1].strip()
        lhs, arrow, rhs = body.partition("->")
        words = lhs.split()
        if not words:
            raise FileFormatError("empty statement", lineno, path)
        st = Statement(words[0], words[1:], rhs.strip() if arrow else None, lineno)
        (sections[-1].statements if sections else top).append(st)
    return top, sections


def _word(text: str, alphabet: Alphabet, line: int) -> tuple[str, ...]:
    letters = tuple(x.strip() for x in text.split("*") if x.strip())
    if text.strip() == "1":
        return ()
    for x in letters:
        if x not in alphabet:
            raise FileFormatError(f"unknown letter {x!r}", line)
    return letters


def _lhs(st: Statement, alphabet: Alphabet) -> tuple[str, ...]:
    if st.rhs is None:
        raise FileFormatError(f"{st.keyword} needs '->'", st.line)
    return _word(" ".join(st.args), alphabet, st.line)


def _letter(st: Statement, alphabet, count: int = 1) -> list[str]:
    if st.rhs is None or len(st.args) != count:
        raise FileFormatError(f"expected '{st.keyword} {' '.join(['<letter>'] * count)} -> <value>'", st.line)
    for x in st.args:
        if alphabet is not None and x not in alphabet:
            raise FileFormatError(f"unknown letter {x!r}", st.line)
    return st.args


def _guard(fn, st: Statement, *args):
    try:
        return fn(*args)
    except FileFormatError:
        raise
    except (SyntaxError, KeyError, ValueError, ArithmeticError) as e:
        raise FileFormatError(f"{st.keyword}: {e}", st.line) from None


def _generators(sec: Section, kind: str = "algebra") -> list[Generator]:
    gens = []
    for st in sec.all("gen"):
        if not st.args:
            raise FileFormatError("gen needs a name", st.line)
        name, opts = st.args[0], st.args[1:]
        inv, weight = False, 0
        i = 0
        while i < len(opts):
            if opts[i] == "inv":
                inv = True
            elif opts[i] == "weight" and i + 1 < len(opts):
                weight = _guard(int, st, opts[i + 1])
                i += 1
            else:
                raise FileFormatError(f"unknown generator option {opts[i]!r}", st.line)
            i += 1
        gens.append(Generator(name, inv, weight, kind))
    return gens


def _presentation(sec: Section) -> Presentation:
    alphabet = Alphabet.of(*_generators(sec))
    free = Presentation(alphabet, {}, name=sec.name)
    weights = {}
    for st in sec.all("order"):
        if len(st.args) != 2:
            raise FileFormatError("expected 'order <letter> <weight>'", st.line)
        weights[st.args[0]] = _guard(int, st, st.args[1])
    rules = []
    for st in sec.all("rule"):
        rules.append((_lhs(st, alphabet), _guard(parse_element, st, st.rhs, free)))
    try:
        return Presentation(alphabet, rules, order_weights=weights or None, name=sec.name)
    except ValueError as e:
        raise FileFormatError(str(e), sec.line) from None


def _hopf(sec: Section) -> HopfEntry:
    pres = _presentation(sec)
    comps = [pres, pres]
    cop, cou, ant = {}, {}, {}
    for st in sec.all("coproduct"):
        x, = _letter(st, pres.alphabet)
        cop[x] = _guard(parse_tensor, st, st.rhs, comps)
    for st in sec.all("counit"):
        x, = _letter(st, pres.alphabet)
        cou[x] = _guard(parse_scalar, st, st.rhs)
    for st in sec.all("antipode"):
        x, = _letter(st, pres.alphabet)
        ant[x] = _guard(parse_element, st, st.rhs, pres)
    maps = _guard(StructureMaps, Statement("hopf", [], None, sec.line), pres, cop, cou, ant, sec.name)
    return HopfEntry(sec.name, pres, maps)


def _calculus(sec: Section, base: Presentation) -> GradedCalculus:
    forms = [st.args[0] for st in sec.all("form") if st.args]
    gens = [Generator(f, kind="form") for f in forms]
    scratch = base.extend(gens, (), name=sec.name)
    alphabet = scratch.alphabet
    max_degree = 1
    for st in sec.all("maxdeg"):
        max_degree = _guard(int, st, st.args[0] if st.args else "")
    rmul = {_lhs(st, alphabet): _guard(parse_element, st, st.rhs, scratch) for st in sec.all("rmul")}
    wedge = {_lhs(st, alphabet): _guard(parse_element, st, st.rhs, scratch) for st in sec.all("wedge")}
    full = base.extend(gens, {**rmul, **wedge}, max_degree=max_degree, name=sec.name)
    d_images = {}
    for st in sec.all("d"):
        x, = _letter(st, base.alphabet)
        d_images[x] = _guard(parse_element, st, st.rhs, full)
    d_forms = {}
    for st in sec.all("dform"):
        f, = _letter(st, alphabet)
        d_forms[f] = _guard(parse_element, st, st.rhs, full)
    try:
        return GradedCalculus(base, forms, rmul, d_images, wedge, d_forms, max_degree=max_degree, name=sec.name)
    except (ValueError, KeyError) as e:
        raise FileFormatError(f"calculus {sec.name}: {e}", sec.line) from None


def _params(top: list[Statement]) -> dict:
    out = {}
    for st in top:
        if st.keyword == "param":
            if len(st.args) != 2:
                raise FileFormatError("expected 'param <key> <int>'", st.line)
            out[st.args[0]] = _guard(int, st, st.args[1])
    return out


def loads(text: str, path: str = "") -> ExampleBundle:
    """Build an ExampleBundle from the text of a presentation file."""
    try:
        return _loads(text, path)
    except FileFormatError as e:
        if e.path or not path:
            raise
        raise FileFormatError(str(e), 0, path) from None


def _loads(text: str, path: str) -> ExampleBundle:
    top, sections = parse_sections(text, path)
    by_kind: dict[str, Section] = {}
    for sec in sections:
        if sec.kind in by_kind:
            raise FileFormatError(f"duplicate section [{sec.kind}]", sec.line, path)
        by_kind[sec.kind] = sec
    names = [st.args[0] for st in top if st.keyword == "example" and st.args]
    name = names[0] if names else Path(path).stem if path else "bundle"
    for kind in ("hopf", "calculus-H"):
        if kind not in by_kind:
            raise FileFormatError(f"missing section [{kind}]", 0, path)
    hopf = _hopf(by_kind["hopf"])
    calc_H = _calculus(by_kind["calculus-H"], hopf.pres)
    inv_sec = by_kind.get("invariant")
    if "action" in by_kind:
        for kind in ("base-algebra", "base-calculus"):
            if kind not in by_kind:
                raise FileFormatError(f"missing section [{kind}]", 0, path)
        B = _presentation(by_kind["base-algebra"])
        calc_B = _calculus(by_kind["base-calculus"], B)
        action = {}
        for st in by_kind["action"].all("act"):
            g, b = _letter(st, None, 2)
            action[(g, b)] = _guard(parse_scalar, st, st.rhs)
        try:
            return build_crossed_example(calc_B, hopf, calc_H, action, name)
        except ValueError as e:
            raise FileFormatError(str(e), by_kind["action"].line, path) from None
    for kind in ("algebra", "calculus-A", "coaction", "invariant"):
        if kind not in by_kind:
            raise FileFormatError(f"missing section [{kind}]", 0, path)
    A = _presentation(by_kind["algebra"])
    calc_A = _calculus(by_kind["calculus-A"], A)
    comps = [A, hopf.pres]
    images = {}
    for st in by_kind["coaction"].all("coact"):
        x, = _letter(st, A.alphabet)
        images[x] = _guard(parse_tensor, st, st.rhs, comps)
    sec = by_kind["coaction"]
    coact = _guard(Coaction, Statement("coaction", [], None, sec.line), A, hopf.maps, images, "right", sec.name)
    lam = _invariant(inv_sec, calc_H, hopf.maps)
    forms = {}
    if "forms" in by_kind:
        for st in by_kind["forms"].all("image"):
            f, = _letter(st, calc_A.alphabet)
            forms[f] = _guard(parse_tensor, st, st.rhs, [calc_A.pres, calc_H.pres])
    try:
        bundle = QuantumPrincipalBundle(name, coact, calc_A, calc_H, lam, forms or None)
    except (ValueError, KeyError) as e:
        raise FileFormatError(f"bundle: {e}", 0, path) from None
    cleaving = None
    if "cleaving" in by_kind:
        cleaving = _cleaving(by_kind["cleaving"], hopf.pres, A)
    named = {}
    if "named" in by_kind:
        for st in by_kind["named"].all("let"):
            x, = _letter(st, None)
            named[x] = _guard(parse_element, st, st.rhs, calc_A.pres)
    return ExampleBundle(name, hopf, calc_H, A, coact, calc_A, lam, bundle, cleaving,
                         params=_params(top), named=named)


def _invariant(sec: Section, calc_H: GradedCalculus, maps: StructureMaps) -> InvariantForms:
    letters = [st.args[0] for st in sec.all("form") if st.args]
    alphabet = Alphabet.of(*(Generator(x, kind="form") for x in letters))
    free = Presentation(alphabet, {}, name=sec.name)
    embed = {}
    for st in sec.all("embed"):
        x, = _letter(st, alphabet)
        embed[x] = _guard(parse_element, st, st.rhs, calc_H.pres)
    rules = {_lhs(st, alphabet): _guard(parse_element, st, st.rhs, free) for st in sec.all("rule")}
    hook = {}
    for st in sec.all("hook"):
        theta, h = _letter(st, None, 2)
        if theta not in alphabet or h not in calc_H.base.alphabet:
            raise FileFormatError(f"hook needs a form of the invariant space and a letter of H", st.line)
        hook[(theta, h)] = _guard(parse_element, st, st.rhs, free)
    max_degree = None
    for st in sec.all("maxdeg"):
        max_degree = _guard(int, st, st.args[0] if st.args else "")
    try:
        return InvariantForms(calc_H, maps, letters, embed, rules, hook, max_degree, name=sec.name)
    except (ValueError, KeyError) as e:
        raise FileFormatError(f"invariant forms: {e}", sec.line) from None


def _cleaving(sec: Section, H: Presentation, A: Presentation) -> tuple[LinearMapSpec, LinearMapSpec]:
    maps = {"j": {}, "jinv": {}}
    for st in sec.statements:
        if st.keyword not in maps:
            raise FileFormatError(f"unknown cleaving statement {st.keyword!r}", st.line)
        x, = _letter(st, H.alphabet)
        maps[st.keyword][x] = _guard(parse_element, st, st.rhs, A)
    j = LinearMapSpec(H, AlgebraTarget(A), maps["j"], "power", name="j")
    j_inv = LinearMapSpec(H, AlgebraTarget(A), maps["jinv"], "power", name="j^-1")
    return j, j_inv


def load(path) -> ExampleBundle:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise FileFormatError(f"cannot read file: {e.strerror}", 0, str(path)) from None
    return loads(text, str(path))


# writing ---------------------------------------------------------------------

def _gen_lines(alphabet: Alphabet, kind: str = "algebra") -> list[str]:
    out = []
    for g in alphabet.generators:
        if g.kind != kind:
            continue
        opts = (" inv" if g.invertible else "") + (f" weight {g.weight}" if g.weight else "")
        out.append(f"gen {g.name}{opts};")
    return out


def _pres_lines(pres: Presentation) -> list[str]:
    out = _gen_lines(pres.alphabet)
    for x, w in pres.order_weights.items():
        if w != 1 and not pres.alphabet.is_inverse_letter(x):
            out.append(f"order {x} {w};")
    out += [f"rule {render_word(lhs)} -> {pres.rules[lhs].render()};" for lhs in pres.declared]
    return out


def _calc_lines(calc: GradedCalculus) -> list[str]:
    out = [f"form {f};" for f in calc.form_letters]
    out.append(f"maxdeg {calc.max_degree};")
    out += [f"rmul {render_word(k)} -> {v.render()};" for k, v in calc.right_mult.items()]
    out += [f"wedge {render_word(k)} -> {v.render()};" for k, v in calc.wedge_rules.items()]
    for x in calc.base.alphabet.letters:
        if calc.base.alphabet.is_inverse_letter(x):
            continue
        out.append(f"d {x} -> {calc.d_images[x].render()};")
    out += [f"dform {f} -> {p.render()};" for f, p in calc.d_form_images.items() if p]
    return out


def _section(kind: str, name: str, lines: list[str]) -> str:
    header = f"[{kind} {name}]" if name else f"[{kind}]"
    return "\n".join([header] + lines) + "\n"


def _map_lines(keyword: str, spec: LinearMapSpec, letters) -> list[str]:
    return [f"{keyword} {x} -> {spec.images[x].render()};" for x in letters if x in spec.images]


def _derived_form_image(bundle: QuantumPrincipalBundle, f: str) -> Optional[TensorElement]:
    calc = bundle.calc_A
    for x in bundle.A.alphabet.letters:
        if calc.d_images.get(x) == calc.pres.poly((f,)):
            return bundle.d_tensor(bundle.delta_wedge.images[x])
    return None


def dumps(ex: ExampleBundle) -> str:
    """Render an example as presentation-file text."""
    head = [f"example {ex.name};"]
    head += [f"param {k} {v};" for k, v in sorted(ex.params.items()) if isinstance(v, int)]
    hopf = ex.hopf
    hletters = [x for x in hopf.pres.alphabet.letters if not hopf.pres.alphabet.is_inverse_letter(x)]
    parts = ["\n".join(head) + "\n"]
    parts.append(_section("hopf", hopf.name, _pres_lines(hopf.pres)
                          + _map_lines("coproduct", hopf.maps.delta, hletters)
                          + _map_lines("counit", hopf.maps.eps, hletters)
                          + _map_lines("antipode", hopf.maps.S, hletters)))
    parts.append(_section("calculus-H", ex.calc_H.name, _calc_lines(ex.calc_H)))
    if ex.crossed is not None:
        calc_B = ex.crossed[0]
        parts.append(_section("base-algebra", calc_B.base.name, _pres_lines(calc_B.base)))
        parts.append(_section("base-calculus", calc_B.name, _calc_lines(calc_B)))
        acts = []
        for key, c in ex.params.get("action", {}).items():
            g, b = key.split(".", 1)
            if not hopf.pres.alphabet.is_inverse_letter(g):
                acts.append(f"act {g} {b} -> {c};")
        parts.append(_section("action", "", acts))
        return "\n".join(parts)
    parts.append(_section("algebra", ex.A.name, _pres_lines(ex.A)))
    parts.append(_section("calculus-A", ex.calc_A.name, _calc_lines(ex.calc_A)))
    aletters = [x for x in ex.A.alphabet.letters if not ex.A.alphabet.is_inverse_letter(x)]
    parts.append(_section("coaction", ex.coaction.name, _map_lines("coact", ex.coaction.map, aletters)))
    lam = ex.invariant
    lines = [f"form {x};" for x in lam.alphabet.letters]
    if lam.max_degree != ex.calc_H.max_degree:
        lines.append(f"maxdeg {lam.max_degree};")
    lines += [f"embed {x} -> {lam.embed_map.images[x].render()};" for x in lam.alphabet.letters]
    lines += [f"rule {render_word(k)} -> {lam.pres.rules[k].render()};" for k in lam.pres.declared]
    lines += [f"hook {t} {h} -> {v.render()};" for (t, h), v in lam.hook_table.items()]
    parts.append(_section("invariant", lam.name, lines))
    b = ex.bundle
    forms = []
    for f in ex.calc_A.form_letters:
        img = b.delta_wedge.images[f]
        if _derived_form_image(b, f) != img:
            forms.append(f"image {f} -> {img.render()};")
    if forms:
        parts.append(_section("forms", "", forms))
    if ex.cleaving is not None:
        j, j_inv = ex.cleaving
        parts.append(_section("cleaving", "", _map_lines("j", j, hopf.pres.alphabet.letters)
                              + _map_lines("jinv", j_inv, hopf.pres.alphabet.letters)))
    if ex.named:
        parts.append(_section("named", "", [f"let {k} -> {v.render()};" for k, v in ex.named.items()]))
    return "\n".join(parts)


def dump(ex: ExampleBundle, path) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(ex))
    except OSError as e:
        raise FileFormatError(f"cannot write file: {e.strerror}", 0, str(path)) from None


# comparison ------------------------------------------------------------------

def _calc_key(calc: GradedCalculus):
    return (calc.alphabet, calc.pres.rules, calc.max_degree, calc.d_images, calc.d_form_images)


def _pres_key(pres: Presentation):
    return (pres.alphabet, pres.rules, pres.order_weights, pres.max_degree)


def example_differences(a: ExampleBundle, b: ExampleBundle) -> list[str]:
    """Names of the parts in which two examples differ (empty when identical)."""
    diffs = []

    def cmp(label, x, y):
        if x != y:
            diffs.append(label)

    cmp("name", a.name, b.name)
    cmp("hopf.presentation", _pres_key(a.hopf.pres), _pres_key(b.hopf.pres))
    for m in ("delta", "eps", "S"):
        cmp(f"hopf.{m}", getattr(a.hopf.maps, m).images, getattr(b.hopf.maps, m).images)
    cmp("calculus-H", _calc_key(a.calc_H), _calc_key(b.calc_H))
    cmp("algebra", _pres_key(a.A), _pres_key(b.A))
    cmp("calculus-A", _calc_key(a.calc_A), _calc_key(b.calc_A))
    cmp("coaction", a.coaction.map.images, b.coaction.map.images)
    la, lb = a.invariant, b.invariant
    cmp("invariant", (la.alphabet, la.pres.rules, la.embed_map.images, la.hook_table, la.max_degree),
        (lb.alphabet, lb.pres.rules, lb.embed_map.images, lb.hook_table, lb.max_degree))
    cmp("forms", a.bundle.delta_wedge.images, b.bundle.delta_wedge.images)
    ca = [m.images for m in a.cleaving] if a.cleaving else None
    cb = [m.images for m in b.cleaving] if b.cleaving else None
    cmp("cleaving", ca, cb)
    cmp("named", a.named, b.named)
    cmp("params", a.params, b.params)
    cmp("crossed", a.crossed is None, b.crossed is None)
    return diffs


def same_example(a: ExampleBundle, b: ExampleBundle) -> bool:
    return not example_differences(a, b)
