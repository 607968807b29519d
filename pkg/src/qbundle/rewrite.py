"""Finitely presented algebras via oriented rewrite rules.

A Presentation fixes an alphabet, rules ``lhs -> rhs`` and a weighted
degree-lexicographic order in which every rule decreases.  Normal forms are
computed by exhaustive reduction with per-word memoization; words of form
degree above ``max_degree`` are zero.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .coeff import ONE, ZERO, ParamScalar, scalar_inverse
from .freealg import EMPTY, Alphabet, NcPoly, TensorElement, Word, inverse_name, render_word


class PresentationError(ValueError):
    pass


class NonTerminating(RuntimeError):
    """Reduction exceeded its step budget or revisited a word in progress."""


@dataclass(frozen=True)
class Overlap:
    word: Word
    left: NcPoly
    right: NcPoly

    def describe(self) -> str:
        return f"{render_word(self.word)}: {self.left.render()} != {self.right.render()}"


@dataclass
class OverlapReport:
    checked: int = 0
    failures: list[Overlap] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return bool(self.failures)

    def __len__(self) -> int:
        return len(self.failures)


def _swap_variants(lhs: Word, rhs: NcPoly, alphabet: Alphabet) -> list[tuple[Word, NcPoly]]:
    """Inverse-letter companions of a monomial commutation rule ``x y -> c y x``."""
    if len(lhs) != 2 or len(rhs) != 1:
        return []
    (word, c), = rhs.items()
    x, y = lhs
    if word != (y, x) or not c.is_monomial():
        return []
    inv_c = scalar_inverse(c)
    out = []
    xi = inverse_name(x) if not alphabet.is_inverse_letter(x) else None
    yi = inverse_name(y) if not alphabet.is_inverse_letter(y) else None
    x_has = xi is not None and xi in alphabet
    y_has = yi is not None and yi in alphabet
    if y_has:
        out.append(((x, yi), NcPoly.word((yi, x), inv_c)))
    if x_has:
        out.append(((xi, y), NcPoly.word((y, xi), inv_c)))
    if x_has and y_has:
        out.append(((xi, yi), NcPoly.word((yi, xi), c)))
    return out


class Presentation:
    """Alphabet, oriented rules and the induced normal forms."""

    STEP_BUDGET = 2_000_000

    def __init__(self, alphabet: Alphabet, rules: Mapping[Word, NcPoly] | Iterable[tuple[Word, NcPoly]] = (),
                 order_weights: Optional[Mapping[str, int]] = None,
                 max_degree: Optional[int] = None, name: str = "",
                 derive_inverse_rules: bool = True, check_order: bool = True):
        self.alphabet = alphabet
        self.name = name
        self.max_degree = max_degree
        weights = {x: 1 for x in alphabet.letters}
        for x, w in (order_weights or {}).items():
            if x not in alphabet:
                raise PresentationError(f"order weight for unknown letter {x!r}")
            if w < 1:
                raise PresentationError(f"order weight of {x!r} must be positive")
            weights[x] = int(w)
        for x in list(weights):
            if alphabet.is_inverse_letter(x) and (order_weights or {}).get(x) is None:
                weights[x] = weights[inverse_name(x)]
        self.order_weights = weights

        items = rules.items() if isinstance(rules, Mapping) else rules
        table: dict[Word, NcPoly] = {}
        declared: list[Word] = []
        for lhs, rhs in items:
            lhs = tuple(lhs)
            if not lhs:
                raise PresentationError("a rule needs a nonempty left-hand side")
            alphabet.check_word(lhs)
            rhs = rhs.with_alphabet(alphabet) if isinstance(rhs, NcPoly) else NcPoly.scalar(rhs, alphabet)
            if lhs in table:
                raise PresentationError(f"duplicate rule for {render_word(lhs)}")
            table[lhs] = rhs
            declared.append(lhs)
        for x in alphabet.invertible_letters():
            xi = inverse_name(x)
            for lhs in ((x, xi), (xi, x)):
                if lhs not in table:
                    table[lhs] = NcPoly.one(alphabet)
        if derive_inverse_rules:
            for lhs in declared:
                for l2, r2 in _swap_variants(lhs, table[lhs], alphabet):
                    if l2 not in table:
                        table[l2] = r2.with_alphabet(alphabet)
        self.rules: dict[Word, NcPoly] = table
        self.declared = tuple(declared)
        self._lengths = sorted({len(l) for l in table})
        if check_order:
            for lhs, rhs in table.items():
                k = self.word_key(lhs)
                for w in rhs.words():
                    if self.word_key(w) >= k:
                        raise PresentationError(
                            f"rule {render_word(lhs)} -> {rhs.render()} does not decrease in the word order")
        self._memo: dict[Word, dict[Word, ParamScalar]] = {}
        self._local = threading.local()

    # order ----------------------------------------------------------------
    def word_key(self, word: Word):
        idx = self.alphabet.index
        ow = self.order_weights
        return (sum(ow[x] for x in word), len(word), tuple(idx[x] for x in word))

    def sort_words(self, words: Iterable[Word]) -> list[Word]:
        return sorted(words, key=self.word_key)

    # reduction ------------------------------------------------------------
    def _too_high(self, word: Word) -> bool:
        return self.max_degree is not None and self.alphabet.degree(word) > self.max_degree

    def is_irreducible(self, word: Word) -> bool:
        if self._too_high(word):
            return False
        rules = self.rules
        n = len(word)
        for L in self._lengths:
            if L > n:
                break
            for i in range(n - L + 1):
                if word[i:i + L] in rules:
                    return False
        return True

    def _in_progress(self) -> set:
        s = getattr(self._local, "stack", None)
        if s is None:
            s = self._local.stack = set()
            self._local.steps = 0
        return s

    def _nf_word(self, word: Word) -> dict[Word, ParamScalar]:
        memo = self._memo
        hit = memo.get(word)
        if hit is not None:
            return hit
        if self._too_high(word):
            memo[word] = {}
            return memo[word]
        stack = self._in_progress()
        if word in stack:
            raise NonTerminating(f"reduction of {render_word(word)} returned to itself")
        self._local.steps += 1
        if self._local.steps > self.STEP_BUDGET:
            raise NonTerminating("rewrite step budget exceeded")
        stack.add(word)
        try:
            if len(word) <= 1:
                result = self._reduce_tail(word)
            else:
                prefix = self._nf_word(word[:-1])
                last = word[-1]
                result = {}
                for u, c in prefix.items():
                    for v, d in self._reduce_tail(u + (last,)).items():
                        s = result.get(v, ZERO) + c * d
                        if s:
                            result[v] = s
                        else:
                            result.pop(v, None)
        except RecursionError as exc:
            raise NonTerminating(f"reduction of {render_word(word)} is too deep") from exc
        finally:
            stack.discard(word)
            if not stack:
                self._local.steps = 0
        memo[word] = result
        return result

    def _reduce_tail(self, word: Word) -> dict[Word, ParamScalar]:
        """Normal form of a word whose proper prefix is already irreducible."""
        if self._too_high(word):
            return {}
        rules = self.rules
        n = len(word)
        for L in self._lengths:
            if L > n:
                break
            rhs = rules.get(word[n - L:])
            if rhs is not None:
                pre = word[:n - L]
                out: dict[Word, ParamScalar] = {}
                for v, d in rhs.items():
                    for w2, e in self._nf_word(pre + v).items():
                        s = out.get(w2, ZERO) + d * e
                        if s:
                            out[w2] = s
                        else:
                            out.pop(w2, None)
                return out
        return {word: ONE}

    def nf_word(self, word: Word) -> NcPoly:
        return NcPoly._raw(dict(self._nf_word(tuple(word))), self.alphabet)

    def nf(self, p: NcPoly) -> NcPoly:
        acc: dict[Word, ParamScalar] = {}
        for w, c in p.items():
            for v, d in self._nf_word(w).items():
                s = acc.get(v, ZERO) + c * d
                if s:
                    acc[v] = s
                else:
                    acc.pop(v, None)
        return NcPoly._raw(acc, self.alphabet)

    def mul(self, *polys: NcPoly) -> NcPoly:
        """Normal form of a product of several polynomials."""
        result = NcPoly.one(self.alphabet)
        for p in polys:
            acc: dict[Word, ParamScalar] = {}
            for w1, c1 in result.items():
                for w2, c2 in p.items():
                    for v, d in self._nf_word(w1 + w2).items():
                        s = acc.get(v, ZERO) + c1 * c2 * d
                        if s:
                            acc[v] = s
                        else:
                            acc.pop(v, None)
            result = NcPoly._raw(acc, self.alphabet)
        return result

    def poly(self, word: Word | str, coeff=1) -> NcPoly:
        if isinstance(word, str):
            word = (word,)
        return NcPoly.word(word, coeff, self.alphabet)

    def one(self) -> NcPoly:
        return NcPoly.one(self.alphabet)

    def zero(self) -> NcPoly:
        return NcPoly.zero(self.alphabet)

    def letter_power(self, letter: str, k: int) -> NcPoly:
        """x^k for k in Z, using the inverse letter for negative k."""
        if k >= 0:
            return self.nf_word((letter,) * k)
        return self.nf_word((inverse_name(letter),) * (-k))

    # enumeration ----------------------------------------------------------
    def basis_words(self, max_len: int, degree: Optional[int] = None) -> list[Word]:
        """Irreducible words of length <= max_len (optionally of one form degree), sorted."""
        out: list[Word] = []
        frontier: list[Word] = [EMPTY]
        rules = self.rules
        letters = self.alphabet.letters
        while frontier:
            out.extend(frontier)
            nxt = []
            for w in frontier:
                if len(w) >= max_len:
                    continue
                for x in letters:
                    v = w + (x,)
                    if self._too_high(v):
                        continue
                    if any(v[len(v) - L:] in rules for L in self._lengths if L <= len(v)):
                        continue
                    nxt.append(v)
            frontier = nxt
        if degree is not None:
            out = [w for w in out if self.alphabet.degree(w) == degree]
        return self.sort_words(out)

    # confluence -----------------------------------------------------------
    def overlaps(self, max_len: int) -> list[tuple[Word, NcPoly, NcPoly]]:
        """Critical pairs: (word, branch after rewriting one lhs, branch after the other)."""
        out = []
        rules = sorted(self.rules.items(), key=lambda kv: self.word_key(kv[0]))
        A = self.alphabet
        for l1, r1 in rules:
            for l2, r2 in rules:
                n1, n2 = len(l1), len(l2)
                for k in range(1, min(n1, n2)):
                    if l1[n1 - k:] == l2[:k]:
                        word = l1 + l2[k:]
                        if len(word) > max_len:
                            continue
                        left = r1 * NcPoly.word(l2[k:], 1, A)
                        right = NcPoly.word(l1[:n1 - k], 1, A) * r2
                        out.append((word, left, right))
                if n2 < n1 or (n2 == n1 and l1 != l2):
                    for i in range(n1 - n2 + 1):
                        if l1[i:i + n2] == l2 and (l1, l2) != (l2, l1):
                            if n1 > max_len:
                                continue
                            right = NcPoly.word(l1[:i], 1, A) * r2 * NcPoly.word(l1[i + n2:], 1, A)
                            out.append((l1, r1, right))
        return out

    def render_rule(self, lhs: Word) -> str:
        return f"{render_word(lhs)} -> {self.rules[lhs].render()}"

    def __repr__(self):
        return f"Presentation({self.name or 'anonymous'}: {len(self.alphabet.letters)} letters, {len(self.rules)} rules)"

    def same_structure(self, other: "Presentation") -> bool:
        return (self.alphabet == other.alphabet and self.rules == other.rules
                and self.max_degree == other.max_degree and self.order_weights == other.order_weights)

    def extend(self, generators=(), rules=(), max_degree=None, name: str = "",
               order_weights=None) -> "Presentation":
        """A larger presentation containing this one's letters and rules."""
        alphabet = self.alphabet.extended(*generators)
        merged: dict[Word, NcPoly] = {lhs: rhs.with_alphabet(alphabet) for lhs, rhs in self.rules.items()}
        extra = rules.items() if isinstance(rules, Mapping) else rules
        for lhs, rhs in extra:
            lhs = tuple(lhs)
            if lhs in merged:
                raise PresentationError(f"duplicate rule for {render_word(lhs)}")
            merged[lhs] = rhs.with_alphabet(alphabet)
        weights = dict(self.order_weights)
        weights.update(order_weights or {})
        return Presentation(alphabet, merged, order_weights=weights, max_degree=max_degree,
                            name=name or self.name)


def normal_form(p: NcPoly, pres: Presentation) -> NcPoly:
    return pres.nf(p)


def check_local_confluence(pres: Presentation, max_len: int) -> OverlapReport:
    report = OverlapReport()
    for word, left, right in pres.overlaps(max_len):
        if pres._too_high(word):
            continue
        report.checked += 1
        a, b = pres.nf(left), pres.nf(right)
        if a != b:
            report.failures.append(Overlap(word, a, b))
    return report


def basis_words(pres: Presentation, max_len: int) -> list[Word]:
    return pres.basis_words(max_len)


def tensor_normal_form(t: TensorElement, presentations) -> TensorElement:
    """Normal form of every factor of a tensor, one presentation per factor."""
    acc: dict[tuple[Word, ...], ParamScalar] = {}
    for key, c in t.items():
        partial: list[tuple[tuple[Word, ...], ParamScalar]] = [((), c)]
        for pres, w in zip(presentations, key):
            nfw = pres._nf_word(w) if pres is not None else {w: ONE}
            if not nfw:
                partial = []
                break
            partial = [(k + (v,), x * d) for k, x in partial for v, d in nfw.items()]
        for k, x in partial:
            s = acc.get(k, ZERO) + x
            if s:
                acc[k] = s
            else:
                acc.pop(k, None)
    comps = tuple(p.alphabet if p is not None else a for p, a in zip(presentations, t.components))
    return TensorElement._raw(comps, acc)
