"""Exact sparse linear algebra over the Laurent coefficient ring.

Vectors are dicts from hashable keys to nonzero ParamScalars.  Elimination is
fraction-free: monomial pivots are scaled to 1, other pivots are cleared by
cross-multiplication, so no division by a polynomial ever happens.  Ranks and
kernels are those over the fraction field of the coefficient ring.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping, Sequence

from .coeff import ZERO, ParamScalar, scalar_inverse

Vector = dict


def _axpy(target: dict, c: ParamScalar, src: Mapping) -> None:
    """target += c * src, in place, dropping zeros."""
    for k, x in src.items():
        s = target.get(k, ZERO) + c * x
        if s:
            target[k] = s
        else:
            target.pop(k, None)


def _scaled(v: Mapping, c: ParamScalar) -> dict:
    out = {}
    for k, x in v.items():
        y = x * c
        if y:
            out[k] = y
    return out


def normalize(v: Mapping) -> dict:
    """Divide by the content monomial of the first nonzero entry."""
    if not v:
        return dict(v)
    first = next(iter(v.values()))
    return _scaled(v, scalar_inverse(first.content_monomial()))


class Echelon:
    """Incrementally built row echelon form; supports rank and membership.

    Each stored row carries an optional tag vector that undergoes the same
    operations, which is how kernels are tracked.
    """

    def __init__(self):
        self.pivots: list[tuple[Hashable, ParamScalar, dict, dict]] = []
        self._cols: set = set()

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, v: Mapping, tag: Mapping | None = None) -> tuple[dict, dict]:
        v = dict(v)
        tag = dict(tag or {})
        if not v:
            return v, tag
        for col, p, row, rtag in self.pivots:
            c = v.get(col)
            if c is None:
                continue
            if p.is_one():
                _axpy(v, -c, row)
                _axpy(tag, -c, rtag)
            else:
                v = _scaled(v, p)
                tag = _scaled(tag, p)
                _axpy(v, -c, row)
                _axpy(tag, -c, rtag)
            if not v:
                break
        return v, tag

    def add(self, v: Mapping, tag: Mapping | None = None) -> tuple[bool, dict]:
        """Insert v; returns (independent, residual tag).

        When v depends on earlier rows the residual tag is a relation among
        the tags.
        """
        r, t = self.reduce(v, tag)
        if not r:
            return False, t
        col = None
        for k, x in r.items():
            if x.is_monomial():
                col = k
                break
        if col is None:
            col = min(r, key=lambda k: len(r[k].items()))
        p = r[col]
        if p.is_monomial():
            inv = scalar_inverse(p)
            r = _scaled(r, inv)
            t = _scaled(t, inv)
            p = r[col]
        self.pivots.append((col, p, r, t))
        self._cols.add(col)
        return True, t

    def contains(self, v: Mapping) -> bool:
        r, _ = self.reduce(v)
        return not r


def _blocks(columns: Sequence[Mapping]) -> list[list[int]]:
    """Group column indices into connected components sharing row keys."""
    parent = list(range(len(columns)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict = {}
    for i, col in enumerate(columns):
        for k in col:
            j = owner.get(k)
            if j is None:
                owner[k] = i
            else:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for i in range(len(columns)):
        groups.setdefault(find(i), []).append(i)
    return [groups[k] for k in sorted(groups)]


def kernel(columns: Sequence[Mapping]) -> list[dict[int, ParamScalar]]:
    """A basis of {x : sum_i x_i columns[i] = 0}, as dicts index -> coefficient."""
    out = []
    for block in _blocks(columns):
        ech = Echelon()
        for i in block:
            independent, rel = ech.add(columns[i], {i: ParamScalar.const(1)})
            if not independent:
                out.append(normalize(rel))
    return out


def rank(vectors: Iterable[Mapping]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.add(v)
    return ech.rank


def in_span(v: Mapping, vectors: Iterable[Mapping]) -> bool:
    ech = Echelon()
    for w in vectors:
        ech.add(w)
    return ech.contains(v)


def span_contains(big: Iterable[Mapping], small: Iterable[Mapping]) -> bool:
    ech = Echelon()
    for w in big:
        ech.add(w)
    return all(ech.contains(v) for v in small)


def same_span(U: Sequence[Mapping], V: Sequence[Mapping]) -> bool:
    return span_contains(U, V) and span_contains(V, U)


def combine(coeffs: Mapping[int, ParamScalar], vectors: Sequence[Mapping]) -> dict:
    """sum_i coeffs[i] * vectors[i]."""
    acc: dict = {}
    for i, c in coeffs.items():
        _axpy(acc, c, vectors[i])
    return acc
