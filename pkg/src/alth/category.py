"""Finite FinSet-enriched categories, functors and natural transformations.

Enrichment in cartesian FinSet is just an ordinary finite category whose
hom-sets are stored as ``FinSet`` sizes and whose composition is given by a
table or a rule.  Hom elements are plain indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .finset import FinFn, FinSet, decode_tuple, encode_tuple, product

Ob = Hashable


@dataclass(frozen=True)
class Violation:
    kind: str
    where: tuple
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at {self.where}: {self.detail}" if self.detail else f"{self.kind} at {self.where}"


class EnrichedCategory:
    """Base class; subclasses supply ``hom``, ``compose`` and ``identity``."""

    objects: tuple

    def hom(self, a: Ob, b: Ob) -> FinSet:
        raise NotImplementedError

    def compose(self, a: Ob, b: Ob, c: Ob, g: int, f: int) -> int:
        """``g . f`` for ``f: a -> b``, ``g: b -> c``."""
        raise NotImplementedError

    def identity(self, a: Ob) -> int:
        raise NotImplementedError

    def generators(self, a: Ob, b: Ob) -> Iterable[int]:
        """Morphisms ``a -> b`` that together generate the category under composition."""
        return range(self.hom(a, b).size)

    def comp(self, a: Ob, b: Ob, c: Ob) -> FinFn:
        """Composition as a function ``hom(b,c) x hom(a,b) -> hom(a,c)``."""
        hbc, hab = self.hom(b, c), self.hom(a, b)
        dom, _ = product(hbc, hab)
        table = tuple(self.compose(a, b, c, g, f) for g in range(hbc.size) for f in range(hab.size))
        return FinFn(dom, self.hom(a, c), table)

    def postcompose(self, a: Ob, b: Ob, c: Ob, g: int) -> FinFn:
        """``hom(a,b) -> hom(a,c)``, ``f -> g . f``."""
        return FinFn(self.hom(a, b), self.hom(a, c),
                     tuple(self.compose(a, b, c, g, f) for f in range(self.hom(a, b).size)))

    def precompose(self, a: Ob, b: Ob, c: Ob, f: int) -> FinFn:
        """``hom(b,c) -> hom(a,c)``, ``g -> g . f``."""
        return FinFn(self.hom(b, c), self.hom(a, c),
                     tuple(self.compose(a, b, c, g, f) for g in range(self.hom(b, c).size)))

    def op(self) -> "Opposite":
        return Opposite(self)


class TabulatedCategory(EnrichedCategory):
    def __init__(self, objects: Sequence[Ob], hom_sizes: dict, comp_tables: dict, ids: dict):
        self.objects = tuple(objects)
        self._homs = {k: FinSet(v) for k, v in hom_sizes.items()}
        self._comp = {k: tuple(v) for k, v in comp_tables.items()}
        self._ids = dict(ids)

    def hom(self, a, b):
        return self._homs[a, b]

    def compose(self, a, b, c, g, f):
        return self._comp[a, b, c][g * self._homs[a, b].size + f]

    def identity(self, a):
        return self._ids[a]

    @classmethod
    def from_category(cls, C: EnrichedCategory) -> "TabulatedCategory":
        obs = C.objects
        homs = {(a, b): C.hom(a, b).size for a in obs for b in obs}
        comp = {(a, b, c): C.comp(a, b, c).table for a in obs for b in obs for c in obs}
        return cls(obs, homs, comp, {a: C.identity(a) for a in obs})

    def with_comp_entry(self, a, b, c, g, f, value) -> "TabulatedCategory":
        """Copy with one composition entry overwritten (for negative controls)."""
        comp = dict(self._comp)
        table = list(comp[a, b, c])
        table[g * self._homs[a, b].size + f] = value
        comp[a, b, c] = tuple(table)
        return TabulatedCategory(self.objects, {k: v.size for k, v in self._homs.items()}, comp, self._ids)


def monoid_category(table: Sequence[Sequence[int]], unit: int, obj: Ob = "*") -> TabulatedCategory:
    """One-object category of a monoid given by its multiplication table ``table[g][f] = g*f``."""
    n = len(table)
    flat = [table[g][f] for g in range(n) for f in range(n)]
    return TabulatedCategory([obj], {(obj, obj): n}, {(obj, obj, obj): flat}, {obj: unit})


class CardinalCategory(EnrichedCategory):
    """Full subcategory of FinSet on finitely many cardinals; ``hom(m, n)`` enumerates ``n^m``."""

    def __init__(self, objects: Iterable[int]):
        self.objects = tuple(sorted(set(objects)))
        self._contiguous = self.objects == tuple(range(len(self.objects)))

    def hom(self, a, b):
        return FinSet(b ** a)

    def compose(self, a, b, c, g, f):
        ft = decode_tuple(f, b, a)
        gt = decode_tuple(g, c, b)
        return encode_tuple([gt[x] for x in ft], c)

    def identity(self, a):
        return encode_tuple(range(a), a)

    def function(self, a, b, k) -> tuple[int, ...]:
        return decode_tuple(k, b, a)

    def index(self, table: Sequence[int], b: int) -> int:
        return encode_tuple(table, b)

    def generators(self, a, b):
        if not self._contiguous:
            return range(b ** a)
        return [encode_tuple(t, b) for t in elementary_maps(a, b)]


def elementary_maps(a: int, b: int) -> list[tuple[int, ...]]:
    """Cofaces, codegeneracies and adjacent transpositions between ``a`` and ``b``.

    Every function between cardinals factors through these within the range
    ``0..max(a, b)``.
    """
    out = []
    if b == a + 1:
        for i in range(b):
            out.append(tuple(x if x < i else x + 1 for x in range(a)))
    elif a == b + 1 and b > 0:
        for i in range(b):
            out.append(tuple(x if x <= i else x - 1 for x in range(a)))
    elif a == b:
        for i in range(a - 1):
            t = list(range(a))
            t[i], t[i + 1] = t[i + 1], t[i]
            out.append(tuple(t))
    return out


class Opposite(EnrichedCategory):
    def __init__(self, C: EnrichedCategory):
        self.base = C
        self.objects = C.objects

    def hom(self, a, b):
        return self.base.hom(b, a)

    def compose(self, a, b, c, g, f):
        return self.base.compose(c, b, a, f, g)

    def identity(self, a):
        return self.base.identity(a)

    def generators(self, a, b):
        return self.base.generators(b, a)

    def op(self):
        return self.base


def validate_category(C: EnrichedCategory) -> list[Violation]:
    out = []
    obs = C.objects
    for a in obs:
        for b in obs:
            ia, ib = C.identity(a), C.identity(b)
            for f in range(C.hom(a, b).size):
                if C.compose(a, b, b, ib, f) != f:
                    out.append(Violation("left-unit", (a, b, f)))
                if C.compose(a, a, b, f, ia) != f:
                    out.append(Violation("right-unit", (a, b, f)))
    for a, b, c, d in itertools.product(obs, repeat=4):
        nab, nbc, ncd = C.hom(a, b).size, C.hom(b, c).size, C.hom(c, d).size
        for f in range(nab):
            for g in range(nbc):
                gf = C.compose(a, b, c, g, f)
                for h in range(ncd):
                    lhs = C.compose(a, c, d, h, gf)
                    rhs = C.compose(a, b, d, C.compose(b, c, d, h, g), f)
                    if lhs != rhs:
                        out.append(Violation("associativity", (a, b, c, d, f, g, h), f"{lhs} != {rhs}"))
    return out


@dataclass
class EnrichedFunctor:
    dom: EnrichedCategory
    cod: EnrichedCategory
    ob_map: dict
    hom_map: Callable[[Ob, Ob, int], int]

    def __call__(self, a):
        return self.ob_map[a]

    def on_hom(self, a, b, f):
        return self.hom_map(a, b, f)

    @classmethod
    def identity(cls, C: EnrichedCategory) -> "EnrichedFunctor":
        return cls(C, C, {a: a for a in C.objects}, lambda a, b, f: f)


def validate_functor(F: EnrichedFunctor) -> list[Violation]:
    out = []
    D, C = F.dom, F.cod
    obs = D.objects
    for a in obs:
        if F.on_hom(a, a, D.identity(a)) != C.identity(F(a)):
            out.append(Violation("identity", (a,)))
        for b in obs:
            for f in range(D.hom(a, b).size):
                y = F.on_hom(a, b, f)
                if not 0 <= y < C.hom(F(a), F(b)).size:
                    out.append(Violation("hom-range", (a, b, f), str(y)))
    for a, b, c in itertools.product(obs, repeat=3):
        for f in range(D.hom(a, b).size):
            Ff = F.on_hom(a, b, f)
            for g in range(D.hom(b, c).size):
                lhs = F.on_hom(a, c, D.compose(a, b, c, g, f))
                rhs = C.compose(F(a), F(b), F(c), F.on_hom(b, c, g), Ff)
                if lhs != rhs:
                    out.append(Violation("composition", (a, b, c, f, g), f"{lhs} != {rhs}"))
    return out


@dataclass
class NatTrans:
    source: EnrichedFunctor
    target: EnrichedFunctor
    component: dict


def validate_nat(alpha: NatTrans) -> list[Violation]:
    F, G = alpha.source, alpha.target
    D, C = F.dom, F.cod
    out = []
    for a in D.objects:
        for b in D.objects:
            for f in range(D.hom(a, b).size):
                lhs = C.compose(F(a), G(a), G(b), G.on_hom(a, b, f), alpha.component[a])
                rhs = C.compose(F(a), F(b), G(b), alpha.component[b], F.on_hom(a, b, f))
                if lhs != rhs:
                    out.append(Violation("naturality", (a, b, f), f"{lhs} != {rhs}"))
    return out


def check_cotensor(C: EnrichedCategory, J: int, tgt: Ob, cand: Ob, counit: Sequence[int] | FinFn,
                   naturality: bool = True) -> bool:
    """Is ``cand`` a cotensor ``[J, tgt]`` with the given counit ``J -> hom(cand, tgt)``?

    Checks that ``hom(D, cand) -> hom(D, tgt)^J``, ``u -> (c_j . u)_j`` is a
    bijection for every object ``D``, and (optionally) that these maps are
    natural in ``D``.
    """
    counit = tuple(counit.table if isinstance(counit, FinFn) else counit)
    if len(counit) != J:
        return False
    maps = {}
    for D in C.objects:
        n_tgt = C.hom(D, tgt).size
        n_cand = C.hom(D, cand).size
        if n_cand != n_tgt ** J:
            return False
        seen = set()
        table = []
        for u in range(n_cand):
            k = encode_tuple([C.compose(D, cand, tgt, c, u) for c in counit], n_tgt)
            if k in seen:
                return False
            seen.add(k)
            table.append(k)
        maps[D] = table
    if naturality:
        for D in C.objects:
            for E in C.objects:
                n_tgt_E = C.hom(E, tgt).size
                for h in range(C.hom(E, D).size):
                    for u in range(C.hom(D, cand).size):
                        left = maps[E][C.compose(E, D, cand, u, h)]
                        comps = decode_tuple(maps[D][u], C.hom(D, tgt).size, J)
                        right = encode_tuple([C.compose(E, D, tgt, x, h) for x in comps], n_tgt_E)
                        if left != right:
                            return False
    return True
