"""Bifunctors ``C^op x C -> FinSet`` and their coends.

``F(b, a)`` is contravariant in ``b`` and covariant in ``a``.  The coend is
the quotient of ``sum_a F(a, a)`` by ``F(h, 1)(z) ~ F(1, h)(z)`` for
``h: a -> b`` and ``z`` in ``F(b, a)``; it is enough to let ``h`` range over
generators of the category, which is what keeps the cardinal windows cheap.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .category import EnrichedCategory, Violation
from .finset import FinFn, FinSet, Quotient, UnionFind, coproduct, identity


class BifunctorialityError(ValueError):
    def __init__(self, violation: Violation):
        super().__init__(str(violation))
        self.violation = violation


class Bifunctor:
    """Subclasses implement ``size``, ``contra_elem`` and ``co_elem``; FinFn views are derived."""

    cat: EnrichedCategory

    def size(self, b, a) -> int:
        raise NotImplementedError

    def contra_elem(self, x, y, h: int, a, z: int) -> int:
        """``F(h, 1)(z)`` for ``h: x -> y``, ``z`` in ``F(y, a)``; lands in ``F(x, a)``."""
        raise NotImplementedError

    def co_elem(self, b, x, y, k: int, z: int) -> int:
        """``F(1, k)(z)`` for ``k: x -> y``, ``z`` in ``F(b, x)``; lands in ``F(b, y)``."""
        raise NotImplementedError

    def ob(self, b, a) -> FinSet:
        return FinSet(self.size(b, a))

    def contra(self, x, y, h, a) -> FinFn:
        return FinFn(self.ob(y, a), self.ob(x, a),
                     tuple(self.contra_elem(x, y, h, a, z) for z in range(self.size(y, a))))

    def co(self, b, x, y, k) -> FinFn:
        return FinFn(self.ob(b, x), self.ob(b, y),
                     tuple(self.co_elem(b, x, y, k, z) for z in range(self.size(b, x))))


class FnBifunctor(Bifunctor):
    def __init__(self, cat: EnrichedCategory, size: Callable, contra_elem: Callable, co_elem: Callable):
        self.cat = cat
        self._size = size
        self._contra = contra_elem
        self._co = co_elem

    def size(self, b, a):
        return self._size(b, a)

    def contra_elem(self, x, y, h, a, z):
        return self._contra(x, y, h, a, z)

    def co_elem(self, b, x, y, k, z):
        return self._co(b, x, y, k, z)


class TableBifunctor(Bifunctor):
    """Bifunctor given by explicit tables on every morphism."""

    def __init__(self, cat: EnrichedCategory, sizes: dict, contra_tables: dict, co_tables: dict):
        self.cat = cat
        self.sizes = dict(sizes)
        self.contra_tables = dict(contra_tables)  # (x, y, h, a) -> table F(y,a) -> F(x,a)
        self.co_tables = dict(co_tables)  # (b, x, y, k) -> table F(b,x) -> F(b,y)

    def size(self, b, a):
        return self.sizes[b, a]

    def contra_elem(self, x, y, h, a, z):
        return self.contra_tables[x, y, h, a][z]

    def co_elem(self, b, x, y, k, z):
        return self.co_tables[b, x, y, k][z]

    @classmethod
    def from_bifunctor(cls, F: Bifunctor) -> "TableBifunctor":
        C = F.cat
        obs = C.objects
        sizes = {(b, a): F.size(b, a) for b in obs for a in obs}
        contra, co = {}, {}
        for x in obs:
            for y in obs:
                for h in range(C.hom(x, y).size):
                    for a in obs:
                        contra[x, y, h, a] = F.contra(x, y, h, a).table
                    for b in obs:
                        co[b, x, y, h] = F.co(b, x, y, h).table
        return cls(C, sizes, contra, co)


def validate_bifunctor(F: Bifunctor) -> list[Violation]:
    """Identity, composition and interchange laws.

    Composition is checked for a generator composed with an arbitrary
    morphism, which implies it for all composable pairs.
    """
    C = F.cat
    obs = C.objects
    out = []
    for a in obs:
        ida = C.identity(a)
        for b in obs:
            if F.contra(a, a, ida, b) != identity(F.ob(a, b)):
                out.append(Violation("contra-identity", (a, b)))
            if F.co(b, a, a, ida) != identity(F.ob(b, a)):
                out.append(Violation("co-identity", (b, a)))
    for x in obs:
        for y in obs:
            for z in obs:
                nxy = C.hom(x, y).size
                for g in C.generators(y, z):
                    for h in range(nxy):
                        gh = C.compose(x, y, z, g, h)
                        for a in obs:
                            lhs = F.contra(x, z, gh, a)
                            rhs = F.contra(y, z, g, a).then(F.contra(x, y, h, a))
                            if lhs != rhs:
                                out.append(Violation("contra-composition", (x, y, z, h, g, a)))
                            lhs = F.co(a, x, z, gh)
                            rhs = F.co(a, x, y, h).then(F.co(a, y, z, g))
                            if lhs != rhs:
                                out.append(Violation("co-composition", (a, x, y, z, h, g)))
    for x in obs:
        for y in obs:
            for h in C.generators(x, y):
                for p in obs:
                    for q in obs:
                        for k in C.generators(p, q):
                            # F(y, p) -> F(x, q) both ways
                            lhs = F.contra(x, y, h, p).then(F.co(x, p, q, k))
                            rhs = F.co(y, p, q, k).then(F.contra(x, y, h, q))
                            if lhs != rhs:
                                out.append(Violation("interchange", (x, y, h, p, q, k)))
    return out


@dataclass(frozen=True)
class Coend:
    """The coend as a quotient of ``sum_a F(a, a)``; ``offsets[i]`` locates ``F(a_i, a_i)``."""

    F: Bifunctor
    objects: tuple
    offsets: tuple[int, ...]
    quotient: Quotient

    @property
    def size(self) -> int:
        return self.quotient.size

    @cached_property
    def _where(self):
        return {a: i for i, a in enumerate(self.objects)}

    def index(self, a, z: int) -> int:
        """Position of ``z`` in ``F(a, a)`` inside the disjoint union."""
        return self.offsets[self._where[a]] + z

    def insert(self, a, z: int) -> int:
        """Class of ``z`` in ``F(a, a)``."""
        return self.quotient(self.index(a, z))

    def locate(self, x: int):
        i = bisect.bisect_right(self.offsets, x) - 1
        return self.objects[i], x - self.offsets[i]

    def rep(self, c: int):
        """Least-index representative ``(a, z)`` of class ``c``."""
        return self.locate(self.quotient.rep(c))

    def members(self, c: int):
        return [self.locate(x) for x in self.quotient.classes[c]]


def coend(F: Bifunctor, check: bool = True, objects=None) -> Coend:
    """Coend of ``F``, optionally over a sub-collection of the objects (a full subcategory)."""
    C = F.cat
    if check:
        bad = validate_bifunctor(F)
        if bad:
            raise BifunctorialityError(bad[0])
    obs = tuple(C.objects if objects is None else objects)
    total, offsets = coproduct([FinSet(F.size(a, a)) for a in obs])
    offsets = tuple(offsets)
    uf = UnionFind(total.size)
    for i, a in enumerate(obs):
        for j, b in enumerate(obs):
            n = F.size(b, a)
            if not n:
                continue
            for h in C.generators(a, b):
                for z in range(n):
                    uf.union(offsets[i] + F.contra_elem(a, b, h, a, z), offsets[j] + F.co_elem(b, a, b, h, z))
    return Coend(F, obs, offsets, Quotient.from_union_find(total.size, uf))
