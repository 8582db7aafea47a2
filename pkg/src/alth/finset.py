"""Finite sets, total functions between them, and the finite colimit engine.

Elements of a finite set are canonically indexed ``0..size-1``.  Products
use the row-major pairing ``(i, j) -> i * |Y| + j``; powers ``Y^X`` (the
hom-set of all functions ``X -> Y``) are enumerated lexicographically on
their tables, first entry most significant.  Both conventions are the same
mixed-radix encoding, so a function ``n -> Y`` and a point of ``Y^n`` share
one index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence


class FinSetError(ValueError):
    pass


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.size < 0:
            raise FinSetError(f"negative size {self.size}")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise FinSetError(f"{len(labels)} labels for a set of size {self.size}")
            if len(set(labels)) != len(labels):
                raise FinSetError(f"duplicate labels in {labels}")

    def __len__(self):
        return self.size

    def __iter__(self):
        return iter(range(self.size))

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels is not None else str(i)

    def index(self, label: str) -> int:
        if self.labels is None:
            return int(label)
        return self.labels.index(label)


UNIT = FinSet(1)
EMPTY = FinSet(0)


@dataclass(frozen=True)
class FinFn:
    dom: FinSet
    cod: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        table = tuple(self.table)
        object.__setattr__(self, "table", table)
        if len(table) != self.dom.size:
            raise FinSetError(f"table of length {len(table)} on domain of size {self.dom.size}")
        for x in table:
            if not 0 <= x < self.cod.size:
                raise FinSetError(f"entry {x} out of range for codomain of size {self.cod.size}")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, other: FinFn) -> FinFn:
        """``other . self`` (diagrammatic order)."""
        if self.cod.size != other.dom.size:
            raise FinSetError("non-composable functions")
        return FinFn(self.dom, other.cod, tuple(other.table[x] for x in self.table))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.cod.size

    def is_bijective(self) -> bool:
        return self.dom.size == self.cod.size and self.is_injective()

    def inverse(self) -> FinFn:
        if not self.is_bijective():
            raise FinSetError("function is not a bijection")
        inv = [0] * self.cod.size
        for x, y in enumerate(self.table):
            inv[y] = x
        return FinFn(self.cod, self.dom, tuple(inv))


def compose(g: FinFn, f: FinFn) -> FinFn:
    """``g . f``."""
    return f.then(g)


def identity(X: FinSet) -> FinFn:
    return FinFn(X, X, tuple(range(X.size)))


def fn(dom: int | FinSet, cod: int | FinSet, table: Iterable[int]) -> FinFn:
    dom = dom if isinstance(dom, FinSet) else FinSet(dom)
    cod = cod if isinstance(cod, FinSet) else FinSet(cod)
    return FinFn(dom, cod, tuple(table))


# -- products, powers, coproducts ---------------------------------------------


def product(X: FinSet, Y: FinSet) -> tuple[FinSet, Callable[[int, int], int]]:
    """Cartesian product with its row-major pairing ``(i, j) -> i*|Y| + j``."""
    ny = Y.size

    def pair(i: int, j: int) -> int:
        return i * ny + j

    return FinSet(X.size * Y.size), pair


def unpair(k: int, ny: int) -> tuple[int, int]:
    return divmod(k, ny)


def power_size(base: int, exp: int) -> int:
    return base ** exp


def encode_tuple(xs: Sequence[int], base: int) -> int:
    k = 0
    for x in xs:
        k = k * base + x
    return k


def decode_tuple(k: int, base: int, length: int) -> tuple[int, ...]:
    out = [0] * length
    for i in range(length - 1, -1, -1):
        k, out[i] = divmod(k, base)
    return tuple(out)


def tuples(base: int, length: int) -> Iterable[tuple[int, ...]]:
    """All points of ``base^length`` in canonical (lexicographic) order."""
    return itertools.product(range(base), repeat=length)


def hom_set(X: FinSet, Y: FinSet) -> FinSet:
    """The set of all functions ``X -> Y``; element ``k`` has table ``decode_tuple(k, |Y|, |X|)``."""
    return FinSet(Y.size ** X.size)


def hom_element(X: FinSet, Y: FinSet, k: int) -> FinFn:
    return FinFn(X, Y, decode_tuple(k, Y.size, X.size))


def hom_index(f: FinFn) -> int:
    return encode_tuple(f.table, f.cod.size)


def power_map(f: FinFn, n: int) -> FinFn:
    """``f^n : X^n -> Y^n``."""
    nx, ny = f.dom.size, f.cod.size
    table = tuple(encode_tuple([f.table[x] for x in xs], ny) for xs in tuples(nx, n))
    return FinFn(FinSet(nx ** n), FinSet(ny ** n), table)


def coproduct(sets: Sequence[FinSet]) -> tuple[FinSet, list[int]]:
    """Disjoint union with the offsets of each summand."""
    offsets, total = [], 0
    for X in sets:
        offsets.append(total)
        total += X.size
    return FinSet(total), offsets


# -- quotients -----------------------------------------------------------


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        # least index stays root, so roots are class minima
        if y < x:
            x, y = y, x
        self.parent[y] = x
        return True


@dataclass(frozen=True)
class Quotient:
    source: FinSet
    classes: tuple[tuple[int, ...], ...]
    proj: FinFn = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.classes)

    @property
    def target(self) -> FinSet:
        return self.proj.cod

    def rep(self, c: int) -> int:
        return self.classes[c][0]

    def __call__(self, x: int) -> int:
        return self.proj.table[x]

    @classmethod
    def from_union_find(cls, n: int, uf: UnionFind) -> Quotient:
        roots = [uf.find(x) for x in range(n)]
        # classes ordered by their least element; roots are least elements
        order = {}
        for x in range(n):
            if roots[x] == x:
                order[x] = len(order)
        members: list[list[int]] = [[] for _ in order]
        for x in range(n):
            members[order[roots[x]]].append(x)
        proj = FinFn(FinSet(n), FinSet(len(order)), tuple(order[r] for r in roots))
        return cls(FinSet(n), tuple(tuple(m) for m in members), proj)

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]) -> Quotient:
        uf = UnionFind(n)
        for x, y in pairs:
            uf.union(x, y)
        return cls.from_union_find(n, uf)

    def factor(self, h: FinFn) -> FinFn:
        """The unique ``k`` with ``k . proj = h``; raises if ``h`` is not constant on classes."""
        table = []
        for members in self.classes:
            value = h.table[members[0]]
            if any(h.table[x] != value for x in members):
                raise FinSetError("map does not factor through the quotient")
            table.append(value)
        return FinFn(self.target, h.cod, tuple(table))


def coequalizer(f: FinFn, g: FinFn) -> Quotient:
    if f.dom.size != g.dom.size or f.cod.size != g.cod.size:
        raise FinSetError("coequalizer of non-parallel pair")
    return Quotient.from_pairs(f.cod.size, zip(f.table, g.table))


def image_compare(q1: Quotient, q2: Quotient, along: Callable[[int], int]) -> FinFn:
    """The map ``q1.target -> q2.target`` induced by ``along`` on representatives.

    Raises if ``along`` does not respect the classes of ``q1``.
    """
    table = []
    for members in q1.classes:
        c = q2(along(members[0]))
        for x in members[1:]:
            if q2(along(x)) != c:
                raise FinSetError("comparison map is not well defined")
        table.append(c)
    return FinFn(q1.target, q2.target, tuple(table))


def descend(q: Quotient, along: Callable[[int], int], cod: int | FinSet) -> FinFn:
    """The map out of ``q.target`` induced by ``along`` on the source; raises if not constant on classes."""
    cod = cod if isinstance(cod, FinSet) else FinSet(cod)
    table = []
    for members in q.classes:
        value = along(members[0])
        for x in members[1:]:
            if along(x) != value:
                raise FinSetError("map is not constant on a class")
        table.append(value)
    return FinFn(q.target, cod, tuple(table))
