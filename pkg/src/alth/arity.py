"""Systems of arities over FinSet and left Kan extension along the inclusion.

Arities are skeletal cardinals and the inclusion ``j`` is literally the
identity on them.  Two kinds exist: a finite cardinal set closed under
multiplication (only ``{1}`` and ``{0, 1}`` qualify) and ``FinCard`` with a
truncation window ``N``.  Everything computed over a window carries a
stabilization flag; a truncated answer is never reported as exact.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .category import CardinalCategory, Violation
from .coend import Bifunctor, BifunctorialityError, Coend, coend
from .finset import FinFn, FinSet, decode_tuple, descend, encode_tuple, image_compare


class AritySystemError(ValueError):
    def __init__(self, msg: str, witness=None):
        super().__init__(msg)
        self.witness = witness


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self):
        if self is Verdict.INCONCLUSIVE:
            raise ValueError("an inconclusive verdict has no truth value")
        return self is Verdict.PASS

    @classmethod
    def of(cls, ok: bool) -> "Verdict":
        return cls.PASS if ok else cls.FAIL

    def __and__(self, other: "Verdict") -> "Verdict":
        if Verdict.FAIL in (self, other):
            return Verdict.FAIL
        if Verdict.INCONCLUSIVE in (self, other):
            return Verdict.INCONCLUSIVE
        return Verdict.PASS


@dataclass(frozen=True)
class AritySystem:
    kind: str  # "finite" | "fincard"
    cardinals: tuple[int, ...] = ()
    window: int = 0

    @property
    def objects(self) -> tuple[int, ...]:
        if self.kind == "finite":
            return self.cardinals
        return tuple(range(self.window + 1))

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def contains(self, n: int) -> bool:
        return n in self.cardinals if self.is_finite else n >= 0

    @cached_property
    def category(self) -> CardinalCategory:
        return CardinalCategory(self.objects)

    def with_window(self, N: int) -> "AritySystem":
        if self.is_finite:
            return self
        return AritySystem("fincard", window=N)

    def __str__(self):
        if self.is_finite:
            return "{" + ",".join(map(str, self.cardinals)) + "}"
        return f"fincard(window={self.window})"


def mk_arity_system(spec) -> AritySystem:
    """From an iterable of cardinals, or ``("fincard", N)`` / ``"fincard"``."""
    if spec == "fincard":
        spec = ("fincard", 3)
    if isinstance(spec, tuple) and len(spec) == 2 and spec[0] == "fincard":
        N = int(spec[1])
        if N < 1:
            raise AritySystemError(f"window must be at least 1, got {N}", N)
        return AritySystem("fincard", window=N)
    A = sorted(set(int(n) for n in spec))
    if any(n < 0 for n in A):
        raise AritySystemError("arities are non-negative cardinals")
    if 1 not in A:
        raise AritySystemError("the unit arity 1 is missing", 1)
    for m in A:
        for n in A:
            if m * n not in A:
                raise AritySystemError(f"not closed under multiplication: {m}*{n}={m * n}", (m, n, m * n))
    return AritySystem("finite", tuple(A))


JUST_UNIT = AritySystem("finite", (1,))
ZERO_ONE = AritySystem("finite", (0, 1))


def fincard(N: int) -> AritySystem:
    return mk_arity_system(("fincard", N))


def as_fn(a: int, b: int, h: int) -> FinFn:
    return FinFn(FinSet(a), FinSet(b), decode_tuple(h, b, a))


# -- functors on arities ---------------------------------------------------------


class ArityFunctor:
    """A functor ``J -> FinSet``; subclasses give ``size`` and ``act_elem``."""

    base: AritySystem

    def size(self, J: int) -> int:
        raise NotImplementedError

    def act_elem(self, J: int, K: int, h: int, t: int) -> int:
        raise NotImplementedError

    def act(self, J: int, K: int, h: int) -> FinFn:
        return FinFn(FinSet(self.size(J)), FinSet(self.size(K)),
                     tuple(self.act_elem(J, K, h, t) for t in range(self.size(J))))


class FnArityFunctor(ArityFunctor):
    """Arity functor from callables, with per-morphism caching of the action."""

    def __init__(self, base: AritySystem, size: Callable[[int], int], act_elem: Callable[[int, int, int, int], int]):
        self.base = base
        self._size = size
        self._act = act_elem
        self._cache: dict = {}
        self._lock = threading.Lock()

    def size(self, J):
        return self._size(J)

    def act_elem(self, J, K, h, t):
        key = (J, K, h)
        table = self._cache.get(key)
        if table is None:
            table = tuple(self._act(J, K, h, x) for x in range(self.size(J)))
            with self._lock:
                self._cache.setdefault(key, table)
        return table[t]


class TableArityFunctor(ArityFunctor):
    def __init__(self, base: AritySystem, sizes: dict, tables: dict):
        self.base = base
        self.sizes = dict(sizes)
        self.tables = {k: tuple(v) for k, v in tables.items()}

    def size(self, J):
        return self.sizes[J]

    def act_elem(self, J, K, h, t):
        if (J, K, h) in self.tables:
            return self.tables[J, K, h][t]
        if J == K and h == self.base.category.identity(J):
            return t
        raise KeyError((J, K, h))

    def with_entry(self, J, K, h, t, value) -> "TableArityFunctor":
        tables = dict(self.tables)
        row = list(tables.get((J, K, h), self.act(J, K, h).table))
        row[t] = value
        tables[J, K, h] = tuple(row)
        return TableArityFunctor(self.base, self.sizes, tables)


def validate_arity_functor(T: ArityFunctor, objects: Sequence[int] | None = None) -> list[Violation]:
    C = T.base.category
    obs = tuple(C.objects if objects is None else objects)
    out = []
    for a in obs:
        ida = C.identity(a)
        if any(T.act_elem(a, a, ida, t) != t for t in range(T.size(a))):
            out.append(Violation("identity", (a,)))
    for a in obs:
        for b in obs:
            for c in obs:
                for g in C.generators(b, c):
                    for f in range(C.hom(a, b).size):
                        gf = C.compose(a, b, c, g, f)
                        for t in range(T.size(a)):
                            if T.act_elem(a, c, gf, t) != T.act_elem(b, c, g, T.act_elem(a, b, f, t)):
                                out.append(Violation("composition", (a, b, c, f, g, t)))
                                break
    return out


def all_arity_functors(S: AritySystem, max_value: int):
    """Every functor ``J -> FinSet`` with all values of size at most ``max_value`` (finite ``S`` only)."""
    if not S.is_finite:
        raise AritySystemError("functors are enumerated only on finite arity systems")
    C = S.category
    obs = S.objects
    arrows = [(a, b, h) for a in obs for b in obs for h in range(C.hom(a, b).size)
              if not (a == b and h == C.identity(a))]
    for sizes in itertools.product(range(max_value + 1), repeat=len(obs)):
        size = dict(zip(obs, sizes))
        choices = [itertools.product(range(size[b]), repeat=size[a]) for a, b, _ in arrows]
        for tables in itertools.product(*choices):
            T = TableArityFunctor(S, size, {arr: t for arr, t in zip(arrows, tables)})
            if not validate_arity_functor(T):
                yield T


def inclusion_functor(S: AritySystem) -> ArityFunctor:
    """``j`` itself: ``J -> J`` with the evident action."""
    return FnArityFunctor(S, lambda J: J, lambda J, K, h, t: decode_tuple(h, K, J)[t])


def power_functor(T: ArityFunctor, K: int) -> ArityFunctor:
    """``J -> FinSet(K, T J) = (T J)^K``."""

    def act(J, L, h, t):
        n = T.size(J)
        comps = decode_tuple(t, n, K)
        return encode_tuple([T.act_elem(J, L, h, x) for x in comps], T.size(L))

    return FnArityFunctor(T.base, lambda J: T.size(J) ** K, act)


@dataclass(frozen=True)
class Weight:
    """``J -> FinSet(J, V)``, contravariant; elements of ``V^J`` in lexicographic order."""

    base: AritySystem
    V: int

    def size(self, J: int) -> int:
        return self.V ** J

    def act_elem(self, J: int, K: int, h: int, v: int) -> int:
        """Precompose ``v: K -> V`` with ``h: J -> K``."""
        ht = decode_tuple(h, K, J)
        vt = decode_tuple(v, self.V, K)
        return encode_tuple([vt[x] for x in ht], self.V)


class WeightedBifunctor(Bifunctor):
    """``(b, a) -> W(b) x T(a)``, elements encoded ``w * |T a| + t``."""

    def __init__(self, W: Weight, T: ArityFunctor):
        self.W, self.T = W, T
        self.cat = T.base.category

    def size(self, b, a):
        return self.W.size(b) * self.T.size(a)

    def contra_elem(self, x, y, h, a, z):
        w, t = divmod(z, self.T.size(a))
        return self.W.act_elem(x, y, h, w) * self.T.size(a) + t

    def co_elem(self, b, x, y, k, z):
        w, t = divmod(z, self.T.size(x))
        return w * self.T.size(y) + self.T.act_elem(x, y, k, t)


@dataclass
class Lan:
    """``Lan_j T (V)`` computed as a coend over the arities in view."""

    T: ArityFunctor
    V: int
    coend: Coend
    stabilized: bool
    exact: bool
    comparison: FinFn | None = None  # window N-1 -> window N, when truncated

    @property
    def size(self) -> int:
        return self.coend.size

    @property
    def set(self) -> FinSet:
        return FinSet(self.size)

    def insert(self, a: int, v: Sequence[int] | int, t: int) -> int:
        if not isinstance(v, int):
            v = encode_tuple(v, self.V)
        return self.coend.insert(a, v * self.T.size(a) + t)

    def rep(self, c: int) -> tuple[int, tuple[int, ...], int]:
        a, z = self.coend.rep(c)
        v, t = divmod(z, self.T.size(a))
        return a, decode_tuple(v, self.V, a), t

    def members(self, c: int):
        out = []
        for a, z in self.coend.members(c):
            v, t = divmod(z, self.T.size(a))
            out.append((a, decode_tuple(v, self.V, a), t))
        return out


def lan_along_j(T: ArityFunctor, V: int | FinSet, check: bool = True, window: int | None = None) -> Lan:
    """``int^J FinSet(J, V) x T J``.

    Exact for a finite arity system.  For ``FinCard`` the coend is taken over
    ``0..N`` (``N`` the window) and compared with the one over ``0..N-1``;
    ``stabilized`` says whether the canonical comparison is a bijection.
    """
    V = V.size if isinstance(V, FinSet) else int(V)
    S = T.base
    if window is not None and not S.is_finite:
        S = S.with_window(window)
    obs = S.objects
    if check:
        bad = validate_arity_functor(T, obs)
        if bad:
            raise BifunctorialityError(bad[0])
    F = WeightedBifunctor(Weight(S, V), T)
    F.cat = S.category
    full = coend(F, check=False, objects=obs)
    if S.is_finite:
        return Lan(T, V, full, stabilized=True, exact=True)
    smaller = coend(F, check=False, objects=obs[:-1])
    cmp = image_compare(smaller.quotient, full.quotient,
                        lambda x: full.offsets[smaller.locate(x)[0]] + smaller.locate(x)[1])
    return Lan(T, V, full, stabilized=cmp.is_bijective(), exact=False, comparison=cmp)


def check_eleutheric_instance(S: AritySystem, T: ArityFunctor, V: int, K: int, check: bool = True,
                              window: int | None = None) -> Verdict:
    """Is ``int^J FinSet(J,V) x FinSet(K, T J) -> FinSet(K, int^J FinSet(J,V) x T J)`` bijective?

    ``window`` widens the FinCard coends; ``T`` must be defined that far.
    """
    if not S.contains(K):
        raise AritySystemError(f"arity {K} not in {S}", K)
    if check:
        bad = validate_arity_functor(T)
        if bad:
            raise BifunctorialityError(bad[0])
    rhs = lan_along_j(T, V, check=False, window=window)
    TK = power_functor(T, K)
    lhs = lan_along_j(TK, V, check=False, window=window)
    if not (lhs.stabilized and rhs.stabilized):
        return Verdict.INCONCLUSIVE
    n = rhs.size

    def canonical(x: int) -> int:
        a, z = lhs.coend.locate(x)
        v, ts = divmod(z, TK.size(a))
        comps = decode_tuple(ts, T.size(a), K)
        return encode_tuple([rhs.insert(a, v, t) for t in comps], n)

    try:
        cmp = descend(lhs.coend.quotient, canonical, n ** K)
    except ValueError:
        return Verdict.FAIL
    return Verdict.of(cmp.is_bijective())


# -- endofunctors of FinSet and the xi comparison -----------------------------------


class Endofunctor:
    """A pointwise endofunctor of FinSet on cardinals: ``ob(n)`` and ``fmap(f)``."""

    def ob(self, n: int) -> int:
        raise NotImplementedError

    def fmap(self, f: FinFn) -> FinFn:
        raise NotImplementedError


class IdentityEndofunctor(Endofunctor):
    def ob(self, n):
        return n

    def fmap(self, f):
        return f


class ConstantEndofunctor(Endofunctor):
    def __init__(self, value: int = 1):
        self.value = value

    def ob(self, n):
        return self.value

    def fmap(self, f):
        return FinFn(FinSet(self.value), FinSet(self.value), tuple(range(self.value)))


def restrict_to_arities(S: AritySystem, E: Endofunctor) -> ArityFunctor:
    """``E . j`` as an arity functor."""
    return FnArityFunctor(S, E.ob, lambda J, K, h, t: E.fmap(as_fn(J, K, h)).table[t])


@dataclass
class XiResult:
    verdict: Verdict
    lan: Lan
    xi: FinFn | None  # Lan_j(E j)(V) -> E(V), when well defined


def xi_map(S: AritySystem, E: Endofunctor, V: int) -> XiResult:
    """The counit component ``Lan_j(E j)(V) -> E(V)``, ``[a, x, t] -> E(x)(t)``."""
    L = lan_along_j(restrict_to_arities(S, E), V, check=False)
    target = E.ob(V)

    def along(x: int) -> int:
        a, z = L.coend.locate(x)
        v, t = divmod(z, E.ob(a))
        return E.fmap(FinFn(FinSet(a), FinSet(V), decode_tuple(v, V, a))).table[t]

    try:
        xi = descend(L.coend.quotient, along, target)
    except ValueError:
        return XiResult(Verdict.FAIL, L, None)
    if not L.stabilized:
        return XiResult(Verdict.INCONCLUSIVE, L, xi)
    return XiResult(Verdict.of(xi.is_bijective()), L, xi)


def check_xi_iso(S: AritySystem, E: Endofunctor, V: int) -> Verdict:
    return xi_map(S, E, V).verdict
