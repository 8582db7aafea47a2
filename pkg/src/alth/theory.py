"""J-theories over FinSet as abstract clones.

A theory is stored through its operations ``hom(n, 1)`` for every arity
``n`` together with the projections ``proj(n)`` and substitution
``subst(t, k, args, n)`` (``t`` in ``hom(k, 1)``, ``args`` a ``k``-tuple in
``hom(n, 1)``).  ``hom(n, m)`` is literally ``hom(n, 1)^m``, so the
designated cotensors are standard by construction; an element of
``hom(n, m)`` is an ``m``-tuple of ``n``-ary operations, encoded row-major.

Orientation: ``hom(n, m)`` holds the maps from the ``n``-th power of the
sort to the ``m``-th power; ``tau`` sends a function ``h: m -> n`` of
cardinals to the tuple ``(proj(n)[h(0)], ..., proj(n)[h(m-1)])``.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .arity import AritySystem, ArityFunctor, FnArityFunctor
from .category import (EnrichedCategory, EnrichedFunctor, Opposite, Violation, check_cotensor,
                       validate_functor)
from .finset import FinSet, UnionFind, decode_tuple, encode_tuple

Term = Union[int, tuple]  # variable index, or (op_name, (subterms...))


class TheoryError(ValueError):
    pass


class CapExceeded(TheoryError):
    def __init__(self, what: str, cap: int, reached: int):
        super().__init__(f"{what}: size {reached} exceeds cap {cap}")
        self.cap, self.reached = cap, reached


class NonConvergence(TheoryError):
    def __init__(self, arity: int, bound: int, counts: tuple[int, int]):
        super().__init__(f"no convergence at arity {arity} within depth {bound}: class counts {counts[0]} -> {counts[1]}")
        self.arity, self.bound, self.counts = arity, bound, counts


def term_str(t: Term) -> str:
    if isinstance(t, int):
        return f"x{t}"
    name, args = t
    if not args:
        return name
    return f"{name}({','.join(term_str(a) for a in args)})"


def term_vars(t: Term) -> set[int]:
    if isinstance(t, int):
        return {t}
    out = set()
    for a in t[1]:
        out |= term_vars(a)
    return out


def term_depth(t: Term) -> int:
    if isinstance(t, int):
        return 0
    return 1 + max((term_depth(a) for a in t[1]), default=0)


def check_term(t: Term, signature: dict[str, int]):
    if isinstance(t, int):
        if t < 0:
            raise TheoryError(f"negative variable index {t}")
        return
    name, args = t
    if name not in signature:
        raise TheoryError(f"unknown operation {name!r}")
    if len(args) != signature[name]:
        raise TheoryError(f"{name} expects {signature[name]} arguments, got {len(args)}")
    for a in args:
        check_term(a, signature)


class Theory:
    """Base class.  Subclasses implement ``n_ops``, ``proj``, ``_subst`` and optionally ``term``."""

    arities: AritySystem
    name: str = "T"

    def __init__(self):
        self._lock = threading.RLock()
        self._subst_cache: dict = {}

    @property
    def window(self) -> tuple[int, ...]:
        return self.arities.objects

    def n_ops(self, n: int) -> int:
        raise NotImplementedError

    def proj(self, n: int) -> tuple[int, ...]:
        raise NotImplementedError

    def _subst(self, t: int, k: int, args: tuple[int, ...], n: int) -> int:
        raise NotImplementedError

    def subst(self, t: int, k: int, args: Sequence[int], n: int) -> int:
        """``t(args)``: substitute ``n``-ary operations into the ``k``-ary ``t``."""
        key = (t, k, tuple(args), n)
        r = self._subst_cache.get(key)
        if r is None:
            r = self._subst(t, k, key[2], n)
            self._subst_cache[key] = r
        return r

    def term(self, n: int, t: int) -> Term | None:
        """A term denoting ``t``, when the theory has one."""
        return None

    def label(self, n: int, t: int) -> str:
        term = self.term(n, t)
        return term_str(term) if term is not None else f"op{n}_{t}"

    def _check_arity(self, n: int):
        if not self.arities.contains(n):
            raise TheoryError(f"arity {n} not in {self.arities}")

    # -- derived structure

    def hom_size(self, n: int, m: int) -> int:
        return self.n_ops(n) ** m

    def hom_tuple(self, n: int, m: int, u: int) -> tuple[int, ...]:
        return decode_tuple(u, self.n_ops(n), m)

    def hom_index(self, n: int, comps: Sequence[int]) -> int:
        return encode_tuple(comps, self.n_ops(n))

    def compose_tuples(self, g: Sequence[int], b: int, f: Sequence[int], a: int) -> tuple[int, ...]:
        """``g . f`` for ``f`` in ``hom(a, b)``, ``g`` in ``hom(b, c)`` as tuples."""
        return tuple(self.subst(x, b, f, a) for x in g)

    def tau_tuple(self, n: int, m: int, h: Sequence[int]) -> tuple[int, ...]:
        """Image of the function ``h: m -> n`` in ``hom(n, m)``."""
        p = self.proj(n)
        return tuple(p[h[i]] for i in range(m))

    def rename(self, t: int, J: int, K: int, h: Sequence[int]) -> int:
        """``t`` in ``hom(J, 1)`` reindexed along ``h: J -> K``: ``t(x_h(0), ..., x_h(J-1))``."""
        if J == K and tuple(h) == tuple(range(J)):
            return t
        return self.subst(t, J, self.tau_tuple(K, J, h), K)

    def gamma(self, J: int, K: int) -> list[int]:
        """Counit of ``J*K`` as the cotensor ``[J, K]``: ``J -> hom(J*K, K)``, pairing ``j*K + k``."""
        p = self.proj(J * K)
        n = self.n_ops(J * K)
        return [encode_tuple([p[j * K + k] for k in range(K)], n) for j in range(J)]

    def category(self, window: Iterable[int] | None = None) -> "TheoryCategory":
        return TheoryCategory(self, tuple(self.window if window is None else window))

    def tau(self, window: Iterable[int] | None = None) -> EnrichedFunctor:
        C = self.category(window)
        from .category import CardinalCategory
        Jop = Opposite(CardinalCategory(C.objects))

        def hom_map(n, m, h):
            return self.hom_index(n, self.tau_tuple(n, m, decode_tuple(h, n, m)))

        return EnrichedFunctor(Jop, C, {a: a for a in C.objects}, hom_map)

    def operations(self) -> ArityFunctor:
        """``J -> hom(J, 1)``, covariant in ``J`` by renaming variables."""
        return FnArityFunctor(self.arities, self.n_ops,
                              lambda J, K, h, t: self.rename(t, J, K, decode_tuple(h, K, J)))


class TheoryCategory(EnrichedCategory):
    def __init__(self, T: Theory, objects: tuple[int, ...]):
        self.T = T
        self.objects = objects

    def hom(self, a, b):
        return FinSet(self.T.hom_size(a, b))

    def compose(self, a, b, c, g, f):
        T = self.T
        return T.hom_index(a, T.compose_tuples(T.hom_tuple(b, c, g), b, T.hom_tuple(a, b, f), a))

    def identity(self, a):
        return self.T.hom_index(a, self.T.proj(a))


# -- initial theory -------------------------------------------------------------------


class InitialTheory(Theory):
    """``J^op``: ``hom(n, 1)`` is the ``n`` projections."""

    def __init__(self, S: AritySystem, name: str = "Init"):
        super().__init__()
        self.arities = S
        self.name = name

    def n_ops(self, n):
        self._check_arity(n)
        return n

    def proj(self, n):
        return tuple(range(n))

    def _subst(self, t, k, args, n):
        return args[t]

    def term(self, n, t):
        return t


def initial_theory(S: AritySystem) -> InitialTheory:
    return InitialTheory(S)


# -- clone theories ---------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratingAlgebra:
    signature: tuple[tuple[str, int], ...]
    base: FinSet
    tables: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "signature", tuple((str(n), int(k)) for n, k in self.signature))
        names = [n for n, _ in self.signature]
        if len(set(names)) != len(names):
            raise TheoryError("duplicate operation names")
        if self.base.size < 1:
            raise TheoryError("generating algebra needs a non-empty base")
        b = self.base.size
        for name, k in self.signature:
            table = tuple(self.tables.get(name, ()))
            if len(table) != b ** k:
                raise TheoryError(f"op {name}/{k}: table has {len(table)} entries, expected {b ** k}")
            if any(not 0 <= x < b for x in table):
                raise TheoryError(f"op {name}: entries out of range")
            self.tables[name] = table

    def apply(self, name: str, args: Sequence[int]) -> int:
        return self.tables[name][encode_tuple(args, self.base.size)]


@dataclass
class _ClonePart:
    tables: np.ndarray  # (m, b^n)
    index: dict
    witness: list  # ("proj", i) or (op_name, arg indices)


class CloneTheory(Theory):
    """The theory of the variety generated by a finite algebra; ``hom(n,1)`` is its ``n``-ary clone."""

    POINT_BUDGET = 1 << 20  # cells of b^n evaluation grid per arity

    def __init__(self, G: GeneratingAlgebra, S: AritySystem, cap: int = 20000, name: str = "T"):
        super().__init__()
        self.G, self.arities, self.cap, self.name = G, S, cap, name
        self._parts: dict[int, _ClonePart] = {}
        self._projs: dict = {}
        self._dtype = np.uint8 if G.base.size <= 256 else np.int64

    def part(self, n: int) -> _ClonePart:
        p = self._parts.get(n)
        if p is None:
            with self._lock:
                p = self._parts.get(n)
                if p is None:
                    self._check_arity(n)
                    p = self._generate(n)
                    self._parts[n] = p
        return p

    def _generate(self, n: int) -> _ClonePart:
        b = self.G.base.size
        P = b ** n
        if P * max(n, 1) > self.POINT_BUDGET:
            raise CapExceeded(f"evaluation grid of {self.name} at arity {n}", self.POINT_BUDGET, P * max(n, 1))
        points = np.array(list(itertools.product(range(b), repeat=n)), dtype=np.int64).reshape(P, n)
        rows: list[np.ndarray] = []
        index: dict = {}
        witness: list = []

        def add(row: np.ndarray, w) -> None:
            key = row.tobytes()
            if key not in index:
                index[key] = len(rows)
                rows.append(row)
                witness.append(w)
                if len(rows) > self.cap:
                    raise CapExceeded(f"clone of {self.name} at arity {n}", self.cap, len(rows))

        for i in range(n):
            add(points[:, i].astype(self._dtype), ("proj", i))
        old, first = 0, True
        while True:
            m = len(rows)
            if not first and old == m:
                break
            E = np.stack(rows).astype(np.int64) if rows else np.zeros((0, P), dtype=np.int64)
            for name, k in self.G.signature:
                table = np.array(self.G.tables[name], dtype=self._dtype)
                if k == 0:
                    if first:
                        add(np.full(P, table[0], dtype=self._dtype), (name, ()))
                    continue
                for combo in _seminaive_tuples(old if not first else 0, m, k):
                    for start in range(0, len(combo), 4096):
                        chunk = combo[start:start + 4096]
                        idx = np.zeros((len(chunk), P), dtype=np.int64)
                        for j in range(k):
                            idx = idx * b + E[chunk[:, j]]
                        res = table[idx]
                        uniq, first_pos = np.unique(res, axis=0, return_index=True)
                        for r, pos in sorted(zip(uniq, first_pos), key=lambda z: z[1]):
                            add(np.ascontiguousarray(r), (name, tuple(int(x) for x in chunk[pos])))
            old, first = m, False
        tables = np.stack(rows) if rows else np.zeros((0, P), dtype=self._dtype)
        return _ClonePart(tables, index, witness)

    def n_ops(self, n):
        return len(self.part(n).witness)

    def proj(self, n):
        p = self._projs.get(n)
        if p is None:
            p = self._projs[n] = self._proj(n)
        return p

    def _proj(self, n):
        part = self.part(n)
        b = self.G.base.size
        points = np.array(list(itertools.product(range(b), repeat=n)), dtype=np.int64).reshape(b ** n, n)
        return tuple(part.index[points[:, i].astype(self._dtype).tobytes()] for i in range(n))

    def _subst(self, t, k, args, n):
        b = self.G.base.size
        tk = self.part(k).tables[t]
        pn = self.part(n)
        P = b ** n
        idx = np.zeros(P, dtype=np.int64)
        for a in args:
            idx = idx * b + pn.tables[a]
        return pn.index[tk[idx].astype(self._dtype).tobytes()]

    def table(self, n: int, t: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.part(n).tables[t])

    def term(self, n, t):
        w = self.part(n).witness

        def build(i):
            kind, rest = w[i]
            if kind == "proj":
                return rest
            return kind, tuple(build(j) for j in rest)

        return build(t)


def _seminaive_tuples(old: int, m: int, k: int) -> list[np.ndarray]:
    """Index tuples in ``range(m)^k`` having at least one entry ``>= old``, split by first new position."""
    out = []
    if m == 0 or old >= m:
        return out
    for j in range(k):
        ranges = [np.arange(old)] * j + [np.arange(old, m)] + [np.arange(m)] * (k - j - 1)
        if any(len(r) == 0 for r in ranges):
            continue
        grids = np.meshgrid(*ranges, indexing="ij")
        out.append(np.stack([g.reshape(-1) for g in grids], axis=1))
    return out


def theory_from_clone(G: GeneratingAlgebra, S: AritySystem, cap: int = 20000, name: str = "T") -> CloneTheory:
    T = CloneTheory(G, S, cap=cap, name=name)
    for n in S.objects:
        T.part(n)
    return T


# -- presentations --------------------------------------------------------------------


@dataclass(frozen=True)
class Presentation:
    signature: tuple[tuple[str, int], ...]
    equations: tuple[tuple[Term, Term], ...]

    def __post_init__(self):
        sig = dict(self.signature)
        for lhs, rhs in self.equations:
            check_term(lhs, sig)
            check_term(rhs, sig)


@dataclass
class _FreeModel:
    """Classes of terms in ``n`` variables with total operation tables."""

    terms: list  # representative term per class
    tables: dict  # op name -> {args tuple: class}
    counts: list  # class count after each layer


class PresentationTheory(Theory):
    def __init__(self, P: Presentation, S: AritySystem, depth_bound: int, name: str = "T", cap: int = 20000):
        super().__init__()
        self.P, self.arities, self.bound, self.name, self.cap = P, S, depth_bound, name, cap
        self._models: dict[int, _FreeModel] = {}
        self._index: dict[int, dict] = {}

    def model(self, n: int) -> _FreeModel:
        m = self._models.get(n)
        if m is None:
            with self._lock:
                m = self._models.get(n)
                if m is None:
                    self._check_arity(n)
                    m = _saturate(self.P, n, self.bound, self.cap, self.name)
                    self._models[n] = m
        return m

    def n_ops(self, n):
        return len(self.model(n).terms)

    def proj(self, n):
        return tuple(range(n))

    def term(self, n, t):
        return self.model(n).terms[t]

    def evaluate(self, term: Term, n: int, env: Sequence[int]) -> int:
        M = self.model(n)
        if isinstance(term, int):
            return env[term]
        name, args = term
        return M.tables[name][tuple(self.evaluate(a, n, env) for a in args)]

    def _subst(self, t, k, args, n):
        return self.evaluate(self.term(k, t), n, args)


def _ematch(pat, c, env: dict, by_class: dict):
    """Bindings of the variables of ``pat`` under which it evaluates to class ``c``."""
    if isinstance(pat, int):
        if pat not in env:
            yield {**env, pat: c}
        elif env[pat] == c:
            yield env
        return
    op, args = pat
    for roots in by_class.get(c, {}).get(op, ()):
        yield from _ematch_args(args, roots, 0, env, by_class)


def _ematch_args(pats, roots, i, env, by_class):
    if i == len(pats):
        yield env
        return
    for e in _ematch(pats[i], roots[i], env, by_class):
        yield from _ematch_args(pats, roots, i + 1, e, by_class)


def _saturate(P: Presentation, n: int, bound: int, cap: int = 20000, name: str = "T") -> _FreeModel:
    # equation instances per closing round are allowed to exceed the node cap by this factor
    work_cap = cap * 50
    sig = list(P.signature)
    node_term: list = list(range(n))  # variables first
    node_layer: list = [0] * n
    uf = UnionFind(0)
    uf.parent = list(range(n))
    table: dict = {}  # (op, root args) -> node

    def new_node(term, layer):
        node_term.append(term)
        node_layer.append(layer)
        uf.parent.append(len(uf.parent))
        return len(node_term) - 1

    def roots():
        return sorted({uf.find(x) for x in range(len(node_term))})

    def lookup(term, env):
        if isinstance(term, int):
            return env[term]
        name, args = term
        vals = []
        for a in args:
            v = lookup(a, env)
            if v is None:
                return None
            vals.append(v)
        node = table.get((name, tuple(vals)))
        return None if node is None else uf.find(node)

    def close():
        changed = True
        while changed:
            changed = False
            # congruence: canonicalize argument roots
            new_table = {}
            for (op, args), node in table.items():
                key = (op, tuple(uf.find(a) for a in args))
                if key in new_table:
                    if uf.union(new_table[key], node):
                        changed = True
                else:
                    new_table[key] = node
            table.clear()
            table.update(new_table)
            classes = roots()
            by_class: dict = {}
            for (op, args), node in table.items():
                by_class.setdefault(uf.find(node), {}).setdefault(op, []).append(args)
            work = 0
            for lhs, rhs in P.equations:
                if isinstance(lhs, int):
                    lhs, rhs = rhs, lhs
                missing = sorted(term_vars(rhs) - term_vars(lhs))
                for c in classes:
                    for env in _ematch(lhs, c, {}, by_class):
                        for extra in itertools.product(classes, repeat=len(missing)):
                            work += 1
                            if work > work_cap:
                                raise CapExceeded(f"equation instances of {name} at arity {n}", work_cap, work)
                            full = {**env, **dict(zip(missing, extra))}
                            b = lookup(rhs, full)
                            if b is not None and uf.union(c, b):
                                changed = True

    close()
    counts = [len(roots())]
    for d in range(1, bound + 1):
        classes = roots()
        grow = len(node_term) + sum(len(classes) ** k for _, k in sig)
        if grow > cap:
            raise CapExceeded(f"term nodes of {name} at arity {n}", cap, grow)
        for op, k in sig:
            for args in itertools.product(classes, repeat=k):
                if (op, args) not in table:
                    table[op, args] = new_node((op, tuple(node_term[a] for a in args)), d)
        close()
        rs = roots()
        counts.append(len(rs))
        members: dict = {}
        for x in range(len(node_term)):
            members.setdefault(uf.find(x), []).append(x)
        fresh = [r for r in rs if all(node_layer[x] == d for x in members[r])]
        if not fresh:
            order = sorted(rs, key=lambda r: min(members[r]))
            pos = {r: i for i, r in enumerate(order)}
            tables: dict = {op: {} for op, _ in sig}
            for (op, args), node in table.items():
                tables[op][tuple(pos[uf.find(a)] for a in args)] = pos[uf.find(node)]
            terms = [node_term[min(members[r])] for r in order]
            return _FreeModel(terms, tables, counts)
    raise NonConvergence(n, bound, (counts[-2], counts[-1]) if len(counts) > 1 else (counts[0], counts[0]))


def theory_from_presentation(P: Presentation, S: AritySystem, depth_bound: int, name: str = "T",
                             cap: int = 20000) -> PresentationTheory:
    T = PresentationTheory(P, S, depth_bound, name=name, cap=cap)
    for n in S.objects:
        T.model(n)
    return T


# -- generators, validation, morphisms ----------------------------------------------------


def generators(T: Theory, window: Iterable[int] | None = None) -> list[tuple[int, int]]:
    """A generating set ``[(arity, op)]`` of the operations in view, chosen greedily by arity."""
    window = tuple(T.window if window is None else window)
    gens: list[tuple[int, int]] = []
    for n in window:
        reach = closure(T, gens, n)
        for t in range(T.n_ops(n)):
            if t not in reach:
                gens.append((n, t))
                reach = closure(T, gens, n, start=reach)
    return gens


def closure(T: Theory, gens: Sequence[tuple[int, int]], n: int, start: set | None = None) -> set:
    reach = set(T.proj(n)) | set(start or ())
    frontier = None  # first round applies every generator to everything
    while True:
        new = set()
        pool = sorted(reach)
        for k, g in gens:
            for args in itertools.product(pool, repeat=k):
                if frontier is not None and not frontier.intersection(args):
                    continue
                r = T.subst(g, k, args, n)
                if r not in reach:
                    new.add(r)
        if not new:
            return reach
        reach |= new
        frontier = new


def validate_theory(T: Theory, window: Iterable[int] | None = None) -> list[Violation]:
    window = tuple(T.window if window is None else window)
    out: list[Violation] = []
    C = T.category(window)
    for m in window:
        if 1 not in window:
            break
        if not check_cotensor(C, m, 1, m, [T.proj(m)[i] for i in range(m)] if m else [], naturality=False):
            out.append(_cotensor_witness(T, window, m))
    if 1 in window:
        e = T.proj(1)
        if len(e) != 1:
            out.append(Violation("standardness", (1,), f"proj(1) has {len(e)} entries"))
        else:
            for t in range(T.n_ops(1)):
                if T.subst(e[0], 1, (t,), 1) != t or T.subst(t, 1, (e[0],), 1) != t:
                    out.append(Violation("standardness", (1, t), "proj(1) is not the identity"))
                    break
    for n in window:
        p = T.proj(n)
        for t in range(T.n_ops(n)):
            if T.subst(t, n, p, n) != t:
                out.append(Violation("right-unit", (n, t)))
    out.extend(associativity_violations(T, window))
    return out


def associativity_violations(T: Theory, window: Iterable[int] | None = None, first_only: bool = False) -> list[Violation]:
    """``(g . s) . f = g . (s . f)`` for generators ``g``; implies associativity of all composites."""
    window = tuple(T.window if window is None else window)
    out = []
    for k, g in generators(T, window):
        for b in window:
            for s in itertools.product(range(T.n_ops(b)), repeat=k):
                gs = T.subst(g, k, s, b)
                for a in window:
                    for f in itertools.product(range(T.n_ops(a)), repeat=b):
                        lhs = T.subst(gs, b, f, a)
                        rhs = T.subst(g, k, tuple(T.subst(x, b, f, a) for x in s), a)
                        if lhs != rhs:
                            out.append(Violation("associativity", (k, g, b, s, a, f), f"{lhs} != {rhs}"))
                            if first_only:
                                return out
    return out


def _cotensor_witness(T: Theory, window, m) -> Violation:
    for n in window:
        nn = T.n_ops(n)
        seen: dict = {}
        for u in itertools.product(range(nn), repeat=m):
            image = tuple(T.subst(T.proj(m)[i], m, u, n) for i in range(m))
            if image in seen:
                return Violation("cotensor", (n, m, seen[image], u), "projections are not jointly monic")
            seen[image] = u
    return Violation("cotensor", (m,), "projection map not bijective")


@dataclass
class TheoryMorphism:
    """Identity-on-objects map determined by ``maps[n]: hom_dom(n,1) -> hom_cod(n,1)``."""

    dom: Theory
    cod: Theory
    maps: dict

    def __call__(self, n: int, t: int) -> int:
        return self.maps[n][t]

    def functor(self, window=None) -> EnrichedFunctor:
        D, C = self.dom.category(window), self.cod.category(window)

        def hom_map(a, b, u):
            comps = self.dom.hom_tuple(a, b, u)
            return self.cod.hom_index(a, [self.maps[a][x] for x in comps])

        return EnrichedFunctor(D, C, {a: a for a in D.objects}, hom_map)


def initial_morphism(T: Theory) -> TheoryMorphism:
    I = initial_theory(T.arities)
    return TheoryMorphism(I, T, {n: T.proj(n) for n in T.window})


def identity_morphism(T: Theory) -> TheoryMorphism:
    return TheoryMorphism(T, T, {n: tuple(range(T.n_ops(n))) for n in T.window})


def theory_morphism_violations(M: TheoryMorphism) -> list[Violation]:
    D, C = M.dom, M.cod
    out = []
    if D.arities != C.arities:
        return [Violation("arities", (str(D.arities), str(C.arities)))]
    for n in D.window:
        if len(M.maps[n]) != D.n_ops(n):
            out.append(Violation("shape", (n,)))
            continue
        for i, p in enumerate(D.proj(n)):
            if M.maps[n][p] != C.proj(n)[i]:
                out.append(Violation("projection", (n, i)))
    if out:
        return out
    for k, g in generators(D):
        for n in D.window:
            for args in itertools.product(range(D.n_ops(n)), repeat=k):
                lhs = M.maps[n][D.subst(g, k, args, n)]
                rhs = C.subst(M.maps[k][g], k, [M.maps[n][a] for a in args], n)
                if lhs != rhs:
                    out.append(Violation("composition", (k, g, n, args)))
    return out


def check_theory_morphism(M: TheoryMorphism | EnrichedFunctor, dom: Theory | None = None,
                          cod: Theory | None = None) -> bool:
    """Identity on objects, projections to projections, and functorial."""
    if isinstance(M, TheoryMorphism):
        return not theory_morphism_violations(M)
    D, C = M.dom, M.cod
    dom = dom or getattr(D, "T", None)
    cod = cod or getattr(C, "T", None)
    if dom is None or cod is None:
        raise TheoryError("functor is not between theory categories")
    if any(M(a) != a for a in D.objects):
        return False
    for m in D.objects:
        for i, p in enumerate(dom.proj(m)):
            if M.on_hom(m, 1, p) != cod.proj(m)[i]:
                return False
    return not validate_functor(M)


# -- tabled theories (negative controls) --------------------------------------------


class TabledTheory(Theory):
    """A theory given by finite tables on a window; entries may be corrupted deliberately."""

    def __init__(self, S: AritySystem, sizes: dict, projs: dict, subst_table: dict, name: str = "Tab",
                 labels: dict | None = None):
        super().__init__()
        self.arities, self.name = S, name
        self._sizes, self._projs, self._table = dict(sizes), dict(projs), dict(subst_table)
        self._labels = labels or {}

    @classmethod
    def from_theory(cls, T: Theory, window: Iterable[int] | None = None) -> "TabledTheory":
        window = tuple(T.window if window is None else window)
        sub = {}
        for k in window:
            for n in window:
                sub.update({(t, k, args, n): T.subst(t, k, args, n) for t in range(T.n_ops(k))
                            for args in itertools.product(range(T.n_ops(n)), repeat=k)})
        labels = {(n, t): T.label(n, t) for n in window for t in range(T.n_ops(n))}
        S = T.arities if T.arities.is_finite else T.arities.with_window(max(window))
        return cls(S, {n: T.n_ops(n) for n in window}, {n: tuple(T.proj(n)) for n in window}, sub,
                   name=f"tab({T.name})", labels=labels)

    def n_ops(self, n):
        if n not in self._sizes:
            raise TheoryError(f"arity {n} outside the tabulated window")
        return self._sizes[n]

    def proj(self, n):
        return self._projs[n]

    def _subst(self, t, k, args, n):
        return self._table[t, k, args, n]

    def label(self, n, t):
        return self._labels.get((n, t), f"op{n}_{t}")

    def with_subst_entry(self, t: int, k: int, args: Sequence[int], n: int, value: int) -> "TabledTheory":
        table = dict(self._table)
        table[t, k, tuple(args), n] = value
        return TabledTheory(self.arities, self._sizes, self._projs, table, self.name, self._labels)

    def with_proj(self, n: int, proj: Sequence[int]) -> "TabledTheory":
        projs = dict(self._projs)
        projs[n] = tuple(proj)
        return TabledTheory(self.arities, self._sizes, projs, self._table, self.name, self._labels)
