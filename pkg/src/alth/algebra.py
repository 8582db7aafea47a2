"""Normal algebras of a theory in FinSet.

An ``Algebra`` stores, for every arity ``n`` in view and every ``n``-ary
operation ``t``, a table ``carrier^n -> carrier`` (points of ``carrier^n``
in lexicographic order).  Checks that quantify over "all composites" only
run over a generating set of operations; respecting substitution along
generators implies it for every operation, by induction on term depth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .category import Violation
from .finset import FinFn, FinSet, coequalizer, decode_tuple, descend, encode_tuple, power_map
from .theory import Theory, TheoryError, TheoryMorphism, generators, theory_morphism_violations


class AlgebraError(ValueError):
    pass


class NotAnAlgebra(AlgebraError):
    def __init__(self, arity: int, witness):
        super().__init__(f"comparison map at arity {arity} is not a bijection: {witness}")
        self.arity, self.witness = arity, witness


class EnumerationCapExceeded(AlgebraError):
    def __init__(self, cap: int, count: int):
        super().__init__(f"{count} candidate structures exceed the cap {cap}")
        self.cap, self.count = cap, count


class StabilityFailure(AlgebraError):
    def __init__(self, arity: int, colim_size: int, power_size: int):
        super().__init__(f"coequalizer is not stable at arity {arity}: {colim_size} classes vs {power_size} points")
        self.arity, self.colim_size, self.power_size = arity, colim_size, power_size


def apply_table(table: Sequence[int], size: int, args: Sequence[int]) -> int:
    return table[encode_tuple(args, size)]


def compose_tables(g: Sequence[int], args: Sequence[Sequence[int]], size: int, n: int) -> tuple[int, ...]:
    """``g . (args_0, ..., args_{k-1})`` as a table on ``size^n``."""
    k = len(args)
    out = []
    for p in range(size ** n):
        idx = 0
        for j in range(k):
            idx = idx * size + args[j][p]
        out.append(g[idx])
    return tuple(out)


def projection_table(size: int, n: int, i: int) -> tuple[int, ...]:
    return tuple(p[i] for p in itertools.product(range(size), repeat=n))


@dataclass
class Algebra:
    theory: Theory
    carrier: FinSet
    interp: dict  # (n, t) -> table on carrier^n
    name: str = ""

    @property
    def size(self) -> int:
        return self.carrier.size

    @property
    def window(self) -> tuple[int, ...]:
        return self.theory.window

    def op(self, n: int, t: int) -> tuple[int, ...]:
        return self.interp[n, t]

    def apply(self, n: int, t: int, xs: Sequence[int]) -> int:
        return apply_table(self.interp[n, t], self.size, xs)

    def key(self) -> tuple:
        """Concatenated tables in canonical order (arity, then operation index)."""
        return tuple(self.interp[n, t] for n in self.window for t in range(self.theory.n_ops(n)))

    def __eq__(self, other):
        return isinstance(other, Algebra) and self.theory is other.theory and self.size == other.size \
            and self.key() == other.key()

    def __hash__(self):
        return hash((self.size, self.key()))


@dataclass
class AlgebraHom:
    dom: Algebra
    cod: Algebra
    fn: FinFn

    def then(self, other: "AlgebraHom") -> "AlgebraHom":
        return AlgebraHom(self.dom, other.cod, self.fn.then(other.fn))


def _gens(T: Theory):
    g = getattr(T, "_alg_generators", None)
    if g is None:
        g = generators(T)
        T._alg_generators = g
    return g


def validate_algebra(A: Algebra) -> list[Violation]:
    T, X = A.theory, A.size
    out = []
    for n in A.window:
        for t in range(T.n_ops(n)):
            tab = A.interp.get((n, t))
            if tab is None or len(tab) != X ** n or any(not 0 <= v < X for v in tab):
                out.append(Violation("shape", (n, t)))
    if out:
        return out
    for n in A.window:
        for i, p in enumerate(T.proj(n)):
            if A.interp[n, p] != projection_table(X, n, i):
                out.append(Violation("projection", (n, i), f"proj({n})[{i}] is not the coordinate map"))
    for k, g in _gens(T):
        gt = A.interp[k, g]
        for n in A.window:
            for args in itertools.product(range(T.n_ops(n)), repeat=k):
                lhs = A.interp[n, T.subst(g, k, args, n)]
                rhs = compose_tables(gt, [A.interp[n, a] for a in args], X, n)
                if lhs != rhs:
                    out.append(Violation("substitution", (k, g, n, args),
                                         f"{T.label(k, g)} applied to {[T.label(n, a) for a in args]}"))
    return out


def algebra_from_tables(T: Theory, carrier: FinSet | int, interp: dict, name: str = "") -> Algebra:
    carrier = carrier if isinstance(carrier, FinSet) else FinSet(carrier)
    return Algebra(T, carrier, {k: tuple(v) for k, v in interp.items()}, name)


def algebra_from_signature(T: Theory, carrier: FinSet | int, ops: dict, name: str = "") -> Algebra:
    """Interpret a theory that carries terms (clone or presentation) from signature tables.

    ``ops[name]`` is a table on ``carrier^arity``; every operation of the
    theory is evaluated through its witness term.
    """
    carrier = carrier if isinstance(carrier, FinSet) else FinSet(carrier)
    X = carrier.size
    interp = {}
    for n in T.window:
        for t in range(T.n_ops(n)):
            term = T.term(n, t)
            if term is None:
                raise AlgebraError("theory has no witness terms")
            interp[n, t] = _eval_term(term, ops, X, n)
    return Algebra(T, carrier, interp, name)


def _eval_term(term, ops, X, n):
    if isinstance(term, int):
        return projection_table(X, n, term)
    name, args = term
    if name not in ops:
        raise AlgebraError(f"no table for operation {name!r}")
    return compose_tables(ops[name], [_eval_term(a, ops, X, n) for a in args], X, n)


def terminal_algebra(T: Theory) -> Algebra:
    return Algebra(T, FinSet(1), {(n, t): (0,) for n in T.window for t in range(T.n_ops(n))}, "1")


# -- general algebra data and normalization -----------------------------------------------


@dataclass
class GeneralAlgebraData:
    """A functor from the theory to FinSet: sets ``obj[n]`` and tables ``act[(n, m, u)]: obj[n] -> obj[m]``."""

    theory: Theory
    obj: dict
    act: dict

    def action(self, n: int, m: int, u: int) -> tuple[int, ...]:
        return self.act[n, m, u]


def validate_general(Gd: GeneralAlgebraData) -> list[Violation]:
    T = Gd.theory
    out = []
    W = T.window
    for n in W:
        if Gd.action(n, n, T.hom_index(n, T.proj(n))) != tuple(range(Gd.obj[n])):
            out.append(Violation("identity", (n,)))
    for a, b, c in itertools.product(W, repeat=3):
        for f in range(T.hom_size(a, b)):
            Af = Gd.action(a, b, f)
            ft = T.hom_tuple(a, b, f)
            for g in range(T.hom_size(b, c)):
                gf = T.hom_index(a, T.compose_tuples(T.hom_tuple(b, c, g), b, ft, a))
                Ag = Gd.action(b, c, g)
                if Gd.action(a, c, gf) != tuple(Ag[x] for x in Af):
                    out.append(Violation("functoriality", (a, b, c, f, g)))
    return out


def as_general(A: Algebra) -> GeneralAlgebraData:
    """The normal algebra viewed as a functor: ``obj[n] = carrier^n``."""
    T, X = A.theory, A.size
    obj = {n: X ** n for n in A.window}
    act = {}
    for n in A.window:
        pts = list(itertools.product(range(X), repeat=n))
        for m in A.window:
            for u in range(T.hom_size(n, m)):
                comps = T.hom_tuple(n, m, u)
                act[n, m, u] = tuple(encode_tuple([A.interp[n, c][i] for c in comps], X) for i in range(len(pts)))
    return GeneralAlgebraData(T, obj, act)


def kappa(Gd: GeneralAlgebraData, n: int) -> tuple[int, ...]:
    """``obj[n] -> obj[1]^n``, ``x -> (A(proj_i) x)_i``."""
    T = Gd.theory
    X = Gd.obj[1]
    acts = [Gd.action(n, 1, p) for p in T.proj(n)]
    return tuple(encode_tuple([a[x] for a in acts], X) for x in range(Gd.obj[n]))


def normalize(Gd: GeneralAlgebraData) -> tuple[Algebra, dict]:
    """Return the normal algebra and the components ``kappa[n]`` of the isomorphism onto it."""
    T = Gd.theory
    if 1 not in T.window:
        raise AlgebraError("normalization needs arity 1 in view")
    X = Gd.obj[1]
    comps = {}
    for n in T.window:
        if Gd.obj[n] != X ** n:
            raise NotAnAlgebra(n, ("size", Gd.obj[n], X ** n))
        k = kappa(Gd, n)
        if len(set(k)) != len(k):
            seen = {}
            for x, y in enumerate(k):
                if y in seen:
                    raise NotAnAlgebra(n, ("collision", seen[y], x))
                seen[y] = x
        comps[n] = k
    interp = {}
    for n in T.window:
        inv = [0] * (X ** n)
        for x, y in enumerate(comps[n]):
            inv[y] = x
        for t in range(T.n_ops(n)):
            a = Gd.action(n, 1, t)
            interp[n, t] = tuple(a[inv[p]] for p in range(X ** n))
    return Algebra(T, FinSet(X), interp), comps


# -- enumeration --------------------------------------------------------------------------


def _plan(T: Theory, n: int, gens) -> list[tuple[int, int, tuple[int, ...]]]:
    """All ``(result, generator index, args)`` at arity ``n``, ordered so args are derived first."""
    key = ("_alg_plan", n)
    cache = T.__dict__.setdefault("_alg_plans", {})
    if key in cache:
        return cache[key]
    defined = set(T.proj(n))
    todo = [(gi, args) for gi, (k, g) in enumerate(gens)
            for args in itertools.product(range(T.n_ops(n)), repeat=k)]
    plan = []
    while todo:
        ready = [(gi, a) for gi, a in todo if all(x in defined for x in a)]
        if not ready:
            raise TheoryError(f"generators do not reach every {n}-ary operation")
        rest = [(gi, a) for gi, a in todo if not all(x in defined for x in a)]
        for gi, a in ready:
            k, g = gens[gi]
            r = T.subst(g, k, a, n)
            plan.append((r, gi, a))
        defined |= {r for r, _, _ in plan}
        todo = rest
    cache[key] = plan
    return plan


def _build(T: Theory, X: int, gens, gen_tables) -> dict | None:
    interp = {}
    for n in T.window:
        for i, p in enumerate(T.proj(n)):
            tab = projection_table(X, n, i)
            if interp.setdefault((n, p), tab) != tab:
                return None
        for r, gi, args in _plan(T, n, gens):
            tab = compose_tables(gen_tables[gi], [interp[n, a] for a in args], X, n)
            old = interp.get((n, r))
            if old is None:
                interp[n, r] = tab
            elif old != tab:
                return None
    return interp


def algebras_of_size(T: Theory, X: int, cap: int = 500_000) -> list[Algebra]:
    gens = _gens(T)
    count = 1
    for k, _ in gens:
        count *= X ** (X ** k)
    if count > cap:
        raise EnumerationCapExceeded(cap, count)
    spaces = [list(itertools.product(range(X), repeat=X ** k)) for k, _ in gens]
    found = {}
    for choice in itertools.product(*spaces):
        # a generator's own table must agree with its interpretation
        interp = _build(T, X, gens, choice)
        if interp is None:
            continue
        if any(interp[k, g] != choice[i] for i, (k, g) in enumerate(gens)):
            continue
        A = Algebra(T, FinSet(X), interp)
        found[A.key()] = A
    return [found[k] for k in sorted(found)]


def enumerate_algebras(T: Theory, max_carrier: int, min_carrier: int = 0, cap: int = 500_000) -> list[Algebra]:
    out = []
    for X in range(min_carrier, max_carrier + 1):
        out.extend(algebras_of_size(T, X, cap))
    return out


def enumerate_homs(A: Algebra, B: Algebra) -> list[FinFn]:
    if A.theory is not B.theory:
        raise AlgebraError("algebras over different theories")
    T = A.theory
    nA, nB = A.size, B.size
    constraints: list[list] = [[] for _ in range(nA)]
    for k, g in _gens(T):
        ga, gb = A.interp[k, g], B.interp[k, g]
        for xs in itertools.product(range(nA), repeat=k):
            y = apply_table(ga, nA, xs)
            # checked as soon as every element involved has a value
            constraints[max((*xs, y))].append((xs, y, gb))
    out = []
    h = [0] * nA

    def ok(i):
        for xs, y, gb in constraints[i]:
            if h[y] != apply_table(gb, nB, [h[x] for x in xs]):
                return False
        return True

    def go(i):
        if i == nA:
            out.append(FinFn(A.carrier, B.carrier, tuple(h)))
            return
        for v in range(nB):
            h[i] = v
            if ok(i):
                go(i + 1)

    go(0)
    return out


def is_hom(A: Algebra, B: Algebra, h: FinFn) -> bool:
    T = A.theory
    for k, g in _gens(T):
        for xs in itertools.product(range(A.size), repeat=k):
            if h(A.apply(k, g, xs)) != B.apply(k, g, [h(x) for x in xs]):
                return False
    return True


# -- representables, relative adjunction, restriction ------------------------------------


def representable_algebra(T: Theory, J: int) -> Algebra:
    """``hom(J, -)``: carrier ``hom(J, 1)``, operations act by substitution."""
    X = T.n_ops(J)
    interp = {}
    for n in T.window:
        pts = list(itertools.product(range(X), repeat=n))
        for t in range(T.n_ops(n)):
            interp[n, t] = tuple(T.subst(t, n, p, J) for p in pts)
    A = Algebra(T, FinSet(X, tuple(T.label(J, s) for s in range(X)) if X else None), interp, f"phi({J})")
    bad = validate_algebra(A)
    if bad:
        raise AlgebraError(f"representable algebra invalid: {bad[0]}")
    return A


def check_rel_adjunction(T: Theory, J: int, A: Algebra) -> bool:
    """Is ``h -> (h(proj(J)[j]))_j`` a bijection ``homs(phi(J), A) -> carrier^J``?"""
    P = representable_algebra(T, J)
    homs = enumerate_homs(P, A)
    gamma = T.proj(J)
    images = {encode_tuple([h(g) for g in gamma], A.size) for h in homs}
    return len(images) == len(homs) == A.size ** J


def restrict_along(M: TheoryMorphism, B: Algebra) -> Algebra:
    bad = theory_morphism_violations(M)
    if bad:
        raise AlgebraError(f"not a theory morphism: {bad[0]}")
    T = M.dom
    interp = {(n, t): B.interp[n, M.maps[n][t]] for n in T.window for t in range(T.n_ops(n))}
    A = Algebra(T, B.carrier, interp, B.name)
    bad = validate_algebra(A)
    if bad:
        raise AlgebraError(f"restricted algebra invalid: {bad[0]}")
    return A


# -- coequalizers ------------------------------------------------------------------------


@dataclass
class CoequalizerResult:
    algebra: Algebra
    proj: AlgebraHom
    power_checks: dict = field(default_factory=dict)  # arity -> (classes in carrier^n, |Q|^n)


def coequalize_algebras(f: AlgebraHom, g: AlgebraHom) -> CoequalizerResult:
    """Coequalizer of carriers, lifted to algebras when it is stable under every power in view."""
    if f.dom is not g.dom or f.cod is not g.cod:
        raise AlgebraError("homs are not parallel")
    A, B = f.dom, f.cod
    T = B.theory
    q = coequalizer(f.fn, g.fn)
    Q = q.size
    checks = {}
    for n in T.window:
        qn = coequalizer(power_map(f.fn, n), power_map(g.fn, n))
        cmp = descend(qn, lambda x: encode_tuple([q(b) for b in decode_tuple(x, B.size, n)], Q), Q ** n)
        checks[n] = (qn.size, Q ** n)
        if not cmp.is_bijective():
            raise StabilityFailure(n, qn.size, Q ** n)
    interp = {}
    for n in T.window:
        for t in range(T.n_ops(n)):
            tab = B.interp[n, t]
            # q . t_B factors through q^n because q^n is the coequalizer of the n-th powers
            sec = {}
            for p, bs in enumerate(itertools.product(range(B.size), repeat=n)):
                key = encode_tuple([q(b) for b in bs], Q)
                val = q(tab[p])
                if sec.setdefault(key, val) != val:
                    raise AlgebraError(f"operation {T.label(n, t)} does not descend")
            interp[n, t] = tuple(sec[k] for k in range(Q ** n))
    C = Algebra(T, q.target, interp)
    bad = validate_algebra(C)
    if bad:
        raise AlgebraError(f"lifted structure invalid: {bad[0]}")
    return CoequalizerResult(C, AlgebraHom(B, C, q.proj), checks)


def lifts_through(B: Algebra, q: FinFn, pool: Sequence[Algebra] | None = None) -> list[Algebra]:
    """All algebra structures on ``q.cod`` making ``q`` a homomorphism (exhaustive over ``pool``)."""
    cands = algebras_of_size(B.theory, q.cod.size) if pool is None else [C for C in pool if C.size == q.cod.size]
    return [C for C in cands if is_hom(B, C, q)]


def reflexive_pairs(algebras: Sequence[Algebra]) -> list[tuple[AlgebraHom, AlgebraHom]]:
    """Every parallel pair ``f, g: A -> B`` of homs with a common section, ``A, B`` from ``algebras``."""
    out = []
    for A in algebras:
        for B in algebras:
            if A.theory is not B.theory:
                continue
            ab = enumerate_homs(A, B)
            seen = set()
            for s in enumerate_homs(B, A):
                split = [f for f in ab if all(f(s(b)) == b for b in range(B.size))]
                for f in split:
                    for g in split:
                        if (f.table, g.table) not in seen:
                            seen.add((f.table, g.table))
                            out.append((AlgebraHom(A, B, f), AlgebraHom(A, B, g)))
    return out


def check_unique_lift(f: AlgebraHom, g: AlgebraHom, res: CoequalizerResult,
                      pool: Sequence[Algebra] | None = None) -> bool:
    """The lifted structure is the only one making the quotient a homomorphism, and it is universal.

    Universality is tested against every algebra of ``pool`` (default: all
    algebras no larger than the codomain).
    """
    q = res.proj.fn
    if pool is None:
        pool = enumerate_algebras(f.cod.theory, max(f.cod.size, 1))
    lifts = lifts_through(f.cod, q, pool)
    if len(lifts) != 1 or lifts[0].key() != res.algebra.key():
        return False
    for C in pool:
        for h in enumerate_homs(f.cod, C):
            if all(h(f.fn(a)) == h(g.fn(a)) for a in range(f.dom.size)):
                factors = [k for k in enumerate_homs(res.algebra, C)
                           if all(k(q(b)) == h(b) for b in range(f.cod.size))]
                if len(factors) != 1:
                    return False
    return True
