"""Monads on FinSet given pointwise, the induced monad of a theory, and the Kleisli theory.

A monad evaluates on cardinals: ``ob(n)`` is ``|T(n)|``, ``fmap`` acts on
``FinFn``, and ``unit(n)``, ``mult(n)`` are the components of the unit and
multiplication.  The induced monad of a theory on a finite arity system is
the exact coend ``int^J V^J x hom(J, 1)``.  On ``FinCard`` the elements of
``T(V)`` are represented by ``hom(V, 1)`` directly, because ``mult`` needs
``T(T(V))``; the truncated coend is kept as a cross-check.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import Algebra, algebras_of_size, enumerate_homs
from .arity import (AritySystem, Endofunctor, Lan, Verdict, as_fn, check_xi_iso, fincard, lan_along_j,
                    restrict_to_arities)
from .category import Violation
from .finset import FinFn, FinSet, decode_tuple, descend, encode_tuple, identity
from .theory import Theory, TheoryError, validate_theory


class MonadError(ValueError):
    pass


class Monad(Endofunctor):
    """Subclasses implement ``_ob``, ``_fmap_elem``, ``_unit_elem`` and ``_mult_elem``."""

    arities: AritySystem
    provenance: str = "tabled"
    name: str = "M"

    def __init__(self):
        self._lock = threading.RLock()
        self._obs: dict = {}

    def ob(self, n: int) -> int:
        r = self._obs.get(n)
        if r is None:
            with self._lock:
                r = self._obs.get(n)
                if r is None:
                    r = self._ob(n)
                    self._obs[n] = r
        return r

    def fmap_elem(self, n: int, m: int, f: Sequence[int], x: int) -> int:
        return self._fmap_elem(n, m, tuple(f), x)

    def fmap(self, f: FinFn) -> FinFn:
        n, m = f.dom.size, f.cod.size
        return FinFn(FinSet(self.ob(n)), FinSet(self.ob(m)),
                     tuple(self._fmap_elem(n, m, f.table, x) for x in range(self.ob(n))))

    def unit(self, n: int) -> FinFn:
        return FinFn(FinSet(n), FinSet(self.ob(n)), tuple(self._unit_elem(n, v) for v in range(n)))

    def mult(self, n: int) -> FinFn:
        tn = self.ob(n)
        return FinFn(FinSet(self.ob(tn)), FinSet(tn), tuple(self._mult_elem(n, x) for x in range(self.ob(tn))))

    def unit_elem(self, n: int, v: int) -> int:
        return self._unit_elem(n, v)

    def mult_elem(self, n: int, x: int) -> int:
        return self._mult_elem(n, x)

    def label(self, n: int, x: int) -> str:
        return str(x)

    def kleisli(self, x: int, k: int, args: Sequence[int], n: int) -> int:
        """``mu_n . T(args) (x)`` for ``x`` in ``T(k)`` and ``args: k -> T(n)``."""
        return self._mult_elem(n, self._fmap_elem(k, self.ob(n), tuple(args), x))

    # subclasses
    def _ob(self, n):
        raise NotImplementedError

    def _fmap_elem(self, n, m, f, x):
        raise NotImplementedError

    def _unit_elem(self, n, v):
        raise NotImplementedError

    def _mult_elem(self, n, x):
        raise NotImplementedError


class IdentityMonad(Monad):
    provenance = "identity"

    def __init__(self, S: AritySystem, name: str = "Id"):
        super().__init__()
        self.arities, self.name = S, name

    def _ob(self, n):
        return n

    def _fmap_elem(self, n, m, f, x):
        return f[x]

    def _unit_elem(self, n, v):
        return v

    def _mult_elem(self, n, x):
        return x


class WriterMonad(Monad):
    """``M x (-)`` for a finite monoid ``M``; ``(m, v)`` is encoded ``m * |V| + v``."""

    provenance = "writer"

    def __init__(self, S: AritySystem, table: Sequence[Sequence[int]], unit: int = 0, name: str = "W"):
        super().__init__()
        self.arities, self.table, self.e, self.name = S, [tuple(r) for r in table], unit, name
        self.size = len(table)

    def _ob(self, n):
        return self.size * n

    def _fmap_elem(self, n, m, f, x):
        a, v = divmod(x, n)
        return a * m + f[v]

    def _unit_elem(self, n, v):
        return self.e * n + v

    def _mult_elem(self, n, x):
        a, rest = divmod(x, self.size * n)
        b, v = divmod(rest, n)
        return self.table[a][b] * n + v

    def label(self, n, x):
        a, v = divmod(x, n)
        return f"({a},{v})"


def z2_writer(S: AritySystem | None = None) -> WriterMonad:
    from .arity import JUST_UNIT
    return WriterMonad(S or JUST_UNIT, [[0, 1], [1, 0]], 0, name="Z2Writer")


class ComposedEndofunctor(Endofunctor):
    """``T . S`` for pointwise endofunctors."""

    def __init__(self, T: Endofunctor, S: Endofunctor):
        self.T, self.S = T, S

    def ob(self, n):
        return self.T.ob(self.S.ob(n))

    def fmap(self, f):
        return self.T.fmap(self.S.fmap(f))


# -- induced monad of a theory ---------------------------------------------------------


class InducedMonad(Monad):
    provenance = "induced"

    def __init__(self, T: Theory):
        super().__init__()
        self.theory = T
        self.arities = T.arities
        self.name = f"m({T.name})"
        self._lans: dict[int, Lan] = {}
        self._ops = T.operations()

    @property
    def coend_form(self) -> bool:
        return self.arities.is_finite

    def lan(self, V: int) -> Lan:
        L = self._lans.get(V)
        if L is None:
            with self._lock:
                L = self._lans.get(V)
                if L is None:
                    L = lan_along_j(self._ops, V, check=False)
                    self._lans[V] = L
        return L

    def insert(self, V: int, a: int, v: Sequence[int], t: int) -> int:
        """The element ``[a, v, t]`` of ``T(V)``: ``t`` in ``hom(a, 1)``, ``v: a -> V``."""
        if self.coend_form:
            return self.lan(V).insert(a, tuple(v), t)
        return self.theory.rename(t, a, V, v)

    def rep(self, V: int, x: int) -> tuple[int, tuple[int, ...], int]:
        if self.coend_form:
            return self.lan(V).rep(x)
        return V, tuple(range(V)), x

    def _ob(self, n):
        if self.coend_form:
            return self.lan(n).size
        return self.theory.n_ops(n)

    def _fmap_elem(self, n, m, f, x):
        a, v, t = self.rep(n, x)
        return self.insert(m, a, [f[i] for i in v], t)

    def _unit_elem(self, n, v):
        return self.insert(n, 1, (v,), self.theory.proj(1)[0])

    def _mult_elem(self, n, x):
        T = self.theory
        tn = self.ob(n)
        if not self.coend_form:
            return T.subst(x, tn, tuple(range(tn)), n)
        a, w, t = self.rep(tn, x)
        # gather the inner representatives in one context of arity sum(b_i)
        inner = [self.rep(n, y) for y in w]
        b = sum(r[0] for r in inner)
        if not self.arities.contains(b):
            raise MonadError(f"combined arity {b} not in {self.arities}")
        args, env, off = [], [], 0
        for bi, vi, si in inner:
            args.append(T.rename(si, bi, b, [off + i for i in range(bi)]))
            env.extend(vi)
            off += bi
        return self.insert(n, b, env, T.subst(t, a, args, b))

    def label(self, n, x):
        from .theory import term_str
        a, v, t = self.rep(n, x)
        term = self.theory.term(a, t)
        if term is None:
            return f"[{a},{v},{t}]"
        return term_str(_rename_term(term, v))

    def coend_crosscheck(self, V: int) -> "CrossCheck":
        """Compare ``hom(V, 1)`` with the truncated coend over a window past ``V``."""
        T = self.theory
        N = max(self.arities.objects[-1], V + 1) if not self.arities.is_finite else None
        L = lan_along_j(self._ops, V, check=False, window=N)

        def along(x):
            a, z = L.coend.locate(x)
            v, t = divmod(z, T.n_ops(a))
            return T.rename(t, a, V, decode_tuple(v, V, a))

        bij = descend(L.coend.quotient, along, T.n_ops(V))
        return CrossCheck(V, L.size, T.n_ops(V), L.stabilized, bij)


@dataclass
class CrossCheck:
    V: int
    coend_size: int
    clone_size: int
    stabilized: bool
    bijection: FinFn

    @property
    def ok(self) -> bool:
        return self.stabilized and self.bijection.is_bijective()


def _rename_term(term, v):
    if isinstance(term, int):
        return v[term]
    name, args = term
    return name, tuple(_rename_term(a, v) for a in args)


def induced_monad(T: Theory) -> InducedMonad:
    return InducedMonad(T)


# -- tabled monads --------------------------------------------------------------------


class TabledMonad(Monad):
    """A monad given by finite tables on cardinals ``0..N``; only for experiments and negative controls."""

    provenance = "tabled"

    def __init__(self, S: AritySystem, window: int, obs: dict, fmaps: dict, units: dict, mults: dict,
                 name: str = "Tab"):
        super().__init__()
        self.arities, self.window, self.name = S, window, name
        self._obs_t, self._fmaps, self._units, self._mults = dict(obs), dict(fmaps), dict(units), dict(mults)

    def _need(self, n):
        if n not in self._obs_t:
            raise MonadError(f"evaluator leaves the window at {n}")

    def _ob(self, n):
        self._need(n)
        return self._obs_t[n]

    def _fmap_elem(self, n, m, f, x):
        key = (n, m, f)
        if key not in self._fmaps:
            raise MonadError(f"evaluator leaves the window at map {n}->{m}")
        return self._fmaps[key][x]

    def _unit_elem(self, n, v):
        self._need(n)
        return self._units[n][v]

    def _mult_elem(self, n, x):
        if n not in self._mults:
            raise MonadError(f"evaluator leaves the window: no multiplication at {n}")
        return self._mults[n][x]

    def with_mult_entry(self, n: int, x: int, value: int) -> "TabledMonad":
        mults = dict(self._mults)
        row = list(mults[n])
        row[x] = value
        mults[n] = tuple(row)
        return TabledMonad(self.arities, self.window, self._obs_t, self._fmaps, self._units, mults, self.name)


def tabulate(M: Monad, window: int) -> TabledMonad:
    """Record ``M`` on cardinals ``0..window``, including every cardinal ``T(n)`` lands on inside it."""
    obs = {n: M.ob(n) for n in range(window + 1)}
    fmaps, units, mults = {}, {}, {}
    for n in range(window + 1):
        units[n] = M.unit(n).table
        for m in range(window + 1):
            for f in itertools.product(range(m), repeat=n):
                fmaps[n, m, f] = M.fmap(FinFn(FinSet(n), FinSet(m), f)).table
        if obs[n] <= window:
            mults[n] = M.mult(n).table
    return TabledMonad(M.arities, window, obs, fmaps, units, mults, name=f"tab({M.name})")


# -- laws -----------------------------------------------------------------------------


@dataclass
class MonadReport:
    violations: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_monad(M: Monad, window: Sequence[int] = (0, 1, 2, 3), assoc_limit: int = 64) -> MonadReport:
    """Functor, naturality, unit and associativity laws on every object of ``window``.

    The associativity square at ``n`` lives on ``T(T(T(n)))``; when
    ``|T(T(n))|`` exceeds ``assoc_limit`` the square is checked in Kleisli
    form on the window instead, and a note records it.
    """
    rep = MonadReport()
    window = tuple(window)

    def guard(what, fn):
        try:
            return fn()
        except MonadError as e:
            rep.notes.append(f"{what}: {e}")
            return None

    for n in window:
        if guard(f"ob {n}", lambda: M.ob(n)) is None:
            continue
        tn = M.ob(n)
        idn = M.fmap(identity(FinSet(n))) if guard("fmap", lambda: M.fmap(identity(FinSet(n)))) else None
        if idn is not None and idn != identity(FinSet(tn)):
            rep.violations.append(Violation("functor-identity", (n,)))
    maps = [(n, m, f) for n in window for m in window for f in itertools.product(range(m), repeat=n)]
    for n, m, f in maps:
        F = guard(f"fmap {n}->{m}", lambda: M.fmap(FinFn(FinSet(n), FinSet(m), f)))
        if F is None:
            continue
        eta_n, eta_m = M.unit(n), M.unit(m)
        if eta_n.then(F) != FinFn(FinSet(n), FinSet(m), f).then(eta_m):
            rep.violations.append(Violation("unit-naturality", (n, m, f)))
        for k in window:
            for g in itertools.product(range(k), repeat=m):
                G = M.fmap(FinFn(FinSet(m), FinSet(k), g))
                gf = tuple(g[x] for x in f)
                if F.then(G) != M.fmap(FinFn(FinSet(n), FinSet(k), gf)):
                    rep.violations.append(Violation("functor-composition", (n, m, k, f, g)))
        mu_n = guard(f"mult {n}", lambda: M.mult(n))
        mu_m = guard(f"mult {m}", lambda: M.mult(m))
        if mu_n is None or mu_m is None:
            continue
        TTf = M.fmap(F)
        if mu_n.then(F) != TTf.then(mu_m):
            rep.violations.append(Violation("mult-naturality", (n, m, f)))
    for n in window:
        mu = guard(f"mult {n}", lambda: M.mult(n))
        if mu is None:
            continue
        tn = M.ob(n)
        if M.unit(tn).then(mu) != identity(FinSet(tn)):
            rep.violations.append(Violation("left-unit", (n,), "mu . eta T"))
        if M.fmap(M.unit(n)).then(mu) != identity(FinSet(tn)):
            rep.violations.append(Violation("right-unit", (n,), "mu . T eta"))
        ttn = M.ob(tn)
        if ttn <= assoc_limit:
            mu_t = guard(f"mult {tn}", lambda: M.mult(tn))
            if mu_t is None:
                continue
            lhs = M.fmap(mu).then(mu)
            rhs = mu_t.then(mu)
            for x in range(lhs.dom.size):
                if lhs(x) != rhs(x):
                    rep.violations.append(Violation("associativity", (n, x), f"{lhs(x)} != {rhs(x)}"))
                    break
        else:
            rep.notes.append(f"associativity at {n}: |T(T({n}))| = {ttn} > {assoc_limit}, checked in Kleisli form")
            bad = _kleisli_assoc(M, window)
            if bad is not None:
                rep.violations.append(bad)
    return rep


def _kleisli_assoc(M: Monad, window) -> Violation | None:
    """Associativity of Kleisli composition between arities of the window, on generators."""
    from .theory import associativity_violations
    bad = associativity_violations(KleisliTheory(M), window, first_only=True)
    return bad[0] if bad else None


def check_jary(M: Monad, window: Sequence[int] = (0, 1, 2, 3)) -> Verdict:
    """The xi comparison at every object of the window (FinCard windows extended past ``V``)."""
    S = M.arities
    verdict = Verdict.PASS
    for V in window:
        SV = S if S.is_finite else S.with_window(max(S.objects[-1], V + 1))
        verdict = verdict & check_xi_iso(SV, M, V)
    return verdict


# -- Kleisli theory ----------------------------------------------------------------


class KleisliTheory(Theory):
    """``hom(n, 1) = T(n)``; projections are the unit, substitution is Kleisli composition."""

    def __init__(self, M: Monad, name: str | None = None):
        super().__init__()
        self.monad = M
        self.arities = M.arities
        self.name = name or f"t({M.name})"

    def n_ops(self, n):
        return self.monad.ob(n)

    def proj(self, n):
        return self.monad.unit(n).table

    def _subst(self, t, k, args, n):
        return self.monad.kleisli(t, k, args, n)

    def rename(self, t, J, K, h):
        # equal to substituting unit components, by the unit law; avoids T(T(K))
        return self.monad.fmap_elem(J, K, tuple(h), t)

    def label(self, n, t):
        return self.monad.label(n, t)


def kleisli_theory(M: Monad, check: bool = True) -> KleisliTheory:
    K = KleisliTheory(M)
    if check:
        bad = validate_theory(K)
        if bad:
            raise TheoryError(f"Kleisli theory invalid: {bad[0]}")
    return K


# -- round trips ------------------------------------------------------------------


@dataclass
class RoundTrip:
    ok: bool
    sizes: dict
    maps: dict  # arity (or V) -> FinFn
    notes: list = field(default_factory=list)


def roundtrip_theory(T: Theory) -> RoundTrip:
    """``t -> [n, id, t]`` from ``hom_T(n, 1)`` to the Kleisli theory of the induced monad."""
    from .theory import TheoryMorphism, theory_morphism_violations
    M = induced_monad(T)
    K = kleisli_theory(M)
    maps, sizes, ok = {}, {}, True
    for n in T.window:
        tab = tuple(M.insert(n, n, tuple(range(n)), t) for t in range(T.n_ops(n)))
        f = FinFn(FinSet(T.n_ops(n)), FinSet(K.n_ops(n)), tab)
        maps[n] = f
        sizes[n] = (T.n_ops(n), K.n_ops(n))
        ok &= f.is_bijective()
    notes = []
    if ok:
        bad = theory_morphism_violations(TheoryMorphism(T, K, {n: maps[n].table for n in T.window}))
        if bad:
            ok = False
            notes.append(str(bad[0]))
    else:
        notes.append("internal error: a hom component is not bijective")
    return RoundTrip(ok, sizes, maps, notes)


def roundtrip_monad(M: Monad, window: Sequence[int] = (0, 1, 2, 3)) -> RoundTrip:
    """The comparison ``m(t(M))(V) -> M(V)``, ``[a, v, t] -> M(v)(t)``, with naturality and units."""
    K = kleisli_theory(M)
    S = M.arities
    ops = K.operations()
    maps, sizes, lans, notes = {}, {}, {}, []
    ok = True
    inconclusive = False
    for V in window:
        N = None if S.is_finite else max(S.objects[-1], V + 1)
        L = lan_along_j(ops, V, check=False, window=N)
        lans[V] = L

        def along(x, L=L, V=V):
            a, z = L.coend.locate(x)
            v, t = divmod(z, K.n_ops(a))
            return M.fmap_elem(a, V, decode_tuple(v, V, a), t)

        try:
            xi = descend(L.coend.quotient, along, M.ob(V))
        except ValueError:
            ok = False
            notes.append(f"comparison not well defined at {V}")
            continue
        maps[V] = xi
        sizes[V] = (L.size, M.ob(V))
        if not L.stabilized:
            inconclusive = True
            notes.append(f"truncation not stabilized at {V}")
        if not xi.is_bijective():
            ok = False
            notes.append(f"comparison not bijective at {V}")
        e = K.proj(1)[0]
        for v in range(V):
            if xi(L.insert(1, (v,), e)) != M.unit_elem(V, v):
                ok = False
                notes.append(f"unit mismatch at {V}")
                break
    for V in maps:
        for W in maps:
            for f in itertools.product(range(W), repeat=V):
                LV, LW = lans[V], lans[W]
                for c in range(LV.size):
                    a, v, t = LV.rep(c)
                    left = maps[W](LW.insert(a, tuple(f[i] for i in v), t))
                    right = M.fmap_elem(V, W, f, maps[V](c))
                    if left != right:
                        ok = False
                        notes.append(f"naturality fails at {V}->{W}")
                        break
    r = RoundTrip(ok and not inconclusive, sizes, maps, notes)
    r.verdict = Verdict.INCONCLUSIVE if (ok and inconclusive) else Verdict.of(ok)
    return r


# -- Eilenberg-Moore algebras ---------------------------------------------------------


@dataclass(frozen=True)
class EMAlgebra:
    carrier: int
    structure: tuple[int, ...]  # T(X) -> X


def em_algebras(M: Monad, max_carrier: int, min_carrier: int = 0) -> list[EMAlgebra]:
    out = []
    for X in range(min_carrier, max_carrier + 1):
        tx = M.ob(X)
        eta = M.unit(X).table
        mu = M.mult(X).table
        fixed: dict = {}
        if any(fixed.setdefault(e, v) != v for v, e in enumerate(eta)):
            continue  # the unit law cannot hold
        free = [x for x in range(tx) if x not in fixed]
        for choice in itertools.product(range(X), repeat=len(free)):
            a = [fixed.get(x, 0) for x in range(tx)]
            for x, c in zip(free, choice):
                a[x] = c
            Ta = M.fmap(FinFn(FinSet(tx), FinSet(X), tuple(a)))
            if all(a[mu[y]] == a[Ta(y)] for y in range(len(mu))):
                out.append(EMAlgebra(X, tuple(a)))
    return out


def em_homs(M: Monad, A: EMAlgebra, B: EMAlgebra) -> list[tuple[int, ...]]:
    out = []
    for h in itertools.product(range(B.carrier), repeat=A.carrier):
        Th = M.fmap(FinFn(FinSet(A.carrier), FinSet(B.carrier), h))
        if all(h[A.structure[x]] == B.structure[Th(x)] for x in range(M.ob(A.carrier))):
            out.append(h)
    return out


def algebra_to_em(M: InducedMonad, A: Algebra) -> EMAlgebra:
    """``[a, v, t] -> t_A(v)``."""
    X = A.size
    return EMAlgebra(X, tuple(A.apply(*_rep_at(M, X, x, A)) for x in range(M.ob(X))))


def _rep_at(M, X, x, A):
    a, v, t = M.rep(X, x)
    return a, t, v


def em_to_algebra(M: InducedMonad, E: EMAlgebra) -> Algebra:
    """``t_A(v) = a([n, v, t])``."""
    T = M.theory
    X = E.carrier
    interp = {}
    for n in T.window:
        pts = list(itertools.product(range(X), repeat=n))
        for t in range(T.n_ops(n)):
            interp[n, t] = tuple(E.structure[M.insert(X, n, p, t)] for p in pts)
    return Algebra(T, FinSet(X), interp)


@dataclass
class EMCheck:
    ok: bool
    n_alg: int
    n_em: int
    bijection: list  # (algebra index, EM index)
    hom_counts: list  # ((i, j), |Alg homs|, |EM homs|)
    notes: list = field(default_factory=list)


def check_em_equals_alg(T: Theory, max_carrier: int, min_carrier: int = 0) -> EMCheck:
    M = induced_monad(T)
    algs = [A for X in range(min_carrier, max_carrier + 1) for A in algebras_of_size(T, X)]
    ems = em_algebras(M, max_carrier, min_carrier)
    index = {(E.carrier, E.structure): i for i, E in enumerate(ems)}
    pairs, notes, ok = [], [], len(algs) == len(ems)
    if not ok:
        notes.append(f"{len(algs)} algebras vs {len(ems)} EM algebras")
    for i, A in enumerate(algs):
        E = algebra_to_em(M, A)
        j = index.get((E.carrier, E.structure))
        if j is None:
            ok = False
            notes.append(f"algebra {i} maps outside the EM algebras")
            continue
        if em_to_algebra(M, ems[j]).key() != A.key():
            ok = False
            notes.append(f"algebra {i} does not round trip")
        if ems[j].carrier != A.size:
            ok = False
        pairs.append((i, j))
    counts = []
    if ok:
        for i, j in pairs:
            for i2, j2 in pairs:
                a = len(enumerate_homs(algs[i], algs[i2]))
                b = len(em_homs(M, ems[j], ems[j2]))
                counts.append(((i, i2), a, b))
                if a != b:
                    ok = False
                    notes.append(f"hom counts differ for {(i, i2)}: {a} vs {b}")
    return EMCheck(ok, len(algs), len(ems), pairs, counts, notes)
