"""Endo-profunctors on the arity category, their composition, and monoids of them.

A profunctor ``M`` is a bifunctor ``M(J, K)``, contravariant in ``J`` and
covariant in ``K``, over the arity category.  ``M_I = M(1, -)``.  The
composite ``(M (x) N)(J, L)`` is the coend over ``K`` of ``M(J, K) x N(K, L)``;
pairs are encoded ``m * |N(K, L)| + n``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .arity import (AritySystem, ArityFunctor, FnArityFunctor, Verdict, lan_along_j, restrict_to_arities)
from .category import Violation
from .coend import Bifunctor, FnBifunctor, TableBifunctor, coend, validate_bifunctor
from .finset import FinFn, FinSet, decode_tuple, descend, encode_tuple, image_compare
from .theory import Theory


class Profunctor(Bifunctor):
    pass


class FnProfunctor(FnBifunctor, Profunctor):
    def __init__(self, S: AritySystem, size, contra_elem, co_elem, objects=None):
        cat = S.category if objects is None else S.with_window(max(objects)).category
        super().__init__(cat, size, contra_elem, co_elem)
        self.arities = S


class TableProfunctor(TableBifunctor, Profunctor):
    def __init__(self, S: AritySystem, cat, sizes, contra_tables, co_tables):
        super().__init__(cat, sizes, contra_tables, co_tables)
        self.arities = S


def _fn(a, b, h):
    return decode_tuple(h, b, a)


def hom_profunctor(S: AritySystem) -> Profunctor:
    """``J(J, K) = K^J``."""
    return FnProfunctor(S, lambda J, K: K ** J,
                        lambda x, y, h, a, z: encode_tuple([_fn(y, a, z)[i] for i in _fn(x, y, h)], a),
                        lambda b, x, y, k, z: encode_tuple([_fn(x, y, k)[i] for i in _fn(b, x, z)], y))


def representable_profunctor(F: ArityFunctor) -> Profunctor:
    """``FinSet(J, F K) = (F K)^J``."""
    S = F.base

    def contra(x, y, h, a, z):
        zs = decode_tuple(z, F.size(a), y)
        return encode_tuple([zs[i] for i in _fn(x, y, h)], F.size(a))

    def co(b, x, y, k, z):
        zs = decode_tuple(z, F.size(x), b)
        return encode_tuple([F.act_elem(x, y, k, e) for e in zs], F.size(y))

    return FnProfunctor(S, lambda J, K: F.size(K) ** J, contra, co)


def omega(E, S: AritySystem) -> Profunctor:
    """``Omega(E)(J, K) = FinSet(J, E K)`` for a pointwise endofunctor ``E``."""
    return representable_profunctor(restrict_to_arities(S, E))


def at_unit(M: Profunctor) -> ArityFunctor:
    """``M_I = M(1, -)``."""
    return FnArityFunctor(M.arities, lambda K: M.size(1, K), lambda J, K, h, t: M.co_elem(1, J, K, h, t))


# -- zeta ---------------------------------------------------------------------------


@dataclass
class Zeta:
    components: dict  # (J, K) -> FinFn M(J,K) -> M(1,K)^J
    is_iso: bool
    failures: list = field(default_factory=list)


def zeta(M: Profunctor) -> Zeta:
    """``x -> (M(i_j, 1) x)_j`` with ``i_j: 1 -> J`` picking ``j``."""
    obs = M.cat.objects
    comps, fails = {}, []
    for J in obs:
        for K in obs:
            n1 = M.size(1, K)
            tab = tuple(encode_tuple([M.contra_elem(1, J, j, K, x) for j in range(J)], n1)
                        for x in range(M.size(J, K)))
            f = FinFn(FinSet(M.size(J, K)), FinSet(n1 ** J), tab)
            comps[J, K] = f
            if not f.is_bijective():
                fails.append((J, K))
    return Zeta(comps, not fails, fails)


def zeta_inverse(z: Zeta, J: int, K: int, comps: Sequence[int], n1: int) -> int:
    return z.components[J, K].inverse()(encode_tuple(comps, n1))


# -- composition --------------------------------------------------------------------


class _PairBifunctor(Bifunctor):
    """``(b, a) -> M(J, a) x N(b, L)`` for fixed ``J, L``: the integrand of the composite."""

    def __init__(self, M, N, J, L, cat):
        self.M, self.N, self.J, self.L, self.cat = M, N, J, L, cat

    def size(self, b, a):
        return self.M.size(self.J, a) * self.N.size(b, self.L)

    def contra_elem(self, x, y, h, a, z):
        m, n = divmod(z, self.N.size(y, self.L))
        return m * self.N.size(x, self.L) + self.N.contra_elem(x, y, h, self.L, n)

    def co_elem(self, b, x, y, k, z):
        m, n = divmod(z, self.N.size(b, self.L))
        return self.M.co_elem(self.J, x, y, k, m) * self.N.size(b, self.L) + n


@dataclass
class Composite:
    """``M (x) N`` on the represented objects, with the coends used to build it."""

    M: Profunctor
    N: Profunctor
    profunctor: Profunctor
    coends: dict  # (J, L) -> Coend
    stabilized: bool
    representable: dict = field(default_factory=dict)  # (J, L) -> FinFn coend -> Lan(M_I)(N_I L)^J
    representable_ok: bool | None = None

    @property
    def verdict(self) -> Verdict:
        if self.representable_ok is False:
            return Verdict.FAIL
        return Verdict.PASS if self.stabilized else Verdict.INCONCLUSIVE


def compose_profunctors(M: Profunctor, N: Profunctor, coend_window: int | None = None,
                        representable: bool = True) -> Composite:
    S = M.arities
    obs = M.cat.objects
    if S.is_finite:
        kobs, cat = obs, S.category
    else:
        top = max(obs[-1], coend_window if coend_window is not None else obs[-1])
        cat = S.with_window(top).category
        kobs = cat.objects
    coends, stab = {}, True
    for J in obs:
        for L in obs:
            F = _PairBifunctor(M, N, J, L, cat)
            C = coend(F, check=False, objects=kobs)
            coends[J, L] = C
            if not S.is_finite:
                smaller = coend(F, check=False, objects=kobs[:-1])
                cmp = image_compare(smaller.quotient, C.quotient,
                                    lambda x, s=smaller, c=C: c.index(*s.locate(x)))
                stab &= cmp.is_bijective()
    sizes = {(J, L): coends[J, L].size for J in obs for L in obs}
    base = M.cat
    contra, co = {}, {}
    for x in obs:
        for y in obs:
            for h in range(base.hom(x, y).size):
                for L in obs:
                    # [m, n] -> [M(h, 1) m, n]
                    src, dst, tab = coends[y, L], coends[x, L], []
                    for c in range(src.size):
                        K, z = src.rep(c)
                        m, n = divmod(z, N.size(K, L))
                        tab.append(dst.insert(K, M.contra_elem(x, y, h, K, m) * N.size(K, L) + n))
                    contra[x, y, h, L] = tuple(tab)
                for J in obs:
                    # [m, n] -> [m, N(1, h) n]
                    src, dst, tab = coends[J, x], coends[J, y], []
                    for c in range(src.size):
                        K, z = src.rep(c)
                        m, n = divmod(z, N.size(K, x))
                        tab.append(dst.insert(K, m * N.size(K, y) + N.co_elem(K, x, y, h, n)))
                    co[J, x, y, h] = tuple(tab)
    P = TableProfunctor(S, base, sizes, contra, co)
    out = Composite(M, N, P, coends, stab)
    if representable:
        _representable_form(out)
    return out


def _representable_form(C: Composite):
    """``(M (x) N)(J, L) = Lan_j(M_I)(N_I L)^J``, checked as an explicit bijection."""
    M, N = C.M, C.N
    S = M.arities
    zM, zN = zeta(M), zeta(N)
    if not (zM.is_iso and zN.is_iso):
        C.representable_ok = None
        return
    MI = at_unit(M)
    ok = True
    obs = M.cat.objects
    top = C.coends[obs[0], obs[0]].objects[-1]
    for L in obs:
        nl = N.size(1, L)
        lan = lan_along_j(MI, nl, check=False, window=None if S.is_finite else top)
        for J in obs:
            co = C.coends[J, L]

            def along(x, J=J, L=L, lan=lan, co=co):
                K, z = co.locate(x)
                nk = N.size(K, L)
                m, n = divmod(z, nk)
                # zeta evaluated directly, since K may lie past the represented objects
                w = [N.contra_elem(1, K, k, L, n) for k in range(K)]
                return encode_tuple([lan.insert(K, w, M.contra_elem(1, J, j, K, m)) for j in range(J)], lan.size)

            try:
                f = descend(co.quotient, along, lan.size ** J)
            except ValueError:
                ok = False
                continue
            C.representable[J, L] = f
            ok &= f.is_bijective()
    C.representable_ok = ok


def m_TS(T, Sm, S: AritySystem, comp: Composite) -> dict:
    """``[u, w] -> T(w) . u`` from ``Omega(T) (x) Omega(S)`` to ``Omega(T . S)``, per ``(J, L)``."""
    out = {}
    obs = comp.M.cat.objects
    for J in obs:
        for L in obs:
            co = comp.coends[J, L]
            sl = Sm.ob(L)
            tsl = T.ob(sl)

            def along(x, J=J, L=L, co=co, sl=sl, tsl=tsl):
                K, z = co.locate(x)
                nk = sl ** K
                m, n = divmod(z, nk)
                u = decode_tuple(m, T.ob(K), J)
                w = decode_tuple(n, sl, K)
                return encode_tuple([T.fmap_elem(K, sl, w, e) for e in u], tsl)

            out[J, L] = descend(co.quotient, along, tsl ** J)
    return out


@dataclass
class MonoidalCheck:
    mts_bijective: bool
    mf1: bool
    mf2: bool
    mf3: bool
    failures: list = field(default_factory=list)

    @property
    def ok(self):
        return self.mts_bijective and self.mf1 and self.mf2 and self.mf3


def check_monoidal(T, Sm, R, S: AritySystem, window: Sequence[int], coend_window: int | None = None) -> MonoidalCheck:
    """``m^{TS}`` is a bijection, and the unit (MF1, MF2) and associativity (MF3) laws hold."""
    from .monad import IdentityMonad
    SW = S if S.is_finite else S.with_window(max(window))
    OT, OS = omega(T, SW), omega(Sm, SW)
    comp = compose_profunctors(OT, OS, coend_window=coend_window, representable=False)
    fails = []
    m = m_TS(T, Sm, SW, comp)
    bij = comp.stabilized and all(f.is_bijective() for f in m.values())
    if not bij:
        fails.append("m^{TS} is not a bijection" + ("" if comp.stabilized else " (truncation not stabilized)"))
    Id = IdentityMonad(S)
    obs = OT.cat.objects
    # MF1: m^{1T} equals the left unitor of Omega(T)
    c1 = compose_profunctors(omega(Id, SW), OT, coend_window=coend_window, representable=False)
    m1 = m_TS(Id, T, SW, c1)
    mf1 = True
    for (J, L), f in m1.items():
        for c in range(c1.coends[J, L].size):
            K, z = c1.coends[J, L].rep(c)
            h, w = divmod(z, OT.size(K, L))
            if f(c) != OT.contra_elem(J, K, h, L, w):
                mf1 = False
                fails.append(f"MF1 at {(J, L)}")
                break
    # MF2: m^{T1} equals the right unitor
    c2 = compose_profunctors(OT, omega(Id, SW), coend_window=coend_window, representable=False)
    m2 = m_TS(T, Id, SW, c2)
    mf2 = True
    for (J, L), f in m2.items():
        for c in range(c2.coends[J, L].size):
            K, z = c2.coends[J, L].rep(c)
            u, k = divmod(z, L ** K)
            if f(c) != OT.co_elem(J, K, L, k, u):
                mf2 = False
                fails.append(f"MF2 at {(J, L)}")
                break
    # MF3: both ways round the associativity square agree on triples
    mf3 = True
    for J, K, L, N in itertools.product(obs, repeat=4):
        sl, rn = Sm.ob(L), R.ob(N)
        srn = Sm.ob(rn)
        for u in itertools.product(range(T.ob(K)), repeat=J):
            for w in itertools.product(range(sl), repeat=K):
                for r in itertools.product(range(rn), repeat=L):
                    tw = [T.fmap_elem(K, sl, w, e) for e in u]  # J -> T S L
                    sr = [Sm.fmap_elem(L, rn, r, e) for e in w]  # K -> S R N
                    # ((T S) R): T(S(r)) . T(w) . u
                    sr_map = tuple(Sm.fmap_elem(L, rn, r, y) for y in range(sl))
                    one = [T.fmap_elem(sl, srn, sr_map, e) for e in tw]
                    two = [T.fmap_elem(K, srn, sr, e) for e in u]
                    if one != two:
                        mf3 = False
                        fails.append(f"MF3 at {(J, K, L, N, u, w, r)}")
                        break
                if not mf3:
                    break
            if not mf3:
                break
        if not mf3:
            break
    return MonoidalCheck(bij, mf1, mf2, mf3, fails)


# -- monoids in profunctors and theories ----------------------------------------------


@dataclass
class ProfMonoid:
    """A profunctor with unit ``e: J(J, K) -> M(J, K)`` and multiplication ``m: M(J, K) x M(K, L) -> M(J, L)``."""

    arities: AritySystem
    carrier: Profunctor
    unit: Callable[[int, int, int], int]
    mult: Callable[[int, int, int, int, int], int]

    @property
    def objects(self):
        return self.carrier.cat.objects


def theory_to_prof_monoid(T: Theory) -> ProfMonoid:
    """``M(J, K) = hom_T(K, J)``; the unit is ``tau``, the multiplication is composition."""
    S = T.arities

    def size(J, K):
        return T.hom_size(K, J)

    def contra(x, y, h, a, z):
        # h: x -> y acts by tau(h) . z, which picks components of z
        comps = T.hom_tuple(a, y, z)
        return T.hom_index(a, [comps[i] for i in _fn(x, y, h)])

    def co(b, x, y, k, z):
        comps = T.hom_tuple(x, b, z)
        return T.hom_index(y, [T.rename(c, x, y, _fn(x, y, k)) for c in comps])

    P = FnProfunctor(S, size, contra, co)

    def unit(J, K, f):
        return T.hom_index(K, T.tau_tuple(K, J, _fn(J, K, f)))

    def mult(J, K, L, x, y):
        return T.hom_index(L, T.compose_tuples(T.hom_tuple(K, J, x), K, T.hom_tuple(L, K, y), L))

    return ProfMonoid(S, P, unit, mult)


class MonoidTheory(Theory):
    """The theory rebuilt from a monoid: ``hom(K, 1) = M(1, K)``, projections from the unit."""

    def __init__(self, P: ProfMonoid, name: str = "T"):
        super().__init__()
        self.P, self.arities, self.name = P, P.arities, name
        self._zeta = zeta(P.carrier)

    def n_ops(self, n):
        return self.P.carrier.size(1, n)

    def proj(self, n):
        return tuple(self.P.unit(1, n, encode_tuple([j], n)) for j in range(n))

    def _subst(self, t, k, args, n):
        y = self._zeta.components[k, n].inverse()(encode_tuple(args, self.n_ops(n)))
        return self.P.mult(1, k, n, t, y)


def prof_monoid_to_theory(P: ProfMonoid, name: str = "T", validate_objects: Sequence[int] | None = None) -> Theory:
    z = zeta(P.carrier)
    if not z.is_iso:
        raise ValueError(f"carrier is not copresheaf-representable at {z.failures[0]}")
    bad = validate_prof_monoid(P, validate_objects)
    if bad:
        raise ValueError(f"monoid law violated: {bad[0]}")
    return MonoidTheory(P, name)


def validate_prof_monoid(P: ProfMonoid, objects: Sequence[int] | None = None) -> list[Violation]:
    """Unit laws and associativity, exhaustively over ``objects`` (default: every represented object)."""
    M = P.carrier
    obs = tuple(P.objects if objects is None else objects)
    C = M.cat
    out = []
    for J, K, L in itertools.product(obs, repeat=3):
        for h in range(C.hom(J, K).size):
            e = P.unit(J, K, h)
            for y in range(M.size(K, L)):
                if P.mult(J, K, L, e, y) != M.contra_elem(J, K, h, L, y):
                    out.append(Violation("left-unit", (J, K, L, h, y)))
        for h in range(C.hom(K, L).size):
            e = P.unit(K, L, h)
            for x in range(M.size(J, K)):
                if P.mult(J, K, L, x, e) != M.co_elem(J, K, L, h, x):
                    out.append(Violation("right-unit", (J, K, L, h, x)))
    for J, K, L, N in itertools.product(obs, repeat=4):
        for x in range(M.size(J, K)):
            for y in range(M.size(K, L)):
                xy = P.mult(J, K, L, x, y)
                for z in range(M.size(L, N)):
                    if P.mult(J, L, N, xy, z) != P.mult(J, K, N, x, P.mult(K, L, N, y, z)):
                        out.append(Violation("associativity", (J, K, L, N, x, y, z)))
    return out


def theory_tables(T: Theory, window: Sequence[int] | None = None) -> dict:
    """Every table that determines ``T`` on the window: sizes, projections and substitution."""
    window = tuple(T.window if window is None else window)
    out = {"sizes": {n: T.n_ops(n) for n in window}, "proj": {n: tuple(T.proj(n)) for n in window}}
    sub = {}
    for k in window:
        for n in window:
            for t in range(T.n_ops(k)):
                for args in itertools.product(range(T.n_ops(n)), repeat=k):
                    sub[t, k, args, n] = T.subst(t, k, args, n)
    out["subst"] = sub
    return out


def monoid_tables(P: ProfMonoid) -> dict:
    M = P.carrier
    obs = P.objects
    C = M.cat
    sizes = {(J, K): M.size(J, K) for J in obs for K in obs}
    unit = {(J, K, h): P.unit(J, K, h) for J in obs for K in obs for h in range(C.hom(J, K).size)}
    mult = {(J, K, L, x, y): P.mult(J, K, L, x, y) for J, K, L in itertools.product(obs, repeat=3)
            for x in range(M.size(J, K)) for y in range(M.size(K, L))}
    return {"sizes": sizes, "unit": unit, "mult": mult}
