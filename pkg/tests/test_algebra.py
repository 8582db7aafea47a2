import itertools
import random

import pytest

from alth.algebra import (AlgebraError, AlgebraHom, GeneralAlgebraData, NotAnAlgebra, StabilityFailure, as_general,
                          check_rel_adjunction, check_unique_lift, coequalize_algebras, enumerate_algebras,
                          enumerate_homs, is_hom, lifts_through, normalize, reflexive_pairs, representable_algebra,
                          restrict_along, terminal_algebra, validate_algebra, validate_general)
from alth.finset import FinFn, FinSet
from alth.theory import initial_morphism


def brute_semilattices(X):
    n = 0
    for tab in itertools.product(range(X), repeat=X * X):
        m = lambda a, b: tab[a * X + b]
        if all(m(a, a) == a for a in range(X)) and all(m(a, b) == m(b, a) for a in range(X) for b in range(X)) \
                and all(m(m(a, b), c) == m(a, m(b, c)) for a in range(X) for b in range(X) for c in range(X)):
            n += 1
    return n


def brute_involutions(X, commuting_pairs=False, pointed=False):
    invs = [p for p in itertools.product(range(X), repeat=X) if all(p[p[x]] == x for x in range(X))]
    if commuting_pairs:
        return sum(1 for a in invs for b in invs if all(a[b[x]] == b[a[x]] for x in range(X)))
    return len(invs) * (X if pointed else 1)


def _count(algs):
    out = {}
    for A in algs:
        out[A.size] = out.get(A.size, 0) + 1
    return [out.get(X, 0) for X in range(4)]


def test_semilattice_counts(gallery):
    assert _count(enumerate_algebras(gallery.theory("SemiLat"), 3)) == [brute_semilattices(X) for X in range(4)]


@pytest.mark.parametrize("name,kw", [("Z2", {}), ("Z2P", {}), ("PZ2", {"pointed": True}),
                                     ("Klein", {"commuting_pairs": True})])
def test_involution_counts(gallery, name, kw):
    assert _count(enumerate_algebras(gallery.theory(name), 3)) == [brute_involutions(X, **kw) for X in range(4)]


def test_enumeration_is_sorted_and_valid(gallery):
    algs = enumerate_algebras(gallery.theory("PZ2"), 3)
    assert all(validate_algebra(A) == [] for A in algs)
    keys = [(A.size, A.key()) for A in algs]
    assert keys == sorted(keys)


def test_invalid_algebra_detected(gallery):
    A = gallery.algebra("Swap")
    T = A.theory
    a = next(t for t in range(2) if T.term(1, t) != 0)
    interp = dict(A.interp)
    interp[1, a] = (0, 0)
    bad = type(A)(T, A.carrier, interp)
    assert validate_algebra(bad)


def test_homs_against_brute_force(gallery):
    algs = enumerate_algebras(gallery.theory("SemiLat"), 3)
    for A, B in itertools.product(algs[:8], repeat=2):
        brute = [t for t in itertools.product(range(B.size), repeat=A.size)
                 if is_hom(A, B, FinFn(A.carrier, B.carrier, t))]
        assert sorted(h.table for h in enumerate_homs(A, B)) == sorted(brute)


def test_homs_respect_all_operations(gallery):
    A, B = gallery.algebra("Chain3"), gallery.algebra("SL2")
    for h in enumerate_homs(A, B):
        for (n, t), tab in A.interp.items():
            for i, xs in enumerate(itertools.product(range(A.size), repeat=n)):
                assert h(tab[i]) == B.apply(n, t, [h(x) for x in xs])


def test_terminal_algebra(gallery):
    for name in ("Z2", "SemiLat", "Klein"):
        T = gallery.theory(name)
        one = terminal_algebra(T)
        assert validate_algebra(one) == []
        for A in enumerate_algebras(T, 2):
            assert len(enumerate_homs(A, one)) == 1


# -- normalization -------------------------------------------------------------------


def _relabel(Gd, rng):
    perms = {n: rng.sample(range(size), size) for n, size in Gd.obj.items()}
    act = {}
    for (n, m, u), tab in Gd.act.items():
        inv = {perms[n][x]: x for x in range(Gd.obj[n])}
        act[n, m, u] = tuple(perms[m][tab[inv[y]]] for y in range(Gd.obj[n]))
    return GeneralAlgebraData(Gd.theory, dict(Gd.obj), act), perms


@pytest.mark.parametrize("name", ["SL2", "Swap"])
@pytest.mark.parametrize("seed", range(2))
def test_normalize_undoes_relabelling(gallery, name, seed):
    A = gallery.algebra(name)
    Gd, perms = _relabel(as_general(A), random.Random(seed))
    assert validate_general(Gd) == []
    N, comps = normalize(Gd)
    assert validate_algebra(N) == []
    # the relabelling of the carrier is an isomorphism onto the normal form
    iso = FinFn(A.carrier, N.carrier, tuple(perms[1]))
    assert iso.is_bijective() and is_hom(A, N, iso)
    assert all(sorted(c) == list(range(len(c))) for c in comps.values())


def test_normalize_identity_on_normal_algebras(gallery):
    A = gallery.algebra("Chain3")
    N, comps = normalize(as_general(A))
    assert N.interp == A.interp
    assert all(c == tuple(range(len(c))) for c in comps.values())


def test_normalize_rejects_wrong_power(gallery):
    T = gallery.theory("Init01")
    # obj[0] has two points where a normal algebra has one
    act = {(0, 0, 0): (0, 1), (1, 1, 0): (0, 1), (1, 0, 0): (0, 0)}
    Gd = GeneralAlgebraData(T, {0: 2, 1: 2}, act)
    assert validate_general(Gd) == []
    with pytest.raises(NotAnAlgebra) as e:
        normalize(Gd)
    assert e.value.arity == 0


def test_normalize_rejects_collision(gallery):
    T = gallery.theory("SemiLat")
    A = gallery.algebra("SL2")
    Gd = as_general(A)
    # send two distinct pairs to the same point: kappa cannot be injective
    obj = dict(Gd.obj)
    act = dict(Gd.act)
    for (n, m, u), tab in list(act.items()):
        if n == 2 and m == 1:
            act[n, m, u] = tuple(tab[0] if i == 1 else v for i, v in enumerate(tab))
    Gd2 = GeneralAlgebraData(T, obj, act)
    with pytest.raises((NotAnAlgebra, AlgebraError)):
        if validate_general(Gd2):
            raise AlgebraError("not a functor")
        normalize(Gd2)


# -- representables and restriction -------------------------------------------------


@pytest.mark.parametrize("name", ["Z2", "PZ2", "SemiLat"])
def test_rel_adjunction(gallery, name):
    T = gallery.theory(name)
    for J in T.window:
        for A in enumerate_algebras(T, 2):
            assert check_rel_adjunction(T, J, A)


def test_representable_is_free(gallery):
    T = gallery.theory("SemiLat")
    P = representable_algebra(T, 2)
    assert P.size == 3 and validate_algebra(P) == []


def test_restrict_along_initial(gallery):
    B = gallery.algebra("Chain3")
    A = restrict_along(initial_morphism(B.theory), B)
    assert A.size == 3 and validate_algebra(A) == []


# -- coequalizers --------------------------------------------------------------------


def test_reflexive_pairs_have_sections(gallery):
    algs = enumerate_algebras(gallery.theory("Z2"), 2)
    for f, g in reflexive_pairs(algs):
        assert any(all(f.fn(s(b)) == b == g.fn(s(b)) for b in range(f.cod.size))
                   for s in enumerate_homs(f.cod, f.dom))


@pytest.mark.parametrize("name", ["Z2", "SemiLat", "PZ2"])
def test_coequalizers_lift_uniquely(gallery, name):
    T = gallery.theory(name)
    pool = enumerate_algebras(T, 3)
    pairs = reflexive_pairs(pool)
    for f, g in random.Random(1).sample(pairs, min(15, len(pairs))):
        r = coequalize_algebras(f, g)
        assert is_hom(f.cod, r.algebra, r.proj.fn)
        assert check_unique_lift(f, g, r, pool)


def test_stability_failure_not_a_wrong_algebra(gallery):
    A, B = gallery.algebra("SL1"), gallery.algebra("SL2")
    f = AlgebraHom(A, B, FinFn(A.carrier, B.carrier, (0,)))
    g = AlgebraHom(A, B, FinFn(A.carrier, B.carrier, (1,)))
    with pytest.raises(StabilityFailure) as e:
        coequalize_algebras(f, g)
    assert e.value.arity == 2 and e.value.colim_size == 3 and e.value.power_size == 1


def test_lifts_through_exhaustive(gallery):
    B = gallery.algebra("Chain3")
    q = FinFn(B.carrier, FinSet(2), (0, 1, 1))
    lifts = lifts_through(B, q)
    assert len(lifts) == 1 and lifts[0].interp[2, 2] == (0, 0, 0, 1)
