import itertools

import pytest

from alth.arity import JUST_UNIT, ZERO_ONE, Verdict, fincard
from alth.finset import FinFn, FinSet
from alth.monad import (IdentityMonad, InducedMonad, WriterMonad, check_em_equals_alg, check_jary, em_algebras,
                        kleisli_theory, roundtrip_monad, roundtrip_theory, tabulate, validate_monad, z2_writer)
from alth.theory import validate_theory

THEORIES = ["Init1", "Init01", "InitFC", "Z2", "PZ2", "SemiLat", "Z2P"]


def test_semilattice_free_sizes(gallery):
    M = InducedMonad(gallery.theory("SemiLat"))
    assert [M.ob(n) for n in range(5)] == [0, 1, 3, 7, 15]


@pytest.mark.parametrize("V", [1, 2, 3])
def test_coend_crosscheck(gallery, V):
    cc = InducedMonad(gallery.theory("SemiLat")).coend_crosscheck(V)
    assert cc.stabilized and cc.bijection.is_bijective() and cc.coend_size == 2 ** V - 1


def test_finite_kind_sizes(gallery):
    # with a constant and an involution: T(V) = 2V + 2
    M = InducedMonad(gallery.theory("PZ2"))
    assert [M.ob(V) for V in range(5)] == [2 * V + 2 for V in range(5)]
    Z = InducedMonad(gallery.theory("Z2"))
    assert [Z.ob(V) for V in range(4)] == [0, 2, 4, 6]


@pytest.mark.parametrize("name", THEORIES)
def test_induced_monad_laws(gallery, name):
    M = InducedMonad(gallery.theory(name))
    assert validate_monad(M, range(4)).ok
    assert check_jary(M, range(4)) is Verdict.PASS


@pytest.mark.parametrize("M", [IdentityMonad(JUST_UNIT), IdentityMonad(ZERO_ONE), z2_writer()],
                         ids=["id1", "id01", "writer"])
def test_simple_monads(M):
    assert validate_monad(M, range(4)).ok
    assert check_jary(M, range(4)) is Verdict.PASS


def test_writer_needs_a_monoid():
    # a non-associative table is caught by the associativity square
    W = WriterMonad(JUST_UNIT, [[0, 1, 2], [1, 2, 0], [2, 0, 0]], 0)
    rep = validate_monad(W, range(2))
    assert not rep.ok and rep.violations[0].kind == "associativity"


def test_tabled_corruption_detected(gallery):
    M = InducedMonad(gallery.theory("PZ2"))
    tab = tabulate(M, 4)
    assert validate_monad(tab, range(2)).ok
    n = 1
    bad = tab.with_mult_entry(n, 0, (tab._mults[n][0] + 1) % M.ob(n))
    rep = validate_monad(bad, range(2))
    assert not rep.ok and rep.violations[0].where


def test_kleisli_sizes_match(gallery):
    for name in ("PZ2", "SemiLat"):
        T = gallery.theory(name)
        K = kleisli_theory(InducedMonad(T))
        assert [K.n_ops(n) for n in T.window] == [T.n_ops(n) for n in T.window]
        assert validate_theory(K) == []


@pytest.mark.parametrize("name", THEORIES + ["Klein"])
def test_roundtrip_theory(gallery, name):
    r = roundtrip_theory(gallery.theory(name))
    assert r.ok and all(f.is_bijective() for f in r.maps.values())


@pytest.mark.parametrize("M", [IdentityMonad(JUST_UNIT), z2_writer()], ids=["id", "writer"])
def test_roundtrip_monad_finite(M):
    r = roundtrip_monad(M, range(4))
    assert r.ok and r.verdict is Verdict.PASS


def test_roundtrip_semilattice_monad(gallery):
    r = roundtrip_monad(InducedMonad(gallery.theory("SemiLat")), range(4))
    assert r.verdict is Verdict.PASS


@pytest.mark.parametrize("name", ["Z2", "PZ2", "SemiLat", "Init01"])
def test_em_equals_alg(gallery, name):
    r = check_em_equals_alg(gallery.theory(name), 3)
    assert r.ok and r.n_alg == r.n_em
    assert all(a == e for _, a, e in r.hom_counts)


def test_em_on_two_element_carriers(gallery):
    r = check_em_equals_alg(gallery.theory("Z2"), 2, min_carrier=2)
    assert r.ok and r.n_alg == r.n_em == 2
    assert sorted((a, e) for _, a, e in r.hom_counts) == [(0, 0), (2, 2), (2, 2), (4, 4)]


def test_em_algebra_unit_law(gallery):
    M = InducedMonad(gallery.theory("Z2"))
    for E in em_algebras(M, 2):
        eta = M.unit(E.carrier)
        assert all(E.structure[eta(x)] == x for x in range(E.carrier))
