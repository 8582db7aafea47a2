import pytest

from alth.arity import JUST_UNIT, ZERO_ONE, fincard
from alth.monad import IdentityMonad, InducedMonad, z2_writer
from alth.profunctor import (ProfMonoid, check_monoidal, compose_profunctors, hom_profunctor, monoid_tables, omega,
                             prof_monoid_to_theory, theory_tables, theory_to_prof_monoid, validate_prof_monoid,
                             zeta, zeta_inverse)
from alth.theory import validate_theory


@pytest.mark.parametrize("S", [JUST_UNIT, ZERO_ONE, fincard(3)], ids=str)
def test_hom_profunctor_representable(S):
    z = zeta(hom_profunctor(S))
    assert z.is_iso


def test_zeta_inverse(gallery):
    M = InducedMonad(gallery.theory("PZ2"))
    O = omega(M, M.arities)
    z = zeta(O)
    for (J, K), f in z.components.items():
        for x in range(f.dom.size):
            assert zeta_inverse(z, J, K, [O.contra_elem(1, J, j, K, x) for j in range(J)], O.size(1, K)) == x


@pytest.mark.parametrize("name", ["Z2", "PZ2"])
def test_composite_of_omegas(gallery, name):
    M = InducedMonad(gallery.theory(name))
    O = omega(M, M.arities)
    comp = compose_profunctors(O, O)
    assert comp.stabilized and comp.representable_ok
    for (J, L), c in comp.coends.items():
        assert c.size == M.ob(M.ob(L)) ** J


def test_composite_truncated_window(gallery):
    S = fincard(2)
    W = IdentityMonad(S)
    comp = compose_profunctors(omega(W, S), omega(W, S), coend_window=3)
    assert comp.stabilized
    assert {k: c.size for k, c in comp.coends.items()} == {(J, L): L ** J for J in S.objects for L in S.objects}


@pytest.mark.parametrize("name", ["Z2", "PZ2"])
def test_monoidal_laws(gallery, name):
    M = InducedMonad(gallery.theory(name))
    assert check_monoidal(M, M, M, M.arities, M.arities.objects).ok


def test_monoidal_mixed_monads():
    W = z2_writer()
    I = IdentityMonad(JUST_UNIT)
    assert check_monoidal(W, I, W, JUST_UNIT, (1,)).ok


@pytest.mark.parametrize("name", ["Z2", "PZ2", "Init01"])
def test_prof_monoid_roundtrip(gallery, name):
    T = gallery.theory(name)
    P = theory_to_prof_monoid(T)
    assert validate_prof_monoid(P) == []
    T2 = prof_monoid_to_theory(P)
    assert validate_theory(T2) == []
    assert theory_tables(T2) == theory_tables(T)
    assert monoid_tables(theory_to_prof_monoid(T2)) == monoid_tables(P)


def _corrupt(P, where, value):
    def mult(J, K, L, x, y):
        if (J, K, L, x, y) == where:
            return value
        return P.mult(J, K, L, x, y)

    return ProfMonoid(P.arities, P.carrier, P.unit, mult)


@pytest.mark.parametrize("name", ["Z2", "PZ2"])
def test_corrupted_multiplication_detected(gallery, name):
    # metamorphic: spoil e . y for y in M(1, 1); the left unit law must fail at exactly that entry
    P = theory_to_prof_monoid(gallery.theory(name))
    e = P.unit(1, 1, 0)
    n = P.carrier.size(1, 1)
    for y in range(n):
        where = (1, 1, 1, e, y)
        bad = _corrupt(P, where, (P.mult(*where) + 1) % n)
        out = validate_prof_monoid(bad)
        assert any(v.kind == "left-unit" and v.where == (1, 1, 1, 0, y) for v in out)
        with pytest.raises(ValueError):
            prof_monoid_to_theory(bad)
