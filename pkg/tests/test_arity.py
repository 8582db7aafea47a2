import pytest

from alth.arity import (JUST_UNIT, ZERO_ONE, AritySystemError, ConstantEndofunctor, IdentityEndofunctor, Verdict,
                        all_arity_functors, check_eleutheric_instance, check_xi_iso, fincard, inclusion_functor,
                        lan_along_j, mk_arity_system, power_functor, validate_arity_functor, xi_map)


def test_closure_witness():
    with pytest.raises(AritySystemError) as e:
        mk_arity_system({1, 2})
    assert 4 in e.value.witness


@pytest.mark.parametrize("bad", [{2}, {0, 2}, {-1, 1}])
def test_rejected_systems(bad):
    with pytest.raises(AritySystemError):
        mk_arity_system(bad)


def test_accepted_systems():
    assert mk_arity_system({1}) == JUST_UNIT
    assert mk_arity_system([0, 1, 1]) == ZERO_ONE
    S = mk_arity_system(("fincard", 3))
    assert S.objects == (0, 1, 2, 3) and S.contains(17)
    with pytest.raises(AritySystemError):
        fincard(0)


def test_functor_enumeration_counts():
    # on {0,1} a functor is two sets and one map T(0) -> T(1)
    assert sum(1 for _ in all_arity_functors(ZERO_ONE, 3)) == sum(b ** a for a in range(4) for b in range(4))
    assert sum(1 for _ in all_arity_functors(JUST_UNIT, 3)) == 4
    with pytest.raises(AritySystemError):
        next(all_arity_functors(fincard(2), 1))


def test_power_functor_is_functor():
    for T in list(all_arity_functors(ZERO_ONE, 2))[:10]:
        for K in (0, 1, 2):
            assert validate_arity_functor(power_functor(T, K)) == []


@pytest.mark.parametrize("S", [JUST_UNIT, ZERO_ONE, fincard(4)])
@pytest.mark.parametrize("V", range(6))
def test_density(S, V):
    r = xi_map(S, IdentityEndofunctor(), V)
    assert r.verdict is Verdict.PASS
    assert r.xi.is_bijective() and r.lan.size == V
    if not S.is_finite:
        assert r.lan.stabilized and not r.lan.exact


def test_truncated_window_reports_inconclusive():
    # over 0..0 the coend is empty, over 0..1 it is not
    L = lan_along_j(inclusion_functor(fincard(1)), 3)
    assert not L.stabilized


def test_eleutheric_spot_checks():
    for T in all_arity_functors(ZERO_ONE, 2):
        assert check_eleutheric_instance(ZERO_ONE, T, 2, 0) is Verdict.PASS
    with pytest.raises(AritySystemError):
        check_eleutheric_instance(ZERO_ONE, inclusion_functor(ZERO_ONE), 1, 2)


def test_constant_functor_is_not_jary_on_unit():
    # a constant on the empty set cannot come from unary operations alone
    assert check_xi_iso(JUST_UNIT, ConstantEndofunctor(1), 0) is Verdict.FAIL
    assert check_xi_iso(ZERO_ONE, ConstantEndofunctor(1), 0) is Verdict.PASS


def test_verdict_semantics():
    assert bool(Verdict.PASS) and not bool(Verdict.FAIL)
    with pytest.raises(ValueError):
        bool(Verdict.INCONCLUSIVE)
    assert (Verdict.PASS & Verdict.INCONCLUSIVE) is Verdict.INCONCLUSIVE
    assert (Verdict.INCONCLUSIVE & Verdict.FAIL) is Verdict.FAIL
