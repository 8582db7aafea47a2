import itertools

import pytest
from hypothesis import given, strategies as st

from alth.arity import JUST_UNIT, ZERO_ONE, fincard
from alth.category import validate_category
from alth.finset import FinSet
from alth.theory import (CapExceeded, GeneratingAlgebra, NonConvergence, Presentation, TabledTheory, TheoryError,
                         TheoryMorphism, check_theory_morphism, closure, generators, identity_morphism,
                         initial_morphism, initial_theory, term_str, theory_from_clone, theory_from_presentation,
                         theory_morphism_violations, validate_theory)

SEMILAT = GeneratingAlgebra((("meet", 2),), FinSet(2), {"meet": (0, 0, 0, 1)})


def brute_clone_size(G, n):
    """Closure of the projections of base^n under the signature, with plain tuples."""
    b = G.base.size
    pts = list(itertools.product(range(b), repeat=n))
    ops = {tuple(p[i] for p in pts) for i in range(n)}
    while True:
        new = set()
        for name, k in G.signature:
            for args in itertools.product(sorted(ops), repeat=k):
                new.add(tuple(G.apply(name, [a[j] for a in args]) for j in range(len(pts))))
        if new <= ops:
            return len(ops)
        ops |= new


GALLERY = ["Init1", "Init01", "InitFC", "Z2", "PZ2", "SemiLat", "Klein", "Z2P", "SemiLatP"]


@pytest.mark.parametrize("name", GALLERY)
def test_gallery_theories_valid(gallery, name):
    assert validate_theory(gallery.theory(name)) == []


@pytest.mark.parametrize("name", ["Z2", "PZ2", "SemiLat", "Klein"])
def test_clone_sizes_against_brute_force(gallery, name):
    T = gallery.theory(name)
    for n in T.window:
        assert T.n_ops(n) == brute_clone_size(T.G, n)


def test_semilattice_sizes():
    T = theory_from_clone(SEMILAT, fincard(3))
    assert [T.n_ops(n) for n in range(4)] == [0, 1, 3, 7]


def test_presentation_matches_clone(gallery):
    P, C = gallery.theory("SemiLatP"), gallery.theory("SemiLat")
    assert [P.n_ops(n) for n in P.window] == [C.n_ops(n) for n in C.window]
    # the evident map on witness terms is an isomorphism of theories
    maps = {}
    for n in P.window:
        index = {C.term(n, t): t for t in range(C.n_ops(n))}
        table = []
        for t in range(P.n_ops(n)):
            term = P.term(n, t)
            table.append(C.G and _eval_in_clone(C, term, n))
        maps[n] = tuple(table)
        assert sorted(table) == list(range(C.n_ops(n)))
    assert theory_morphism_violations(TheoryMorphism(P, C, maps)) == []


def _eval_in_clone(C, term, n):
    if isinstance(term, int):
        return C.proj(n)[term]
    name, args = term
    k = len(args)
    g = next(t for t in range(C.n_ops(k)) if C.term(k, t) == (name, tuple(range(k))))
    return C.subst(g, k, [_eval_in_clone(C, a, n) for a in args], n)


def test_cap_exceeded():
    G = GeneratingAlgebra((("m", 2),), FinSet(3), {"m": (1, 2, 0, 2, 0, 1, 0, 1, 2)})
    with pytest.raises(CapExceeded) as e:
        theory_from_clone(G, fincard(3), cap=20).n_ops(3)
    assert e.value.cap == 20


def test_nonconvergence_reports_counts():
    free_magma = Presentation((("m", 2),), ())
    with pytest.raises(NonConvergence) as e:
        theory_from_presentation(free_magma, fincard(2), 3).n_ops(1)
    assert e.value.arity == 1 and e.value.bound == 3


def test_evaluation_grid_budget(gallery):
    K = gallery.theory("Klein")
    with pytest.raises(CapExceeded) as e:
        K._generate(12)
    assert e.value.reached > e.value.cap


def test_saturation_node_budget():
    free_magma = Presentation((("m", 2),), ())
    with pytest.raises(CapExceeded):
        theory_from_presentation(free_magma, fincard(2), 10, cap=200).n_ops(2)


def test_bad_generating_algebra():
    with pytest.raises(TheoryError):
        GeneratingAlgebra((("a", 1),), FinSet(2), {"a": (0,)})
    with pytest.raises(TheoryError):
        GeneratingAlgebra((("a", 1), ("a", 1)), FinSet(2), {"a": (0, 1)})


@pytest.mark.parametrize("name", ["Z2", "PZ2", "Init01"])
def test_category_laws_exhaustive(gallery, name):
    assert validate_category(gallery.theory(name).category()) == []


def test_generators_generate(gallery):
    for name in ("SemiLat", "Klein", "PZ2"):
        T = gallery.theory(name)
        gens = generators(T)
        for n in T.window:
            assert closure(T, gens, n) == set(range(T.n_ops(n)))


def test_labels_are_witness_terms(gallery):
    T = gallery.theory("SemiLat")
    assert [T.label(2, t) for t in range(3)] == ["x0", "x1", "meet(x0,x1)"]
    assert term_str(("meet", (0, ("meet", (1, 2))))) == "meet(x0,meet(x1,x2))"


def test_initial_morphisms(gallery):
    for name in GALLERY:
        T = gallery.theory(name)
        assert check_theory_morphism(initial_morphism(T))
        assert check_theory_morphism(identity_morphism(T))
        if T.arities.is_finite:
            assert check_theory_morphism(identity_morphism(T).functor(), T, T)


def test_morphism_z2_to_klein_factor(gallery):
    # x -> a(x) from the Z2 clone to itself is not a morphism: it moves the projection
    T = gallery.theory("Z2")
    a = next(t for t in range(2) if T.term(1, t) != 0)
    bad = TheoryMorphism(T, T, {1: (a, 0)})
    assert theory_morphism_violations(bad)[0].kind == "projection"


def test_initial_theory_is_initial_on_each_system():
    for S in (JUST_UNIT, ZERO_ONE, fincard(3)):
        I = initial_theory(S)
        assert validate_theory(I) == []
        assert [I.n_ops(n) for n in S.objects] == list(S.objects)


# -- negative controls --------------------------------------------------------------


def _tabled(gallery, name):
    return TabledTheory.from_theory(gallery.theory(name))


def test_tabled_copy_is_valid(gallery):
    for name in ("Z2", "PZ2", "Klein", "InitFC"):
        assert validate_theory(_tabled(gallery, name)) == []


def brute_laws_hold(T) -> bool:
    """Unit laws, jointly monic projections and associativity over every composite in view."""
    W = T.window
    for n in W:
        p = T.proj(n)
        if any(T.subst(t, n, p, n) != t for t in range(T.n_ops(n))):
            return False
        for k in W:
            pk = T.proj(k)
            for args in itertools.product(range(T.n_ops(n)), repeat=k):
                if tuple(T.subst(pk[i], k, args, n) for i in range(k)) != args:
                    return False
    for k, b, a in itertools.product(W, repeat=3):
        for t in range(T.n_ops(k)):
            for s in itertools.product(range(T.n_ops(b)), repeat=k):
                ts = T.subst(t, k, s, b)
                for f in itertools.product(range(T.n_ops(a)), repeat=b):
                    if T.subst(ts, b, f, a) != T.subst(t, k, [T.subst(x, b, f, a) for x in s], a):
                        return False
    return True


@given(st.data())
def test_validator_agrees_with_brute_force_on_corruptions(gallery, data):
    # some edits land on another lawful theory; the validator must flag exactly the others
    name = data.draw(st.sampled_from(["Z2", "PZ2", "Klein", "Init01"]))
    tt = _tabled(gallery, name)
    key = data.draw(st.sampled_from(sorted(tt._table)))
    t, k, args, n = key
    size = tt.n_ops(n)
    if size < 2:
        return
    shift = data.draw(st.integers(1, size - 1))
    bad = tt.with_subst_entry(t, k, args, n, (tt._table[key] + shift) % size)
    out = validate_theory(bad)
    assert bool(out) == (not brute_laws_hold(bad)), key
    assert all(v.where for v in out)


# corruptions the brute-force checker rejects; each must be caught with a witness
NEGATIVE_CONTROLS = [
    ("Z2", (0, 1, (1,), 1), 0),  # x[a/x] = x breaks the unit law
    ("Klein", (2, 1, (1,), 2), 0),
    ("PZ2", (1, 1, (0,), 0), 0),
    ("SemiLat", (2, 2, (0, 1), 2), 0),  # meet(x0, x1) = x0
]


@pytest.mark.parametrize("name,key,value", NEGATIVE_CONTROLS)
def test_negative_controls(gallery, name, key, value):
    tt = _tabled(gallery, name)
    assert tt._table[key] != value
    bad = tt.with_subst_entry(*key, value)
    out = validate_theory(bad)
    assert out and out[0].where


def test_corrupted_projection_detected(gallery):
    tt = _tabled(gallery, "Klein")
    p = tt.proj(2)
    out = validate_theory(tt.with_proj(2, (p[0], p[0])))
    kinds = {v.kind for v in out}
    assert "cotensor" in kinds
    cot = next(v for v in out if v.kind == "cotensor")
    assert len(cot.where) == 4  # (object, arity, u, u') with u != u' having equal projections
