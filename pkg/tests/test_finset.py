import itertools

import pytest
from hypothesis import given, strategies as st

from alth.finset import (FinFn, FinSet, FinSetError, Quotient, coequalizer, compose, decode_tuple, descend,
                         encode_tuple, hom_element, hom_index, hom_set, identity, power_map, tuples)


@st.composite
def fns(draw, dom=None, cod=None):
    n = draw(st.integers(0, 5)) if dom is None else dom
    m = draw(st.integers(1 if n else 0, 5)) if cod is None else cod
    return FinFn(FinSet(n), FinSet(m), draw(st.lists(st.integers(0, max(m - 1, 0)), min_size=n, max_size=n)))


@given(st.integers(1, 6), st.integers(0, 5), st.data())
def test_encode_decode(base, length, data):
    xs = data.draw(st.lists(st.integers(0, base - 1), min_size=length, max_size=length))
    k = encode_tuple(xs, base)
    assert 0 <= k < base ** length
    assert decode_tuple(k, base, length) == tuple(xs)


def test_row_major_order():
    assert [encode_tuple(t, 3) for t in tuples(3, 2)] == list(range(9))
    assert decode_tuple(5, 3, 2) == (1, 2)  # last coordinate fastest


@given(st.data())
def test_composition_associative(data):
    a, b, c, d = (data.draw(st.integers(1, 4)) for _ in range(4))
    f, g, h = data.draw(fns(a, b)), data.draw(fns(b, c)), data.draw(fns(c, d))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert compose(f, identity(FinSet(a))) == f == compose(identity(FinSet(b)), f)


def test_bad_tables():
    with pytest.raises(FinSetError):
        FinFn(FinSet(2), FinSet(2), (0,))
    with pytest.raises(FinSetError):
        FinFn(FinSet(1), FinSet(2), (2,))
    with pytest.raises(FinSetError):
        FinFn(FinSet(2), FinSet(2), (0, 0)).inverse()


def test_hom_set_indexing():
    X, Y = FinSet(2), FinSet(3)
    H = hom_set(X, Y)
    assert H.size == 9
    for k in range(9):
        assert hom_index(hom_element(X, Y, k)) == k


def test_empty_cases():
    assert hom_set(FinSet(0), FinSet(0)).size == 1
    assert hom_set(FinSet(1), FinSet(0)).size == 0
    q = coequalizer(FinFn(FinSet(0), FinSet(3), ()), FinFn(FinSet(0), FinSet(3), ()))
    assert q.size == 3


def _brute_coequalizer_size(f, g):
    # equivalence closure by repeated relabelling, no union-find
    label = list(range(f.cod.size))
    changed = True
    while changed:
        changed = False
        for x, y in zip(f.table, g.table):
            a, b = label[x], label[y]
            if a != b:
                lo, hi = min(a, b), max(a, b)
                label = [lo if l == hi else l for l in label]
                changed = True
    return len(set(label)), label


@given(st.data())
def test_coequalizer_against_relabelling(data):
    n, m = data.draw(st.integers(0, 5)), data.draw(st.integers(1, 6))
    f, g = data.draw(fns(n, m)), data.draw(fns(n, m))
    q = coequalizer(f, g)
    size, label = _brute_coequalizer_size(f, g)
    assert q.size == size
    for x, y in itertools.product(range(m), repeat=2):
        assert (q(x) == q(y)) == (label[x] == label[y])
    # classes sorted by least element, least element is the representative
    assert [c[0] for c in q.classes] == sorted(c[0] for c in q.classes)


@given(st.data())
def test_coequalizer_universal(data):
    n, m, k = data.draw(st.integers(0, 4)), data.draw(st.integers(1, 4)), data.draw(st.integers(1, 3))
    f, g = data.draw(fns(n, m)), data.draw(fns(n, m))
    q = coequalizer(f, g)
    for table in itertools.product(range(k), repeat=m):
        h = FinFn(FinSet(m), FinSet(k), table)
        if all(h(f(x)) == h(g(x)) for x in range(n)):
            u = q.factor(h)
            assert compose(u, q.proj) == h
        else:
            with pytest.raises(FinSetError):
                q.factor(h)


def test_descend_rejects_nonconstant():
    q = Quotient.from_pairs(3, [(0, 1)])
    with pytest.raises(FinSetError):
        descend(q, lambda x: x, 3)
    assert descend(q, lambda x: 0 if x < 2 else 1, 2).table == (0, 1)


def test_power_map():
    f = FinFn(FinSet(2), FinSet(3), (2, 0))
    p = power_map(f, 2)
    assert p.table == tuple(encode_tuple((f(a), f(b)), 3) for a, b in tuples(2, 2))
