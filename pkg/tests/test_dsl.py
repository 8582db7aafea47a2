import pytest
from hypothesis import given, strategies as st

from alth.dsl import (AlgebraDecl, AritiesDecl, CloneDecl, DSLError, InitialDecl, MonadDecl, PresentationDecl,
                      gallery_source, load_gallery, parse, parse_ast, pretty)

KEYWORDS = {"arities", "theory", "on", "clone", "base", "op", "presentation", "eq", "bound", "algebra", "carrier",
            "monad", "identity", "induced", "writer", "elements", "table", "unit", "initial", "fincard", "window"}

names = st.from_regex(r"[A-Z][A-Za-z0-9_]{0,5}", fullmatch=True)
op_names = st.from_regex(r"[a-w][a-z0-9]{0,3}", fullmatch=True).filter(lambda s: s not in KEYWORDS)
labels = st.one_of(st.from_regex(r"[a-z][a-z0-9]{0,2}", fullmatch=True).filter(lambda s: s not in KEYWORDS),
                   st.from_regex(r"[0-9]{1,2}", fullmatch=True))


@st.composite
def label_sets(draw, min_size=0):
    return tuple(draw(st.lists(labels, min_size=min_size, max_size=3, unique=True)))


@st.composite
def tables(draw, universe, length):
    return tuple(draw(st.lists(st.sampled_from(universe), min_size=length, max_size=length))) if universe else ()


@st.composite
def terms(draw, sig, depth=2):
    if depth == 0 or not sig or draw(st.booleans()):
        if draw(st.booleans()) and any(k == 0 for _, k in sig):
            c = draw(st.sampled_from([n for n, k in sig if k == 0]))
            return ("app", c, ())
        return ("var", draw(st.integers(0, 3)))
    name, k = draw(st.sampled_from(sig))
    return ("app", name, tuple(draw(terms(sig, depth - 1)) for _ in range(k)))


@st.composite
def decls(draw):
    kind = draw(st.sampled_from(["arities", "fincard", "clone", "presentation", "initial", "algebra", "monad"]))
    name = draw(names)
    if kind == "arities":
        return AritiesDecl(name, cardinals=tuple(draw(st.lists(st.integers(0, 9), max_size=3))))
    if kind == "fincard":
        return AritiesDecl(name, window=draw(st.integers(0, 9)))
    if kind == "initial":
        return InitialDecl(name, draw(names))
    sig = draw(st.lists(st.tuples(op_names, st.integers(0, 2)), max_size=3, unique_by=lambda p: p[0]))
    if kind == "clone":
        base = draw(label_sets(min_size=1))
        ops = tuple((n, k, draw(tables(base, len(base) ** k))) for n, k in sig)
        return CloneDecl(name, draw(names), base, ops)
    if kind == "presentation":
        eqs = tuple((draw(terms(sig)), draw(terms(sig))) for _ in range(draw(st.integers(0, 2))))
        return PresentationDecl(name, draw(names), tuple(sig), eqs, draw(st.integers(0, 6)))
    if kind == "algebra":
        carrier = draw(label_sets())
        ops = tuple((n, draw(tables(carrier, len(carrier) ** k))) for n, k in sig)
        return AlgebraDecl(name, draw(names), carrier, ops)
    which = draw(st.sampled_from(["identity", "induced", "writer"]))
    if which == "identity":
        return MonadDecl(name, draw(names), "identity")
    if which == "induced":
        return MonadDecl(name, draw(names), "induced", theory=draw(names))
    el = draw(label_sets(min_size=1))
    return MonadDecl(name, draw(names), "writer", elements=el, table=draw(tables(el, len(el) ** 2)),
                     unit=draw(st.sampled_from(el)))


@given(st.lists(decls(), max_size=5))
def test_parse_pretty_roundtrip(ds):
    assert parse_ast(pretty(ds)) == ds


def test_gallery_roundtrip_and_contents():
    ws = load_gallery()
    assert len(ws.theories) >= 4
    assert parse_ast(pretty(ws.decls)) == ws.decls
    assert parse_ast(gallery_source()) == ws.decls


def _error(src):
    with pytest.raises(DSLError) as e:
        parse(src)
    return e.value


def test_closure_error_with_witness():
    e = _error("arities A = {1,2}")
    assert "4" in str(e) and (e.line, e.column) == (1, 9)


def test_table_length_names_the_op():
    e = _error("arities A = {1}\ntheory T on A = clone {\n base = {0,1};\n op f/1 = [0];\n}")
    assert "op f/1" in str(e) and e.line == 2


def test_syntax_error_position():
    e = _error("arities A = {1}\ntheory T on A = clone {\n base = {0,1}\n}")
    assert e.line == 4 and e.column == 1


@pytest.mark.parametrize("src,fragment", [
    ("theory T on Nope = initial", "unresolved arity system"),
    ("arities A = {1}\nalgebra X : Nope = { carrier = {a}; }", "unresolved theory"),
    ("arities A = {1}\ntheory T on A = presentation { op f/1; eq f(x0, x1) = x0; bound = 2; }", "arity mismatch"),
    ("arities A = {1}\ntheory T on A = presentation { op f/1; eq g(x0) = x0; bound = 2; }", "unresolved name"),
    ("arities A = {1}\ntheory T on A = presentation { op f/1; }", "no bound"),
    ("arities A = {1}\narities A = {0,1}", "duplicate name"),
    ("arities A = {1}\ntheory T on A = clone { base = {0,1}; op f/1 = [0,2]; }", "unknown element"),
    ("arities A = {1}\ntheory T on A = clone { base = {0,1}; op f/1 = [1,0]; }\n"
     "algebra X : T = { carrier = {p,q}; op g = [p,q]; }", "unknown operation"),
    ("arities A = {1}\ntheory T on A = clone { base = {0,1}; op f/1 = [1,0]; }\n"
     "algebra X : T = { carrier = {p,q}; }", "no table"),
    ("arities A = {1}\ntheory T on A = clone { base = {0,1}; op f/1 = [1,0]; }\n"
     "algebra X : T = { carrier = {p,q}; op f = [p,p]; }", "not an algebra"),
])
def test_semantic_errors(src, fragment):
    assert fragment in str(_error(src))


def test_window_override():
    ws = parse("arities F = fincard(window=3)\ntheory I on F = initial", window=2)
    assert ws.theory("I").window == (0, 1, 2)


def test_comments_and_whitespace():
    ws = parse("# a comment\narities   A={1} # trailing\n\ntheory T on A = initial\n")
    assert list(ws.theories) == ["T"]
