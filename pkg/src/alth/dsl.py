"""The ``.alth`` source language: parser, AST, pretty-printer and workspace.

::

    arities A = {0,1}
    arities FC = fincard(window=3)
    theory Z2 on A1 = clone { base = {0,1}; op a/1 = [1,0]; }
    theory P on A1 = presentation { op a/1; eq a(a(x0)) = x0; bound = 4; }
    theory I on FC = initial
    algebra S : Z2 = { carrier = {p,q}; op a = [q,p]; }
    monad W on A1 = writer { elements = {e,g}; table = [e,g; g,e]; unit = e; }
    monad M on FC = induced(SemiLat)

Tables list the values on the points of ``base^k`` in lexicographic order
(last coordinate fastest); ``;`` may separate rows of length ``|base|``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Union

from lark import Lark, Token, Transformer, UnexpectedInput, v_args

from .algebra import Algebra, AlgebraError, algebra_from_signature, validate_algebra
from .arity import AritySystem, AritySystemError, mk_arity_system
from .monad import IdentityMonad, InducedMonad, Monad, WriterMonad
from .theory import (CapExceeded, GeneratingAlgebra, NonConvergence, Presentation, Theory, TheoryError,
                     initial_theory, theory_from_clone, theory_from_presentation)
from .finset import FinSet

GRAMMAR = r"""
start: decl*

?decl: arities_decl | theory_decl | algebra_decl | monad_decl

arities_decl: "arities" NAME "=" arities_body
?arities_body: card_set | fincard
card_set: "{" [INT ("," INT)*] "}"
fincard: "fincard" "(" "window" "=" INT ")"

theory_decl: "theory" NAME "on" NAME "=" theory_body
?theory_body: clone | presentation | initial
initial: "initial"
clone: "clone" "{" "base" "=" label_set ";" (op_table ";")* "}"
op_table: "op" NAME "/" INT "=" table
presentation: "presentation" "{" (pres_item ";")* "}"
?pres_item: "op" NAME "/" INT -> op_decl
          | "eq" term "=" term -> equation
          | "bound" "=" INT -> bound

term: NAME ["(" [term ("," term)*] ")"]

algebra_decl: "algebra" NAME ":" NAME "=" "{" "carrier" "=" label_set ";" (alg_op ";")* "}"
alg_op: "op" NAME "=" table

monad_decl: "monad" NAME "on" NAME "=" monad_body
?monad_body: "identity" -> identity_monad
           | "induced" "(" NAME ")" -> induced_monad
           | "writer" "{" "elements" "=" label_set ";" "table" "=" table ";" "unit" "=" label ";" "}" -> writer_monad

label_set: "{" [label ("," label)*] "}"
table: "[" [row (";" row)*] "]"
row: label ("," label)*
?label: NAME | INT

NAME: /[A-Za-z_][A-Za-z0-9_']*/
INT: /[0-9]+/
COMMENT: /#[^\n]*/
%import common.WS
%ignore WS
%ignore COMMENT
"""

_VAR = re.compile(r"x(\d+)$")


class DSLError(ValueError):
    def __init__(self, msg: str, line: int | None = None, column: int | None = None):
        where = f"{line}:{column}: " if line is not None else ""
        super().__init__(where + msg)
        self.line, self.column = line, column


# -- AST ------------------------------------------------------------------------------


@dataclass(frozen=True)
class Pos:
    line: int = 0
    column: int = 0


def _nopos():
    return field(default_factory=Pos, compare=False, repr=False)


@dataclass(frozen=True)
class AritiesDecl:
    name: str
    cardinals: tuple[int, ...] | None = None
    window: int | None = None
    pos: Pos = _nopos()


@dataclass(frozen=True)
class CloneDecl:
    name: str
    arities: str
    base: tuple[str, ...]
    ops: tuple[tuple[str, int, tuple[str, ...]], ...]
    pos: Pos = _nopos()


# terms: ("var", i) or ("app", name, args)
TermAST = tuple


@dataclass(frozen=True)
class PresentationDecl:
    name: str
    arities: str
    ops: tuple[tuple[str, int], ...]
    equations: tuple[tuple[TermAST, TermAST], ...]
    bound: int
    pos: Pos = _nopos()


@dataclass(frozen=True)
class InitialDecl:
    name: str
    arities: str
    pos: Pos = _nopos()


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    theory: str
    carrier: tuple[str, ...]
    ops: tuple[tuple[str, tuple[str, ...]], ...]
    pos: Pos = _nopos()


@dataclass(frozen=True)
class MonadDecl:
    name: str
    arities: str
    kind: str  # identity | induced | writer
    theory: str | None = None
    elements: tuple[str, ...] = ()
    table: tuple[str, ...] = ()
    unit: str | None = None
    pos: Pos = _nopos()


Decl = Union[AritiesDecl, CloneDecl, PresentationDecl, InitialDecl, AlgebraDecl, MonadDecl]


# -- parsing -------------------------------------------------------------------------


def _pos(tok) -> Pos:
    return Pos(getattr(tok, "line", 0) or 0, getattr(tok, "column", 0) or 0)


@v_args(inline=True)
class _ToAST(Transformer):
    def start(self, *decls):
        return list(decls)

    def card_set(self, *ints):
        return ("set", tuple(int(i) for i in ints if i is not None))

    def fincard(self, n):
        return ("fincard", int(n))

    def arities_decl(self, name, body):
        if body[0] == "set":
            return AritiesDecl(str(name), cardinals=body[1], pos=_pos(name))
        return AritiesDecl(str(name), window=body[1], pos=_pos(name))

    def label_set(self, *labels):
        return tuple(str(l) for l in labels if l is not None)

    def row(self, *labels):
        return tuple(str(l) for l in labels)

    def table(self, *rows):
        return tuple(x for r in rows if r is not None for x in r)

    def op_table(self, name, k, table):
        return (str(name), int(k), table, _pos(name))

    def clone(self, base, *ops):
        return ("clone", base, ops)

    def initial(self):
        return ("initial",)

    def op_decl(self, name, k):
        return ("op", str(name), int(k), _pos(name))

    def equation(self, lhs, rhs):
        return ("eq", lhs, rhs)

    def bound(self, n):
        return ("bound", int(n))

    def presentation(self, *items):
        return ("presentation", items)

    def term(self, name, *args):
        args = tuple(a for a in args if a is not None)
        return ("raw", str(name), args, _pos(name), len(args) > 0 or False)

    def theory_decl(self, name, arities, body):
        p = _pos(name)
        if body[0] == "initial":
            return InitialDecl(str(name), str(arities), p)
        if body[0] == "clone":
            ops = tuple((n, k, t) for n, k, t, _ in body[2])
            return CloneDecl(str(name), str(arities), body[1], ops, p)
        ops, eqs, bound = [], [], None
        for it in body[1]:
            if it[0] == "op":
                ops.append((it[1], it[2]))
            elif it[0] == "eq":
                eqs.append((it[1], it[2]))
            else:
                bound = it[1]
        if bound is None:
            raise DSLError(f"presentation {name} has no bound", p.line, p.column)
        sig = dict(ops)
        eqs = tuple((_resolve(l, sig), _resolve(r, sig)) for l, r in eqs)
        return PresentationDecl(str(name), str(arities), tuple(ops), eqs, bound, p)

    def alg_op(self, name, table):
        return (str(name), table)

    def algebra_decl(self, name, theory, carrier, *ops):
        return AlgebraDecl(str(name), str(theory), carrier, tuple(ops), _pos(name))

    def identity_monad(self):
        return ("identity",)

    def induced_monad(self, theory):
        return ("induced", str(theory))

    def writer_monad(self, elements, table, unit):
        return ("writer", elements, table, str(unit))

    def monad_decl(self, name, arities, body):
        p = _pos(name)
        if body[0] == "identity":
            return MonadDecl(str(name), str(arities), "identity", pos=p)
        if body[0] == "induced":
            return MonadDecl(str(name), str(arities), "induced", theory=body[1], pos=p)
        return MonadDecl(str(name), str(arities), "writer", elements=body[1], table=body[2], unit=body[3], pos=p)


def _resolve(raw, sig: dict) -> TermAST:
    _, name, args, p, _had = raw
    if name in sig:
        if len(args) != sig[name]:
            raise DSLError(f"arity mismatch: {name} takes {sig[name]} arguments, got {len(args)}", p.line, p.column)
        return ("app", name, tuple(_resolve(a, sig) for a in args))
    m = _VAR.match(name)
    if m and not args:
        return ("var", int(m.group(1)))
    raise DSLError(f"unresolved name {name!r}", p.line, p.column)


_parser = None


def _get_parser() -> Lark:
    global _parser
    if _parser is None:
        _parser = Lark(GRAMMAR, parser="lalr", propagate_positions=True)
    return _parser


def parse_ast(text: str) -> list:
    try:
        tree = _get_parser().parse(text)
    except UnexpectedInput as e:
        raise DSLError(f"syntax error near {e.get_context(text).strip()!r}", e.line, e.column) from None
    try:
        return _ToAST().transform(tree)
    except Exception as e:  # lark wraps transformer errors
        inner = getattr(e, "orig_exc", e)
        if isinstance(inner, DSLError):
            raise inner from None
        raise


# -- pretty-printing ----------------------------------------------------------------


def _fmt_table(entries, width: int, arity: int) -> str:
    if arity >= 2 and width and len(entries) > width:
        rows = [", ".join(entries[i:i + width]) for i in range(0, len(entries), width)]
        return "[" + "; ".join(rows) + "]"
    return "[" + ", ".join(entries) + "]"


def _fmt_term(t: TermAST) -> str:
    if t[0] == "var":
        return f"x{t[1]}"
    _, name, args = t
    if not args:
        return name
    return f"{name}(" + ", ".join(_fmt_term(a) for a in args) + ")"


def pretty(decls: list) -> str:
    sig_of: dict = {}
    carrier_of: dict = {}
    lines = []
    for d in decls:
        if isinstance(d, AritiesDecl):
            body = f"fincard(window={d.window})" if d.window is not None else "{" + ", ".join(map(str, d.cardinals)) + "}"
            lines.append(f"arities {d.name} = {body}")
        elif isinstance(d, InitialDecl):
            lines.append(f"theory {d.name} on {d.arities} = initial")
        elif isinstance(d, CloneDecl):
            sig_of[d.name] = {n: k for n, k, _ in d.ops}
            lines.append(f"theory {d.name} on {d.arities} = clone {{")
            lines.append("  base = {" + ", ".join(d.base) + "};")
            for n, k, t in d.ops:
                lines.append(f"  op {n}/{k} = {_fmt_table(t, len(d.base), k)};")
            lines.append("}")
        elif isinstance(d, PresentationDecl):
            sig_of[d.name] = dict(d.ops)
            lines.append(f"theory {d.name} on {d.arities} = presentation {{")
            for n, k in d.ops:
                lines.append(f"  op {n}/{k};")
            for l, r in d.equations:
                lines.append(f"  eq {_fmt_term(l)} = {_fmt_term(r)};")
            lines.append(f"  bound = {d.bound};")
            lines.append("}")
        elif isinstance(d, AlgebraDecl):
            sig = sig_of.get(d.theory, {})
            lines.append(f"algebra {d.name} : {d.theory} = {{")
            lines.append("  carrier = {" + ", ".join(d.carrier) + "};")
            for n, t in d.ops:
                lines.append(f"  op {n} = {_fmt_table(t, len(d.carrier), sig.get(n, 0))};")
            lines.append("}")
        elif isinstance(d, MonadDecl):
            if d.kind == "identity":
                body = "identity"
            elif d.kind == "induced":
                body = f"induced({d.theory})"
            else:
                body = ("writer { elements = {" + ", ".join(d.elements) + "}; table = "
                        + _fmt_table(d.table, len(d.elements), 2) + f"; unit = {d.unit}; }}")
            lines.append(f"monad {d.name} on {d.arities} = {body}")
    return "\n".join(lines) + "\n"


# -- workspace ----------------------------------------------------------------------


@dataclass
class Workspace:
    decls: list = field(default_factory=list)
    arities: dict = field(default_factory=dict)
    theories: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)
    monads: dict = field(default_factory=dict)
    profunctors: dict = field(default_factory=dict)
    cap: int = 20000

    def theory(self, name: str) -> Theory:
        if name not in self.theories:
            raise DSLError(f"unknown theory {name!r}")
        return self.theories[name]

    def algebra(self, name: str) -> Algebra:
        if name not in self.algebras:
            raise DSLError(f"unknown algebra {name!r}")
        return self.algebras[name]

    def monad(self, name: str) -> Monad:
        if name not in self.monads:
            raise DSLError(f"unknown monad {name!r}")
        return self.monads[name]

    def arity_system(self, name: str) -> AritySystem:
        if name not in self.arities:
            raise DSLError(f"unknown arity system {name!r}")
        return self.arities[name]


def _err(d, msg):
    return DSLError(msg, d.pos.line, d.pos.column)


def _index(labels, d, what):
    idx = {l: i for i, l in enumerate(labels)}
    if len(idx) != len(labels):
        raise _err(d, f"duplicate labels in {what}")
    return idx


def _lookup(idx, label, d, what):
    if label not in idx:
        raise _err(d, f"unknown element {label!r} in {what}")
    return idx[label]


def _term(t: TermAST):
    if t[0] == "var":
        return t[1]
    return (t[1], tuple(_term(a) for a in t[2]))


def build(decls: list, ws: Workspace | None = None, cap: int = 20000, window: int | None = None) -> Workspace:
    ws = ws or Workspace(cap=cap)
    ws.decls.extend(decls)
    for d in decls:
        kind = {AritiesDecl: ws.arities, AlgebraDecl: ws.algebras, MonadDecl: ws.monads}.get(type(d), ws.theories)
        if d.name in kind:
            raise _err(d, f"duplicate name {d.name!r}")
        if isinstance(d, AritiesDecl):
            try:
                S = mk_arity_system(d.cardinals if d.window is None else ("fincard", d.window))
            except AritySystemError as e:
                raise DSLError(f"{e} (witness {e.witness})", d.pos.line, d.pos.column) from None
            if window is not None and not S.is_finite:
                S = S.with_window(window)
            ws.arities[d.name] = S
        elif isinstance(d, (CloneDecl, PresentationDecl, InitialDecl)):
            S = _arities_ref(ws, d)
            try:
                if isinstance(d, InitialDecl):
                    T = initial_theory(S)
                elif isinstance(d, CloneDecl):
                    base = _index(d.base, d, "base")
                    tables = {}
                    for n, k, t in d.ops:
                        if len(t) != len(d.base) ** k:
                            raise _err(d, f"arity mismatch in op {n}/{k}: {len(t)} entries, expected {len(d.base) ** k}")
                        tables[n] = tuple(_lookup(base, x, d, f"op {n}") for x in t)
                    G = GeneratingAlgebra(tuple((n, k) for n, k, _ in d.ops), FinSet(len(d.base), d.base), tables)
                    T = theory_from_clone(G, S, cap=ws.cap, name=d.name)
                else:
                    P = Presentation(d.ops, tuple((_term(l), _term(r)) for l, r in d.equations))
                    T = theory_from_presentation(P, S, d.bound, name=d.name, cap=ws.cap)
            except (CapExceeded, NonConvergence):
                raise  # budgets are not input errors; callers report them as truncation
            except TheoryError as e:
                raise _err(d, str(e)) from None
            T.name = d.name
            ws.theories[d.name] = T
        elif isinstance(d, AlgebraDecl):
            if d.theory not in ws.theories:
                raise _err(d, f"unresolved theory {d.theory!r}")
            T = ws.theories[d.theory]
            car = _index(d.carrier, d, "carrier")
            X = len(d.carrier)
            sig = _signature(ws, d.theory)
            ops = {}
            for n, t in d.ops:
                if n not in sig:
                    raise _err(d, f"unknown operation {n!r} for theory {d.theory}")
                if len(t) != X ** sig[n]:
                    raise _err(d, f"arity mismatch in op {n}: {len(t)} entries, expected {X ** sig[n]}")
                ops[n] = tuple(_lookup(car, x, d, f"op {n}") for x in t)
            missing = set(sig) - set(ops)
            if missing:
                raise _err(d, f"no table for {sorted(missing)}")
            try:
                A = algebra_from_signature(T, FinSet(X, d.carrier), ops, d.name)
            except AlgebraError as e:
                raise _err(d, str(e)) from None
            bad = validate_algebra(A)
            if bad:
                raise _err(d, f"{d.name} is not an algebra of {d.theory}: {bad[0]}")
            ws.algebras[d.name] = A
        elif isinstance(d, MonadDecl):
            S = _arities_ref(ws, d)
            if d.kind == "identity":
                M = IdentityMonad(S, d.name)
            elif d.kind == "induced":
                if d.theory not in ws.theories:
                    raise _err(d, f"unresolved theory {d.theory!r}")
                M = InducedMonad(ws.theories[d.theory])
                M.name = d.name
            else:
                el = _index(d.elements, d, "elements")
                n = len(d.elements)
                if len(d.table) != n * n:
                    raise _err(d, f"arity mismatch in writer table: {len(d.table)} entries, expected {n * n}")
                flat = [_lookup(el, x, d, "table") for x in d.table]
                M = WriterMonad(S, [flat[i * n:(i + 1) * n] for i in range(n)], _lookup(el, d.unit, d, "unit"), d.name)
            ws.monads[d.name] = M
    return ws


def _arities_ref(ws, d):
    if d.arities not in ws.arities:
        raise _err(d, f"unresolved arity system {d.arities!r}")
    return ws.arities[d.arities]


def _signature(ws, theory: str) -> dict:
    for d in ws.decls:
        if getattr(d, "name", None) == theory:
            if isinstance(d, CloneDecl):
                return {n: k for n, k, _ in d.ops}
            if isinstance(d, PresentationDecl):
                return dict(d.ops)
            return {}
    return {}


def parse(text: str, cap: int = 20000, window: int | None = None, ws: Workspace | None = None) -> Workspace:
    return build(parse_ast(text), ws=ws, cap=cap, window=window)


def gallery_source() -> str:
    return resources.files("alth").joinpath("gallery.alth").read_text(encoding="utf-8")


def load_gallery(cap: int = 20000, window: int | None = None) -> Workspace:
    return parse(gallery_source(), cap=cap, window=window)
