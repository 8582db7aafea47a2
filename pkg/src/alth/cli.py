"""``alth``: run the checks of the library on named objects of a workspace.

Every subcommand prints one report, either as JSON (``--json``, the default)
or as aligned text (``--table``).  The exit status is 0 for pass, 1 for fail,
2 for inconclusive and 3 for bad input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (AlgebraError, AlgebraHom, EnumerationCapExceeded, StabilityFailure, check_rel_adjunction,
                      check_unique_lift, coequalize_algebras, enumerate_algebras, enumerate_homs, reflexive_pairs,
                      validate_algebra)
from .arity import (AritySystemError, Verdict, all_arity_functors, check_eleutheric_instance, inclusion_functor)
from .config import DEFAULT, Config
from .dsl import DSLError, Workspace, gallery_source, parse
from .finset import FinFn, FinSet
from .monad import (InducedMonad, MonadError, check_em_equals_alg, check_jary, kleisli_theory, roundtrip_monad,
                    roundtrip_theory, validate_monad)
from .profunctor import (check_monoidal, compose_profunctors, hom_profunctor, monoid_tables, omega,
                         prof_monoid_to_theory, theory_tables, theory_to_prof_monoid, zeta)
from .theory import CapExceeded, NonConvergence, TheoryError, validate_theory

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}
INPUT_ERROR = 3


class InputError(Exception):
    pass


@dataclass
class Report:
    command: str
    inputs: dict
    verdict: str = "pass"
    witnesses: list = field(default_factory=list)
    wall_ms: float = 0.0

    def add(self, kind: str, data):
        self.witnesses.append({"kind": kind, "data": data})

    def fail(self, kind: str, data):
        self.verdict = "fail"
        self.add(kind, data)

    def inconclusive(self, kind: str, data):
        if self.verdict != "fail":
            self.verdict = "inconclusive"
        self.add(kind, data)

    def as_dict(self) -> dict:
        return {"command": self.command, "inputs": self.inputs, "verdict": self.verdict,
                "witnesses": self.witnesses, "wall_ms": round(self.wall_ms, 3)}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, default=_jsonable)

    def to_table(self) -> str:
        lines = [f"{self.command}: {self.verdict.upper()}  ({self.wall_ms:.0f} ms)"]
        for k, v in self.inputs.items():
            lines.append(f"  input {k} = {v}")
        for w in self.witnesses:
            lines.append(f"  [{w['kind']}]")
            lines.extend("    " + l for l in _render(w["data"]))
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    if isinstance(x, FinFn):
        return list(x.table)
    return str(x)


def _render(data, indent=0):
    if isinstance(data, dict):
        out = []
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v and any(isinstance(e, (dict, list)) for e in
                                                         (v.values() if isinstance(v, dict) else v)):
                out.append(" " * indent + f"{k}:")
                out.extend(_render(v, indent + 2))
            else:
                out.append(" " * indent + f"{k}: {_flat(v)}")
        return out
    if isinstance(data, list):
        out = []
        for v in data:
            if isinstance(v, dict):
                v = ", ".join(f"{k}={_flat(x)}" for k, x in v.items())
            out.append(" " * indent + _flat(v))
        return out
    return [" " * indent + _flat(data)]


def _flat(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_flat(e) for e in v) + "]"
    return str(v)


def _violation(v) -> dict:
    return {"law": v.kind, "where": list(v.where) if isinstance(v.where, tuple) else v.where, "detail": v.detail}


# -- resolution ---------------------------------------------------------------------


def load_workspace(args, cfg: Config, window: int | None = None) -> Workspace:
    try:
        if args.file:
            ws = None
            for f in args.file:
                ws = parse(Path(f).read_text(encoding="utf-8"), cap=cfg.caps.theory, window=window, ws=ws)
            return ws
        return parse(gallery_source(), cap=cfg.caps.theory, window=window)
    except OSError as e:
        raise InputError(str(e)) from None


def _monad(ws: Workspace, args):
    if args.monad:
        return ws.monad(args.monad)
    if args.theory:
        return InducedMonad(ws.theory(args.theory))
    raise InputError("pass --theory or --monad")


def _theory(ws: Workspace, args):
    if not args.theory:
        raise InputError("pass --theory")
    return ws.theory(args.theory)


def _truncate(items, cap):
    return items[:cap], max(0, len(items) - cap)


# -- commands -----------------------------------------------------------------------


def cmd_validate(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    theories = [args.theory] if args.theory else ([] if args.algebra else list(ws.theories))
    algebras = [args.algebra] if args.algebra else ([] if args.theory else list(ws.algebras))
    checked = []
    for name in theories:
        bad = validate_theory(ws.theory(name))
        checked.append(name)
        for v in bad[:cfg.caps.listing]:
            rep.fail("violation", {"theory": name, **_violation(v)})
    for name in algebras:
        bad = validate_algebra(ws.algebra(name))
        checked.append(name)
        for v in bad[:cfg.caps.listing]:
            rep.fail("violation", {"algebra": name, **_violation(v)})
    rep.add("checked", checked)


def cmd_free(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    M = _monad(ws, args)
    V = args.size
    labels = [M.label(V, x) for x in range(M.ob(V))]
    rep.add("table", {"size": len(labels), "elements": labels})
    if isinstance(M, InducedMonad) and not M.arities.is_finite:
        cc = M.coend_crosscheck(V)
        data = {"coend_size": cc.coend_size, "clone_size": cc.clone_size, "stabilized": cc.stabilized,
                "bijection": list(cc.bijection.table)}
        if cc.ok:
            rep.add("bijection", data)
        elif not cc.stabilized:
            rep.inconclusive("truncation", data)
        else:
            rep.fail("bijection", data)


def cmd_monad_laws(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    M = _monad(ws, args)
    window = tuple(range(args.window + 1))
    r = validate_monad(M, window, cfg.caps.assoc_limit)
    for v in r.violations[:cfg.caps.listing]:
        rep.fail("violation", _violation(v))
    for n in r.notes:
        rep.add("note", n)
    j = check_jary(M, window)
    rep.add("jary", j.value)
    if j is Verdict.FAIL:
        rep.fail("jary", "the xi comparison is not a bijection")
    elif j is Verdict.INCONCLUSIVE:
        rep.inconclusive("truncation", "xi comparison did not stabilize within the window")


def cmd_kleisli(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    M = _monad(ws, args)
    try:
        K = kleisli_theory(M, check=True)
    except TheoryError as e:
        rep.fail("violation", str(e))
        return
    rep.add("sizes", {str(n): K.n_ops(n) for n in K.window})
    rep.add("table", {str(n): [K.label(n, t) for t in range(min(K.n_ops(n), cfg.caps.listing))] for n in K.window})


def cmd_roundtrip(args, cfg, rep: Report):
    ws = load_workspace(args, cfg, window=args.window)
    T = _theory(ws, args)
    if args.via == "monad":
        r = roundtrip_theory(T)
        rep.add("bijection", {str(n): list(f.table) for n, f in r.maps.items()})
        if not r.ok:
            rep.fail("note", r.notes or ["round trip failed"])
        return
    P = theory_to_prof_monoid(T)
    try:
        T2 = prof_monoid_to_theory(P, name=T.name)
    except ValueError as e:
        rep.fail("violation", str(e))
        return
    P2 = theory_to_prof_monoid(T2)
    a, b = theory_tables(T), theory_tables(T2)
    c, d = monoid_tables(P), monoid_tables(P2)
    rep.add("sizes", {str(n): T.n_ops(n) for n in T.window})
    for name, x, y in (("theory", a, b), ("monoid", c, d)):
        for part in x:
            diff = [k for k in x[part] if x[part][k] != y[part].get(k)]
            if diff:
                rep.fail("mismatch", {"tables": name, "part": part, "at": list(diff[0])
                                      if isinstance(diff[0], tuple) else diff[0]})


def cmd_roundtrip_monad(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    M = _monad(ws, args)
    r = roundtrip_monad(M, tuple(range(args.window + 1)))
    rep.add("sizes", {str(k): v for k, v in r.sizes.items()})
    rep.add("bijection", {str(k): list(f.table) for k, f in r.maps.items()})
    if r.verdict is Verdict.FAIL:
        rep.fail("note", r.notes or ["round trip failed"])
    elif r.verdict is Verdict.INCONCLUSIVE:
        rep.inconclusive("truncation", r.notes or ["FinCard comparison did not stabilize"])


def _alg_data(A) -> dict:
    return {"carrier": A.size, "interp": {f"{A.theory.label(n, t)}": list(tab) for (n, t), tab in A.interp.items()
                                          if t in _gen_ids(A.theory, n)}}


def _gen_ids(T, n):
    from .algebra import _gens
    return {g for k, g in _gens(T) if k == n}


def cmd_enumerate(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    T = _theory(ws, args)
    try:
        algs = enumerate_algebras(T, args.max_carrier, cap=cfg.caps.enumeration if args.cap is None else args.cap)
    except EnumerationCapExceeded as e:
        rep.inconclusive("truncation", str(e))
        return
    counts = {}
    for A in algs:
        counts[A.size] = counts.get(A.size, 0) + 1
    rep.add("sizes", {str(k): counts.get(k, 0) for k in range(args.max_carrier + 1)})
    shown, more = _truncate(algs, cfg.caps.listing)
    rep.add("table", [_alg_data(A) for A in shown])
    if more:
        rep.add("note", f"{more} more algebras not listed")


def cmd_homs(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    if not (args.algebra and args.algebra2):
        raise InputError("pass --algebra and --algebra2")
    A, B = ws.algebra(args.algebra), ws.algebra(args.algebra2)
    if A.theory is not B.theory:
        raise InputError("the two algebras have different theories")
    hs = enumerate_homs(A, B)
    rep.add("sizes", {"homs": len(hs)})
    shown, more = _truncate(hs, cfg.caps.listing)
    rep.add("table", [[B.carrier.label(h(a)) for a in range(A.size)] for h in shown])
    if more:
        rep.add("note", f"{more} more homs not listed")


def cmd_em_vs_alg(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    T = _theory(ws, args)
    r = check_em_equals_alg(T, args.max_carrier, args.min_carrier)
    rep.add("sizes", {"algebras": r.n_alg, "em_algebras": r.n_em})
    algs = enumerate_algebras(T, args.max_carrier, args.min_carrier)
    by_size = {}
    for i, j in r.bijection:
        by_size.setdefault(str(algs[i].size), []).append([i, j])
    rep.add("bijection", by_size)
    rep.add("hom_counts", [{"pair": list(p), "alg": a, "em": e} for p, a, e in r.hom_counts])
    if not r.ok:
        rep.fail("note", r.notes or ["EM and algebra categories differ"])


def cmd_eleutheric(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    if not args.arities:
        raise InputError("pass --arities")
    S = ws.arity_system(args.arities)
    max_set = args.max_carrier
    if max_set is None:
        # FinCard sweeps past the window are costly; stay inside it unless asked
        max_set = cfg.windows.eleutheric_set if S.is_finite else min(cfg.windows.eleutheric_set, S.window - 1)
    if S.is_finite:
        functors = list(all_arity_functors(S, cfg.windows.eleutheric_value))
        Ks = S.objects
    else:
        # no finite enumeration of all functors; use the inclusion and the theories on this system
        functors = [inclusion_functor(S)] + [T.operations() for T in ws.theories.values() if T.arities == S]
        Ks = S.objects[:-1]
    count = {"pass": 0, "fail": 0, "inconclusive": 0}
    for i, F in enumerate(functors):
        for V in range(max_set + 1):
            for K in Ks:
                w = None if S.is_finite else max(S.window, V + 1)
                v = check_eleutheric_instance(S, F, V, K, window=w)
                count[v.value] += 1
                if v is Verdict.FAIL and count["fail"] <= cfg.caps.listing:
                    rep.fail("counterexample", {"functor": i, "sizes": {str(J): F.size(J) for J in S.objects},
                                                "V": V, "K": K})
                elif v is Verdict.INCONCLUSIVE and count["inconclusive"] == 1:
                    rep.inconclusive("truncation", {"functor": i, "V": V, "K": K})
    rep.add("sizes", {"functors": len(functors), **count})


def _prof_workspace(args, cfg):
    w = cfg.windows.profunctor if args.window is None else args.window
    return load_workspace(args, cfg, window=w), w


def cmd_prof_compose(args, cfg, rep: Report):
    ws, w = _prof_workspace(args, cfg)
    M = _monad(ws, args)
    S = M.arities
    cw = cfg.windows.coend if args.coend_window is None else args.coend_window
    O = omega(M, S)
    comp = compose_profunctors(O, O, coend_window=cw)
    rep.add("sizes", {f"{J},{L}": c.size for (J, L), c in comp.coends.items()})
    if comp.verdict is Verdict.FAIL:
        rep.fail("note", "composite is not representable by the composed endofunctor")
    elif comp.verdict is Verdict.INCONCLUSIVE:
        rep.inconclusive("truncation", f"coend over 0..{cw} did not stabilize")
    mc = check_monoidal(M, M, M, S, S.objects, coend_window=cw)
    rep.add("monoidal", {"m_TS_bijective": mc.mts_bijective, "MF1": mc.mf1, "MF2": mc.mf2, "MF3": mc.mf3})
    if not mc.ok:
        rep.fail("note", mc.failures[:cfg.caps.listing])


def cmd_zeta(args, cfg, rep: Report):
    ws, w = _prof_workspace(args, cfg)
    if args.theory or args.monad:
        M = _monad(ws, args)
        P, what = omega(M, M.arities), f"Omega({args.monad or args.theory})"
    else:
        if not args.arities:
            raise InputError("pass --theory, --monad or --arities")
        P, what = hom_profunctor(ws.arity_system(args.arities)), f"hom({args.arities})"
    z = zeta(P)
    rep.add("bijection", {f"{J},{K}": list(f.table) for (J, K), f in sorted(z.components.items())
                          if f.dom.size <= cfg.caps.listing})
    if not z.is_iso:
        rep.fail("counterexample", {"profunctor": what, "objects": [list(x) for x in z.failures]})


def _parse_fn(text: str, A, B) -> FinFn:
    labels = [x.strip() for x in text.split(",")] if text else []
    if len(labels) != A.size:
        raise InputError(f"map needs {A.size} entries, got {len(labels)}")
    try:
        return FinFn(A.carrier, B.carrier, tuple(B.carrier.index(l) for l in labels))
    except ValueError:
        raise InputError(f"unknown element in {text!r}") from None


def cmd_coequalize(args, cfg, rep: Report):
    ws = load_workspace(args, cfg)
    if args.algebra:
        if not (args.algebra2 and args.f is not None and args.g is not None):
            raise InputError("explicit mode needs --algebra, --algebra2, --f and --g")
        A, B = ws.algebra(args.algebra), ws.algebra(args.algebra2)
        f, g = AlgebraHom(A, B, _parse_fn(args.f, A, B)), AlgebraHom(A, B, _parse_fn(args.g, A, B))
        try:
            r = coequalize_algebras(f, g)
        except StabilityFailure as e:
            rep.fail("counterexample", {"arity": e.arity, "power_classes": e.colim_size, "quotient_power": e.power_size})
            return
        except AlgebraError as e:
            rep.fail("note", str(e))
            return
        rep.add("table", {"quotient": list(r.proj.fn.table), **_alg_data(r.algebra)})
        if not check_unique_lift(f, g, r):
            rep.fail("note", "lift is not unique or not universal")
        return
    theories = [args.theory] if args.theory else list(ws.theories)
    pairs, pools = [], {}
    for name in theories:
        T = ws.theory(name)
        pools[name] = enumerate_algebras(T, args.max_carrier)
        pairs += [(name, p) for p in reflexive_pairs(pools[name])]
    rng = random.Random(args.seed)
    n = min(args.samples, len(pairs))
    sample = rng.sample(pairs, n)
    good = 0
    for name, (f, g) in sample:
        try:
            r = coequalize_algebras(f, g)
        except StabilityFailure as e:
            rep.fail("counterexample", {"theory": name, "f": list(f.fn.table), "g": list(g.fn.table),
                                        "arity": e.arity})
            continue
        if check_unique_lift(f, g, r, pools[name]):
            good += 1
        else:
            rep.fail("counterexample", {"theory": name, "f": list(f.fn.table), "g": list(g.fn.table)})
    rep.add("sizes", {"pairs_available": len(pairs), "sampled": n, "unique_lifts": good})
    if n < args.samples:
        rep.add("note", f"only {len(pairs)} reflexive pairs exist")


COMMANDS = {
    "validate": cmd_validate,
    "free": cmd_free,
    "monad-laws": cmd_monad_laws,
    "kleisli": cmd_kleisli,
    "roundtrip": cmd_roundtrip,
    "roundtrip-monad": cmd_roundtrip_monad,
    "enumerate-algebras": cmd_enumerate,
    "homs": cmd_homs,
    "em-vs-alg": cmd_em_vs_alg,
    "eleutheric": cmd_eleutheric,
    "prof-compose": cmd_prof_compose,
    "zeta": cmd_zeta,
    "coequalize": cmd_coequalize,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(INPUT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="alth", description="Checks for algebraic theories with arities over finite sets.")
    p.add_argument("command", choices=list(COMMANDS))
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--table", dest="format", action="store_const", const="table", help="text report")
    p.set_defaults(format="json")
    p.add_argument("--file", action="append", help="source file; repeatable; default is the bundled gallery")
    p.add_argument("--theory")
    p.add_argument("--monad")
    p.add_argument("--algebra")
    p.add_argument("--algebra2")
    p.add_argument("--arities")
    p.add_argument("--size", type=int, default=3, help="set size for free")
    p.add_argument("--window", type=int, default=None,
                   help="check window 0..N (monad checks) or FinCard window (profunctor checks)")
    p.add_argument("--coend-window", type=int, default=None)
    p.add_argument("--max-carrier", type=int, default=None)
    p.add_argument("--min-carrier", type=int, default=0)
    p.add_argument("--cap", type=int, default=None, help="budget for clone generation and enumeration")
    p.add_argument("--via", choices=("monad", "profunctor"), default="monad", help="roundtrip route")
    p.add_argument("--f")
    p.add_argument("--g")
    p.add_argument("--samples", type=int, default=DEFAULT.coequalizer_samples)
    p.add_argument("--seed", type=int, default=DEFAULT.seed)
    return p


RELEVANT = {
    "validate": ("theory", "algebra"),
    "free": ("theory", "monad", "size"),
    "monad-laws": ("theory", "monad", "window"),
    "kleisli": ("theory", "monad"),
    "roundtrip": ("theory", "via", "window"),
    "roundtrip-monad": ("theory", "monad", "window"),
    "enumerate-algebras": ("theory", "max_carrier", "cap"),
    "homs": ("algebra", "algebra2"),
    "em-vs-alg": ("theory", "min_carrier", "max_carrier"),
    "eleutheric": ("arities", "max_carrier"),
    "prof-compose": ("theory", "monad", "window", "coend_window"),
    "zeta": ("theory", "monad", "arities", "window"),
    "coequalize": ("theory", "algebra", "algebra2", "f", "g", "max_carrier", "samples", "seed"),
}


def _inputs(args) -> dict:
    keep = {"file": args.file or ["<gallery>"]}
    for k in RELEVANT[args.command]:
        v = getattr(args, k)
        if v is not None:
            keep[k] = v
    if args.cap is not None:
        keep["cap"] = args.cap
    return keep


def run(argv=None, cfg: Config = DEFAULT) -> tuple[Report | None, int, str]:
    args = build_parser().parse_args(argv)
    if args.cap is not None:
        from dataclasses import replace
        cfg = replace(cfg, caps=replace(cfg.caps, theory=args.cap))
    if args.command in ("monad-laws", "roundtrip-monad") and args.window is None:
        args.window = cfg.windows.monad
    if args.command in ("enumerate-algebras", "em-vs-alg", "coequalize") and args.max_carrier is None:
        args.max_carrier = cfg.windows.max_carrier
    rep = Report(args.command, _inputs(args))
    t0 = time.perf_counter()
    try:
        COMMANDS[args.command](args, cfg, rep)
    except (InputError, DSLError, AritySystemError) as e:
        return None, INPUT_ERROR, f"alth: error: {e}"
    except (CapExceeded, NonConvergence, EnumerationCapExceeded) as e:
        rep.inconclusive("truncation", f"{type(e).__name__}: {e}")
    except (TheoryError, MonadError, AlgebraError) as e:
        rep.fail("note", f"{type(e).__name__}: {e}")
    rep.wall_ms = (time.perf_counter() - t0) * 1000
    out = rep.to_json() if args.format == "json" else rep.to_table()
    return rep, EXIT[rep.verdict], out


def main(argv=None) -> int:
    rep, code, out = run(argv)
    print(out, file=sys.stdout if rep is not None else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
