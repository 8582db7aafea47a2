"""Free algebra sizes for the induced monads of FinCard theories, computed as a coend and from the clone.

    python3 scripts/free_algebra_sizes.py [--theory SemiLat] [--max-set 4]
"""

import argparse

from alth.dsl import load_gallery
from alth.monad import InducedMonad
from alth.theory import CapExceeded, NonConvergence


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--theory", action="append")
    ap.add_argument("--max-set", type=int, default=4)
    args = ap.parse_args()
    ws = load_gallery()
    names = args.theory or [n for n, T in ws.theories.items() if not T.arities.is_finite]
    for name in names:
        if ws.theory(name).arities.is_finite:
            print(f"{name:8} skipped: finite arity system")
            continue
        M = InducedMonad(ws.theory(name))
        row = []
        for V in range(args.max_set + 1):
            try:
                cc = M.coend_crosscheck(V)
            except (CapExceeded, NonConvergence):
                row.append("cap")
                continue
            mark = "" if cc.ok and cc.coend_size == cc.clone_size else "!"
            row.append(f"{cc.coend_size}/{cc.clone_size}{mark}")
        print(f"{name:8} " + "  ".join(f"V={V}:{r}" for V, r in enumerate(row)))


if __name__ == "__main__":
    main()
