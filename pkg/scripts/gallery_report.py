"""Per-theory summary of the bundled gallery: clone sizes, validity, and which monad checks fit the budgets.

    python3 scripts/gallery_report.py [--window N]
"""

import argparse
import time

from alth.config import DEFAULT
from alth.dsl import load_gallery
from alth.monad import InducedMonad, check_jary, validate_monad
from alth.theory import CapExceeded, NonConvergence, validate_theory


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", type=int, default=DEFAULT.windows.monad)
    args = ap.parse_args()
    ws = load_gallery()
    print(f"{'theory':10} {'arities':16} {'|T(n)|':22} {'valid':6} monad on 0..{args.window}")
    for name, T in ws.theories.items():
        sizes = [T.n_ops(n) for n in T.window]
        valid = not validate_theory(T)
        t = time.perf_counter()
        try:
            M = InducedMonad(T)
            ok = validate_monad(M, range(args.window + 1)).ok
            jary = check_jary(M, range(args.window + 1)).value
            monad = f"laws={ok} jary={jary}"
        except (CapExceeded, NonConvergence) as e:
            monad = f"out of budget: {e}"
        dt = time.perf_counter() - t
        print(f"{name:10} {str(T.arities):16} {str(sizes):22} {str(valid):6} {monad} ({dt:.2f}s)")


if __name__ == "__main__":
    main()
