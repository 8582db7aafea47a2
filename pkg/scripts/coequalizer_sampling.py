"""Sample reflexive pairs of gallery algebra homs and coequalize them, across several seeds.

    python3 scripts/coequalizer_sampling.py [--samples 100] [--seeds 5] [--max-carrier 3]
"""

import argparse
import random

from alth.algebra import StabilityFailure, check_unique_lift, coequalize_algebras, enumerate_algebras, reflexive_pairs
from alth.config import DEFAULT
from alth.dsl import load_gallery


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--samples", type=int, default=DEFAULT.coequalizer_samples)
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--max-carrier", type=int, default=DEFAULT.windows.max_carrier)
    args = ap.parse_args()
    ws = load_gallery()
    pairs, pools = [], {}
    for name in ["Init1", "Init01", "InitFC", "Z2", "PZ2", "SemiLat"]:
        pools[name] = enumerate_algebras(ws.theory(name), args.max_carrier)
        pairs += [(name, p) for p in reflexive_pairs(pools[name])]
    print(f"{len(pairs)} reflexive pairs available")
    for seed in range(args.seeds):
        sample = random.Random(seed).sample(pairs, min(args.samples, len(pairs)))
        unique = unstable = 0
        for name, (f, g) in sample:
            try:
                r = coequalize_algebras(f, g)
            except StabilityFailure:
                unstable += 1
                continue
            unique += check_unique_lift(f, g, r, pools[name])
        print(f"seed {seed}: {unique}/{len(sample)} unique lifts, {unstable} stability failures")


if __name__ == "__main__":
    main()
