"""Exhaustive sweep over arity functors on the finite systems, counting eleutheric verdicts.

    python3 scripts/eleutheric_sweep.py [--max-value 3] [--max-set 3]
"""

import argparse
from collections import Counter

from alth.arity import JUST_UNIT, ZERO_ONE, all_arity_functors, check_eleutheric_instance
from alth.config import DEFAULT


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-value", type=int, default=DEFAULT.windows.eleutheric_value)
    ap.add_argument("--max-set", type=int, default=DEFAULT.windows.eleutheric_set)
    args = ap.parse_args()
    for S in (JUST_UNIT, ZERO_ONE):
        functors = list(all_arity_functors(S, args.max_value))
        verdicts = Counter()
        for T in functors:
            for V in range(args.max_set + 1):
                for K in S.objects:
                    verdicts[check_eleutheric_instance(S, T, V, K).value] += 1
        print(f"{S}: {len(functors)} functors, verdicts {dict(verdicts)}")


if __name__ == "__main__":
    main()
