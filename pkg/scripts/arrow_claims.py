"""Survey the two arc claims over random regular sequences.

Prints how often each clause of check_arrow_claims fails, and the first
failing sequence for each, as JSON.
"""
import argparse
import json
import random

from wqotrees.corpus import random_regular_sequence
from wqotrees.transduce import check_arrow_claims, phi_arrow


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--rmax", type=int, default=6)
    ap.add_argument("--vertices", type=int, default=3)
    ap.add_argument("--seed", type=int, default=9)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    fails = {}
    first = {}
    total = 0
    for _ in range(args.count):
        s = random_regular_sequence(rng, args.vertices)
        for r in range(1, args.rmax + 1):
            total += 1
            for key, v in check_arrow_claims(phi_arrow(s, r)).items():
                if not v:
                    fails[key] = fails.get(key, 0) + 1
                    first.setdefault(key, {"r": r, "sequence": s.to_json(),
                                           "witness": v.witness})
    print(f"{total} arrow graphs")
    for key in ("forward", "backward", "backward-equal", "backward-far"):
        print(f"  {key:15} fails on {fails.get(key, 0)}")
    print(json.dumps(first, indent=1, default=list))


if __name__ == "__main__":
    main()
