"""Heights of the minimal forward Ramseyan splits found on random trees."""
import argparse
import collections
import random
import time

from wqotrees.corpus import random_monoid, random_tree
from wqotrees.split import construct_split


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trees", type=int, default=200)
    ap.add_argument("--nodes", type=int, default=63)
    ap.add_argument("--monoid", type=int, default=6, help="largest monoid size")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    heights = collections.Counter()
    worst = 0.0
    for _ in range(args.trees):
        m = random_monoid(rng, args.monoid)
        t = random_tree(rng, m, args.nodes)
        t0 = time.monotonic()
        s = construct_split(t)
        worst = max(worst, time.monotonic() - t0)
        heights[s.height] += 1
    print(f"{args.trees} trees, {args.nodes} nodes, |M| <= {args.monoid}")
    for h in sorted(heights):
        print(f"  height {h}: {heights[h]}")
    print(f"slowest construction {worst:.3f}s")


if __name__ == "__main__":
    main()
