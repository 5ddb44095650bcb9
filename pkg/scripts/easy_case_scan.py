"""Look for sequences whose whole transduction walk has no backward arc.

Runs over every base graph on two labelled vertices and every choice of
close and far pairs. For each sequence with a period, the walk used for
paths of length ``k`` is scanned twice: in full and on its first ``k``
vertices (the prefix the pipeline dispatches on).
"""
import argparse
import itertools

from wqotrees.graph import LabelledGraph
from wqotrees.sequences import RegularSequence
from wqotrees.transduce import TransductionError, _period_of, _walk, phi_arrow


def backward_on(a, vs):
    on = set(vs)
    return any(x in on and y in on and a.copy_of[y] < a.copy_of[x] for x, y in a.inner.arcs)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=5)
    args = ap.parse_args()

    pairs = [(x, y) for x in "ab" for y in "ab"]
    subsets = [frozenset(c) for n in range(5) for c in itertools.combinations(pairs, n)]
    seen = periodic = 0
    full_easy = prefix_easy = 0
    for edge in (set(), {(0, 1)}):
        g = LabelledGraph.from_names(["a", "b"], edge)
        for close in subsets:
            for far in subsets:
                seen += 1
                s = RegularSequence(g, close, far)
                try:
                    _, _, per = _period_of(s)
                except TransductionError:
                    continue
                periodic += 1
                for k in range(2, args.kmax + 1):
                    steps = _walk(per, 2 * (k - 1))
                    a = phi_arrow(s, max(2 * per.t * k + 1, max(c for _, c in steps)))
                    walk = [a.vertex(b, c) for b, c in steps]
                    full_easy += not backward_on(a, walk)
                    prefix_easy += not backward_on(a, walk[:k])
    print(f"{seen} sequences, {periodic} with a period")
    print(f"walks without backward arcs: full {full_easy}, prefix {prefix_easy}")


if __name__ == "__main__":
    main()
