"""Forward Ramseyan splits on labelled trees.

A split of height ``N`` gives every node a level in ``1..N``. Two nodes on
one branch with the same level ``k`` are ``k``-neighbours when no node
strictly between them has a level below ``k``. The split is forward
Ramseyan when, inside every such neighbourhood class, the product along
any pair of members absorbs the product along any other pair:
``p(x, y) * p(x', y') == p(x, y)``.

Such splits let products along long paths be computed by skipping whole
neighbourhood sections, see :func:`fast_tlbl`.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from typing import Optional

from ._util import Deadline, Verdict, PASS
from .tree import LabelledTree, TreeError


class SplitError(ValueError):
    pass


@dataclass(frozen=True)
class Split:
    height: int
    value: tuple
    checked: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", tuple(int(v) for v in self.value))
        if self.height < 1:
            raise SplitError("split height must be positive")
        for x, v in enumerate(self.value):
            if not 1 <= v <= self.height:
                raise SplitError(f"split value {v} at node {x} outside 1..{self.height}")

    def __getitem__(self, x: int) -> int:
        return self.value[x]

    def __len__(self) -> int:
        return len(self.value)

    def to_json(self) -> dict:
        return {"height": self.height, "value": list(self.value)}

    @classmethod
    def from_json(cls, data: dict) -> "Split":
        return cls(int(data["height"]), tuple(data["value"]))


def _covers(t: LabelledTree, s: Split) -> None:
    if len(s.value) != t.n:
        raise SplitError(f"split has {len(s.value)} values for {t.n} nodes")


def gap(t: LabelledTree, s: Split, x: int, y: int) -> int:
    """Least level strictly between ancestor ``x`` and ``y``; ``N+1`` if none.

    ``gap(x, x)`` is also ``N+1``, which keeps callers free of special cases.
    """
    if not t.is_ancestor(x, y):
        raise TreeError(f"{x} is not an ancestor of {y}")
    best = s.height + 1
    z = t.parent[y] if y != x else x
    while z != x:
        if s.value[z] < best:
            best = s.value[z]
        z = t.parent[z]
    return best


def branch(t: LabelledTree, leaf: int) -> list:
    """Root-to-node path."""
    return t.path(0, leaf)


def _classes_on_path(path, s: Split, k: int) -> list:
    classes = []
    current = None
    for z in path:
        v = s.value[z]
        if v < k:
            current = None
        elif v == k:
            if current is None:
                current = []
                classes.append(current)
            current.append(z)
    return classes


def k_classes(t: LabelledTree, s: Split, leaf: int, k: int) -> list:
    """Partition of the level-``k`` nodes on the branch ending at ``leaf``."""
    _covers(t, s)
    return _classes_on_path(branch(t, leaf), s, k)


def validate_ramseyan(t: LabelledTree, s: Split) -> Verdict:
    """Check the absorption law branch by branch.

    On failure the witness is ``(x, y, x2, y2)`` with
    ``p(x, y) * p(x2, y2) != p(x, y)``, taking the first failing pair in
    branch, level and then node order.
    """
    _covers(t, s)
    mul = t.monoid.table
    done = set()
    for leaf in t.leaves_in_order():
        path = branch(t, leaf)
        for k in range(1, s.height + 1):
            for cls in _classes_on_path(path, s, k):
                key = tuple(cls)
                if len(cls) < 2 or key in done:
                    continue
                done.add(key)
                vals = {}
                for i, x in enumerate(cls):
                    for y in cls[i + 1:]:
                        vals.setdefault(t.tlbl(x, y), (x, y))
                for e, (x, y) in vals.items():
                    for f, (x2, y2) in vals.items():
                        if mul[e][f] != e:
                            return Verdict.fail("absorption", (x, y, x2, y2))
    return PASS


def certify(t: LabelledTree, s: Split) -> Split:
    """Return ``s`` marked as checked, or raise if it is not forward Ramseyan."""
    v = validate_ramseyan(t, s)
    if not v:
        raise SplitError(f"split is not forward Ramseyan, witness {v.witness}")
    return replace(s, checked=True)


def _search(t: LabelledTree, height: int, dl: Deadline):
    """Exact search for a split of exactly ``height`` levels.

    The state carried down a branch holds, for every level with a class
    that is still open, the products between class members seen so far
    and the products from each member to the current position. The two
    subtrees below a node only interact through that state, so memoizing
    on ``(node, state)`` keeps the search exact.
    """
    mul = t.monoid.table
    one = t.monoid.identity
    memo = {}

    def step_edge(state, a):
        return tuple(None if st is None else (st[0], frozenset(mul[p][a] for p in st[1]))
                     for st in state)

    def place(state, v):
        # level v receives a node; higher levels close
        st = state[v - 1]
        if st is None:
            newv = (frozenset(), frozenset({one}))
        else:
            vals, ends = st
            allv = vals | ends
            for e in allv:
                row = mul[e]
                for f in allv:
                    if row[f] != e:
                        return None
            newv = (allv, frozenset({one}))
        return state[:v - 1] + (newv,) + (None,) * (height - v)

    def solve(x, state):
        key = (x, state)
        if key in memo:
            return memo[key]
        dl.check()
        answer = None
        for v in range(1, height + 1):
            nxt = place(state, v)
            if nxt is None:
                continue
            if t.is_leaf(x):
                answer = v
                break
            l, r = t.left[x], t.right[x]
            sl = step_edge(nxt, t.edge_label[l])
            if solve(l, sl) is None:
                continue
            sr = step_edge(nxt, t.edge_label[r])
            if solve(r, sr) is None:
                continue
            answer = v
            break
        memo[key] = answer
        return answer

    start = (None,) * height
    if solve(0, start) is None:
        return None
    values = [0] * t.n
    stack = [(0, start)]
    while stack:
        x, state = stack.pop()
        v = memo[(x, state)]
        values[x] = v
        nxt = place(state, v)
        for c in t.children(x):
            stack.append((c, step_edge(nxt, t.edge_label[c])))
    return values


def default_budget(t: LabelledTree) -> int:
    return 3 * t.monoid.size


def construct_split(t: LabelledTree, budget: Optional[int] = None, deadline=None) -> Split:
    """Smallest-height forward Ramseyan split of height at most ``budget``.

    Heights are tried in increasing order and each height is searched
    completely, smaller levels first, so the result is reproducible.
    """
    if budget is None:
        budget = default_budget(t)
    if budget < 1:
        raise SplitError("split budget must be at least 1")
    dl = Deadline.of(deadline)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * t.n + 1000))
    try:
        for height in range(1, budget + 1):
            values = _search(t, height, dl)
            if values is not None:
                return certify(t, Split(height, tuple(values)))
    finally:
        sys.setrecursionlimit(old)
    raise SplitError(f"no forward Ramseyan split of height <= {budget}")


def independent_at(t: LabelledTree, s: Split, x: int, y: int, k: int):
    """Return ``(z1, z2, z3)`` when ``x`` and ``y`` are independent at level ``k``.

    Returns ``None`` otherwise. The witness is canonical: the first and
    second level-``k`` nodes of the closed path from ``x`` to ``y``, and the
    last one.
    """
    if not t.is_strict_ancestor(x, y):
        raise TreeError(f"{x} is not a strict ancestor of {y}")
    if gap(t, s, x, y) != k:
        return None
    ks = [z for z in t.path(x, y) if s.value[z] == k]
    if len(ks) < 2:
        return None
    return ks[0], ks[1], ks[-1]


def fast_tlbl(t: LabelledTree, s: Split, x: int, y: int) -> int:
    """Path product computed by skipping absorbed neighbourhood sections.

    Only valid on checked splits; see :func:`certify`.
    """
    if not s.checked:
        raise SplitError("fast_tlbl needs a checked split")
    if not t.is_ancestor(x, y):
        raise TreeError(f"{x} is not an ancestor of {y}")
    return _fast(t, s, x, y)


def _fast(t, s, x, y):
    mul = t.monoid.table
    if x == y:
        return t.monoid.identity
    if t.parent[y] == x:
        return t.edge_label[y]
    k = gap(t, s, x, y)
    w = independent_at(t, s, x, y, k)
    if w is not None:
        z1, z2, z3 = w
        # the section from z2 to z3 is absorbed
        return mul[mul[_fast(t, s, x, z1)][_fast(t, s, z1, z2)]][_fast(t, s, z3, y)]
    z = next(z for z in t.path(x, y)[1:-1] if s.value[z] == k)
    return mul[_fast(t, s, x, z)][_fast(t, s, z, y)]
