"""Monoid interpretations: turning edge-labelled trees into graphs.

An interpretation is a morphism ``mu: Sigma* -> M`` together with a set
``P`` of triples over ``M``. The leaves of a tree become vertices, listed
left to right. Two leaves ``x`` before ``y`` with least common ancestor
``z`` are adjacent when the triple (product root..z, product z..x,
product z..y) lies in ``P``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import LabelledGraph
from .monoid import (FiniteMonoid, Morphism, capped_counter,
                     trivial_monoid)
from .tree import LabelledTree


class InterpretationError(ValueError):
    pass


@dataclass(frozen=True)
class MonoidInterpretation:
    morphism: Morphism
    accepting: frozenset

    def __post_init__(self):
        acc = frozenset(tuple(int(v) for v in p) for p in self.accepting)
        m = self.monoid
        for p in acc:
            if len(p) != 3 or any(not 0 <= v < m.size for v in p):
                raise InterpretationError(f"bad accepting triple {p}")
        object.__setattr__(self, "accepting", acc)

    @property
    def monoid(self) -> FiniteMonoid:
        return self.morphism.codomain

    def accepts(self, root_part: int, left_part: int, right_part: int) -> bool:
        return (root_part, left_part, right_part) in self.accepting

    def to_json(self) -> dict:
        return {"monoid": self.monoid.to_json(), "morphism": self.morphism.to_json(),
                "P": sorted(list(p) for p in self.accepting)}

    @classmethod
    def from_json(cls, data: dict) -> "MonoidInterpretation":
        m = FiniteMonoid.from_json(data["monoid"])
        mu = Morphism.from_json(data["morphism"], m)
        return cls(mu, frozenset(tuple(p) for p in data.get("P", [])))


def _edges(i: MonoidInterpretation, t: LabelledTree, vertices: Iterable[int]) -> set:
    if t.monoid != i.monoid:
        raise InterpretationError("tree and interpretation use different monoids")
    vs = list(vertices)
    edges = set()
    for a in range(len(vs)):
        x = vs[a]
        for b in range(a + 1, len(vs)):
            y = vs[b]
            z = t.lca(x, y)
            if (t.tlbl(0, z), t.tlbl(z, x), t.tlbl(z, y)) in i.accepting:
                edges.add((a, b))
    return edges


def interpret(i: MonoidInterpretation, t: LabelledTree) -> LabelledGraph:
    """Graph on the leaves of ``t``; vertex ``k`` is the ``k``-th leaf from the left."""
    leaves = t.leaves_in_order()
    return LabelledGraph.unlabelled(len(leaves), _edges(i, t, leaves))


def interpret_marked(i: MonoidInterpretation, m) -> LabelledGraph:
    """As :func:`interpret`, keeping only leaves whose marking is ``"M"``."""
    leaves = [x for x in m.tree.leaves_in_order() if m.marking[x] == "M"]
    return LabelledGraph.unlabelled(len(leaves), _edges(i, m.tree, leaves))


def leaf_index(t: LabelledTree) -> dict:
    """Map a leaf node id to its vertex number in :func:`interpret`."""
    return {x: k for k, x in enumerate(t.leaves_in_order())}


# builtins

def _cliques() -> MonoidInterpretation:
    m = trivial_monoid()
    mu = Morphism(("x",), (0,), m)
    return MonoidInterpretation(mu, frozenset({(0, 0, 0)}))


def _edgeless() -> MonoidInterpretation:
    m = trivial_monoid()
    mu = Morphism(("x",), (0,), m)
    return MonoidInterpretation(mu, frozenset())


def _paths() -> MonoidInterpretation:
    # Count spine edges, saturating at two. Leaf edges are neutral, so the
    # path from a spine node to the leaf hanging one step further down has
    # value one, and consecutive leaves are exactly those pairs.
    m = capped_counter(2)
    mu = Morphism(("leaf", "spine"), (0, 1), m)
    return MonoidInterpretation(mu, frozenset((a, 0, 1) for a in m.elements()))


def letter_monoid(letters) -> FiniteMonoid:
    """Monoid reading a spine distance (0, 1, or at least 2) then one letter.

    Elements: ``1``, ``S1``, ``S2``, then ``L:a``, ``S1L:a``, ``S2L:a`` for
    every letter ``a``, then an absorbing ``0``. A letter followed by
    anything other than ``1`` collapses to ``0``.
    """
    letters = list(letters)
    names = ["1", "S1", "S2"]
    for pre in ("L", "S1L", "S2L"):
        names += [f"{pre}:{a}" for a in letters]
    names.append("0")
    idx = {nm: k for k, nm in enumerate(names)}
    zero = idx["0"]

    def decode(x):
        nm = names[x]
        if nm == "0":
            return None
        if nm in ("1", "S1", "S2"):
            return (int(nm[1:]) if nm != "1" else 0, None)
        pre, a = nm.split(":", 1)
        return (0 if pre == "L" else int(pre[1]), a)

    def encode(d, a):
        if a is None:
            return idx["1"] if d == 0 else idx[f"S{d}"]
        return idx[f"L:{a}"] if d == 0 else idx[f"S{d}L:{a}"]

    def op(x, y):
        dx, dy = decode(x), decode(y)
        if dx is None or dy is None:
            return zero
        if dx[1] is not None:
            return x if y == idx["1"] else zero
        return encode(min(2, dx[0] + dy[0]), dy[1])

    return FiniteMonoid.from_function(len(names), 0, op, names)


def periodic_interpretation(letters, close, far) -> MonoidInterpretation:
    """Caterpillars spelling a word give the periodic graph of that word.

    Spine edges are labelled ``s``, each left leaf edge carries its letter,
    and the final right leaf must use ``z`` (it becomes an isolated vertex).
    Left leaves at spine distance one are joined by ``close``, at distance
    two or more by ``far``.
    """
    letters = list(letters)
    m = letter_monoid(letters)
    alphabet = ["s"] + letters + ["z"]
    image = [m.index("S1")] + [m.index(f"L:{a}") for a in letters] + [m.index("0")]
    mu = Morphism(alphabet, image, m)
    acc = set()
    for root in m.elements():
        for a, c in close:
            acc.add((root, m.index(f"L:{a}"), m.index(f"S1L:{c}")))
        for a, c in far:
            acc.add((root, m.index(f"L:{a}"), m.index(f"S2L:{c}")))
    return MonoidInterpretation(mu, frozenset(acc))


def split_permutation_interpretation() -> MonoidInterpretation:
    return periodic_interpretation(["w", "b"], [("w", "b")], [("w", "w"), ("b", "w")])


BUILTINS = {
    "cliques": _cliques,
    "edgeless": _edgeless,
    "paths": _paths,
    "split-permutation": split_permutation_interpretation,
}


def builtin(name: str) -> MonoidInterpretation:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise InterpretationError(
            f"unknown builtin {name!r}; choose from {sorted(BUILTINS)}") from None


def path_cells(n_leaves: int) -> list:
    """Cells of the caterpillar on which the ``paths`` builtin gives ``P_n``."""
    if n_leaves < 2:
        raise InterpretationError("a caterpillar has at least two leaves")
    return [("leaf", "spine")] * (n_leaves - 1)


def word_cells(word) -> list:
    """Cells of the caterpillar spelling ``word`` for a periodic interpretation."""
    cells = [(a, "s") for a in word]
    # the last spine label leads to the isolated closing leaf
    cells[-1] = (word[-1], "z")
    return cells
