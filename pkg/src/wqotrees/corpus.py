"""Deterministic pseudo-random instances for the property suites.

Every generator takes an explicit ``random.Random`` so that a single seed
reproduces a whole corpus.
"""
from __future__ import annotations

import random
from typing import Optional

from .gap import MarkedNestedTree, is_well_marked
from .monoid import (FiniteMonoid, absorbing_monoid, capped_counter, cyclic_group,
                     left_zero_monoid, transformation_monoid)
from .split import Split, construct_split, validate_ramseyan
from .tree import LabelledTree


def small_monoids() -> list:
    """A fixed menu of monoids with at most six elements."""
    return [
        absorbing_monoid(),
        cyclic_group(2),
        cyclic_group(3),
        left_zero_monoid(2),
        capped_counter(3),
        transformation_monoid([(0, 0, 0), (1, 2, 0)], 3),
        transformation_monoid([(0, 0, 1), (0, 2, 0)], 3),
        transformation_monoid([(1, 0, 2), (0, 0, 2)], 3),
    ]


def random_monoid(rng: random.Random, max_size: int = 6) -> FiniteMonoid:
    """A transformation monoid on three points with at most ``max_size`` elements."""
    while True:
        gens = [tuple(rng.randrange(3) for _ in range(3)) for _ in range(rng.randint(1, 2))]
        m = transformation_monoid(gens, 3)
        if m.size <= max_size:
            return m


def random_shape(rng: random.Random, n_nodes: int) -> dict:
    """Random full binary shape with ``n_nodes`` nodes (rounded down to odd)."""
    if n_nodes % 2 == 0:
        n_nodes -= 1

    def rec(k):
        if k <= 1:
            return {}
        a = rng.randrange(1, k - 1, 2)
        return {"l": None, "left": rec(a), "r": None, "right": rec(k - 1 - a)}

    return rec(max(1, n_nodes))


def random_tree(rng: random.Random, monoid: FiniteMonoid, n_nodes: int,
                weights: Optional[list] = None) -> LabelledTree:
    shape = random_shape(rng, n_nodes)
    elems = list(monoid.elements())

    def fill(nd):
        if "left" in nd:
            nd["l"] = rng.choices(elems, weights)[0]
            nd["r"] = rng.choices(elems, weights)[0]
            fill(nd["left"])
            fill(nd["right"])
        return nd

    return LabelledTree.from_nested(fill(shape), monoid)


def random_split_tree(rng: random.Random, monoid: FiniteMonoid, n_nodes: int):
    t = random_tree(rng, monoid, n_nodes)
    return t, construct_split(t)


def random_marking(rng: random.Random, t: LabelledTree, s: Split,
                   p_marked: float = 0.5, p_sep: float = 0.3) -> tuple:
    """A random well-marked marking.

    Separating marks never break well-markedness, so they are placed
    freely. Marked nodes are then added greedily in random order, each one
    kept only if the tree stays well-marked (after closing under least
    common ancestors).
    """
    rho = ["S" if rng.random() < p_sep else "D" for _ in t.nodes()]
    rho[0] = "M"
    order = list(range(1, t.n))
    rng.shuffle(order)
    for x in order:
        if rng.random() >= p_marked:
            continue
        trial = list(rho)
        trial[x] = "M"
        _close_under_lca(t, trial)
        if is_well_marked(MarkedNestedTree(t, s, tuple(trial))):
            rho = trial
    return tuple(rho)


def _close_under_lca(t: LabelledTree, rho: list) -> None:
    has = [False] * t.n
    for x in range(t.n - 1, -1, -1):
        if t.is_leaf(x):
            has[x] = rho[x] == "M"
            continue
        a, b = has[t.left[x]], has[t.right[x]]
        if a and b:
            rho[x] = "M"
        has[x] = a or b or rho[x] == "M"


def random_marked(rng: random.Random, monoid: FiniteMonoid, n_nodes: int,
                  max_chain: Optional[int] = None) -> Optional[MarkedNestedTree]:
    t, s = random_split_tree(rng, monoid, n_nodes)
    rho = random_marking(rng, t, s)
    m = MarkedNestedTree(t, s, rho)
    if max_chain is not None:
        from .gap import max_nondummy_chain
        if max_nondummy_chain(m) > max_chain:
            return None
    return m


def _rebuild(m: MarkedNestedTree, nested: dict) -> Optional[MarkedNestedTree]:
    t = LabelledTree.from_nested(nested, m.tree.monoid)
    src = t.tags
    s = Split(m.split.height, tuple(m.split.value[x] for x in src))
    if not validate_ramseyan(t, s):
        return None
    out = MarkedNestedTree(t, s, tuple(m.marking[x] for x in src))
    if not is_well_marked(out):
        return None
    return out


def contract(rng: random.Random, m: MarkedNestedTree) -> Optional[MarkedNestedTree]:
    """A smaller marked tree likely to embed into ``m``.

    Either a dummy internal node is spliced out (one of its dummy children
    takes its place) or a dummy internal node loses its subtree. Results
    that stop being forward Ramseyan or well-marked are discarded.
    """
    t = m.tree
    cands = [x for x in t.nodes() if x != 0 and not t.is_leaf(x) and m.marking[x] == "D"]
    if not cands:
        return None
    w = rng.choice(cands)
    nested = _tagged(t)
    target = _find(nested, w)
    if rng.random() < 0.5:
        kids = [k for k in ("left", "right") if target[k].get("tag") is not None
                and m.marking[target[k]["tag"]] == "D"]
        if not kids:
            return None
        keep = target[rng.choice(kids)]
        target.clear()
        target.update(keep)
    else:
        for k in ("l", "left", "r", "right"):
            target.pop(k)
    return _rebuild(m, nested)


def _tagged(t: LabelledTree) -> dict:
    def rec(x):
        out = {"tag": x}
        if not t.is_leaf(x):
            l, r = t.left[x], t.right[x]
            out.update({"l": t.edge_label[l], "left": rec(l), "r": t.edge_label[r],
                        "right": rec(r)})
        return out
    return rec(0)


def _find(nested: dict, tag: int) -> dict:
    stack = [nested]
    while stack:
        nd = stack.pop()
        if nd.get("tag") == tag:
            return nd
        for k in ("left", "right"):
            if k in nd:
                stack.append(nd[k])
    raise KeyError(tag)


def random_interpretation(rng: random.Random, monoid: FiniteMonoid, density: float = 0.3):
    from .interp import MonoidInterpretation
    from .monoid import Morphism
    mu = Morphism(tuple(f"x{a}" for a in monoid.elements()), tuple(monoid.elements()), monoid)
    elems = list(monoid.elements())
    acc = {(a, b, c) for a in elems for b in elems for c in elems if rng.random() < density}
    return MonoidInterpretation(mu, frozenset(acc))


def random_regular_sequence(rng: random.Random, max_vertices: int = 3, injective: bool = True):
    """Random base graph with distinct vertex labels and random pair sets."""
    from .graph import LabelledGraph
    from .sequences import RegularSequence
    n = rng.randint(1, max_vertices)
    names = [f"a{i}" for i in range(n)]
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5}
    g = LabelledGraph.from_names(names, edges)
    sigma = sorted(set(names))
    pairs = [(a, b) for a in sigma for b in sigma]
    close = {p for p in pairs if rng.random() < 0.5}
    far = {p for p in pairs if rng.random() < 0.5}
    return RegularSequence(g, frozenset(close), frozenset(far))
