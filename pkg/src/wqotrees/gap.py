"""Marked nested trees and gap-embeddings between split trees.

A gap-embedding maps one split tree into another as a tree embedding
(ancestors, least common ancestors and left/right order preserved) such
that the split levels met on the image of an edge are never below the
level of the edge's lower end.

Marked nested trees add a marking of every node as ``M`` (marked), ``S``
(separating) or ``D`` (dummy). The marked variant of the embedding also
sends root to root and leaves to leaves, preserves the marking, the
labels of child edges, and the products reaching back to the nearest
ancestor of each level, and keeps every non-dummy node glued directly
under the image of its parent.

Throughout, "the nearest ancestor of level k" is strict: a node is never
its own nearest ancestor. When neither side has such an ancestor the two
agree; when only one side has one they differ.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from ._util import Deadline, Verdict, PASS
from .graph import LabelOrder, verify_embedding
from .interp import MonoidInterpretation, interpret_marked
from .split import Split, SplitError, gap
from .tree import LabelledTree

MARKS = ("M", "S", "D")

GAP_CLAUSES = ("tree-embedding", "root-gap", "edge-gap", "node-label")
MARKED_CLAUSES = GAP_CLAUSES + ("root", "leaves", "marking", "local-products",
                                "neighbourhood-products", "gluing")


class GapError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class MarkedNestedTree:
    tree: LabelledTree
    split: Split
    marking: tuple
    node_label: Optional[tuple] = None
    order: Optional[LabelOrder] = None

    def __post_init__(self):
        object.__setattr__(self, "marking", tuple(self.marking))
        if len(self.split) != self.tree.n:
            raise SplitError("split does not cover the tree")
        if len(self.marking) != self.tree.n:
            raise GapError("one mark per node required")
        for x, r in enumerate(self.marking):
            if r not in MARKS:
                raise GapError(f"mark {r!r} at node {x} is not one of M, S, D")
        if self.node_label is not None:
            object.__setattr__(self, "node_label", tuple(self.node_label))
            if len(self.node_label) != self.tree.n:
                raise GapError("one node label per node required")

    @property
    def height(self) -> int:
        return self.split.height

    def key(self) -> tuple:
        return (self.tree.structure(), self.split.value, self.split.height,
                self.marking, self.node_label)

    def __eq__(self, other):
        if not isinstance(other, MarkedNestedTree):
            return NotImplemented
        return self.tree == other.tree and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self) -> dict:
        out = self.tree.to_json()
        out["split"] = list(self.split.value)
        out["height"] = self.split.height
        out["marking"] = list(self.marking)
        if self.node_label is not None:
            out["node_label"] = list(self.node_label)
        if self.order is not None:
            out["order"] = self.order.to_json()
        return out


@dataclass(frozen=True)
class GapWitness:
    map: dict
    checked_items: tuple = ()


# helpers

def neighbourhood_products(t: LabelledTree, s: Split, height: Optional[int] = None) -> list:
    """Per node, the product from its nearest strict ancestor of each level.

    Entry ``k - 1`` of the tuple for node ``x`` is ``None`` when ``x`` has no
    strict ancestor of level ``k``.
    """
    H = height if height is not None else s.height
    mul = t.monoid.table
    out = [None] * t.n
    out[0] = (None,) * H
    for x in t.nodes():
        for c in t.children(x):
            a = t.edge_label[c]
            row = []
            for k in range(1, H + 1):
                if s.value[x] == k:
                    row.append(a)
                else:
                    p = out[x][k - 1]
                    row.append(None if p is None else mul[p][a])
            out[c] = tuple(row)
    return out


def _ancestor_pairs(t: LabelledTree):
    for x in t.nodes():
        for y in t.subtree_nodes(x):
            if y != x:
                yield x, y


def max_nondummy_chain(m: MarkedNestedTree) -> int:
    t = m.tree
    run = [0] * t.n
    for x in t.nodes():
        if m.marking[x] == "D":
            run[x] = 0
        else:
            p = t.parent[x]
            run[x] = 1 + (run[p] if p is not None else 0)
    return max(run) if run else 0


def is_L_bounded(m: MarkedNestedTree, L: int) -> bool:
    """Every downward path of non-dummy nodes has at most ``L`` nodes."""
    if L < 0:
        raise GapError("L must be non-negative")
    return max_nondummy_chain(m) <= L


def is_well_marked(m: MarkedNestedTree, strict_z3: bool = False) -> Verdict:
    """Scan every marked pair for the separation pattern.

    For marked ``x`` above marked ``y`` and a level-``k`` node ``z1``
    between them with everything from ``x`` to ``z1`` above ``k`` and
    everything from ``z1`` to ``y`` at least ``k``, the tree must have
    ``z1`` marked and a later level-``k`` node ``z2`` (marked or
    separating) with some ``z3`` closing the pattern. ``strict_z3``
    demands a gap above ``k`` between ``z3`` and ``y`` instead of at least
    ``k``. Both readings accept the same trees, since the last level-``k``
    node can always serve as ``z3``; the flag exists so that both can be
    checked against each other.
    """
    t, s, rho = m.tree, m.split, m.marking
    if rho[0] != "M":
        return Verdict.fail("root", (0,))
    marked = [x for x in t.nodes() if rho[x] == "M"]
    first = _first_marked_below(t, rho)
    for z in t.nodes():
        if rho[z] != "M" and not t.is_leaf(z):
            a, b = first[t.left[z]], first[t.right[z]]
            if a is not None and b is not None:
                return Verdict.fail("lca-closed", (a, b, z))
    N1 = s.height + 1
    for x in marked:
        for y in marked:
            if not t.is_strict_ancestor(x, y):
                continue
            inner = t.path(x, y)[1:-1]
            vals = [s.value[z] for z in inner]
            # prefix[i]: least level strictly between x and inner[i]
            prefix = [N1] * len(inner)
            for i in range(1, len(inner)):
                prefix[i] = min(prefix[i - 1], vals[i - 1])
            suffix = [N1] * len(inner)
            for i in range(len(inner) - 2, -1, -1):
                suffix[i] = min(suffix[i + 1], vals[i + 1])
            for i, z1 in enumerate(inner):
                k = vals[i]
                if not (prefix[i] > k and suffix[i] >= k):
                    continue
                if rho[z1] != "M":
                    return Verdict.fail("pattern", (x, z1, y))
                if not _pattern_closes(t, s, rho, z1, y, k, strict_z3):
                    return Verdict.fail("pattern", (x, z1, y))
    return PASS


def _first_marked_below(t, rho) -> list:
    """Lowest-id marked node in each subtree, or ``None``."""
    first = [None] * t.n
    for x in range(t.n - 1, -1, -1):
        if rho[x] == "M":
            first[x] = x
        elif not t.is_leaf(x):
            a, b = first[t.left[x]], first[t.right[x]]
            first[x] = a if a is not None else b
    return first


def _pattern_closes(t, s, rho, z1, y, k, strict_z3) -> bool:
    tail = t.path(z1, y)[1:]
    for a, z2 in enumerate(tail):
        if s.value[z2] != k or rho[z2] not in ("M", "S") or not gap(t, s, z1, z2) > k:
            continue
        for z3 in tail[a:]:
            if s.value[z3] != k or not gap(t, s, z2, z3) >= k:
                continue
            g = gap(t, s, z3, y)
            if (g > k) if strict_z3 else (g >= k):
                return True
    return False


# checking explicit maps

def _default_leq(a, b) -> bool:
    return a == b


def check_gap(t1: LabelledTree, s1: Split, t2: LabelledTree, s2: Split, h: dict,
              labels1: Optional[Sequence] = None, labels2: Optional[Sequence] = None,
              leq: Optional[Callable] = None) -> Verdict:
    """Check the plain gap-embedding clauses for an explicit map."""
    for name, v in _gap_clauses(t1, s1, t2, s2, h, labels1, labels2, leq):
        if not v:
            return Verdict.fail(name, v.witness)
    return PASS


def _gap_clauses(t1, s1, t2, s2, h, labels1, labels2, leq):
    yield "tree-embedding", _tree_embedding(t1, t2, h)
    yield "root-gap", _root_gap(t1, s1, t2, s2, h)
    yield "edge-gap", _edge_gap(t1, s1, t2, s2, h)
    yield "node-label", _node_label(t1, h, labels1, labels2, leq)


def _tree_embedding(t1, t2, h) -> Verdict:
    if set(h) != set(t1.nodes()):
        return Verdict.fail("tree-embedding", "map is not total")
    if any(not (isinstance(v, int) and 0 <= v < t2.n) for v in h.values()):
        return Verdict.fail("tree-embedding", "image outside the target")
    if len(set(h.values())) != t1.n:
        return Verdict.fail("tree-embedding", "map is not injective")
    for x in t1.nodes():
        for y in t1.nodes():
            if y <= x:
                continue
            z = t1.lca(x, y)
            if t2.lca(h[x], h[y]) != h[z]:
                return Verdict.fail("tree-embedding", (x, y))
            if t1.is_ancestor(x, y) != t2.is_ancestor(h[x], h[y]):
                return Verdict.fail("tree-embedding", (x, y))
            if t1.before(x, y) and not t2.before(h[x], h[y]):
                return Verdict.fail("tree-embedding", (x, y))
    return PASS


def _root_gap(t1, s1, t2, s2, h) -> Verdict:
    # a map onto the root meets no node at all, which counts as unbounded
    if h[0] != 0 and gap(t2, s2, 0, h[0]) < s1.value[0]:
        return Verdict.fail("root-gap", (0,))
    return PASS


def _edge_gap(t1, s1, t2, s2, h) -> Verdict:
    for y in range(1, t1.n):
        x = t1.parent[y]
        if gap(t2, s2, h[x], h[y]) < s1.value[y]:
            return Verdict.fail("edge-gap", (x, y))
    return PASS


def _node_label(t1, h, labels1, labels2, leq) -> Verdict:
    if labels1 is None:
        return PASS
    leq = leq or _default_leq
    for x in t1.nodes():
        if not leq(labels1[x], labels2[h[x]]):
            return Verdict.fail("node-label", (x,))
    return PASS


def _order_leq(order):
    if order is None:
        return None
    return order.leq


def marked_clauses(m1: MarkedNestedTree, m2: MarkedNestedTree, h: dict) -> dict:
    """Evaluate every clause of the marked embedding separately."""
    t1, t2 = m1.tree, m2.tree
    out = {"tree-embedding": _tree_embedding(t1, t2, h)}
    if not out["tree-embedding"]:
        # the remaining clauses assume a map that is a tree embedding
        for name in MARKED_CLAUSES[1:]:
            out[name] = Verdict.fail(name, "not a tree embedding")
        return out
    out.update(_gap_clauses(t1, m1.split, t2, m2.split, h, m1.node_label, m2.node_label,
                            _order_leq(m1.order or m2.order)))
    out["root"] = PASS if h[0] == 0 else Verdict.fail("root", (0,))
    bad = next((x for x in t1.leaves() if not t2.is_leaf(h[x])), None)
    out["leaves"] = PASS if bad is None else Verdict.fail("leaves", (bad,))
    bad = next((x for x in t1.nodes() if m1.marking[x] != m2.marking[h[x]]), None)
    out["marking"] = PASS if bad is None else Verdict.fail("marking", (bad,))
    out["local-products"] = _local_products(t1, t2, h)
    H = max(m1.height, m2.height)
    nb1 = neighbourhood_products(t1, m1.split, H)
    nb2 = neighbourhood_products(t2, m2.split, H)
    bad = next((x for x in t1.nodes() if nb1[x] != nb2[h[x]]), None)
    out["neighbourhood-products"] = (PASS if bad is None
                                     else Verdict.fail("neighbourhood-products", (bad,)))
    bad = next((y for y in range(1, t1.n)
                if m1.marking[y] in ("M", "S") and t2.parent[h[y]] != h[t1.parent[y]]), None)
    out["gluing"] = PASS if bad is None else Verdict.fail("gluing", (t1.parent[bad], bad))
    return out


def _local_products(t1, t2, h) -> Verdict:
    for x in t1.nodes():
        if t1.is_leaf(x):
            continue
        u = h[x]
        if t2.is_leaf(u):
            return Verdict.fail("local-products", (x,))
        if (t1.edge_label[t1.left[x]] != t2.edge_label[t2.left[u]]
                or t1.edge_label[t1.right[x]] != t2.edge_label[t2.right[u]]):
            return Verdict.fail("local-products", (x,))
    return PASS


def check_marked_gap(m1: MarkedNestedTree, m2: MarkedNestedTree, h: dict) -> Verdict:
    """First failing clause of the marked gap-embedding, in a fixed order."""
    clauses = marked_clauses(m1, m2, h)
    for name in MARKED_CLAUSES:
        if not clauses[name]:
            return clauses[name]
    return PASS


# search

class _Embedder:
    """Memoized search for gap-embeddings.

    ``fits(x, u)`` decides whether the subtree at ``x`` maps onto a subtree
    with ``x`` sent to ``u``. Children of ``x`` must land in the subtree of
    the same-side child of ``u``, which is what makes the map a tree
    embedding. Candidates are tried in preorder, so the witness found is
    the one choosing the lowest node id at every step.
    """

    def __init__(self, t1, s1, t2, s2, node_ok, glued, deadline):
        self.t1, self.s1, self.t2, self.s2 = t1, s1, t2, s2
        self.node_ok = node_ok
        self.glued = glued
        self.dl = deadline
        self.memo = {}
        self.reach = {}

    def below(self, c):
        """Nodes of the subtree at ``c`` with their gap from ``parent(c)``."""
        if c in self.reach:
            return self.reach[c]
        t2, s2 = self.t2, self.s2
        top = s2.height + 1
        g = {c: top}
        out = []
        for v in t2.subtree_nodes(c):
            if v != c:
                p = t2.parent[v]
                g[v] = min(g[p], s2.value[p])
            out.append((v, g[v]))
        self.reach[c] = out
        return out

    def fits(self, x, u):
        key = (x, u)
        if key in self.memo:
            return self.memo[key]
        self.dl.check()
        t1, t2 = self.t1, self.t2
        result = None
        if self.node_ok(x, u):
            if t1.is_leaf(x):
                result = {x: u}
            elif not t2.is_leaf(u):
                result = {x: u}
                for y, c in ((t1.left[x], t2.left[u]), (t1.right[x], t2.right[u])):
                    sub = self.child(y, c)
                    if sub is None:
                        result = None
                        break
                    result.update(sub)
        self.memo[key] = result
        return result

    def child(self, y, c):
        need = self.s1.value[y]
        if self.glued(y):
            return self.fits(y, c)
        for v, g in self.below(c):
            if g >= need:
                sub = self.fits(y, v)
                if sub is not None:
                    return sub
        return None


def search_gap(t1: LabelledTree, s1: Split, t2: LabelledTree, s2: Split,
               labels1=None, labels2=None, leq=None, deadline=None) -> Optional[dict]:
    """Some plain gap-embedding, or ``None`` after a complete search."""
    leq = leq or _default_leq
    dl = Deadline.of(deadline)

    def node_ok(x, u):
        return labels1 is None or leq(labels1[x], labels2[u])

    emb = _Embedder(t1, s1, t2, s2, node_ok, lambda y: False, dl)
    root_need = s1.value[0]
    top = s2.height + 1
    gaps = {0: top}
    for u in t2.nodes():
        if u != 0:
            p = t2.parent[u]
            gaps[u] = top if p == 0 else min(gaps[p], s2.value[p])
        if u != 0 and gaps[u] < root_need:
            continue
        found = emb.fits(0, u)
        if found is not None:
            return dict(sorted(found.items()))
    return None


def search_marked_gap(m1: MarkedNestedTree, m2: MarkedNestedTree,
                      deadline=None) -> Optional[GapWitness]:
    """Some marked gap-embedding, or ``None`` after a complete search.

    Cheap per-node filters (marking, leaf status, child edge labels,
    nearest-ancestor products, node labels) run before any descent.
    """
    t1, t2 = m1.tree, m2.tree
    dl = Deadline.of(deadline)
    H = max(m1.height, m2.height)
    nb1 = neighbourhood_products(t1, m1.split, H)
    nb2 = neighbourhood_products(t2, m2.split, H)
    leq = _order_leq(m1.order or m2.order) or _default_leq

    def node_ok(x, u):
        if m1.marking[x] != m2.marking[u]:
            return False
        if t1.is_leaf(x) != t2.is_leaf(u) and t1.is_leaf(x):
            return False
        if not t1.is_leaf(x):
            if t2.is_leaf(u):
                return False
            if (t1.edge_label[t1.left[x]] != t2.edge_label[t2.left[u]]
                    or t1.edge_label[t1.right[x]] != t2.edge_label[t2.right[u]]):
                return False
        if nb1[x] != nb2[u]:
            return False
        if m1.node_label is not None and not leq(m1.node_label[x], m2.node_label[u]):
            return False
        return True

    def glued(y):
        return m1.marking[y] in ("M", "S")

    emb = _Embedder(t1, m1.split, t2, m2.split, node_ok, glued, dl)
    found = emb.fits(0, 0)
    if found is None:
        return None
    h = dict(sorted(found.items()))
    v = check_marked_gap(m1, m2, h)
    if not v:
        raise AssertionError(f"search produced an invalid witness: {v.reason} at {v.witness}")
    return GapWitness(h, MARKED_CLAUSES)


def compose(w1: GapWitness, w2: GapWitness) -> dict:
    return {x: w2.map[u] for x, u in w1.map.items()}


# consequences

def check_gap_consequence(m1: MarkedNestedTree, m2: MarkedNestedTree, w: GapWitness) -> Verdict:
    """Levels seen on images never drop below the level they skip to."""
    t1, s1, t2, s2, h = m1.tree, m1.split, m2.tree, m2.split, w.map
    for u, v in _ancestor_pairs(t1):
        k = s1.value[v]
        if gap(t1, s1, u, v) > k and gap(t2, s2, h[u], h[v]) < k:
            return Verdict.fail("gap-consequence", (u, v))
    return PASS


def check_interp_consequence(i: MonoidInterpretation, m1: MarkedNestedTree,
                             m2: MarkedNestedTree, w: GapWitness) -> Verdict:
    """Products between marked nodes survive, hence the marked-leaf graph embeds."""
    t1, t2, h = m1.tree, m2.tree, w.map
    marked = [x for x in t1.nodes() if m1.marking[x] == "M"]
    for x in marked:
        for y in marked:
            if t1.is_strict_ancestor(x, y) and t1.tlbl(x, y) != t2.tlbl(h[x], h[y]):
                return Verdict.fail("products", (x, y))
    g1 = interpret_marked(i, m1)
    g2 = interpret_marked(i, m2)
    idx2 = {x: k for k, x in enumerate(x for x in t2.leaves_in_order() if m2.marking[x] == "M")}
    leaves1 = [x for x in t1.leaves_in_order() if m1.marking[x] == "M"]
    f = {}
    for k, x in enumerate(leaves1):
        if h[x] not in idx2:
            return Verdict.fail("leaf-image", (x,))
        f[k] = idx2[h[x]]
    if not verify_embedding(g1, g2, f):
        return Verdict.fail("induced-subgraph", f)
    return PASS


# encoding into plain node-labelled split trees

@dataclass(frozen=True, eq=False)
class EncodedTree:
    tree: LabelledTree
    split: Split
    labels: tuple
    order: Optional[LabelOrder] = field(default=None)

    def leq(self, a, b) -> bool:
        if a[:-1] != b[:-1]:
            return False
        if a[-1] is None or b[-1] is None:
            return a[-1] == b[-1]
        return a[-1] == b[-1] if self.order is None else self.order.leq(a[-1], b[-1])


def encode_dershowitz(m: MarkedNestedTree, L: int) -> EncodedTree:
    """Fold the marked clauses into node labels and the gluing into the split.

    Each node label is the tuple (nearest-ancestor products per level,
    left child edge label, right child edge label, root flag, leaf flag,
    mark, original label), with ``None`` for an absent value. Non-dummy
    nodes get level ``N + 1 + i`` where ``i`` is their position in their
    maximal run of non-dummy nodes; dummy nodes keep their level. The new
    height is ``N + 1 + L``.
    """
    if not is_L_bounded(m, L):
        raise GapError(f"tree is not {L}-bounded")
    t, s = m.tree, m.split
    N = s.height
    nb = neighbourhood_products(t, s)
    labels = []
    values = []
    run = [0] * t.n
    for x in t.nodes():
        if m.marking[x] == "D":
            values.append(s.value[x])
        else:
            p = t.parent[x]
            run[x] = 1 + (run[p] if p is not None else 0)
            values.append(N + 1 + run[x])
        if t.is_leaf(x):
            lc = rc = None
        else:
            lc, rc = t.edge_label[t.left[x]], t.edge_label[t.right[x]]
        orig = m.node_label[x] if m.node_label is not None else None
        labels.append((nb[x], lc, rc, x == 0, t.is_leaf(x), m.marking[x], orig))
    return EncodedTree(t, Split(N + 1 + L, tuple(values)), tuple(labels), m.order)


def search_encoded(e1: EncodedTree, e2: EncodedTree, deadline=None) -> Optional[dict]:
    return search_gap(e1.tree, e1.split, e2.tree, e2.split, e1.labels, e2.labels,
                      e1.leq, deadline)


def pullback_report(m1: MarkedNestedTree, m2: MarkedNestedTree, h: dict) -> dict:
    """Clause-by-clause verdicts of an encoded embedding read on the originals."""
    return marked_clauses(m1, m2, h)


# shapes used in tests, scripts and corpus generation

def branch_tree(monoid, length: int, label: int) -> LabelledTree:
    """A spine of ``length`` nodes, each internal spine node with a right leaf."""
    from .tree import single_node
    if length == 1:
        return single_node(monoid)
    # the spine runs down the left side; right children are leaves
    nested = {}
    for _ in range(length - 1):
        nested = {"l": label, "left": nested, "r": label, "right": {}}
    return LabelledTree.from_nested(nested, monoid)


def gluing_branch(monoid, length: int, label: int) -> MarkedNestedTree:
    """All-marked branch of ``length`` spine nodes, every node at level 1."""
    t = branch_tree(monoid, length, label)
    return MarkedNestedTree(t, Split(1, (1,) * t.n), ("M",) * t.n)
