"""Boughs: runs of same-level split neighbours and the trees hanging off them.

A bough of level ``k`` is given by a backbone ``b0, ..., bn`` of nodes on
one branch, each at level ``k``, consecutive ones separated only by
levels above ``k``. The bough itself is every node below ``b0`` that is
not strictly below ``bn``. Cutting it out leaves a context: the tree
above ``b0`` with a hole where ``b0`` was, plus the two subtrees of ``bn``
and the labels of the edges leading to them.

Here the last backbone node is also required to be at level ``k`` and to
be internal, so that it is a genuine member of the neighbourhood and the
context always has two subtrees to hang below it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ._util import Deadline, Verdict, PASS
from .graph import verify_embedding
from .interp import MonoidInterpretation, interpret
from .split import Split, SplitError, gap, k_classes, validate_ramseyan
from .tree import LabelledTree, single_node


class BoughError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Bough:
    """A backbone inside ``tree``; ``tree`` is either a host or a standalone bough."""

    tree: LabelledTree
    split: Split
    backbone: tuple
    level: int

    def __post_init__(self):
        bb = tuple(self.backbone)
        object.__setattr__(self, "backbone", bb)
        t, s, k = self.tree, self.split, self.level
        if len(bb) < 2:
            raise BoughError("a backbone has at least two nodes")
        for i, b in enumerate(bb):
            if s.value[b] != k:
                raise BoughError(f"backbone node {b} has level {s.value[b]}, not {k}")
            if i + 1 < len(bb):
                c = bb[i + 1]
                if not t.is_strict_ancestor(b, c):
                    raise BoughError(f"backbone nodes {b} and {c} are not on one branch")
                if not gap(t, s, b, c) > k:
                    raise BoughError(f"backbone nodes {b} and {c} are not consecutive neighbours")

    @property
    def dimension(self) -> int:
        return len(self.backbone) - 1

    @property
    def first(self) -> int:
        return self.backbone[0]

    @property
    def last(self) -> int:
        return self.backbone[-1]

    def first_idempotent(self) -> int:
        return self.tree.tlbl(self.backbone[0], self.backbone[1])

    def is_standalone(self) -> bool:
        return self.first == 0 and self.tree.is_leaf(self.last)

    def nodes(self) -> list:
        """Nodes of the bough inside its tree, the last backbone node included."""
        t = self.tree
        return [x for x in t.subtree_nodes(self.first)
                if x == self.last or not t.is_ancestor(self.last, x)]

    def blocks(self) -> list:
        t, bb = self.tree, self.backbone
        return [[x for x in t.subtree_nodes(bb[i]) if not t.is_ancestor(bb[i + 1], x)]
                for i in range(len(bb) - 1)]

    def block_of(self, x: int) -> int:
        t, bb = self.tree, self.backbone
        for i in range(len(bb) - 1):
            if t.is_ancestor(bb[i], x) and not t.is_ancestor(bb[i + 1], x):
                return i
        raise BoughError(f"node {x} is not in a block of the bough")

    def leaves(self) -> list:
        """Leaves of the blocks, left to right."""
        t = self.tree
        return [x for x in self.nodes() if t.is_leaf(x) and x != self.last]

    def to_json(self) -> dict:
        return {"backbone": list(self.backbone), "level": self.level}


@dataclass(frozen=True, eq=False)
class BoughContext:
    t_root: LabelledTree
    s_root: Split
    hole: int
    t_left: LabelledTree
    s_left: Split
    t_right: LabelledTree
    s_right: Split
    m_left: int
    m_right: int

    def __post_init__(self):
        if not self.t_root.is_leaf(self.hole):
            raise BoughError("the hole must be a leaf of the root tree")
        for t, s in ((self.t_root, self.s_root), (self.t_left, self.s_left),
                     (self.t_right, self.s_right)):
            if len(s) != t.n:
                raise SplitError("context split does not cover its tree")

    def root_product(self) -> int:
        return self.t_root.tlbl(0, self.hole)


@dataclass(frozen=True)
class BoughType:
    root_part: int
    left_part: int
    top_part: int
    right_part: int


@dataclass(frozen=True)
class Assembly:
    """A tree built from a context and a bough, with the origin of every node.

    ``origin[x]`` is ``(part, id)`` with part one of ``"root"``, ``"bough"``,
    ``"left"``, ``"right"`` and ``id`` the node in that part.
    """

    tree: LabelledTree
    split: Split
    origin: tuple
    bough: Bough

    def context_leaves(self) -> list:
        return [x for x in self.tree.leaves_in_order() if self.origin[x][0] != "bough"]

    def locate(self, part: str, node: int) -> int:
        return self.origin.index((part, node))


def enumerate_boughs(t: LabelledTree, s: Split, k: int, min_dim: int = 1) -> list:
    """Maximal backbones of level ``k`` with dimension at least ``min_dim``.

    Chains are the neighbourhood classes read along each branch, cut before
    a final leaf. Chains that are a proper prefix of another are dropped.
    """
    chains = set()
    for leaf in t.leaves_in_order():
        for cls in k_classes(t, s, leaf, k):
            if t.is_leaf(cls[-1]):
                cls = cls[:-1]
            if len(cls) - 1 >= max(1, min_dim):
                chains.add(tuple(cls))
    maximal = [c for c in chains
               if not any(len(d) > len(c) and d[:len(c)] == c for d in chains)]
    return [Bough(t, s, c, k) for c in sorted(maximal)]


def all_boughs(t: LabelledTree, s: Split, min_dim: int = 1) -> list:
    """Every backbone segment at every level, maximal or not."""
    out = []
    seen = set()
    for k in range(1, s.height + 1):
        for b in enumerate_boughs(t, s, k, 1):
            bb = b.backbone
            for i in range(len(bb)):
                for j in range(i + max(1, min_dim), len(bb)):
                    seg = bb[i:j + 1]
                    if seg not in seen:
                        seen.add(seg)
                        out.append(Bough(t, s, seg, k))
    return out


def _extract(t: LabelledTree, s: Split, top: int, stop: Optional[int] = None,
             hole: Optional[int] = None):
    """Copy the subtree at ``top``; ``stop`` becomes a leaf, ``hole`` is cut off.

    Returns the nested form with ``tag`` set to original node ids, and the
    split values in the copy's preorder.
    """
    values = []

    def rec(x):
        values.append(s.value[x])
        out = {"tag": x}
        if x == stop or x == hole or t.is_leaf(x):
            return out
        l, r = t.left[x], t.right[x]
        out.update({"l": t.edge_label[l], "left": rec(l), "r": t.edge_label[r], "right": rec(r)})
        return out

    return rec(top), values


def _build(nested, monoid, values, height):
    tree = LabelledTree.from_nested(nested, monoid)
    return tree, Split(height, tuple(values))


def decompose(t: LabelledTree, s: Split, b: Bough):
    """Split ``t`` into a context, a standalone bough and the blocks.

    The blocks are returned as lists of node ids of ``t``.
    """
    if b.tree is not t and b.tree != t:
        raise BoughError("bough does not live in this tree")
    bb = b.backbone
    if t.is_leaf(b.last):
        raise BoughError("the last backbone node must be internal")
    m = t.monoid
    H = s.height
    nested, vals = _extract(t, s, 0, hole=bb[0])
    t_root, s_root = _build(nested, m, vals, H)
    hole = t_root.tags.index(bb[0]) if t_root.tags else 0
    l, r = t.left[b.last], t.right[b.last]
    nested, vals = _extract(t, s, l)
    t_left, s_left = _build(nested, m, vals, H)
    nested, vals = _extract(t, s, r)
    t_right, s_right = _build(nested, m, vals, H)
    ctx = BoughContext(t_root, s_root, hole, t_left, s_left, t_right, s_right,
                       t.edge_label[l], t.edge_label[r])
    nested, vals = _extract(t, s, bb[0], stop=b.last)
    t_b, s_b = _build(nested, m, vals, H)
    pos = {x: i for i, x in enumerate(t_b.tags)}
    standalone = Bough(t_b, s_b, tuple(pos[x] for x in bb), b.level)
    return ctx, standalone, b.blocks()


def assemble(c: BoughContext, b: Bough) -> Assembly:
    """Plug a standalone bough into a context, keeping node origins."""
    if not b.is_standalone():
        raise BoughError("substitution needs a standalone bough")
    values = {}

    def copy(t, s, part, x, below=None):
        values[(part, x)] = s.value[x]
        out = {"tag": (part, x)}
        if below is not None and x == below:
            out.update({"l": c.m_left, "left": copy(c.t_left, c.s_left, "left", 0),
                        "r": c.m_right, "right": copy(c.t_right, c.s_right, "right", 0)})
            return out
        if part == "root" and x == c.hole:
            return copy(b.tree, b.split, "bough", 0, b.last)
        if not t.is_leaf(x):
            lx, rx = t.left[x], t.right[x]
            out.update({"l": t.edge_label[lx], "left": copy(t, s, part, lx, below),
                        "r": t.edge_label[rx], "right": copy(t, s, part, rx, below)})
        return out

    nested = copy(c.t_root, c.s_root, "root", 0)
    tree = LabelledTree.from_nested(nested, c.t_root.monoid)
    origin = tree.tags
    height = max(c.s_root.height, b.split.height, c.s_left.height, c.s_right.height)
    split = Split(height, tuple(values[o] for o in origin))
    host_bb = tuple(origin.index(("bough", x)) for x in b.backbone)
    plain = LabelledTree(tree.monoid, tree.left, tree.right, tree.edge_label)
    return Assembly(plain, split, tuple(origin), Bough(plain, split, host_bb, b.level))


def substitute(c: BoughContext, b: Bough):
    """The tree ``C[B]`` and its split."""
    a = assemble(c, b)
    return a.tree, a.split


def bough_type(b: Bough, leaf: int) -> BoughType:
    """The four products locating ``leaf`` relative to the backbone of its host."""
    t, bb = b.tree, b.backbone
    if leaf not in b.leaves():
        raise BoughError(f"node {leaf} is not a leaf of a block of the bough")
    top = t.lca(leaf, b.last)
    lo = max((z for z in bb if t.is_ancestor(z, top)), key=lambda z: t.depth[z])
    hi = min((z for z in bb if t.is_ancestor(top, z)), key=lambda z: t.depth[z])
    return BoughType(t.tlbl(0, lo), t.tlbl(lo, top), t.tlbl(top, leaf), t.tlbl(top, hi))


def hangs_left(b: Bough, leaf: int) -> bool:
    """Whether ``leaf`` comes before the last backbone node in sibling order."""
    return b.tree.before(leaf, b.last)


def edge_from_types(i: MonoidInterpretation, b: Bough, x: int, y: int) -> bool:
    """Adjacency of two leaves in different blocks, from their types alone.

    Besides the two bough types this uses the backbone product between
    the blocks and which side of the backbone the upper leaf hangs on.
    """
    t = b.tree
    mul = t.monoid.table
    bx, by = b.block_of(x), b.block_of(y)
    if bx == by:
        raise BoughError("types do not determine edges inside one block")
    if bx > by:
        x, y = y, x
    tx, ty = bough_type(b, x), bough_type(b, y)
    hi_x = _right_end(b, x)
    lo_y = _left_end(b, y)
    between = t.tlbl(hi_x, lo_y)
    root = mul[tx.root_part][tx.left_part]
    down_x = tx.top_part
    down_y = mul[mul[mul[tx.right_part][between]][ty.left_part]][ty.top_part]
    if hangs_left(b, x):
        return i.accepts(root, down_x, down_y)
    return i.accepts(root, down_y, down_x)


def _left_end(b, leaf):
    t = b.tree
    top = t.lca(leaf, b.last)
    return max((z for z in b.backbone if t.is_ancestor(z, top)), key=lambda z: t.depth[z])


def _right_end(b, leaf):
    t = b.tree
    top = t.lca(leaf, b.last)
    return min((z for z in b.backbone if t.is_ancestor(top, z)), key=lambda z: t.depth[z])


def power_bough(b: Bough, copies: int) -> Bough:
    """Glue ``copies`` copies of a standalone bough end to start."""
    if copies < 1:
        raise BoughError("copies must be at least 1")
    if not b.is_standalone():
        raise BoughError("powers are taken of standalone boughs")
    if copies == 1:
        return b
    t, s = b.tree, b.split
    values = []

    def copy(x, j):
        if x == b.last and j + 1 < copies:
            return copy(0, j + 1)
        values.append(s.value[x])
        out = {"tag": (j, x)}
        if not t.is_leaf(x):
            l, r = t.left[x], t.right[x]
            out.update({"l": t.edge_label[l], "left": copy(l, j),
                        "r": t.edge_label[r], "right": copy(r, j)})
        return out

    nested = copy(0, 0)
    tree = LabelledTree.from_nested(nested, t.monoid)
    tags = tree.tags
    bb = [tags.index((0, b.backbone[0]))]
    for j in range(copies):
        for x in b.backbone[1:]:
            if x == b.last and j + 1 < copies:
                bb.append(tags.index((j + 1, 0)))
            else:
                bb.append(tags.index((j, x)))
    return Bough(tree, Split(s.height, tuple(values)), tuple(bb), b.level)


def copy_of(power: Bough, copy: int, x: int) -> int:
    """Node of copy ``copy`` corresponding to node ``x`` of the base bough."""
    return power.tree.tags.index((copy, x))


def compatible_in_context(c: BoughContext, b: Bough, h: Bough) -> bool:
    if b.first_idempotent() != h.first_idempotent():
        return False
    t, s = substitute(c, h)
    return bool(validate_ramseyan(t, s))


def check_bough_replacement(i: MonoidInterpretation, c: BoughContext, b: Bough,
                            h: Bough) -> Verdict:
    """The graph on context leaves is unchanged when ``b`` is replaced by ``h``."""
    a1, a2 = assemble(c, b), assemble(c, h)
    g1, g2 = interpret(i, a1.tree), interpret(i, a2.tree)
    idx1 = {x: k for k, x in enumerate(a1.tree.leaves_in_order())}
    idx2 = {x: k for k, x in enumerate(a2.tree.leaves_in_order())}
    ctx1 = a1.context_leaves()
    ctx2 = [a2.locate(*a1.origin[x]) for x in ctx1]
    for p in range(len(ctx1)):
        for q in range(p + 1, len(ctx1)):
            e1 = g1.adjacent(idx1[ctx1[p]], idx1[ctx1[q]])
            e2 = g2.adjacent(idx2[ctx2[p]], idx2[ctx2[q]])
            if e1 != e2:
                return Verdict.fail("context-subgraph", (a1.origin[ctx1[p]], a1.origin[ctx1[q]]))
    return PASS


@dataclass(frozen=True)
class PerfectCertificate:
    """Side choice per bough leaf and the resulting vertex map into ``C[B^5]``."""

    sides: dict
    leaf_map: dict
    vertex_map: dict


def is_perfect_bough(i: MonoidInterpretation, c: BoughContext, b: Bough,
                     deadline=None) -> Optional[PerfectCertificate]:
    """Search for the five-copy certificate of perfectness.

    Every leaf of ``b`` is sent to its twin in the first or the last of
    five glued copies of ``b``, context leaves stay put, and the three
    middle copies are never used. A choice is kept only when the leaf's
    type is preserved and all edges to already placed leaves and to the
    context agree. Leaves are decided left to right with the first copy
    tried before the last one, so the certificate found is the least in
    that order.
    """
    dl = Deadline.of(deadline)
    five = power_bough(b, 5)
    a1, a5 = assemble(c, b), assemble(c, five)
    g1, g5 = interpret(i, a1.tree), interpret(i, a5.tree)
    idx1 = {x: k for k, x in enumerate(a1.tree.leaves_in_order())}
    idx5 = {x: k for k, x in enumerate(a5.tree.leaves_in_order())}

    ctx = a1.context_leaves()
    fixed = {x: a5.locate(*a1.origin[x]) for x in ctx}
    leaves = a1.bough.leaves()
    options = {}
    for x in leaves:
        base = a1.origin[x][1]
        want = bough_type(a1.bough, x)
        opts = []
        for side, j in (("left", 0), ("right", 4)):
            y = a5.locate("bough", copy_of(five, j, base))
            if bough_type(a5.bough, y) != want:
                continue
            if any(g1.adjacent(idx1[x], idx1[z]) != g5.adjacent(idx5[y], idx5[fz])
                   for z, fz in fixed.items()):
                continue
            opts.append((side, y))
        if not opts:
            return None
        options[x] = opts

    chosen = {}

    def extend(pos):
        dl.check()
        if pos == len(leaves):
            return True
        x = leaves[pos]
        for side, y in options[x]:
            if all(g1.adjacent(idx1[x], idx1[z]) == g5.adjacent(idx5[y], idx5[fz])
                   for z, (_, fz) in chosen.items()):
                chosen[x] = (side, y)
                if extend(pos + 1):
                    return True
                del chosen[x]
        return False

    if not extend(0):
        return None
    node_map = dict(fixed)
    node_map.update({x: y for x, (_, y) in chosen.items()})
    vmap = {idx1[x]: idx5[y] for x, y in node_map.items()}
    if not verify_embedding(g1, g5, vmap):
        raise AssertionError("perfect-bough certificate failed verification")
    return PerfectCertificate({x: s for x, (s, _) in chosen.items()}, node_map, vmap)
