"""Full binary ordered trees whose edges carry monoid elements.

Nodes are numbered in preorder with the root as 0. The edge into a node
``x`` carries ``edge_label[x]``; the root has no incoming edge and stores
``None`` there.

The nested form used for construction and for the JSON file format is a
dict: a leaf is ``{}`` and an internal node is
``{"l": a, "left": {...}, "r": b, "right": {...}}``. Any extra ``"tag"``
key is carried through construction so callers can track nodes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .monoid import FiniteMonoid, Morphism, MonoidError


class TreeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LabelledTree:
    monoid: FiniteMonoid
    left: tuple
    right: tuple
    edge_label: tuple
    tags: tuple = field(default=(), repr=False)

    def __post_init__(self):
        n = len(self.left)
        if n == 0:
            raise TreeError("a tree has at least one node")
        if len(self.right) != n or len(self.edge_label) != n:
            raise TreeError("child and label arrays differ in length")
        parent = [None] * n
        for x in range(n):
            l, r = self.left[x], self.right[x]
            if (l is None) != (r is None):
                raise TreeError(f"full-binary violated at node {x}")
            for c in (l, r):
                if c is None:
                    continue
                if not 0 <= c < n or parent[c] is not None or c == 0:
                    raise TreeError(f"bad child pointer {c} at node {x}")
                parent[c] = x
        depth = [0] * n
        order = []
        stack = [0]
        while stack:
            x = stack.pop()
            order.append(x)
            if self.left[x] is not None:
                depth[self.left[x]] = depth[x] + 1
                depth[self.right[x]] = depth[x] + 1
                stack.append(self.right[x])
                stack.append(self.left[x])
        if order != list(range(n)):
            raise TreeError("nodes must be numbered in preorder from the root")
        if self.edge_label[0] is not None:
            raise TreeError("the root has no incoming edge")
        for x in range(1, n):
            self.monoid._check(self.edge_label[x])
        object.__setattr__(self, "parent", tuple(parent))
        object.__setattr__(self, "depth", tuple(depth))
        size = [1] * n
        for x in range(n - 1, -1, -1):
            if self.left[x] is not None:
                size[x] = 1 + size[self.left[x]] + size[self.right[x]]
        object.__setattr__(self, "_size", tuple(size))

    # structure

    @property
    def n(self) -> int:
        return len(self.left)

    @property
    def root(self) -> int:
        return 0

    def nodes(self) -> range:
        return range(self.n)

    def is_leaf(self, x: int) -> bool:
        return self.left[x] is None

    def children(self, x: int) -> tuple:
        if self.left[x] is None:
            return ()
        return (self.left[x], self.right[x])

    def leaves(self) -> list:
        return [x for x in self.nodes() if self.left[x] is None]

    def leaves_in_order(self) -> list:
        # preorder numbering already lists leaves left to right
        return self.leaves()

    def subtree_nodes(self, x: int) -> range:
        """Preorder makes every subtree a contiguous id range."""
        return range(x, x + self._size[x])

    def is_ancestor(self, x: int, y: int) -> bool:
        """``x`` is an ancestor of ``y`` or equal to it."""
        return x <= y < x + self._size[x]

    def is_strict_ancestor(self, x: int, y: int) -> bool:
        return x != y and self.is_ancestor(x, y)

    def _check_node(self, x) -> None:
        if not isinstance(x, int) or not 0 <= x < self.n:
            raise TreeError(f"invalid node {x!r}")

    def lca(self, x: int, y: int) -> int:
        self._check_node(x)
        self._check_node(y)
        d = self.depth
        p = self.parent
        while d[x] > d[y]:
            x = p[x]
        while d[y] > d[x]:
            y = p[y]
        while x != y:
            x, y = p[x], p[y]
        return x

    def path(self, x: int, y: int) -> list:
        """Nodes from ``x`` down to ``y`` inclusive; ``x`` must be an ancestor."""
        if not self.is_ancestor(x, y):
            raise TreeError(f"{x} is not an ancestor of {y}")
        out = [y]
        while y != x:
            y = self.parent[y]
            out.append(y)
        out.reverse()
        return out

    def ancestors(self, y: int) -> list:
        """Strict ancestors of ``y``, nearest first."""
        out = []
        while y != 0:
            y = self.parent[y]
            out.append(y)
        return out

    def before(self, x: int, y: int) -> bool:
        """Sibling order: ``x`` lies in the left part below ``lca(x, y)``.

        Only meaningful for incomparable nodes. For those, preorder
        numbering agrees with the sibling order.
        """
        return x < y and not self.is_ancestor(x, y)

    def is_left_child(self, x: int) -> bool:
        p = self.parent[x]
        return p is not None and self.left[p] == x

    # products

    def tlbl(self, x: int, y: int) -> int:
        """Product of edge labels on the downward path from ``x`` to ``y``."""
        self._check_node(x)
        self._check_node(y)
        if not self.is_ancestor(x, y):
            raise TreeError(f"{x} is not an ancestor of {y}")
        t = self.monoid.table
        acc = self.monoid.identity
        # accumulate bottom-up as a right-to-left product
        while y != x:
            acc = t[self.edge_label[y]][acc]
            y = self.parent[y]
        return acc

    # conversions

    def nested(self, x: int = 0, tags: bool = False) -> dict:
        out = {}
        if tags and self.tags:
            out["tag"] = self.tags[x]
        if self.left[x] is not None:
            l, r = self.left[x], self.right[x]
            out.update({"l": self.edge_label[l], "left": self.nested(l, tags),
                        "r": self.edge_label[r], "right": self.nested(r, tags)})
        return out

    @classmethod
    def from_nested(cls, nested: dict, monoid: FiniteMonoid,
                    morphism: Optional[Morphism] = None) -> "LabelledTree":
        """Build from the nested dict form.

        With a morphism, edge labels are alphabet symbols mapped through it;
        otherwise they are element indices or element names.
        """
        left, right, labels, tags = [], [], [], []

        def conv(a):
            if morphism is not None:
                return morphism.symbol(a)
            try:
                return monoid.index(a)
            except MonoidError as exc:
                raise TreeError(str(exc)) from None

        # iterative preorder so deep caterpillars do not hit the recursion limit
        stack = [(nested, None, None, None)]
        while stack:
            node, par, side, lab = stack.pop()
            x = len(left)
            left.append(None)
            right.append(None)
            labels.append(lab)
            tags.append(node.get("tag"))
            if par is not None:
                if side == "l":
                    left[par] = x
                else:
                    right[par] = x
            has_l, has_r = "left" in node, "right" in node
            if has_l != has_r:
                raise TreeError(f"full-binary violated at node {x}")
            if has_l:
                if "l" not in node or "r" not in node:
                    raise TreeError(f"missing edge label at node {x}")
                stack.append((node["right"], x, "r", conv(node["r"])))
                stack.append((node["left"], x, "l", conv(node["l"])))
        keep_tags = any(t is not None for t in tags)
        return cls(monoid, tuple(left), tuple(right), tuple(labels),
                   tuple(tags) if keep_tags else ())

    def structure(self) -> tuple:
        """Hashable shape-and-labels key; equal keys mean equal trees."""
        return (self.left, self.right, self.edge_label)

    def __eq__(self, other):
        if not isinstance(other, LabelledTree):
            return NotImplemented
        return self.monoid == other.monoid and self.structure() == other.structure()

    def __hash__(self):
        return hash(self.structure())

    def to_json(self) -> dict:
        return {"labels": "element", "monoid": self.monoid.to_json(), "root": self.nested()}

    def show(self) -> str:
        """ASCII rendering, one node per line."""
        lines = []
        m = self.monoid

        def rec(x, prefix):
            lab = "" if x == 0 else m.name(self.edge_label[x]) + " "
            kind = "leaf" if self.is_leaf(x) else "node"
            lines.append(f"{prefix}{lab}-> {kind} {x}")
            for c in self.children(x):
                rec(c, prefix + "  ")

        rec(0, "")
        return "\n".join(lines)


def leaf() -> dict:
    return {}


def node(a, left: dict, b, right: dict) -> dict:
    return {"l": a, "left": left, "r": b, "right": right}


def build_linear(cells: Sequence, monoid: FiniteMonoid,
                 morphism: Optional[Morphism] = None) -> LabelledTree:
    """Caterpillar from ``(leaf label, spine label)`` cells.

    Each cell is a spine node with a leaf hanging on the left; the spine
    label labels the edge to the next spine node, and the last cell's spine
    label labels the edge to the final right leaf. ``n`` cells give
    ``n + 1`` leaves.
    """
    if not cells:
        raise TreeError("build_linear needs at least one cell")
    nested = {}
    for a, b in reversed(list(cells)):
        nested = node(a, {}, b, nested)
    return LabelledTree.from_nested(nested, monoid, morphism)


def single_node(monoid: FiniteMonoid) -> LabelledTree:
    return LabelledTree(monoid, (None,), (None,), (None,))
