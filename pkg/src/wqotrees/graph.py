"""Vertex-labelled graphs, label quasi-orders and induced-subgraph embedding.

The embedding search is plain backtracking with forward checking. It is
exact, so it can certify non-embeddability, but it is meant for graphs with
at most a few dozen vertices.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ._util import Deadline


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class LabelOrder:
    """A quasi-order on label names; ``le`` holds index pairs (i, j) with i <= j."""

    labels: tuple
    le: frozenset

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        n = len(labels)
        rel = {(i, i) for i in range(n)}
        for i, j in self.le:
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"order pair ({i}, {j}) out of range")
            rel.add((i, j))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for (a, b) in list(rel):
                for (c, d) in list(rel):
                    if b == c and (a, d) not in rel:
                        rel.add((a, d))
                        changed = True
        object.__setattr__(self, "le", frozenset(rel))
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(labels)})

    @classmethod
    def equality(cls, labels: Sequence) -> "LabelOrder":
        return cls(tuple(labels), frozenset())

    def leq(self, a, b) -> bool:
        """Compare two labels given by name."""
        if a == b:
            return True
        ia, ib = self._index.get(a), self._index.get(b)
        if ia is None or ib is None:
            return False
        return (ia, ib) in self.le

    def to_json(self) -> dict:
        return {"labels": list(self.labels),
                "le": sorted([i, j] for i, j in self.le if i != j)}

    @classmethod
    def from_json(cls, data: dict) -> "LabelOrder":
        return cls(tuple(data["labels"]), frozenset(tuple(p) for p in data.get("le", [])))


@dataclass(frozen=True)
class LabelledGraph:
    """Undirected simple graph on ``0..n-1``.

    ``labels`` lists the label names in use and ``vlabel[v]`` indexes into
    it. Comparison against another graph always goes through label names,
    so two graphs need not share a label list. ``vorder``, when present,
    is a permutation giving the position of each vertex in a linear order.
    """

    n: int
    edges: frozenset
    vlabel: tuple
    labels: tuple = ("",)
    vorder: Optional[tuple] = None

    def __post_init__(self):
        edges = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range")
            edges.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "vlabel", tuple(self.vlabel))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.vlabel) != self.n:
            raise GraphError("one label per vertex required")
        for lab in self.vlabel:
            if not 0 <= lab < len(self.labels):
                raise GraphError(f"label index {lab} out of range")
        if self.vorder is not None:
            order = tuple(self.vorder)
            if sorted(order) != list(range(self.n)):
                raise GraphError("vertex order must be a permutation")
            object.__setattr__(self, "vorder", order)

    @classmethod
    def unlabelled(cls, n: int, edges) -> "LabelledGraph":
        return cls(n, frozenset(edges), (0,) * n)

    @classmethod
    def from_names(cls, names: Sequence, edges, vorder=None) -> "LabelledGraph":
        labels = tuple(sorted(set(names), key=str))
        idx = {a: i for i, a in enumerate(labels)}
        return cls(len(names), frozenset(edges), tuple(idx[a] for a in names), labels, vorder)

    def label(self, v: int):
        return self.labels[self.vlabel[v]]

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbours(self) -> list:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def relabel(self, names: Sequence) -> "LabelledGraph":
        return LabelledGraph.from_names(names, self.edges, self.vorder)

    def induced(self, vertices: Sequence[int]) -> "LabelledGraph":
        """Subgraph induced on ``vertices``, renumbered in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = {(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos}
        return LabelledGraph.from_names([self.label(v) for v in vertices], edges)

    def to_json(self) -> dict:
        out = {"n": self.n, "labels": list(self.labels), "vlabel": list(self.vlabel),
               "edges": sorted([u, v] for u, v in self.edges)}
        if self.vorder is not None:
            out["vorder"] = list(self.vorder)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "LabelledGraph":
        n = int(data["n"])
        labels = tuple(data.get("labels", [""]))
        vlabel = tuple(data.get("vlabel", [0] * n))
        vorder = data.get("vorder")
        return cls(n, frozenset(tuple(e) for e in data.get("edges", [])), vlabel, labels,
                   tuple(vorder) if vorder is not None else None)


@dataclass(frozen=True)
class DirectedGraph:
    n: int
    arcs: frozenset
    vlabel: tuple

    def __post_init__(self):
        arcs = frozenset((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if u == v:
                raise GraphError(f"self-arc on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"arc ({u}, {v}) out of range")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "vlabel", tuple(self.vlabel))

    def successors(self) -> list:
        out = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            out[u].append(v)
        return out

    def predecessors(self) -> list:
        out = [[] for _ in range(self.n)]
        for u, v in sorted(self.arcs):
            out[v].append(u)
        return out


def _default_order(small: LabelledGraph, big: LabelledGraph) -> LabelOrder:
    return LabelOrder.equality(sorted(set(small.labels) | set(big.labels), key=str))


def embed(small: LabelledGraph, big: LabelledGraph, ord: Optional[LabelOrder] = None,
          respect_vertex_order: bool = False, deadline=None) -> Optional[dict]:
    """Find an induced, label-monotone injective map from ``small`` into ``big``.

    Returns a dict ``{u: f(u)}`` or ``None`` when no such map exists. Raises
    :class:`DeadlineExceeded` when the budget runs out first. The search
    branches on the unassigned vertex with the fewest candidates and tries
    targets in ascending order, so witnesses are reproducible.
    """
    if ord is None:
        ord = _default_order(small, big)
    dl = Deadline.of(deadline)
    if small.n > big.n:
        return None
    if small.n == big.n and len(small.edges) != len(big.edges):
        return None
    if small.n == 0:
        return {}
    sadj = small.neighbours()
    badj = big.neighbours()
    sdeg = [len(a) for a in sadj]
    bdeg = [len(a) for a in badj]
    snon = [small.n - 1 - d for d in sdeg]
    bnon = [big.n - 1 - d for d in bdeg]
    use_order = respect_vertex_order and small.vorder is not None and big.vorder is not None

    domains = []
    for u in range(small.n):
        lu = small.label(u)
        dom = [v for v in range(big.n)
               if ord.leq(lu, big.label(v)) and bdeg[v] >= sdeg[u] and bnon[v] >= snon[u]]
        if not dom:
            return None
        domains.append(dom)

    assign = {}
    used = set()

    def consistent(u, v):
        for w, fw in assign.items():
            if (w in sadj[u]) != (fw in badj[v]):
                return False
            if use_order and ((small.vorder[w] < small.vorder[u]) != (big.vorder[fw] < big.vorder[v])):
                return False
        return True

    def solve(doms):
        dl.check()
        if len(assign) == small.n:
            return True
        # most constrained first, ties by vertex index
        u = min((x for x in range(small.n) if x not in assign), key=lambda x: (len(doms[x]), x))
        for v in doms[u]:
            if v in used:
                continue
            assign[u] = v
            used.add(v)
            nd = list(doms)
            ok = True
            for x in range(small.n):
                if x in assign:
                    continue
                adj_x = x in sadj[u]
                filtered = [y for y in doms[x] if y != v and (y in badj[v]) == adj_x
                            and (not use_order or (small.vorder[x] < small.vorder[u]) == (big.vorder[y] < big.vorder[v]))]
                if not filtered:
                    ok = False
                    break
                nd[x] = filtered
            if ok and solve(nd):
                return True
            del assign[u]
            used.discard(v)
        return False

    if solve(domains):
        return dict(sorted(assign.items()))
    return None


def verify_embedding(small: LabelledGraph, big: LabelledGraph, f: dict,
                     ord: Optional[LabelOrder] = None, respect_vertex_order: bool = False) -> bool:
    """Check an explicit map against the induced-embedding contract."""
    if ord is None:
        ord = _default_order(small, big)
    if set(f) != set(range(small.n)):
        return False
    images = list(f.values())
    if len(set(images)) != len(images) or any(not 0 <= v < big.n for v in images):
        return False
    for u in range(small.n):
        if not ord.leq(small.label(u), big.label(f[u])):
            return False
    for u in range(small.n):
        for w in range(u + 1, small.n):
            if small.adjacent(u, w) != big.adjacent(f[u], f[w]):
                return False
            if (respect_vertex_order and small.vorder is not None and big.vorder is not None
                    and (small.vorder[u] < small.vorder[w]) != (big.vorder[f[u]] < big.vorder[f[w]])):
                return False
    return True


def isomorphic(a: LabelledGraph, b: LabelledGraph) -> bool:
    if a.n != b.n or len(a.edges) != len(b.edges):
        return False
    if sorted(map(str, (a.label(v) for v in range(a.n)))) != sorted(map(str, (b.label(v) for v in range(b.n)))):
        return False
    return embed(a, b) is not None


def is_antichain(graphs: Sequence[LabelledGraph], ord: Optional[LabelOrder] = None,
                 deadline=None):
    """Return ``(True, None)`` or ``(False, (i, j))`` for the first comparable pair.

    The pair means ``graphs[i]`` embeds into ``graphs[j]``.
    """
    if len(graphs) < 2:
        return True, None
    dl = Deadline.of(deadline)
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            if embed(graphs[i], graphs[j], ord, deadline=dl) is not None:
                return False, (i, j)
            if embed(graphs[j], graphs[i], ord, deadline=dl) is not None:
                return False, (j, i)
    return True, None


def is_path_graph(g: LabelledGraph) -> bool:
    """Connected, acyclic, maximum degree two."""
    if g.n == 0:
        return False
    if len(g.edges) != g.n - 1:
        return False
    adj = g.neighbours()
    if any(len(a) > 2 for a in adj):
        return False
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def complete_graph(n: int) -> LabelledGraph:
    return LabelledGraph.unlabelled(n, {(i, j) for i in range(n) for j in range(i + 1, n)})


def path_graph(n: int, names: Optional[Sequence] = None) -> LabelledGraph:
    edges = {(i, i + 1) for i in range(n - 1)}
    if names is None:
        return LabelledGraph.unlabelled(n, edges)
    return LabelledGraph.from_names(names, edges)


def edgeless_graph(n: int) -> LabelledGraph:
    return LabelledGraph.unlabelled(n, frozenset())
