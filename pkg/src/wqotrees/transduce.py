"""Turning a regular antichain into arbitrarily long paths.

The arrow graph of ``G^r`` has an arc ``u -> v`` whenever the edge relation
between ``u`` and ``v`` differs from what it would be had ``u`` been placed
far before ``v``. From there we find a shortest path crossing every copy,
read off its period, and select every other copy of one vertex along the
repeated period; two of those are adjacent when each reaches the other
within twice the period length.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ._util import PASS, Deadline, Verdict
from .graph import DirectedGraph, LabelledGraph, is_path_graph
from .sequences import PeriodicSequence, RegularSequence, expand_regular


class TransductionError(ValueError):
    pass


class PathAssertionError(AssertionError):
    """The selected vertices did not form a path; ``state`` holds the pipeline."""

    def __init__(self, message, state):
        super().__init__(message)
        self.state = state


@dataclass(frozen=True)
class Period:
    t: int
    d: int
    base: tuple      # base vertex of each step of Q
    offset: tuple    # copy of each step relative to the first

    def to_json(self) -> dict:
        return {"t": self.t, "d": self.d, "Q": list(self.base), "offset": list(self.offset)}


@dataclass
class ArrowGraph:
    inner: DirectedGraph
    r: int
    copy_of: tuple
    base_vertex: tuple
    nbase: int
    period_info: Optional[Period] = None
    _succ: list = field(default=None, repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.inner.n

    def vertex(self, u: int, i: int) -> int:
        return (i - 1) * self.nbase + u

    def successors(self) -> list:
        if self._succ is None:
            self._succ = self.inner.successors()
        return self._succ

    def has_arc(self, x: int, y: int) -> bool:
        return (x, y) in self.inner.arcs

    def to_json(self) -> dict:
        out = {"n": self.n, "r": self.r, "arcs": sorted(list(a) for a in self.inner.arcs),
               "copy": list(self.copy_of), "base": list(self.base_vertex)}
        if self.period_info is not None:
            out["period"] = self.period_info.to_json()
        return out


def _check_injective(s: RegularSequence) -> None:
    labs = [s.lab(u) for u in range(s.base.n)]
    if len(set(labs)) != len(labs):
        raise TransductionError("vertex labels of the base graph must be pairwise distinct")


def phi_arrow(s: RegularSequence, r: int) -> ArrowGraph:
    _check_injective(s)
    e = expand_regular(s, r)
    g = e.graph
    arcs = set()
    for x in range(g.n):
        for y in range(g.n):
            if x != y and g.adjacent(x, y) != ((g.label(x), g.label(y)) in s.far):
                arcs.add((x, y))
    return ArrowGraph(DirectedGraph(g.n, frozenset(arcs), g.vlabel), r, e.copy, e.base, s.base.n)


def check_arrow_claims(a: ArrowGraph) -> dict:
    """Check the two structural claims about arcs.

    ``forward``: no arc jumps ahead by more than one copy.
    ``backward``: an arc ``u_i -> v_j`` with ``j < i`` comes with arcs
    ``u_i -> v_j'`` for every ``j' < i``.
    ``backward-equal``: the same conclusion at ``j' = i``, reported apart.
    ``backward-far``: the conclusion restricted to ``j, j' <= i - 2``, which
    holds whenever the arcs only depend on labels and copy distance.
    """
    cp, bv = a.copy_of, a.base_vertex
    out = {}
    bad = next(((x, y) for x, y in sorted(a.inner.arcs) if cp[y] > cp[x] + 1), None)
    out["forward"] = PASS if bad is None else Verdict.fail("long forward arc", _named(a, bad))

    def scan(lo_gap, include_equal):
        for x, y in sorted(a.inner.arcs):
            i, j = cp[x], cp[y]
            if not j <= i - lo_gap:
                continue
            top = i if include_equal else i - lo_gap
            for jj in range(1, top + 1):
                if include_equal and jj != i:
                    continue
                z = a.vertex(bv[y], jj)
                if z != x and not a.has_arc(x, z):
                    return (_named(a, (x, y)), _named(a, (x, z)))
        return None

    for key, gap, eq in (("backward", 1, False), ("backward-equal", 1, True), ("backward-far", 2, False)):
        w = scan(gap, eq)
        out[key] = PASS if w is None else Verdict.fail(f"missing arc ({key})", w)
    return out


def _named(a: ArrowGraph, pair):
    return tuple((a.base_vertex[v], a.copy_of[v]) for v in pair)


def _bfs(succ, sources, deadline=None) -> list:
    dist = [None] * len(succ)
    q = deque()
    for v in sources:
        dist[v] = 0
        q.append(v)
    dl = Deadline.of(deadline)
    while q:
        dl.check()
        x = q.popleft()
        for y in succ[x]:
            if dist[y] is None:
                dist[y] = dist[x] + 1
                q.append(y)
    return dist


def spanning_path(a: ArrowGraph) -> Optional[list]:
    """Lexicographically least shortest path from copy 1 to copy ``r``.

    No arc skips a copy forward, so every such path meets every copy.
    """
    pred = a.inner.predecessors()
    succ = a.successors()
    to_end = _bfs(pred, [v for v in range(a.n) if a.copy_of[v] == a.r])
    starts = [v for v in range(a.n) if a.copy_of[v] == 1 and to_end[v] is not None]
    if not starts:
        return None
    best = min(to_end[v] for v in starts)
    path = [min(v for v in starts if to_end[v] == best)]
    while to_end[path[-1]]:
        here = to_end[path[-1]]
        path.append(min(y for y in succ[path[-1]] if to_end[y] == here - 1))
    return path


def extract_period(a: ArrowGraph, p: list) -> Period:
    if a.r <= a.nbase:
        raise TransductionError(f"need more than {a.nbase} copies to find a period, got {a.r}")
    best = None
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if a.base_vertex[p[i]] == a.base_vertex[p[j]] and a.copy_of[p[j]] > a.copy_of[p[i]]:
                if best is None or j - i < best[1] - best[0]:
                    best = (i, j)
                break
    if best is None:
        raise TransductionError("the path never returns to a copy of the same vertex")
    i, j = best
    c0 = a.copy_of[p[i]]
    per = Period(a.copy_of[p[j]] - c0, j - i,
                 tuple(a.base_vertex[v] for v in p[i:j]),
                 tuple(a.copy_of[v] - c0 for v in p[i:j]))
    a.period_info = per
    return per


def check_translation(a: ArrowGraph, t: int) -> Verdict:
    """Shifting both ends of an arc by ``t`` copies keeps it an arc (when in range)."""
    for x, y in sorted(a.inner.arcs):
        i, j = a.copy_of[x], a.copy_of[y]
        if max(i, j) + t <= a.r:
            x2 = a.vertex(a.base_vertex[x], i + t)
            y2 = a.vertex(a.base_vertex[y], j + t)
            if not a.has_arc(x2, y2):
                return Verdict.fail("translated arc missing", (_named(a, (x, y)), t))
    return PASS


def _period_of(s: RegularSequence, deadline=None) -> tuple:
    r0 = max(3, s.base.n + 1)
    a0 = phi_arrow(s, r0)
    p = spanning_path(a0)
    if p is None:
        raise TransductionError(f"no spanning path in the arrow graph of {r0} copies")
    return a0, p, extract_period(a0, p)


@dataclass
class PipelineState:
    target: int
    period: Period
    case: str = ""
    copies: int = 0
    walk: list = field(default_factory=list)
    selected: list = field(default_factory=list)
    colours: list = field(default_factory=list)
    graph: Optional[LabelledGraph] = None

    def to_json(self) -> dict:
        out = {"target": self.target, "period": self.period.to_json(), "case": self.case,
               "copies": self.copies, "walk": self.walk, "selected": self.selected}
        if self.graph is not None:
            out["graph"] = self.graph.to_json()
        return out


def _walk(per: Period, reps: int):
    """Vertices of Q repeated ``reps`` times as (base, copy), closed by the first vertex."""
    lo = min(per.offset)
    steps = []
    for k in range(reps):
        for b, o in zip(per.base, per.offset):
            steps.append((b, 1 - lo + o + k * per.t))
    steps.append((per.base[0], 1 - lo + reps * per.t))
    return steps


def transduce_pipeline(s: RegularSequence, target: int, deadline=None) -> PipelineState:
    if target < 1:
        raise TransductionError("target length must be at least 1")
    dl = Deadline.of(deadline)
    _, _, per = _period_of(s, dl)
    st = PipelineState(target, per)
    reps = 2 * (target - 1)
    steps = _walk(per, reps)
    st.copies = max(2 * per.t * target + 1, max(c for _, c in steps))
    a = phi_arrow(s, st.copies)
    walk = [a.vertex(b, c) for b, c in steps]
    st.walk = walk
    # arcs only depend on labels and copy distance, so the prefix decides
    on = set(walk[:target])
    backward = any(x in on and y in on and a.copy_of[y] < a.copy_of[x] for x, y in a.inner.arcs)
    if not backward:
        st.case = "easy"
        st.selected = walk[:target]
        sel = st.selected
        edges = {(i, j) for i in range(len(sel)) for j in range(i + 1, len(sel))
                 if a.has_arc(sel[i], sel[j]) or a.has_arc(sel[j], sel[i])}
    else:
        st.case = "difficult"
        u = per.base[0]
        colour = [a.base_vertex[v] for v in range(a.n)]
        dummy = -1
        keep = set()
        for k in range(reps + 1):
            if k % 2 == 0:
                keep.add(walk[k * per.d])
        for v in range(a.n):
            if a.base_vertex[v] == u and v not in keep:
                colour[v] = dummy
        st.colours = colour
        sel = sorted(keep, key=walk.index)
        st.selected = sel
        succ = a.successors()
        dist = {v: _bfs(succ, [v], dl) for v in sel}
        bound = 2 * per.d

        def close(x, y):
            return dist[x][y] is not None and dist[x][y] <= bound

        edges = {(i, j) for i in range(len(sel)) for j in range(i + 1, len(sel))
                 if close(sel[i], sel[j]) and close(sel[j], sel[i])}
    g = LabelledGraph.unlabelled(len(st.selected), edges)
    st.graph = g
    if g.n != target or not is_path_graph(g):
        raise PathAssertionError(
            f"selected vertices do not induce a path on {target} vertices ({st.case} case)", st)
    return st


def transduce_paths(s: RegularSequence, target: int, deadline=None) -> LabelledGraph:
    return transduce_pipeline(s, target, deadline).graph


def derive_periodic(s: RegularSequence) -> PeriodicSequence:
    """Periodic sequence read off the period of a spanning path."""
    if s.base.n == 1:
        word = (s.lab(0),)
    else:
        _, _, per = _period_of(s)
        word = tuple(s.lab(b) for b in per.base)
    sigma = sorted(set(word), key=str)
    far = frozenset((x, y) for x in sigma for y in sigma if (x, y) in s.far)
    close = frozenset((x, y) for x in sigma for y in sigma) - far
    return PeriodicSequence(word, close, far, tuple(sigma))


def backward_free_sequence(middle: int = 3) -> RegularSequence:
    """A cycle ``y - m1 - ... - x - y`` whose copies are chained by ``x -> y``.

    Inside a copy the arcs are the cycle edges in both directions plus
    ``x -> y``; between copies the only forward arc is ``x_i -> y_{i+1}``.
    Walks of up to ``middle + 2`` vertices carry no backward arc.
    """
    names = ["y"] + [f"m{j}" for j in range(1, middle + 1)] + ["x"]
    n = len(names)
    edges = {(v, v + 1) for v in range(n - 1)} | {(0, n - 1)}
    g = LabelledGraph.from_names(names, edges)
    return RegularSequence(g, frozenset({("x", "y"), ("y", "x")}), frozenset({("y", "x")}))
