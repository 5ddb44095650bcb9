"""Regular and periodic sequences of graphs, and antichain certification.

A regular sequence repeats a labelled base graph ``r`` times. Vertices in
the same copy are joined as in the base graph, vertices in neighbouring
copies when their label pair (earlier copy first) is in ``close``, and
vertices in copies further apart when the pair is in ``far``.

A periodic sequence does the same with single letters: positions
``1..r*len(w)`` of the word ``w`` repeated ``r`` times, consecutive
positions joined through ``close`` and the others through ``far``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import LabelledGraph, is_antichain


class SequenceError(ValueError):
    pass


FIRST = "first"
LAST = "last"
BLANK = "blank"


def _pairs(ps) -> frozenset:
    return frozenset((a, b) for a, b in ps)


@dataclass(frozen=True)
class RegularSequence:
    base: LabelledGraph
    close: frozenset
    far: frozenset

    def __post_init__(self):
        object.__setattr__(self, "close", _pairs(self.close))
        object.__setattr__(self, "far", _pairs(self.far))

    def lab(self, u: int):
        return self.base.label(u)

    def alphabet(self) -> list:
        sym = set(self.base.labels)
        for a, b in self.close | self.far:
            sym.update((a, b))
        return sorted(sym, key=str)

    def to_json(self) -> dict:
        return {"kind": "regular", "G": self.base.to_json(),
                "C": sorted(list(p) for p in self.close), "F": sorted(list(p) for p in self.far)}


@dataclass(frozen=True)
class PeriodicSequence:
    word: tuple
    close: frozenset
    far: frozenset
    sigma: Optional[tuple] = None

    def __post_init__(self):
        object.__setattr__(self, "word", tuple(self.word))
        if not self.word:
            raise SequenceError("the word of a periodic sequence is nonempty")
        object.__setattr__(self, "close", _pairs(self.close))
        object.__setattr__(self, "far", _pairs(self.far))
        if self.sigma is not None:
            object.__setattr__(self, "sigma", tuple(self.sigma))

    def alphabet(self) -> list:
        if self.sigma is not None:
            return list(self.sigma)
        sym = set(self.word)
        for a, b in self.close | self.far:
            sym.update((a, b))
        return sorted(sym, key=str)

    def to_json(self) -> dict:
        out = {"kind": "periodic", "w": list(self.word),
               "C": sorted(list(p) for p in self.close), "F": sorted(list(p) for p in self.far)}
        if self.sigma is not None:
            out["sigma"] = list(self.sigma)
        return out


def sequence_from_json(data: dict):
    kind = data.get("kind")
    if kind == "regular":
        return RegularSequence(LabelledGraph.from_json(data["G"]),
                               _pairs(data.get("C", [])), _pairs(data.get("F", [])))
    if kind == "periodic":
        return PeriodicSequence(tuple(data["w"]), _pairs(data.get("C", [])),
                                _pairs(data.get("F", [])), data.get("sigma"))
    raise SequenceError(f"unknown sequence kind {kind!r}")


@dataclass(frozen=True)
class Expanded:
    """An expanded member of a sequence, remembering where each vertex came from.

    ``copy[v]`` is the 1-based copy index (for periodic sequences, the
    1-based position) and ``base[v]`` the base vertex or word letter.
    """

    graph: LabelledGraph
    kind: str
    r: int
    copy: tuple
    base: tuple


def expand_regular(s: RegularSequence, r: int) -> Expanded:
    if r < 1:
        raise SequenceError("r must be at least 1")
    g = s.base
    nv = g.n
    names, copy, base = [], [], []
    for i in range(1, r + 1):
        for u in range(nv):
            names.append(g.label(u))
            copy.append(i)
            base.append(u)
    edges = set()
    for p in range(nv * r):
        for q in range(p + 1, nv * r):
            i, j = copy[p], copy[q]
            u, v = base[p], base[q]
            pair = (g.label(u), g.label(v))
            if i == j:
                hit = g.adjacent(u, v)
            elif j - i == 1:
                hit = pair in s.close
            else:
                hit = pair in s.far
            if hit:
                edges.add((p, q))
    return Expanded(LabelledGraph.from_names(names, edges), "regular", r,
                    tuple(copy), tuple(base))


def expand_periodic(s: PeriodicSequence, r: int) -> Expanded:
    if r < 1:
        raise SequenceError("r must be at least 1")
    letters = list(s.word) * r
    n = len(letters)
    edges = set()
    for p in range(n):
        for q in range(p + 1, n):
            pair = (letters[p], letters[q])
            if (q == p + 1 and pair in s.close) or (q > p + 1 and pair in s.far):
                edges.add((p, q))
    return Expanded(LabelledGraph.from_names(letters, edges), "periodic", r,
                    tuple(range(1, n + 1)), tuple(letters))


def expand(s, r: int) -> Expanded:
    if isinstance(s, RegularSequence):
        return expand_regular(s, r)
    return expand_periodic(s, r)


def with_endpoints(e: Expanded) -> LabelledGraph:
    """Add the start and end marks used by antichain certification.

    Regular: every vertex of the first copy has ``+first`` appended to its
    label, every vertex of the last copy ``+last`` (both when ``r = 1``).
    Periodic: all labels are erased except the first and last vertices.
    """
    if e.kind == "regular":
        names = []
        for v in range(e.graph.n):
            nm = str(e.graph.label(v))
            if e.copy[v] == 1:
                nm += "+" + FIRST
            if e.copy[v] == e.r:
                nm += "+" + LAST
            names.append(nm)
    elif e.kind == "periodic":
        n = e.graph.n
        names = [BLANK] * n
        if n == 1:
            names[0] = FIRST + "+" + LAST
        else:
            names[0], names[-1] = FIRST, LAST
    else:
        raise SequenceError(f"unknown expansion kind {e.kind!r}")
    return e.graph.relabel(names)


def certify_antichain(s, r_range: Iterable[int], deadline=None):
    """``(True, None)`` or ``(False, (r_small, r_big))`` for the first comparable pair."""
    rs = list(r_range)
    graphs = [with_endpoints(expand(s, r)) for r in rs]
    ok, pair = is_antichain(graphs, deadline=deadline)
    if ok:
        return True, None
    return False, (rs[pair[0]], rs[pair[1]])


def periodic_with_complement_check(s: PeriodicSequence) -> bool:
    sigma = s.alphabet()
    full = {(a, b) for a in sigma for b in sigma}
    return set(s.close) == full - set(s.far)


# the running example

def split_permutation_regular() -> RegularSequence:
    """Base graph: ``w`` (vertex 0) joined to ``b`` (vertex 1)."""
    g = LabelledGraph(2, frozenset({(0, 1)}), (0, 1), ("w", "b"))
    return RegularSequence(g, frozenset({("w", "w")}), frozenset({("w", "w"), ("b", "w")}))


def split_permutation_periodic() -> PeriodicSequence:
    return PeriodicSequence(("w", "b"), frozenset({("w", "b")}),
                            frozenset({("w", "w"), ("b", "w")}))
