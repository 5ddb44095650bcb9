import itertools
import random

import pytest
from hypothesis import given, strategies as st

from wqotrees.corpus import random_regular_sequence
from wqotrees.graph import LabelledGraph, isomorphic
from wqotrees.sequences import (PeriodicSequence, RegularSequence, SequenceError,
                                certify_antichain, expand, expand_periodic, expand_regular,
                                periodic_with_complement_check, sequence_from_json,
                                split_permutation_periodic, split_permutation_regular,
                                with_endpoints)


def regular_ref(s, r):
    """Edge set by copy distance, vertex (u, i) at index (i - 1)|V| + u."""
    g = s.base
    nv = g.n
    idx = {(u, i): (i - 1) * nv + u for i in range(1, r + 1) for u in range(nv)}
    edges = set()
    for (u, i), (v, j) in itertools.permutations(idx, 2):
        if i > j or (i == j and u >= v):
            continue
        pair = (g.label(u), g.label(v))
        if i == j:
            hit = g.adjacent(u, v)
        elif j == i + 1:
            hit = pair in s.close
        else:
            hit = pair in s.far
        if hit:
            edges.add(tuple(sorted((idx[u, i], idx[v, j]))))
    return edges


def brute_embeds(g, h):
    """Label-preserving induced embedding by trying every injection."""
    if g.n > h.n:
        return False
    for img in itertools.permutations(range(h.n), g.n):
        if any(g.label(v) != h.label(img[v]) for v in range(g.n)):
            continue
        if all(g.adjacent(u, v) == h.adjacent(img[u], img[v])
               for u, v in itertools.combinations(range(g.n), 2)):
            return True
    return False


def test_split_permutation_r4_counts():
    s = split_permutation_regular()
    e = expand_regular(s, 4)
    g = e.graph
    assert g.n == 8
    kinds = {"within": 0, "close": 0, "far": 0}
    for u, v in g.edges:
        d = abs(e.copy[u] - e.copy[v])
        kinds["within" if d == 0 else "close" if d == 1 else "far"] += 1
    assert kinds == {"within": 4, "close": 3, "far": 6}
    assert set(g.edges) == regular_ref(s, 4)


def test_split_permutation_vertex_layout():
    e = expand_regular(split_permutation_regular(), 3)
    assert e.copy == (1, 1, 2, 2, 3, 3)
    assert e.base == (0, 1, 0, 1, 0, 1)
    assert [e.graph.label(v) for v in range(6)] == ["w", "b"] * 3


def test_periodic_matches_regular():
    p, s = split_permutation_periodic(), split_permutation_regular()
    for n in range(1, 7):
        assert isomorphic(expand_periodic(p, n).graph, expand_regular(s, n).graph)


def test_periodic_r2_is_a_path():
    e = expand_periodic(split_permutation_periodic(), 2)
    assert sorted(e.graph.edges) == [(0, 1), (0, 2), (2, 3)]
    assert e.copy == (1, 2, 3, 4) and e.base == ("w", "b", "w", "b")


def test_split_permutation_is_an_antichain():
    assert certify_antichain(split_permutation_regular(), range(1, 7)) == (True, None)
    assert certify_antichain(split_permutation_periodic(), range(1, 7)) == (True, None)


def test_empty_relations_are_not_an_antichain():
    s = split_permutation_regular()
    bare = RegularSequence(s.base, frozenset(), frozenset())
    ok, pair = certify_antichain(bare, range(1, 7))
    assert not ok and pair == (2, 3)


def test_endpoint_labels():
    e = expand_regular(split_permutation_regular(), 2)
    g = with_endpoints(e)
    assert [g.label(v) for v in range(4)] == ["w+first", "b+first", "w+last", "b+last"]
    g1 = with_endpoints(expand_regular(split_permutation_regular(), 1))
    assert g1.label(0) == "w+first+last"
    p = with_endpoints(expand_periodic(split_permutation_periodic(), 2))
    assert [p.label(v) for v in range(4)] == ["first", "blank", "blank", "last"]
    p1 = with_endpoints(expand_periodic(PeriodicSequence(("a",), (), ()), 1))
    assert p1.label(0) == "first+last"


def test_errors():
    with pytest.raises(SequenceError):
        expand_regular(split_permutation_regular(), 0)
    with pytest.raises(SequenceError):
        expand_periodic(split_permutation_periodic(), 0)
    with pytest.raises(SequenceError):
        PeriodicSequence((), (), ())
    with pytest.raises(SequenceError):
        sequence_from_json({"kind": "other"})


def test_json_round_trip():
    for s in (split_permutation_regular(), split_permutation_periodic(),
              PeriodicSequence(("a", "b"), {("a", "b")}, set(), ("a", "b", "c"))):
        back = sequence_from_json(s.to_json())
        assert back.to_json() == s.to_json()
        assert isomorphic(expand(back, 3).graph, expand(s, 3).graph)


def test_complement_check():
    assert not periodic_with_complement_check(split_permutation_periodic())
    sigma = ("w", "b")
    far = {("w", "w"), ("b", "w")}
    close = {(a, b) for a in sigma for b in sigma} - far
    assert periodic_with_complement_check(PeriodicSequence(sigma, close, far))


@given(st.integers(0, 10 ** 6))
def test_expand_matches_reference(seed):
    rng = random.Random(seed)
    s = random_regular_sequence(rng, 4)
    r = rng.randint(1, 5)
    e = expand_regular(s, r)
    assert set(e.graph.edges) == regular_ref(s, r)
    assert e.graph.n == r * s.base.n


@given(st.integers(0, 10 ** 6))
def test_one_letter_periodic_is_one_vertex_regular(seed):
    rng = random.Random(seed)
    close = {("a", "a")} if rng.random() < 0.5 else set()
    far = {("a", "a")} if rng.random() < 0.5 else set()
    p = PeriodicSequence(("a",), close, far)
    s = RegularSequence(LabelledGraph.from_names(["a"], set()), close, far)
    for r in range(1, 6):
        assert expand_periodic(p, r).graph.edges == expand_regular(s, r).graph.edges


@given(st.integers(0, 10 ** 6))
def test_certify_matches_brute_force(seed):
    rng = random.Random(seed)
    s = random_regular_sequence(rng, 2)
    ok, pair = certify_antichain(s, range(1, 4))
    gs = {r: with_endpoints(expand_regular(s, r)) for r in range(1, 4)}
    comparable = [(a, b) for a, b in itertools.combinations(range(1, 4), 2)
                  if brute_embeds(gs[a], gs[b])]
    assert ok == (not comparable)
    if not ok:
        assert pair == comparable[0]
