import itertools
import random

import pytest
from hypothesis import given, strategies as st

from wqotrees._util import Deadline, DeadlineExceeded
from wqotrees.graph import (DirectedGraph, GraphError, LabelledGraph, LabelOrder, complete_graph,
                            edgeless_graph, embed, is_antichain, is_path_graph, isomorphic,
                            path_graph, verify_embedding)


def brute_embeds(small, big, ord=None):
    """Enumerate every injective map."""
    leq = ord.leq if ord else (lambda a, b: a == b)
    for image in itertools.permutations(range(big.n), small.n):
        if not all(leq(small.label(u), big.label(image[u])) for u in range(small.n)):
            continue
        if all(small.adjacent(u, w) == big.adjacent(image[u], image[w])
               for u in range(small.n) for w in range(u + 1, small.n)):
            return True
    return False


def endpoint_path(n):
    return path_graph(n, ["first"] + ["mid"] * (n - 2) + ["last"])


def random_graph(rng, n, labels="ab"):
    names = [rng.choice(labels) for _ in range(n)]
    edges = {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5}
    return LabelledGraph.from_names(names, edges)


def test_k2_into_k3():
    f = embed(complete_graph(2), complete_graph(3))
    assert f is not None and verify_embedding(complete_graph(2), complete_graph(3), f)


def test_p3_not_into_k3():
    assert embed(path_graph(3), complete_graph(3)) is None


def test_endpoint_paths_do_not_nest():
    assert embed(endpoint_path(3), endpoint_path(4)) is None


def test_antichain_examples():
    assert is_antichain([complete_graph(1), complete_graph(2)]) == (False, (0, 1))
    assert is_antichain([endpoint_path(n) for n in (3, 4, 5)]) == (True, None)
    g = path_graph(3)
    assert is_antichain([g, g])[0] is False


def test_isomorphic_examples():
    # v2_1 - v1_1 - v1_2 - v2_2, labels erased
    s2 = LabelledGraph.unlabelled(4, {(0, 1), (0, 2), (2, 3)})
    assert isomorphic(path_graph(4), s2)
    assert not isomorphic(complete_graph(3), path_graph(3))
    assert isomorphic(s2, s2)


def test_label_order_is_respected():
    order = LabelOrder(("lo", "hi"), frozenset({(0, 1)}))
    small = path_graph(2, ["lo", "lo"])
    big = path_graph(2, ["hi", "hi"])
    assert embed(small, big, order) is not None
    assert embed(big, small, order) is None
    assert order.leq("lo", "hi") and not order.leq("hi", "lo")


def test_order_closure_is_transitive():
    order = LabelOrder(("a", "b", "c"), frozenset({(0, 1), (1, 2)}))
    assert order.leq("a", "c")


def test_vertex_order():
    # ordered P3 whose centre comes first cannot map onto one whose centre is in the middle
    a = LabelledGraph(3, frozenset({(0, 1), (0, 2)}), (0, 0, 0), ("",), (0, 1, 2))
    b = LabelledGraph(3, frozenset({(0, 1), (1, 2)}), (0, 0, 0), ("",), (0, 1, 2))
    assert embed(a, b) is not None
    assert embed(a, b, respect_vertex_order=True) is None


def test_graph_invariants():
    with pytest.raises(GraphError):
        LabelledGraph.unlabelled(2, {(1, 1)})
    with pytest.raises(GraphError):
        LabelledGraph.unlabelled(2, {(0, 2)})
    with pytest.raises(GraphError):
        DirectedGraph(2, {(0, 0)}, (0, 0))


def test_deadline_is_not_absence():
    big = edgeless_graph(40)
    small = edgeless_graph(3)
    dl = Deadline(0.0)
    dl._ticks = 255
    with pytest.raises(DeadlineExceeded):
        embed(small, big, deadline=dl)


def test_path_recogniser():
    assert is_path_graph(path_graph(1))
    assert is_path_graph(path_graph(5))
    assert not is_path_graph(complete_graph(3))
    assert not is_path_graph(edgeless_graph(2))


def test_json_round_trip():
    g = random_graph(random.Random(3), 6)
    assert LabelledGraph.from_json(g.to_json()) == g


@given(st.integers(0, 10 ** 6), st.integers(1, 5), st.integers(1, 6))
def test_embed_matches_brute_force(seed, n1, n2):
    rng = random.Random(seed)
    a, b = random_graph(rng, n1), random_graph(rng, n2)
    f = embed(a, b)
    assert (f is not None) == brute_embeds(a, b)
    if f is not None:
        assert verify_embedding(a, b, f)


@given(st.integers(0, 10 ** 6))
def test_reflexive_and_transitive(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 5)
    assert embed(g, g) is not None
    h = g.induced(sorted(rng.sample(range(5), 4)))
    k = h.induced([0, 1, 2])
    f, f2 = embed(k, h), embed(h, g)
    assert f is not None and f2 is not None
    assert verify_embedding(k, g, {u: f2[f[u]] for u in f})


@given(st.integers(0, 10 ** 6))
def test_ordered_witness_is_a_witness(seed):
    rng = random.Random(seed)
    a, b = random_graph(rng, 3), random_graph(rng, 5)
    a = LabelledGraph(a.n, a.edges, a.vlabel, a.labels, tuple(rng.sample(range(3), 3)))
    b = LabelledGraph(b.n, b.edges, b.vlabel, b.labels, tuple(rng.sample(range(5), 5)))
    f = embed(a, b, respect_vertex_order=True)
    if f is not None:
        assert verify_embedding(a, b, f)
        assert verify_embedding(a, b, f, respect_vertex_order=True)
