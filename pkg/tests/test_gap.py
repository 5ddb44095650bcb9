import itertools
import random

import pytest
from hypothesis import assume, given, strategies as st

from wqotrees.corpus import contract, random_interpretation, random_marked, random_monoid
from wqotrees.gap import (GapError, GapWitness, MarkedNestedTree, branch_tree, check_gap,
                          check_gap_consequence, check_interp_consequence, check_marked_gap,
                          compose, encode_dershowitz, gluing_branch, is_L_bounded,
                          is_well_marked, marked_clauses, max_nondummy_chain,
                          neighbourhood_products, search_encoded, search_gap,
                          search_marked_gap)
from wqotrees.monoid import absorbing_monoid, cyclic_group
from wqotrees.split import Split, validate_ramseyan
from wqotrees.tree import LabelledTree


# independent reference: parent pointers only

def ancestors(t, x):
    out = [x]
    while t.parent[out[-1]] is not None:
        out.append(t.parent[out[-1]])
    return out


def is_anc(t, x, y):
    return x in ancestors(t, y)


def lca(t, x, y):
    up = set(ancestors(t, x))
    return next(z for z in ancestors(t, y) if z in up)


def left_of(t, x, y):
    """x and y incomparable, x in the left subtree of their lca."""
    z = lca(t, x, y)
    a = next(w for w in ancestors(t, x) if t.parent[w] == z)
    return t.left[z] == a


def gap_ref(t, s, x, y):
    if x == y:
        return s.height + 1
    inner = ancestors(t, y)[1:]
    inner = inner[:inner.index(x)]
    return min((s.value[z] for z in inner), default=s.height + 1)


def product_ref(t, x, y):
    path = list(reversed(ancestors(t, y)))
    path = path[path.index(x):]
    v = t.monoid.identity
    for z in path[1:]:
        v = t.monoid.mul(v, t.edge_label[z])
    return v


def nearest_products_ref(t, s, x, H):
    row = []
    for k in range(1, H + 1):
        up = [z for z in ancestors(t, x)[1:] if s.value[z] == k]
        row.append(product_ref(t, up[0], x) if up else None)
    return tuple(row)


def plain_ok(t1, s1, t2, s2, h):
    for x in t1.nodes():
        for y in t1.nodes():
            if x == y:
                continue
            if is_anc(t1, x, y) != is_anc(t2, h[x], h[y]):
                return False
            if h[lca(t1, x, y)] != lca(t2, h[x], h[y]):
                return False
            if not is_anc(t1, x, y) and not is_anc(t1, y, x):
                if left_of(t1, x, y) != left_of(t2, h[x], h[y]):
                    return False
    if h[0] != 0 and gap_ref(t2, s2, 0, h[0]) < s1.value[0]:
        return False
    return all(gap_ref(t2, s2, h[t1.parent[y]], h[y]) >= s1.value[y] for y in range(1, t1.n))


def marked_ok(m1, m2, h):
    t1, t2 = m1.tree, m2.tree
    if h[0] != 0 or not plain_ok(t1, m1.split, t2, m2.split, h):
        return False
    H = max(m1.height, m2.height)
    for x in t1.nodes():
        if m1.marking[x] != m2.marking[h[x]]:
            return False
        if t1.is_leaf(x):
            if not t2.is_leaf(h[x]):
                return False
        else:
            u = h[x]
            if t2.is_leaf(u):
                return False
            if t1.edge_label[t1.left[x]] != t2.edge_label[t2.left[u]]:
                return False
            if t1.edge_label[t1.right[x]] != t2.edge_label[t2.right[u]]:
                return False
        if nearest_products_ref(t1, m1.split, x, H) != nearest_products_ref(t2, m2.split, h[x], H):
            return False
        if x and m1.marking[x] != "D" and t2.parent[h[x]] != h[t1.parent[x]]:
            return False
    return True


def all_maps(t1, t2):
    for img in itertools.permutations(range(t2.n), t1.n):
        yield dict(enumerate(img))


def brute_marked(m1, m2):
    t1, t2 = m1.tree, m2.tree
    for h in all_maps(t1, t2):
        if h[0] == 0 and all(t1.is_leaf(x) <= t2.is_leaf(h[x]) for x in t1.nodes()) \
                and marked_ok(m1, m2, h):
            return h
    return None


def well_marked_ref(m, strict):
    t, s, rho = m.tree, m.split, m.marking
    if rho[0] != "M":
        return False
    M = [x for x in t.nodes() if rho[x] == "M"]
    for x, y in itertools.combinations(M, 2):
        if rho[lca(t, x, y)] != "M":
            return False
    for x in M:
        for y in M:
            if x == y or not is_anc(t, x, y):
                continue
            between = list(reversed(ancestors(t, y)[1:]))
            between = between[between.index(x) + 1:]
            for i, z1 in enumerate(between):
                k = s.value[z1]
                if gap_ref(t, s, x, z1) <= k or gap_ref(t, s, z1, y) < k:
                    continue
                if rho[z1] != "M":
                    return False
                rest = between[i + 1:] + [y]
                ok = False
                for a, z2 in enumerate(rest):
                    if s.value[z2] != k or rho[z2] == "D" or gap_ref(t, s, z1, z2) <= k:
                        continue
                    for z3 in rest[a:]:
                        if s.value[z3] != k or gap_ref(t, s, z2, z3) < k:
                            continue
                        g = gap_ref(t, s, z3, y)
                        if (g > k) if strict else (g >= k):
                            ok = True
                if not ok:
                    return False
    return True


def small_pair(seed, n2=7):
    rng = random.Random(seed)
    m = random_monoid(rng, 3)
    m2 = random_marked(rng, m, n2)
    m1 = contract(rng, m2) if rng.random() < 0.7 else random_marked(rng, m, rng.choice([1, 3, 5]))
    return rng, m1 or m2, m2


def chain_tree(m, labels, vals, hang=None):
    nested = {}
    for a in reversed(labels):
        nested = {"l": a, "left": nested, "r": a if hang is None else hang, "right": {}}
    t = LabelledTree.from_nested(nested, m)
    full = [vals[-1]] * t.n
    for x, v in zip(t.path(0, t.leaves_in_order()[0]), vals):
        full[x] = v
    return t, Split(max(vals), tuple(full))


# examples

def test_identity_map_is_a_gap_embedding():
    rng = random.Random(3)
    for _ in range(20):
        m = random_marked(rng, random_monoid(rng, 4), 2 * rng.randint(0, 6) + 1)
        h = {x: x for x in m.tree.nodes()}
        assert check_gap(m.tree, m.split, m.tree, m.split, h)
        assert check_marked_gap(m, m, h)
        w = GapWitness(h)
        assert check_gap_consequence(m, m, w)


def test_edge_gap_violation_is_reported():
    a = absorbing_monoid()
    t1, s1 = chain_tree(a, [1], [1, 2])
    t2, s2 = chain_tree(a, [1, 1], [1, 1, 2])
    sp2 = t2.path(0, t2.leaves_in_order()[0])
    # t1's spine edge needs level 2; its image passes a level-1 node
    h = {0: 0, 1: sp2[2], 2: t2.right[0]}
    v = check_gap(t1, s1, t2, s2, h)
    assert not v and v.reason == "edge-gap" and v.witness == (0, 1)
    assert plain_ok(t1, s1, t2, s2, h) is False


def test_tree_embedding_failures():
    a = absorbing_monoid()
    t, s = chain_tree(a, [1, 1], [1, 1, 1])
    assert check_gap(t, s, t, s, {0: 0, 1: 1}).reason == "tree-embedding"
    assert check_gap(t, s, t, s, {x: 0 for x in t.nodes()}).reason == "tree-embedding"
    swap = {0: 0, 1: 4, 2: 1, 3: 2, 4: 3}
    assert not check_gap(t, s, t, s, swap)


def test_root_gap():
    a = absorbing_monoid()
    t1, s1 = chain_tree(a, [], [2])
    t2, s2 = chain_tree(a, [1, 1], [2, 1, 2])
    sp = t2.path(0, t2.leaves_in_order()[0])
    assert check_gap(t1, s1, t2, s2, {0: sp[1]})
    assert check_gap(t1, s1, t2, s2, {0: sp[2]}).reason == "root-gap"


def test_gluing_antichain():
    a = absorbing_monoid()
    branches = [gluing_branch(a, n, 1) for n in range(2, 6)]
    for i, b1 in enumerate(branches):
        assert is_well_marked(b1)
        for j, b2 in enumerate(branches):
            found = search_marked_gap(b1, b2)
            assert (found is not None) == (i == j)


def test_gluing_antichain_brute_force():
    a = absorbing_monoid()
    b3, b4 = gluing_branch(a, 2, 1), gluing_branch(a, 3, 1)
    assert brute_marked(b3, b4) is None
    assert brute_marked(b3, b3) == {x: x for x in b3.tree.nodes()}


def test_gluing_without_marks_embeds():
    a = absorbing_monoid()
    t, s = chain_tree(a, [1], [1, 1])
    t2, s2 = chain_tree(a, [1, 1], [1, 1, 1])
    assert search_gap(t, s, t2, s2) is not None


def test_well_marked_examples():
    a = absorbing_monoid()
    t, s = chain_tree(a, [1, 1, 1], [2, 1, 1, 2])
    sp = t.path(0, t.leaves_in_order()[0])

    def marked(*nodes, tree=t, split=s):
        rho = ["D"] * tree.n
        for x in nodes:
            rho[x] = "M"
        return MarkedNestedTree(tree, split, rho)

    assert is_well_marked(marked(0))
    # a level-1 run between two marked nodes needs its first node marked
    v = is_well_marked(marked(0, sp[3]))
    assert v.reason == "pattern" and v.witness == (0, sp[1], sp[3])
    # and the last node of the run cannot be followed by another one before y
    v = is_well_marked(marked(0, sp[1], sp[2], sp[3]))
    assert v.reason == "pattern" and v.witness == (sp[1], sp[2], sp[3])
    t2, s2 = chain_tree(a, [1, 1, 1], [2, 1, 1, 1])
    sp2 = t2.path(0, t2.leaves_in_order()[0])
    assert is_well_marked(marked(*sp2, tree=t2, split=s2))
    m = marked(*sp2, tree=t2, split=s2)
    rho = list(m.marking)
    rho[sp2[2]] = "S"
    v = is_well_marked(MarkedNestedTree(t2, s2, rho))
    assert v.reason == "pattern" and v.witness == (sp2[1], sp2[2], sp2[3])
    rho = list(marked(0, tree=t2, split=s2).marking)
    rho[0] = "D"
    assert is_well_marked(MarkedNestedTree(t2, s2, rho)).reason == "root"


def test_lca_closure_required():
    a = absorbing_monoid()
    t, s = chain_tree(a, [1], [1, 1])
    assert is_well_marked(MarkedNestedTree(t, s, ("M", "M", "M")))
    v = is_well_marked(MarkedNestedTree(t, Split(2, (1, 2, 2)), ("M", "M", "M")))
    assert v
    t3, s3 = chain_tree(a, [1, 1], [2, 2, 2])
    rho = ["D"] * t3.n
    rho[0] = "M"
    leaves = t3.leaves_in_order()
    rho[leaves[0]] = rho[leaves[1]] = "M"
    v = is_well_marked(MarkedNestedTree(t3, s3, rho))
    assert v.reason == "lca-closed" and v.witness[2] == t3.lca(leaves[0], leaves[1])


def test_marking_validation():
    a = absorbing_monoid()
    t, s = chain_tree(a, [1], [1, 1])
    with pytest.raises(GapError):
        MarkedNestedTree(t, s, ("M", "X", "D"))
    with pytest.raises(GapError):
        MarkedNestedTree(t, s, ("M",))


def test_L_bounded():
    a = absorbing_monoid()
    m = gluing_branch(a, 4, 1)
    assert max_nondummy_chain(m) == 4
    assert is_L_bounded(m, 4) and not is_L_bounded(m, 3)
    with pytest.raises(GapError):
        is_L_bounded(m, -1)
    with pytest.raises(GapError):
        encode_dershowitz(m, 3)


def test_encoding_levels():
    a = absorbing_monoid()
    m = gluing_branch(a, 3, 1)
    e = encode_dershowitz(m, 3)
    assert e.split.height == 1 + 1 + 3
    sp = m.tree.path(0, m.tree.leaves_in_order()[0])
    assert [e.split.value[x] for x in sp] == [3, 4, 5]
    assert e.labels[0][3] is True and e.labels[sp[-1]][4] is True


def test_encoding_edge_gap_counterexample():
    # x -> y (dummy, level 2) versus x' -> z (marked, level 1) -> y'
    m = absorbing_monoid()
    t1, s1 = chain_tree(m, [1], [1, 2])
    t2, s2 = chain_tree(m, [1, 1], [1, 1, 2])
    sp2 = t2.path(0, t2.leaves_in_order()[0])
    r2 = ["D"] * t2.n
    r2[0] = r2[sp2[1]] = "M"
    m1 = MarkedNestedTree(t1, s1, ["M"] + ["D"] * (t1.n - 1))
    m2 = MarkedNestedTree(t2, s2, r2)
    assert is_well_marked(m1) and is_well_marked(m2)
    h = search_encoded(encode_dershowitz(m1, 2), encode_dershowitz(m2, 2))
    assert h == {0: 0, 1: sp2[2], 2: t2.right[0]}
    report = marked_clauses(m1, m2, h)
    assert not report["edge-gap"]
    assert all(v for k, v in report.items() if k != "edge-gap")
    assert search_marked_gap(m1, m2) is None


# properties

@given(st.integers(0, 10 ** 6))
def test_neighbourhood_products_match_reference(seed):
    rng = random.Random(seed)
    m = random_marked(rng, random_monoid(rng, 5), 2 * rng.randint(0, 8) + 1)
    nb = neighbourhood_products(m.tree, m.split)
    for x in m.tree.nodes():
        assert nb[x] == nearest_products_ref(m.tree, m.split, x, m.height)


@given(st.integers(0, 10 ** 6))
def test_well_marked_matches_reference(seed):
    rng = random.Random(seed)
    mon = random_monoid(rng, 4)
    m = random_marked(rng, mon, 2 * rng.randint(0, 6) + 1)
    rho = [rng.choice("MSD") for _ in m.tree.nodes()]
    rho[0] = rng.choice("MMMD")
    m = MarkedNestedTree(m.tree, m.split, rho)
    a = bool(is_well_marked(m))
    b = bool(is_well_marked(m, strict_z3=True))
    assert a == b == well_marked_ref(m, False) == well_marked_ref(m, True)


@given(st.integers(0, 10 ** 6))
def test_generated_markings_are_well_marked(seed):
    rng = random.Random(seed)
    m = random_marked(rng, random_monoid(rng, 5), 2 * rng.randint(0, 10) + 1)
    assert validate_ramseyan(m.tree, m.split)
    assert is_well_marked(m)


@given(st.integers(0, 10 ** 6))
def test_marked_search_agrees_with_brute_force(seed):
    _, m1, m2 = small_pair(seed)
    w = search_marked_gap(m1, m2)
    b = brute_marked(m1, m2)
    assert (w is None) == (b is None)
    if w is not None:
        assert marked_ok(m1, m2, w.map)


@given(st.integers(0, 10 ** 6))
def test_checker_agrees_with_reference_on_random_maps(seed):
    rng, m1, m2 = small_pair(seed)
    for _ in range(30):
        h = dict(enumerate(rng.sample(range(m2.tree.n), m1.tree.n)))
        assert bool(check_marked_gap(m1, m2, h)) == marked_ok(m1, m2, h)
        assert bool(check_gap(m1.tree, m1.split, m2.tree, m2.split, h)) == \
            plain_ok(m1.tree, m1.split, m2.tree, m2.split, h)


@given(st.integers(0, 10 ** 6))
def test_plain_search_agrees_with_brute_force(seed):
    _, m1, m2 = small_pair(seed)
    t1, s1, t2, s2 = m1.tree, m1.split, m2.tree, m2.split
    found = search_gap(t1, s1, t2, s2)
    brute = next((h for h in all_maps(t1, t2) if plain_ok(t1, s1, t2, s2, h)), None)
    assert (found is None) == (brute is None)
    if found is not None:
        assert plain_ok(t1, s1, t2, s2, found)


@given(st.integers(0, 10 ** 6))
def test_consequences_of_found_witnesses(seed):
    rng = random.Random(seed)
    mon = random_monoid(rng, 4)
    m2 = random_marked(rng, mon, 2 * rng.randint(1, 10) + 1)
    m1 = m2
    for _ in range(rng.randint(0, 3)):
        m1 = contract(rng, m1) or m1
    w = search_marked_gap(m1, m2)
    assume(w is not None)
    i = random_interpretation(rng, mon)
    assert check_gap_consequence(m1, m2, w)
    assert check_interp_consequence(i, m1, m2, w)


@given(st.integers(0, 10 ** 6))
def test_reflexive_and_transitive(seed):
    rng = random.Random(seed)
    mon = random_monoid(rng, 4)
    m3 = random_marked(rng, mon, 2 * rng.randint(1, 9) + 1)
    m2 = contract(rng, m3) or m3
    m1 = contract(rng, m2) or m2
    assert search_marked_gap(m3, m3) is not None
    w1, w2 = search_marked_gap(m1, m2), search_marked_gap(m2, m3)
    if w1 is not None and w2 is not None:
        assert check_marked_gap(m1, m3, compose(w1, w2))


@given(st.integers(0, 10 ** 6))
def test_encoded_pullbacks_glue(seed):
    rng = random.Random(seed)
    mon = random_monoid(rng, 3)
    m2 = random_marked(rng, mon, 2 * rng.randint(1, 7) + 1)
    m1 = contract(rng, m2) or m2
    L = max(max_nondummy_chain(m1), max_nondummy_chain(m2))
    e1, e2 = encode_dershowitz(m1, L), encode_dershowitz(m2, L)
    h = search_encoded(e1, e2)
    if h is not None:
        report = marked_clauses(m1, m2, h)
        for name in ("tree-embedding", "root", "leaves", "marking", "local-products",
                     "neighbourhood-products", "gluing", "root-gap"):
            assert report[name], name
