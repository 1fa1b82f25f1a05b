import itertools

import numpy as np
import pytest

from oracles import edge_splits, path_distances, random_binary_tree
from segmsa.guide_tree import TreeNode, neighbor_joining, splits


def leaf_distances(root):
    """Path length between every pair of leaves of a rooted tree."""
    depth = {}

    def walk(node, d, path):
        if node.is_leaf:
            depth[node.name] = (d, path)
        for c in node.children:
            walk(c, d + c.length, path + (id(c),))

    walk(root, 0.0, ())
    out = {}
    for a, b in itertools.combinations(sorted(depth), 2):
        (da, pa), (db, pb) = depth[a], depth[b]
        shared = 0
        for x, y in zip(pa, pb):
            if x != y:
                break
            shared += 1
        # lengths of the shared prefix are counted in both depths
        common = _prefix_length(root, pa[:shared])
        out[a, b] = da + db - 2 * common
    return out


def _prefix_length(root, path):
    node, total = root, 0.0
    for ident in path:
        node = next(c for c in node.children if id(c) == ident)
        total += node.length
    return total


def test_two_leaves():
    t = neighbor_joining(np.array([[0, 0.8], [0.8, 0]]), ["a", "b"])
    assert [c.name for c in t.children] == ["a", "b"]
    assert [c.length for c in t.children] == [0.4, 0.4]


def test_three_leaves_three_point():
    D = np.array([[0, 0.5, 0.7], [0.5, 0, 0.6], [0.7, 0.6, 0]])
    t = neighbor_joining(D, ["a", "b", "c"])
    d = leaf_distances(t)
    assert d["a", "b"] == pytest.approx(0.5)
    assert d["a", "c"] == pytest.approx(0.7)
    assert d["b", "c"] == pytest.approx(0.6)
    lengths = {n.name: n.length for n in t.postorder() if n.is_leaf}
    assert lengths["a"] == pytest.approx((0.5 + 0.7 - 0.6) / 2)
    assert lengths["b"] == pytest.approx((0.5 + 0.6 - 0.7) / 2)


def test_input_checks():
    with pytest.raises(ValueError):
        neighbor_joining(np.zeros((1, 1)), ["a"])
    with pytest.raises(ValueError):
        neighbor_joining(np.zeros((3, 3)), ["a", "b"])


@pytest.mark.parametrize("n", [4, 5, 6, 8])
def test_additive_recovery(n):
    rng = np.random.default_rng(n)
    names = [f"t{i}" for i in range(n)]
    for _ in range(20):
        edges = random_binary_tree(rng, names)
        D = path_distances(edges, names)
        t = neighbor_joining(D, names)
        assert splits(t) == edge_splits(edges, names)
        got = leaf_distances(t)
        for (a, b), v in got.items():
            assert v == pytest.approx(D[names.index(a), names.index(b)], abs=1e-9)


def test_four_leaf_topology_is_unique():
    rng = np.random.default_rng(1)
    names = ["a", "b", "c", "d"]
    edges = random_binary_tree(rng, names)
    D = path_distances(edges, names)
    # four-point condition: exactly one of the three pairings is strictly smallest
    sums = sorted([D[0, 1] + D[2, 3], D[0, 2] + D[1, 3], D[0, 3] + D[1, 2]])
    assert sums[0] < sums[1] == pytest.approx(sums[2])
    assert len(splits(neighbor_joining(D, names))) == 1


def test_permutation_equivariance():
    rng = np.random.default_rng(9)
    names = [f"s{i}" for i in range(7)]
    D = rng.uniform(0.1, 1, size=(7, 7))
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0)
    ref = neighbor_joining(D, names)
    for _ in range(10):
        p = rng.permutation(7)
        t = neighbor_joining(D[np.ix_(p, p)], [names[i] for i in p])
        assert t.newick() == ref.newick()


def test_uniform_distances_deterministic():
    D = np.ones((5, 5)) - np.eye(5)
    a = neighbor_joining(D, list("abcde")).newick()
    b = neighbor_joining(D, list("abcde")).newick()
    assert a == b and a.startswith("(")


def test_branch_lengths_non_negative():
    rng = np.random.default_rng(2)
    D = rng.uniform(0, 1, size=(6, 6))
    D = (D + D.T) / 2
    np.fill_diagonal(D, 0)
    t = neighbor_joining(D, list("abcdef"))
    assert all(n.length >= 0 for n in t.postorder())
    assert sorted(t.leaves()) == list("abcdef")


def test_newick():
    t = TreeNode(None, [TreeNode("a", length=0.5), TreeNode("b", length=0.25)])
    assert t.newick() == "(a:0.5,b:0.25);"
