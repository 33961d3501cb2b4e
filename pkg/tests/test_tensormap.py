import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aromatic.graph import Composition, canonicalize, composition, enumerate_trees, parse
from aromatic.tensormap import (
    Permutation,
    format_table,
    orbit_classes,
    perm_to_tree,
    target_map,
    tree_compositions,
)


def automorphisms(tree: str) -> int:
    f = parse(tree)
    g = nx.DiGraph()
    g.add_nodes_from(range(f.node_count))
    g.add_edges_from((v, w) for v, w in enumerate(f.successor) if w is not None)
    return sum(1 for _ in nx.algorithms.isomorphism.DiGraphMatcher(g, g).isomorphisms_iter())


def expected_class_size(tree: str) -> int:
    # sigma is determined by a node numbering respecting in-degree blocks plus an
    # assignment of arrow ids to slots; divide out relabelings that fix the tree
    f = parse(tree)
    kappa = composition(f)
    slots = math.prod(math.factorial(f.in_degree(v)) for v in range(f.node_count))
    blocks = math.prod(math.factorial(c) for c in kappa.counts)
    return blocks * slots // automorphisms(tree)


class TestTargetMap:
    def test_cherry(self):
        t = target_map((2, 0, 1))
        assert t.in_degree == (0, 0, 2)
        assert t.tau == {2: 3, 3: 3}

    def test_single_node(self):
        assert target_map((1,)).tau == {}

    def test_path(self):
        assert target_map((1, 1)).tau == {2: 2}

    def test_rejects_non_tree_composition(self):
        with pytest.raises(ValueError):
            target_map((2, 1))

    def test_arrows_consecutive(self):
        t = target_map((3, 1, 2))
        assert sorted(t.tau) == list(range(2, 7))
        assert [t.tau[a] for a in range(2, 7)] == [4, 5, 5, 6, 6]


class TestPermutation:
    def test_inverse(self):
        s = Permutation((2, 3, 1))
        assert s.inverse().image == (3, 1, 2)
        assert all(s.inverse()(s(i)) == i for i in range(1, 4))

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((1, 1, 2))

    def test_str(self):
        assert str(Permutation((3, 1, 2))) == "(3,1,2)"


class TestPermToTree:
    @pytest.mark.parametrize("sigma,tree", [
        ((1, 2, 3), "({[]}) []"),
        ((1, 3, 2), "({[]}) []"),
        ((2, 1, 3), "({[]}) []"),
        ((3, 1, 2), "({[]}) []"),
        ((2, 3, 1), "[[][]]"),
        ((3, 2, 1), "[[][]]"),
    ])
    def test_cherry_table(self, sigma, tree):
        assert canonicalize(perm_to_tree(sigma, target_map((2, 0, 1)))) == tree

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            perm_to_tree((1, 2), target_map((2, 0, 1)))

    @settings(max_examples=200)
    @given(st.sampled_from(tree_compositions(6)), st.randoms(use_true_random=False))
    def test_root_and_composition(self, kappa, rnd):
        numbering = target_map(kappa)
        image = list(range(1, numbering.size + 1))
        rnd.shuffle(image)
        sigma = Permutation(tuple(image))
        forest = perm_to_tree(sigma, numbering)
        assert list(forest.roots) == [sigma.inverse()(1) - 1]
        assert composition(forest) == kappa


class TestOrbitClasses:
    def test_cherry(self):
        classes = orbit_classes((2, 0, 1))
        assert {k: len(v) for k, v in classes.items()} == {"({[]}) []": 4, "[[][]]": 2}
        assert Permutation((2, 3, 1)) in classes["[[][]]"]

    @pytest.mark.parametrize("kappa", tree_compositions(5), ids=repr)
    def test_surjective(self, kappa):
        n = kappa.size
        expected = {t for t in enumerate_trees(n) if composition(parse(t)) == kappa}
        classes = orbit_classes(kappa)
        assert set(classes) == expected
        assert sum(len(v) for v in classes.values()) == math.factorial(n)

    @pytest.mark.parametrize("kappa", tree_compositions(5), ids=repr)
    def test_class_sizes(self, kappa):
        for tree, perms in orbit_classes(kappa).items():
            assert len(perms) == expected_class_size(tree)

    def test_cap(self):
        with pytest.raises(ValueError):
            orbit_classes((3, 1, 1), cap=4)


def test_tree_compositions_cover_census():
    for n in range(1, 6):
        seen = {composition(parse(t)) for t in enumerate_trees(n)}
        assert seen == {k for k in tree_compositions(n) if k.size == n}


def test_tree_compositions_valid():
    for k in tree_compositions(5):
        assert k.is_tree_composition


def test_format_table():
    text = format_table((2, 0, 1))
    lines = text.splitlines()
    assert "6 permutations, 2 classes" in lines[0]
    assert lines[1] == "class ({[]}) []  size 4"
    assert "class [[][]]  size 2" in lines
    assert "  (2,3,1)" in lines


def test_all_permutations_distinct_arrows():
    numbering = target_map(Composition((2, 1, 1)))
    for image in itertools.permutations(range(1, 5)):
        f = perm_to_tree(image, numbering)
        assert f.arrow_count == 3
