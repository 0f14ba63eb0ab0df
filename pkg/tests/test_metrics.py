from collections import deque

import numpy as np
import pytest

from recast.errors import TooSmallError
from recast.metrics import (
    batch_metrics,
    depth,
    max_breadth,
    pairwise_similarity_summary,
    structural_virality,
    tree_jaccard,
)
from recast.reconstruct import CascadeTree


def bfs_metrics(parents):
    """Brute-force oracle: BFS levels and all-pairs shortest paths."""
    n = len(parents) + 1
    children = [[] for _ in range(n)]
    for i, p in enumerate(parents, start=1):
        children[p].append(i)
    levels = {0: 0}
    queue = deque([0])
    while queue:
        node = queue.popleft()
        for child in children[node]:
            levels[child] = levels[node] + 1
            queue.append(child)
    depth_val = max(levels.values())
    breadth = max(
        sum(1 for lv in levels.values() if lv == d) for d in range(1, depth_val + 1)
    )
    # undirected adjacency for pairwise distances
    adj = [[] for _ in range(n)]
    for i, p in enumerate(parents, start=1):
        adj[p].append(i)
        adj[i].append(p)
    total = 0
    for src in range(n):
        dist = {src: 0}
        queue = deque([src])
        while queue:
            node = queue.popleft()
            for other in adj[node]:
                if other not in dist:
                    dist[other] = dist[node] + 1
                    queue.append(other)
        total += sum(dist.values())
    sv = total / (n * (n - 1))  # each unordered pair counted twice
    return depth_val, breadth, sv


def tree(parents, cid="t", realization=0):
    return CascadeTree(cid, list(parents), realization)


class TestDepth:
    def test_star(self):
        assert depth(tree([0, 0, 0, 0])) == 1

    def test_chain(self):
        assert depth(tree([0, 1, 2])) == 3

    def test_mixed(self):
        assert depth(tree([0, 0, 1])) == 2

    def test_too_small(self):
        with pytest.raises(TooSmallError):
            depth(tree([]))


class TestMaxBreadth:
    def test_star(self):
        assert max_breadth(tree([0, 0, 0, 0])) == 4

    def test_chain(self):
        assert max_breadth(tree([0, 1, 2])) == 1

    def test_two_by_two(self):
        assert max_breadth(tree([0, 0, 1, 1])) == 2

    def test_root_level_excluded(self):
        assert max_breadth(tree([0])) == 1


class TestStructuralVirality:
    def test_single_pair(self):
        assert structural_virality(tree([0])) == 1.0

    def test_star_of_four(self):
        assert structural_virality(tree([0, 0, 0])) == 1.5

    def test_path_of_four(self):
        assert abs(structural_virality(tree([0, 1, 2])) - 5.0 / 3.0) < 1e-12

    def test_matches_bfs_oracle_on_random_trees(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            n = int(rng.integers(2, 51))
            parents = [int(rng.integers(0, i)) for i in range(1, n)]
            t = tree(parents)
            d_ref, b_ref, sv_ref = bfs_metrics(parents)
            assert depth(t) == d_ref
            assert max_breadth(t) == b_ref
            assert abs(structural_virality(t) - sv_ref) < 1e-9

    def test_diameter_bound_through_root(self):
        rng = np.random.default_rng(7)
        for _ in range(100):
            n = int(rng.integers(2, 40))
            parents = [int(rng.integers(0, i)) for i in range(1, n)]
            t = tree(parents)
            assert structural_virality(t) <= 2 * depth(t) + 1e-12

    def test_batch_agrees_with_single(self):
        rng = np.random.default_rng(3)
        matrix = np.asarray(
            [[int(rng.integers(0, i)) for i in range(1, 8)] for _ in range(50)],
            dtype=np.int32,
        )
        d, b, sv = batch_metrics(matrix)
        for r in range(matrix.shape[0]):
            t = tree(matrix[r].tolist())
            assert d[r] == depth(t)
            assert b[r] == max_breadth(t)
            assert abs(sv[r] - structural_virality(t)) < 1e-12


class TestTreeJaccard:
    def test_identical(self):
        assert tree_jaccard(tree([0, 1, 2]), tree([0, 1, 2])) == 1.0

    def test_one_third(self):
        # intersection {0->1}; union {0->1, 0->2, 1->2}
        assert abs(tree_jaccard(tree([0, 0]), tree([0, 1])) - 1.0 / 3.0) < 1e-12

    def test_size_two_always_one(self):
        assert tree_jaccard(tree([0]), tree([0])) == 1.0

    def test_symmetry(self):
        a, b = tree([0, 0, 2]), tree([0, 1, 0])
        assert tree_jaccard(a, b) == tree_jaccard(b, a)

    def test_zero_only_when_disjoint(self):
        assert tree_jaccard(tree([0, 0]), tree([0, 1])) > 0.0
        chain = tree([0, 1, 2])
        bush = tree([0, 0, 1])
        overlap = tree_jaccard(chain, bush)
        assert 0.0 < overlap < 1.0

    def test_mismatched_cascades_error(self):
        with pytest.raises(ValueError):
            tree_jaccard(tree([0], cid="a"), tree([0], cid="b"))


class TestPairwiseSimilarity:
    def test_pair_count_for_100(self):
        rng = np.random.default_rng(0)
        trees = [
            tree([int(rng.integers(0, i)) for i in range(1, 5)], realization=r)
            for r in range(100)
        ]
        summary = pairwise_similarity_summary(trees)
        assert summary.n_pairs == 4950

    def test_identical_realizations_mean_one(self):
        trees = [tree([0, 1], realization=r) for r in range(2)]
        assert pairwise_similarity_summary(trees).mean_pdi_pdi == 1.0

    def test_hand_average(self):
        # pairwise jaccards {1, 1/3, 1/3} -> mean 5/9
        trees = [tree([0, 0]), tree([0, 0]), tree([0, 1])]
        summary = pairwise_similarity_summary(trees)
        assert abs(summary.mean_pdi_pdi - 5.0 / 9.0) < 1e-12

    def test_baseline_mean(self):
        trees = [tree([0, 0]), tree([0, 1])]
        summary = pairwise_similarity_summary(trees, baseline=tree([0, 0]))
        assert abs(summary.mean_pdi_baseline - (1.0 + 1.0 / 3.0) / 2.0) < 1e-12

    def test_matches_tree_jaccard_means(self):
        rng = np.random.default_rng(8)
        trees = [
            tree([int(rng.integers(0, i)) for i in range(1, 7)], realization=r)
            for r in range(12)
        ]
        baseline = tree([int(rng.integers(0, i)) for i in range(1, 7)])
        summary = pairwise_similarity_summary(trees, baseline)
        pairs = [
            tree_jaccard(trees[i], trees[j])
            for i in range(len(trees))
            for j in range(i + 1, len(trees))
        ]
        versus = [tree_jaccard(t, baseline) for t in trees]
        assert abs(summary.mean_pdi_pdi - np.mean(pairs)) < 1e-12
        assert abs(summary.mean_pdi_baseline - np.mean(versus)) < 1e-12

    def test_needs_two_realizations(self):
        with pytest.raises(ValueError):
            pairwise_similarity_summary([tree([0])])
