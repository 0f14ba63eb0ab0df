"""Per-tree topological metrics and tree-to-tree similarity.

Depth, max breadth, and structural virality run through the batched kernel
(linear time per tree via the subtree-size decomposition of the Wiener
index); the brute-force BFS equivalent lives in the tests as the oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import pairwise_matches, tree_stats
from .errors import TooSmallError
from .reconstruct import CascadeTree


def _stats_for(tree: CascadeTree) -> tuple[int, int, float]:
    if tree.size < 2:
        raise TooSmallError("tree metrics need at least 2 events")
    parents = np.asarray(tree.parents, dtype=np.int32)
    offsets = np.array([0, parents.size], dtype=np.int64)
    d, b, sv = tree_stats(parents, offsets)
    return int(d[0]), int(b[0]), float(sv[0])


def depth(tree: CascadeTree) -> int:
    """Longest chain of reshares from the original post (max hop count)."""
    return _stats_for(tree)[0]


def max_breadth(tree: CascadeTree) -> int:
    """Largest number of nodes at any single depth level below the root."""
    return _stats_for(tree)[1]


def structural_virality(tree: CascadeTree) -> float:
    """Mean shortest-path distance over all unordered node pairs."""
    return _stats_for(tree)[2]


def batch_metrics(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(depth, max_breadth, structural_virality) per realization row of one
    cascade's parent matrix."""
    reps, children = matrix.shape
    flat = np.ascontiguousarray(matrix, dtype=np.int32).reshape(-1)
    offsets = np.arange(0, (reps + 1) * children, children, dtype=np.int64)
    return tree_stats(flat, offsets)


def tree_jaccard(a: CascadeTree, b: CascadeTree) -> float:
    """Jaccard index of the two trees' directed edge sets.

    Edges are keyed by (parent event index, child event index), so two
    realizations of the same cascade share an edge exactly when a child keeps
    the same parent.
    """
    if a.cascade_id != b.cascade_id:
        raise ValueError(f"trees from different cascades: {a.cascade_id!r} vs {b.cascade_id!r}")
    if len(a.parents) != len(b.parents):
        raise ValueError("trees of different sizes")
    n_edges = len(a.parents)
    matches = sum(pa == pb for pa, pb in zip(a.parents, b.parents))
    return matches / (2 * n_edges - matches)


@dataclass(frozen=True)
class SimilaritySummary:
    cascade_id: str
    size: int
    mean_pdi_pdi: float
    mean_pdi_baseline: float | None
    n_pairs: int


def _jaccard_means(matrix: np.ndarray, baseline: np.ndarray | None) -> tuple[float, float | None, int]:
    """Mean pairwise Jaccard among realization rows, and against a baseline
    parent array when given."""
    reps, children = matrix.shape
    matches = pairwise_matches(np.ascontiguousarray(matrix, dtype=np.int32))
    iu = np.triu_indices(reps, k=1)
    m = matches[iu].astype(np.float64)
    within = float(np.mean(m / (2 * children - m)))
    versus = None
    if baseline is not None:
        mb = (matrix == baseline[None, :]).sum(axis=1).astype(np.float64)
        versus = float(np.mean(mb / (2 * children - mb)))
    return within, versus, iu[0].size


def pairwise_similarity_summary(
    trees: Sequence[CascadeTree], baseline: CascadeTree | None = None
) -> SimilaritySummary:
    """Mean Jaccard over all unordered realization pairs of one cascade, and
    over all realization-vs-baseline pairs when a baseline tree is given."""
    if len(trees) < 2:
        raise ValueError("need at least 2 realizations")
    cascade_id = trees[0].cascade_id
    if any(t.cascade_id != cascade_id for t in trees):
        raise ValueError("realizations of different cascades")
    if baseline is not None and baseline.cascade_id != cascade_id:
        raise ValueError("baseline from a different cascade")
    matrix = np.asarray([t.parents for t in trees], dtype=np.int32)
    base = np.asarray(baseline.parents, dtype=np.int32) if baseline is not None else None
    within, versus, n_pairs = _jaccard_means(matrix, base)
    return SimilaritySummary(
        cascade_id=cascade_id,
        size=len(trees[0].parents) + 1,
        mean_pdi_pdi=within,
        mean_pdi_baseline=versus,
        n_pairs=n_pairs,
    )
