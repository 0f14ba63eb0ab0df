"""NumPy/Python fallback for the hot kernels.

Same contracts and bit-identical outputs as the compiled module in
``_core.pyx``; selected at import time when the extension is unavailable.
"""

from __future__ import annotations

import numpy as np


def sample_parents(cdf: np.ndarray, offsets: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Inverse-CDF categorical draws for every (realization, child) pair.

    ``cdf`` concatenates one cumulative-probability row per child: the row for
    child ``k`` (event index k+1, k+1 candidates) lives at
    ``cdf[offsets[k]:offsets[k+1]]`` and ends at ~1.0. ``u`` has shape
    (realizations, children). Returns int32 parent event indices of the same
    shape: the first row position whose cdf value exceeds the uniform, clamped
    into range to absorb rounding at the top of the row.
    """
    n_children = offsets.shape[0] - 1
    out = np.empty((u.shape[0], n_children), dtype=np.int32)
    for k in range(n_children):
        row = cdf[offsets[k] : offsets[k + 1]]
        out[:, k] = np.minimum(np.searchsorted(row, u[:, k], side="right"), len(row) - 1)
    return out


def tree_stats(parents: np.ndarray, offsets: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Depth, max breadth, and structural virality for a batch of trees.

    ``parents`` concatenates per-tree parent arrays (tree ``t`` spans
    ``parents[offsets[t]:offsets[t+1]]``, entry ``i`` giving the parent event
    index of event i+1). Breadth counts nodes per level excluding the root
    level. Structural virality is the mean pairwise tree distance, computed
    from subtree sizes: each edge above node ``i`` lies on s_i * (n - s_i)
    paths.
    """
    n_trees = offsets.shape[0] - 1
    depth_out = np.empty(n_trees, dtype=np.int32)
    breadth_out = np.empty(n_trees, dtype=np.int32)
    sv_out = np.empty(n_trees, dtype=np.float64)
    for t in range(n_trees):
        par = parents[offsets[t] : offsets[t + 1]].tolist()
        n = len(par) + 1
        depths = [0] * n
        level_counts = [0] * n
        deepest = 0
        for i in range(1, n):
            d = depths[par[i - 1]] + 1
            depths[i] = d
            level_counts[d] += 1
            if d > deepest:
                deepest = d
        size = [1] * n
        for i in range(n - 1, 0, -1):
            size[par[i - 1]] += size[i]
        path_count = 0
        for i in range(1, n):
            path_count += size[i] * (n - size[i])
        depth_out[t] = deepest
        breadth_out[t] = max(level_counts[1 : deepest + 1])
        sv_out[t] = path_count / (n * (n - 1) / 2)
    return depth_out, breadth_out, sv_out


def pairwise_matches(parents: np.ndarray) -> np.ndarray:
    """Matching-parent counts between every pair of realizations.

    ``parents`` has shape (realizations, children); output (R, R) int64 entry
    (a, b) counts children assigned the same parent in realizations a and b.
    """
    r = parents.shape[0]
    out = np.zeros((r, r), dtype=np.int64)
    for k in range(parents.shape[1]):
        col = parents[:, k]
        out += col[:, None] == col[None, :]
    return out
