"""Cascade tree reconstruction.

Three ways to assign each reshare a parent among the earlier posts in its
cascade:

* naive      -- every reshare attaches to the original post (the
                platform-data view).
* tid        -- deterministic: attach to the most recent prior poster the
                resharer follows; if they follow none, fall back to the
                prior poster with the largest mean follower count.
* pdi        -- stochastic: attach to prior post j with probability
                gamma * F_j / sum(F) + (1 - gamma) * w_j / sum(w), where F is
                the poster's mean follower count and w_j = (delta_j /
                delta_min) ** -alpha decays with the time gap. Drawing
                repeatedly yields many plausible realizations per cascade.

Parents are drawn independently per child, so the whole realization block of
a cascade reduces to one inverse-CDF sampling kernel call over precomputed
cumulative rows.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from . import rng as rngmod
from ._kernels import sample_parents
from .errors import InvalidAlphaError, InvalidCandidatesError
from .ingest import Cascade, FollowerGraph, UserProfile

METHODS = ("naive", "tid", "pdi")


@dataclass(frozen=True)
class PdiParams:
    """Mixture weight, recency exponent, and minimum time gap in seconds."""

    gamma: float
    alpha: float
    delta_min: float = 1.0

    def __post_init__(self) -> None:
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must be in [0, 1], got {self.gamma}")
        if not self.alpha > 1.0:
            raise InvalidAlphaError(f"alpha must be > 1, got {self.alpha}")
        if not self.delta_min > 0.0:
            raise ValueError(f"delta_min must be positive, got {self.delta_min}")


@dataclass
class CascadeTree:
    """One reconstruction of a cascade.

    ``parents[k]`` is the parent event index of event k+1; a valid tree has
    every parent index strictly below its child's index.
    """

    cascade_id: str
    parents: list[int]
    realization_id: int = 0

    @property
    def size(self) -> int:
        return len(self.parents) + 1

    def is_valid(self) -> bool:
        return all(0 <= p <= k for k, p in enumerate(self.parents))


@dataclass
class ParentDistribution:
    """Parent-selection probabilities for one child event; ``probs[j]`` is
    the probability that prior event j is the parent."""

    child_index: int
    probs: np.ndarray


def followers_probs(candidate_mean_followers: Sequence[float]) -> np.ndarray:
    """Probability of each candidate proportional to mean follower count.

    All-zero candidates have no defined ratio; falls back to uniform.
    """
    f = np.asarray(candidate_mean_followers, dtype=np.float64)
    if f.size == 0:
        raise InvalidCandidatesError("no parent candidates")
    if np.any(f < 0):
        raise ValueError("negative follower counts")
    total = f.sum()
    if total == 0.0:
        return np.full(f.size, 1.0 / f.size)
    return f / total


def recency_probs(
    deltas_seconds: Sequence[float], alpha: float, delta_min: float = 1.0
) -> np.ndarray:
    """Probability of each candidate under the power-law recency weight.

    Gaps below ``delta_min`` are clamped up to it before evaluation. The
    normalizing prefactor of the power law cancels, so only the relative
    weights (delta / delta_min) ** -alpha matter.
    """
    if not alpha > 1.0:
        raise InvalidAlphaError(f"alpha must be > 1, got {alpha}")
    if not delta_min > 0.0:
        raise ValueError(f"delta_min must be positive, got {delta_min}")
    d = np.asarray(deltas_seconds, dtype=np.float64)
    if d.size == 0:
        raise InvalidCandidatesError("no parent candidates")
    # max-shifted log-space evaluation: immune to underflow at large alpha,
    # where the direct power form would collapse every weight to zero
    x = -alpha * np.log(np.maximum(d, delta_min) / delta_min)
    w = np.exp(x - x.max())
    return w / w.sum()


def pdi_parent_distribution(
    cascade: Cascade,
    child_index: int,
    profiles: Mapping[str, UserProfile],
    params: PdiParams,
) -> ParentDistribution:
    """Mixture parent distribution for one child over all prior events."""
    if not 1 <= child_index < cascade.size:
        raise ValueError(f"child_index {child_index} out of range for size {cascade.size}")
    prior = cascade.events[:child_index]
    t_child = cascade.events[child_index].t
    f = [profiles[e.user_id].mean_followers for e in prior]
    deltas = [t_child - e.t for e in prior]
    probs = params.gamma * followers_probs(f) + (1.0 - params.gamma) * recency_probs(
        deltas, params.alpha, params.delta_min
    )
    return ParentDistribution(child_index=child_index, probs=probs)


# ---------------------------------------------------------------------------
# Vectorized per-cascade machinery

def cascade_arrays(
    cascade: Cascade, profiles: Mapping[str, UserProfile]
) -> tuple[np.ndarray, np.ndarray]:
    """(timestamps, mean follower counts) as float64 arrays in event order."""
    times = np.array([e.t for e in cascade.events], dtype=np.float64)
    fmeans = np.array(
        [profiles[e.user_id].mean_followers for e in cascade.events], dtype=np.float64
    )
    return times, fmeans


def pdi_cdf_rows(
    times: np.ndarray, fmeans: np.ndarray, params: PdiParams
) -> tuple[np.ndarray, np.ndarray]:
    """Flattened cumulative parent-probability rows for every child.

    Child k+1's row occupies ``cdf[offsets[k]:offsets[k+1]]`` (k+1 entries).
    Computed densely over the lower-triangular candidate mask so a cascade
    costs a handful of matrix operations regardless of size.
    """
    n = times.shape[0]
    m = n - 1
    idx = np.arange(m)
    valid = idx[None, :] <= idx[:, None]

    denom = np.cumsum(fmeans)[:-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        pf = np.where(denom[:, None] > 0.0, fmeans[None, :m] / denom[:, None], 1.0 / (idx[:, None] + 1.0))

    gaps = np.maximum(times[1:, None] - times[None, :m], params.delta_min)
    x = -params.alpha * np.log(gaps / params.delta_min)
    x = np.where(valid, x, -np.inf)
    w = np.exp(x - x.max(axis=1)[:, None])
    pt = w / w.sum(axis=1)[:, None]

    p = params.gamma * pf + (1.0 - params.gamma) * pt
    p *= valid

    cdf = np.cumsum(p, axis=1)[valid]
    offsets = np.zeros(n, dtype=np.int64)
    np.cumsum(np.arange(1, n), out=offsets[1:])
    return cdf, offsets


def pdi_parent_samples(
    cascade: Cascade,
    profiles: Mapping[str, UserProfile],
    params: PdiParams,
    master_seed: int,
    realizations: int,
    first_realization: int = 0,
) -> np.ndarray:
    """Parent indices for a block of realizations of one cascade.

    Returns int32 of shape (realizations, size - 1); row r is the parent
    array of realization ``first_realization + r``, fully determined by
    (master_seed, cascade_id, realization index).
    """
    times, fmeans = cascade_arrays(cascade, profiles)
    cdf, offsets = pdi_cdf_rows(times, fmeans, params)
    key = rngmod.stream_key(master_seed, cascade.cascade_id)
    u = rngmod.realization_uniforms(key, realizations, cascade.size - 1, first_realization)
    return sample_parents(cdf, offsets, u)


# ---------------------------------------------------------------------------
# Single-tree reconstruction

def pdi_reconstruct(
    cascade: Cascade,
    profiles: Mapping[str, UserProfile],
    params: PdiParams,
    rng: np.random.Generator,
) -> CascadeTree:
    """Draw one realization, consuming ``size - 1`` uniforms from ``rng``."""
    times, fmeans = cascade_arrays(cascade, profiles)
    cdf, offsets = pdi_cdf_rows(times, fmeans, params)
    u = rng.random((1, cascade.size - 1))
    parents = sample_parents(cdf, offsets, u)
    return CascadeTree(cascade.cascade_id, parents[0].tolist(), 0)


def naive_reconstruct(cascade: Cascade) -> CascadeTree:
    """Star tree: every reshare attaches to the original post."""
    return CascadeTree(cascade.cascade_id, [0] * (cascade.size - 1), 0)


def tid_reconstruct(
    cascade: Cascade,
    followers: FollowerGraph,
    profiles: Mapping[str, UserProfile],
    fallback_children: list[int] | None = None,
) -> CascadeTree:
    """Deterministic follower-constrained reconstruction.

    Each resharer attaches to the most recently active prior poster they
    follow (timestamp tie: latest event index). Resharers following none of
    the prior posters attach to the prior poster with the largest mean
    follower count (tie: earliest index); those child indices are appended
    to ``fallback_children`` when a list is supplied, so fallback prevalence
    stays measurable.
    """
    means = [profiles[e.user_id].mean_followers for e in cascade.events]
    events = cascade.events
    parents: list[int] = []
    for i in range(1, cascade.size):
        resharer = events[i].user_id
        candidates = [j for j in range(i) if followers.follows(resharer, events[j].user_id)]
        if candidates:
            parent = max(candidates, key=lambda j: (events[j].t, j))
        else:
            parent = max(range(i), key=lambda j: (means[j], -j))
            if fallback_children is not None:
                fallback_children.append(i)
        parents.append(parent)
    return CascadeTree(cascade.cascade_id, parents, 0)


# ---------------------------------------------------------------------------
# Corpus-level batch reconstruction

def _method_parent_matrix(
    cascade: Cascade,
    method: str,
    params: PdiParams | None,
    followers: FollowerGraph | None,
    profiles: Mapping[str, UserProfile] | None,
    realizations: int,
    master_seed: int,
) -> np.ndarray:
    if method == "pdi":
        assert params is not None and profiles is not None
        return pdi_parent_samples(cascade, profiles, params, master_seed, realizations)
    if method == "naive":
        return np.zeros((1, cascade.size - 1), dtype=np.int32)
    if method == "tid":
        assert followers is not None and profiles is not None
        tree = tid_reconstruct(cascade, followers, profiles)
        return np.asarray([tree.parents], dtype=np.int32)
    raise ValueError(f"unknown method {method!r}")


def _reconstruct_block(args: tuple) -> list[np.ndarray]:
    cascades, method, params, followers, profiles, realizations, master_seed = args
    return [
        _method_parent_matrix(c, method, params, followers, profiles, realizations, master_seed)
        for c in cascades
    ]


def iter_parent_matrices(
    corpus: Sequence[Cascade],
    method: str,
    *,
    params: PdiParams | None = None,
    followers: FollowerGraph | None = None,
    profiles: Mapping[str, UserProfile] | None = None,
    realizations: int = 1,
    master_seed: int = 0,
    workers: int = 1,
) -> Iterator[tuple[Cascade, np.ndarray]]:
    """Parent matrices per cascade, in corpus order.

    Each matrix has one row per realization. Random streams derive purely
    from (master_seed, cascade_id, realization), so output is identical for
    any worker count; workers only change how cascade blocks are scheduled.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    if method == "pdi":
        if params is None or profiles is None:
            raise ValueError("pdi requires params and profiles")
    elif realizations != 1:
        raise ValueError(f"{method} is deterministic; realizations must be 1")
    if method == "tid" and (followers is None or profiles is None):
        raise ValueError("tid requires followers and profiles")
    if realizations < 1:
        raise ValueError("realizations must be >= 1")

    if workers <= 1 or len(corpus) <= 1:
        for cascade in corpus:
            yield cascade, _method_parent_matrix(
                cascade, method, params, followers, profiles, realizations, master_seed
            )
        return

    block_size = max(1, math.ceil(len(corpus) / (workers * 4)))
    blocks = [list(corpus[i : i + block_size]) for i in range(0, len(corpus), block_size)]
    tasks = [
        (block, method, params, followers, profiles, realizations, master_seed)
        for block in blocks
    ]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for block, matrices in zip(blocks, pool.map(_reconstruct_block, tasks)):
            yield from zip(block, matrices)


def batch_reconstruct(
    corpus: Sequence[Cascade],
    method: str,
    *,
    params: PdiParams | None = None,
    followers: FollowerGraph | None = None,
    profiles: Mapping[str, UserProfile] | None = None,
    realizations: int = 1,
    master_seed: int = 0,
    workers: int = 1,
) -> Iterator[CascadeTree]:
    """Stream reconstructed trees: all realizations of cascade 0, then 1, ..."""
    matrices = iter_parent_matrices(
        corpus,
        method,
        params=params,
        followers=followers,
        profiles=profiles,
        realizations=realizations,
        master_seed=master_seed,
        workers=workers,
    )
    for cascade, matrix in matrices:
        for r in range(matrix.shape[0]):
            yield CascadeTree(cascade.cascade_id, matrix[r].tolist(), r)
