"""Synthetic cascade corpora with known ground-truth trees.

Each cascade grows sequentially: draw a size, per-user follower counts, and
power-law inter-event gaps, then attach every new event to a prior event
sampled from the same mixture rule the reconstructor assumes (or uniformly,
as a mismatched-model control). A follower graph containing every true
parent relation plus random extra follows makes the deterministic
follower-based method well-posed on this data.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from ._kernels import sample_parents
from .ingest import Cascade, ReshareEvent
from .reconstruct import CascadeTree, PdiParams, pdi_cdf_rows
from .rng import derived_rng

ATTACHMENT_MODES = ("pdi", "uniform")
FOLLOWER_DISTS = ("lognormal", "powerlaw")


@dataclass(frozen=True)
class SynthConfig:
    n_cascades: int
    size_exponent: float = 2.0
    size_min: int = 3
    size_max: int = 300
    follower_dist: str = "lognormal"
    follower_mu: float = 3.0
    follower_sigma: float = 2.0
    follower_exponent: float = 2.5
    follower_xmin: float = 1.0
    gap_exponent: float = 2.0
    gap_min: float = 1.0
    params: PdiParams = field(default_factory=lambda: PdiParams(0.5, 2.0))
    follow_probability: float = 0.1
    attachment: str = "pdi"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_cascades < 0:
            raise ValueError("n_cascades must be >= 0")
        if self.size_min < 2 or self.size_max < self.size_min:
            raise ValueError("need 2 <= size_min <= size_max")
        if self.size_exponent <= 0 or self.gap_exponent <= 1:
            raise ValueError("size_exponent must be > 0 and gap_exponent > 1")
        if self.follower_dist not in FOLLOWER_DISTS:
            raise ValueError(f"follower_dist must be one of {FOLLOWER_DISTS}")
        if self.follower_sigma < 0 or self.follower_exponent <= 1 or self.follower_xmin <= 0:
            raise ValueError("bad follower distribution parameters")
        if self.gap_min <= 0:
            raise ValueError("gap_min must be positive")
        if not 0.0 <= self.follow_probability <= 1.0:
            raise ValueError("follow_probability must be in [0, 1]")
        if self.attachment not in ATTACHMENT_MODES:
            raise ValueError(f"attachment must be one of {ATTACHMENT_MODES}")


@dataclass
class GroundTruthCascade:
    cascade: Cascade
    tree: CascadeTree
    follows: list[tuple[str, str]]


def _draw_followers(rng: np.random.Generator, n: int, config: SynthConfig) -> np.ndarray:
    if config.follower_dist == "lognormal":
        raw = rng.lognormal(config.follower_mu, config.follower_sigma, n)
    else:
        raw = config.follower_xmin * (1.0 - rng.random(n)) ** (
            -1.0 / (config.follower_exponent - 1.0)
        )
    return np.floor(raw).astype(np.int64)


def _draw_gaps(rng: np.random.Generator, n: int, config: SynthConfig) -> np.ndarray:
    raw = config.gap_min * (1.0 - rng.random(n)) ** (-1.0 / (config.gap_exponent - 1.0))
    return np.rint(raw).astype(np.int64)


def generate_cascade(index: int, config: SynthConfig, size_weights: np.ndarray) -> GroundTruthCascade:
    """One ground-truth cascade, fully determined by (config.seed, index)."""
    rng = derived_rng(config.seed, index)
    sizes = np.arange(config.size_min, config.size_max + 1)
    n = int(rng.choice(sizes, p=size_weights))

    followers = _draw_followers(rng, n, config)
    times = np.zeros(n, dtype=np.int64)
    np.cumsum(_draw_gaps(rng, n - 1, config), out=times[1:])

    if config.attachment == "uniform":
        parents = [int(rng.integers(0, i)) for i in range(1, n)]
    else:
        cdf, offsets = pdi_cdf_rows(
            times.astype(np.float64), followers.astype(np.float64), config.params
        )
        u = rng.random((1, n - 1))
        parents = sample_parents(cdf, offsets, u)[0].tolist()

    cascade_id = f"c{index:06d}"
    users = [f"{cascade_id}u{i:04d}" for i in range(n)]
    events = [
        ReshareEvent(
            post_id=f"{cascade_id}p{i:04d}",
            user_id=users[i],
            t=int(times[i]),
            followers=int(followers[i]),
        )
        for i in range(n)
    ]

    follows: list[tuple[str, str]] = []
    for i in range(1, n):
        extra = rng.random(i) < config.follow_probability
        for j in range(i):
            if j == parents[i - 1] or extra[j]:
                follows.append((users[i], users[j]))

    return GroundTruthCascade(
        cascade=Cascade(cascade_id=cascade_id, events=events),
        tree=CascadeTree(cascade_id=cascade_id, parents=parents, realization_id=0),
        follows=follows,
    )


def _size_weights(config: SynthConfig) -> np.ndarray:
    sizes = np.arange(config.size_min, config.size_max + 1, dtype=np.float64)
    w = sizes**-config.size_exponent
    return w / w.sum()


def iter_corpus(config: SynthConfig) -> Iterator[GroundTruthCascade]:
    weights = _size_weights(config)
    for index in range(config.n_cascades):
        yield generate_cascade(index, config, weights)


def generate_corpus(config: SynthConfig) -> list[GroundTruthCascade]:
    """All cascades for the config; deterministic given the seed."""
    return list(iter_corpus(config))


def recovery_score(true: CascadeTree, inferred: CascadeTree) -> float:
    """Fraction of children whose inferred parent matches the true parent
    (edge precision = recall for trees)."""
    if true.cascade_id != inferred.cascade_id:
        raise ValueError("trees from different cascades")
    if len(true.parents) != len(inferred.parents):
        raise ValueError("trees of different sizes")
    matches = sum(t == i for t, i in zip(true.parents, inferred.parents))
    return matches / len(true.parents)


def uniform_guess_baseline(size: int) -> float:
    """Expected recovery of uniform random parent guessing on one cascade:
    the i-th reshare has i candidates, so sum(1/i) / (size - 1)."""
    if size < 2:
        raise ValueError("cascades have at least 2 events")
    return sum(1.0 / i for i in range(1, size)) / (size - 1)
