"""Corpus-level analyses shared by the CLI and the validation suites.

Everything here works on per-cascade parent matrices (one row per
realization), either sampled in-memory or streamed back from trees.jsonl,
and reduces them with the array kernels so corpora with hundreds of
thousands of realizations stay cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .ingest import Cascade, FollowerGraph, UserProfile
from .metrics import _jaccard_means, batch_metrics
from .reconstruct import PdiParams, iter_parent_matrices
from .stats import Setting, spearman_rho


def user_universe(corpus: Sequence[Cascade]) -> list[str]:
    """All corpus users, sorted; index = user code."""
    return sorted({e.user_id for c in corpus for e in c.events})


def cascade_user_codes(corpus: Sequence[Cascade], universe: Sequence[str]) -> list[np.ndarray]:
    code = {u: i for i, u in enumerate(universe)}
    return [
        np.array([code[e.user_id] for e in c.events], dtype=np.int64) for c in corpus
    ]


def pdi_settings(gammas: Iterable[float], alphas: Iterable[float]) -> list[Setting]:
    return [Setting("pdi", g, a) for g in gammas for a in alphas]


def setting_params(setting: Setting, delta_min: float = 1.0) -> PdiParams:
    assert setting.method == "pdi"
    return PdiParams(gamma=setting.gamma, alpha=setting.alpha, delta_min=delta_min)


# ---------------------------------------------------------------------------
# Influence: node strength under reconstruction vs. the naive view

class StrengthAccumulator:
    """Per-realization node strengths for one setting, over the whole corpus."""

    def __init__(self, n_users: int, realizations: int) -> None:
        self.strength = np.zeros((realizations, n_users), dtype=np.int64)

    def add(self, codes: np.ndarray, matrix: np.ndarray) -> None:
        reps, children = matrix.shape
        if reps != self.strength.shape[0]:
            raise DataError(
                f"expected {self.strength.shape[0]} realizations, got {reps}"
            )
        parent_codes = codes[matrix]
        rows = np.broadcast_to(np.arange(reps)[:, None], (reps, children))
        np.add.at(self.strength, (rows, parent_codes), 1)


@dataclass
class InfluenceSettingResult:
    setting: Setting
    rho: list[float]
    rho_mean: float
    rho_std: float
    top_k: dict[float, list[float]]
    mean_change: np.ndarray


@dataclass
class InfluenceResult:
    users: list[str]
    naive_strength: np.ndarray
    settings: list[InfluenceSettingResult] = field(default_factory=list)


def _top_codes(strength: np.ndarray, k: float) -> np.ndarray:
    """Codes of the ceil(k*N) strongest users; ties go to the smaller code,
    matching ``network.top_k_fraction`` over an id-sorted universe."""
    count = math.ceil(k * strength.size)
    order = np.lexsort((np.arange(strength.size), -strength))
    return np.sort(order[:count])


def summarize_setting(
    setting: Setting,
    strength: np.ndarray,
    naive: np.ndarray,
    top_ks: Sequence[float],
    exclude_zero: bool = False,
) -> InfluenceSettingResult:
    """Correlations, top-k overlaps, and mean strength change vs. naive.

    ``exclude_zero`` drops users with zero strength in both networks from
    the rank correlation (sensitivity check); top-k overlap always uses the
    full universe.
    """
    reps = strength.shape[0]
    rho: list[float] = []
    for r in range(reps):
        row = strength[r]
        if exclude_zero:
            mask = (naive > 0) | (row > 0)
            rho.append(spearman_rho(naive[mask], row[mask]).rho)
        else:
            rho.append(spearman_rho(naive, row).rho)
    naive_tops = {k: _top_codes(naive, k) for k in top_ks}
    top_k: dict[float, list[float]] = {k: [] for k in top_ks}
    for r in range(reps):
        for k in top_ks:
            mine = _top_codes(strength[r], k)
            inter = np.intersect1d(mine, naive_tops[k], assume_unique=True).size
            top_k[k].append(inter / (2 * mine.size - inter))
    rho_arr = np.asarray(rho)
    return InfluenceSettingResult(
        setting=setting,
        rho=rho,
        rho_mean=float(rho_arr.mean()),
        rho_std=float(rho_arr.std(ddof=1)) if reps > 1 else 0.0,
        top_k=top_k,
        mean_change=strength.mean(axis=0) - naive,
    )


def naive_strength_vector(
    corpus: Sequence[Cascade], codes: Sequence[np.ndarray]
) -> np.ndarray:
    """Strengths under the naive star attribution: roots collect size - 1."""
    n_users = 1 + max((int(c.max()) for c in codes if c.size), default=-1)
    strength = np.zeros(n_users, dtype=np.int64)
    for cascade, c in zip(corpus, codes):
        strength[c[0]] += cascade.size - 1
    return strength


def influence_analysis(
    corpus: Sequence[Cascade],
    profiles: Mapping[str, UserProfile],
    settings: Sequence[Setting],
    realizations: int,
    master_seed: int,
    *,
    top_ks: Sequence[float] = (0.01, 0.05, 0.10),
    exclude_zero: bool = False,
    workers: int = 1,
) -> InfluenceResult:
    """Sample every PDI setting in-memory and compare against the naive view."""
    universe = user_universe(corpus)
    codes = cascade_user_codes(corpus, universe)
    naive = naive_strength_vector(corpus, codes)
    result = InfluenceResult(users=universe, naive_strength=naive)
    for setting in settings:
        acc = StrengthAccumulator(len(universe), realizations)
        matrices = iter_parent_matrices(
            corpus,
            "pdi",
            params=setting_params(setting),
            profiles=profiles,
            realizations=realizations,
            master_seed=master_seed,
            workers=workers,
        )
        for i, (_cascade, matrix) in enumerate(matrices):
            acc.add(codes[i], matrix)
        result.settings.append(
            summarize_setting(setting, acc.strength, naive, top_ks, exclude_zero)
        )
    return result


# ---------------------------------------------------------------------------
# Structure: per-cascade topology summaries per setting

@dataclass
class CascadeSimilarity:
    cascade_id: str
    size: int
    mean_pdi_pdi: float
    mean_pdi_baseline: float | None
    n_pairs: int


@dataclass
class StructureSettingResult:
    setting: Setting
    cascade_ids: list[str] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    mean_depth: list[float] = field(default_factory=list)
    mean_breadth: list[float] = field(default_factory=list)
    mean_virality: list[float] = field(default_factory=list)
    similarities: list[CascadeSimilarity] = field(default_factory=list)

    def metric_samples(self) -> dict[str, np.ndarray]:
        return {
            "depth": np.asarray(self.mean_depth),
            "max_breadth": np.asarray(self.mean_breadth),
            "structural_virality": np.asarray(self.mean_virality),
        }


class StructureAccumulator:
    """Collects per-cascade mean metrics (and similarities, for stochastic
    settings with a realization block) for one setting."""

    def __init__(self, setting: Setting) -> None:
        self.result = StructureSettingResult(setting=setting)

    def add(
        self,
        cascade_id: str,
        matrix: np.ndarray,
        baseline: np.ndarray | None = None,
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Feed one cascade's realization block; returns per-tree metrics."""
        d, b, sv = batch_metrics(matrix)
        res = self.result
        res.cascade_ids.append(cascade_id)
        res.sizes.append(matrix.shape[1] + 1)
        res.mean_depth.append(float(d.mean()))
        res.mean_breadth.append(float(b.mean()))
        res.mean_virality.append(float(sv.mean()))
        if matrix.shape[0] >= 2 and matrix.shape[1] + 1 >= 3:
            within, versus, n_pairs = _jaccard_means(matrix, baseline)
            res.similarities.append(
                CascadeSimilarity(
                    cascade_id=cascade_id,
                    size=matrix.shape[1] + 1,
                    mean_pdi_pdi=within,
                    mean_pdi_baseline=versus,
                    n_pairs=n_pairs,
                )
            )
        return d, b, sv


def tid_parent_arrays(
    corpus: Sequence[Cascade],
    followers: FollowerGraph,
    profiles: Mapping[str, UserProfile],
) -> dict[str, np.ndarray]:
    matrices = iter_parent_matrices(
        corpus, "tid", followers=followers, profiles=profiles
    )
    return {c.cascade_id: m[0] for c, m in matrices}


def structure_analysis(
    corpus: Sequence[Cascade],
    profiles: Mapping[str, UserProfile],
    settings: Sequence[Setting],
    realizations: int,
    master_seed: int,
    *,
    followers: FollowerGraph | None = None,
    workers: int = 1,
) -> dict[Setting, StructureSettingResult]:
    """Per-setting topology summaries, sampled in-memory.

    When a follower graph is given, the deterministic follower-based method
    runs too (as the ``tid`` setting) and serves as the similarity baseline.
    """
    baselines: dict[str, np.ndarray] = {}
    results: dict[Setting, StructureSettingResult] = {}
    if followers is not None:
        tid_acc = StructureAccumulator(Setting("tid"))
        baselines = tid_parent_arrays(corpus, followers, profiles)
        for cascade in corpus:
            tid_acc.add(cascade.cascade_id, baselines[cascade.cascade_id][None, :])
        results[Setting("tid")] = tid_acc.result
    for setting in settings:
        acc = StructureAccumulator(setting)
        matrices = iter_parent_matrices(
            corpus,
            "pdi",
            params=setting_params(setting),
            profiles=profiles,
            realizations=realizations,
            master_seed=master_seed,
            workers=workers,
        )
        for cascade, matrix in matrices:
            acc.add(cascade.cascade_id, matrix, baselines.get(cascade.cascade_id))
        results[setting] = acc.result
    return results
