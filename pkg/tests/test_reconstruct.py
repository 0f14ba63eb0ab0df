import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recast.errors import InvalidAlphaError, InvalidCandidatesError
from recast.ingest import FollowerGraph, compute_user_profiles
from recast.reconstruct import (
    CascadeTree,
    PdiParams,
    batch_reconstruct,
    cascade_arrays,
    followers_probs,
    naive_reconstruct,
    pdi_cdf_rows,
    pdi_parent_distribution,
    pdi_parent_samples,
    pdi_reconstruct,
    recency_probs,
    tid_reconstruct,
)

from conftest import make_cascade

GRID = [PdiParams(g, a) for g in (0.25, 0.5, 0.75) for a in (1.1, 2.0, 3.0)]


def reference_probs(cascade, child_index, profiles, params):
    """Plain-Python evaluation of the mixture rule, including the power-law
    prefactor that cancels under normalization."""
    prior = cascade.events[:child_index]
    child = cascade.events[child_index]
    fs = [profiles[e.user_id].mean_followers for e in prior]
    total = sum(fs)
    pf = [f / total for f in fs] if total > 0 else [1.0 / len(fs)] * len(fs)
    weights = []
    for e in prior:
        delta = max(child.t - e.t, params.delta_min)
        weights.append(
            ((params.alpha - 1) / params.delta_min)
            * (delta / params.delta_min) ** -params.alpha
        )
    wt = sum(weights)
    pt = [w / wt for w in weights]
    return [params.gamma * a + (1 - params.gamma) * b for a, b in zip(pf, pt)]


class TestFollowersProbs:
    def test_single_candidate(self):
        assert followers_probs([100]).tolist() == [1.0]

    def test_proportional(self):
        assert followers_probs([100, 300]).tolist() == [0.25, 0.75]

    def test_all_zero_uniform_fallback(self):
        assert followers_probs([0, 0]).tolist() == [0.5, 0.5]

    def test_all_zero_samples_uniformly(self):
        probs = followers_probs([0, 0, 0, 0])
        rng = np.random.default_rng(0)
        draws = rng.choice(4, p=probs, size=20000)
        freq = np.bincount(draws) / draws.size
        assert np.all(np.abs(freq - 0.25) < 0.02)

    def test_empty_raises(self):
        with pytest.raises(InvalidCandidatesError):
            followers_probs([])

    def test_sums_to_one(self):
        p = followers_probs([3, 1, 4, 1, 5])
        assert abs(p.sum() - 1.0) < 1e-9


class TestRecencyProbs:
    def test_single_candidate(self):
        assert recency_probs([5], 2.0).tolist() == [1.0]

    def test_power_law_weights(self):
        # (1/1)^-2 = 1 and (2/1)^-2 = 0.25, normalized
        assert np.allclose(recency_probs([1, 2], 2.0, 1.0), [0.8, 0.2], atol=1e-12)

    def test_zero_delta_clamps_to_minimum(self):
        assert recency_probs([0, 1], 2.0, 1.0).tolist() == [0.5, 0.5]

    def test_alpha_at_most_one_raises(self):
        with pytest.raises(InvalidAlphaError):
            recency_probs([1, 2], 1.0)
        with pytest.raises(InvalidAlphaError):
            PdiParams(0.5, 0.9)

    def test_prefactor_cancels(self):
        deltas = [3, 10, 60]
        mine = recency_probs(deltas, 2.5, 2.0)
        prefactored = np.array([((2.5 - 1) / 2.0) * (max(d, 2.0) / 2.0) ** -2.5 for d in deltas])
        assert np.allclose(mine, prefactored / prefactored.sum(), atol=1e-12)

    def test_extreme_alpha_stays_finite(self):
        # the direct power form underflows every weight to zero here
        probs = recency_probs([1, 86400, 604800], alpha=80.0)
        assert np.all(np.isfinite(probs))
        assert abs(probs.sum() - 1.0) < 1e-9
        assert probs[0] > 0.999


class TestParentDistribution:
    def test_first_reshare_is_deterministic(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            for params in GRID:
                dist = pdi_parent_distribution(cascade, 1, profiles, params)
                assert dist.probs.tolist() == [1.0]

    def test_mixture_arithmetic(self):
        # 0.5 * [0.25, 0.75] + 0.5 * [0.8, 0.2]
        mixed = 0.5 * followers_probs([100, 300]) + 0.5 * recency_probs([1, 2], 2.0)
        assert np.allclose(mixed, [0.525, 0.475], atol=1e-12)

    def test_gamma_one_degenerates_to_followers(self):
        cascade = make_cascade("g1", [0, 1, 2], [100, 300, 7])
        profiles = compute_user_profiles([cascade])
        dist = pdi_parent_distribution(cascade, 2, profiles, PdiParams(1.0, 2.0))
        assert dist.probs.tolist() == [0.25, 0.75]

    def test_matches_reference_on_oracle_suite(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            for params in GRID:
                for i in range(1, cascade.size):
                    dist = pdi_parent_distribution(cascade, i, profiles, params)
                    ref = reference_probs(cascade, i, profiles, params)
                    assert np.allclose(dist.probs, ref, atol=1e-12)
                    assert abs(dist.probs.sum() - 1.0) < 1e-9

    def test_batch_rows_match_distribution(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            times, fmeans = cascade_arrays(cascade, profiles)
            for params in GRID:
                cdf, offsets = pdi_cdf_rows(times, fmeans, params)
                for i in range(1, cascade.size):
                    row = np.diff(cdf[offsets[i - 1] : offsets[i]], prepend=0.0)
                    dist = pdi_parent_distribution(cascade, i, profiles, params)
                    assert np.allclose(row, dist.probs, atol=1e-12)

    def test_batch_rows_finite_at_extreme_alpha(self):
        cascade = make_cascade("ex", [0, 1, 90000, 700000], [5, 5, 5, 5])
        profiles = compute_user_profiles([cascade])
        times, fmeans = cascade_arrays(cascade, profiles)
        cdf, _ = pdi_cdf_rows(times, fmeans, PdiParams(0.25, 80.0))
        assert np.all(np.isfinite(cdf))
        assert abs(cdf[-1] - 1.0) < 1e-9


class TestInvariances:
    def test_follower_scale_invariance_exact(self, oracle_cascades):
        # powers of two scale followers exactly in binary floating point
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            times, fmeans = cascade_arrays(cascade, profiles)
            for params in GRID:
                base, _ = pdi_cdf_rows(times, fmeans, params)
                scaled, _ = pdi_cdf_rows(times, fmeans * 4.0, params)
                assert np.array_equal(base, scaled)

    @given(st.floats(min_value=1e-3, max_value=1e6, allow_nan=False))
    @settings(max_examples=30, deadline=None)
    def test_follower_scale_invariance_any_factor(self, factor):
        cascade = make_cascade("sc", [0, 2, 5, 9], [10, 40, 0, 25])
        profiles = compute_user_profiles([cascade])
        times, fmeans = cascade_arrays(cascade, profiles)
        base, _ = pdi_cdf_rows(times, fmeans, PdiParams(0.5, 2.0))
        scaled, _ = pdi_cdf_rows(times, fmeans * factor, PdiParams(0.5, 2.0))
        assert np.allclose(base, scaled, atol=1e-12)

    @given(st.integers(min_value=0, max_value=2**40))
    @settings(max_examples=30, deadline=None)
    def test_time_shift_invariance(self, shift):
        cascade = make_cascade("sh", [0, 2, 5, 9], [10, 40, 0, 25])
        profiles = compute_user_profiles([cascade])
        times, fmeans = cascade_arrays(cascade, profiles)
        base, _ = pdi_cdf_rows(times, fmeans, PdiParams(0.25, 3.0))
        shifted, _ = pdi_cdf_rows(times + float(shift), fmeans, PdiParams(0.25, 3.0))
        assert np.array_equal(base, shifted)

    def test_gamma_one_independent_of_alpha(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            times, fmeans = cascade_arrays(cascade, profiles)
            reference, _ = pdi_cdf_rows(times, fmeans, PdiParams(1.0, 1.1))
            for alpha in (2.0, 3.0):
                other, _ = pdi_cdf_rows(times, fmeans, PdiParams(1.0, alpha))
                assert np.array_equal(reference, other)

    def test_gamma_zero_ignores_followers(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        rng = np.random.default_rng(5)
        for cascade in oracle_cascades:
            times, fmeans = cascade_arrays(cascade, profiles)
            reference, _ = pdi_cdf_rows(times, fmeans, PdiParams(0.0, 2.0))
            permuted, _ = pdi_cdf_rows(times, rng.permutation(fmeans), PdiParams(0.0, 2.0))
            assert np.array_equal(reference, permuted)


class TestPdiReconstruct:
    def test_size_two_always_root(self):
        cascade = make_cascade("s2", [0, 7], [3, 9])
        profiles = compute_user_profiles([cascade])
        for seed in range(20):
            tree = pdi_reconstruct(cascade, profiles, PdiParams(0.5, 2.0), np.random.default_rng(seed))
            assert tree.parents == [0]

    def test_deterministic_under_fixed_stream(self):
        cascade = make_cascade("s3", [0, 1, 2], [5, 5, 5])
        profiles = compute_user_profiles([cascade])
        a = pdi_reconstruct(cascade, profiles, PdiParams(0.5, 2.0), np.random.default_rng(99))
        b = pdi_reconstruct(cascade, profiles, PdiParams(0.5, 2.0), np.random.default_rng(99))
        assert a == b

    def test_zero_follower_candidate_never_selected(self):
        # gamma = 1 and first resharer with zero followers: root is forced
        cascade = make_cascade("z", [0, 1, 2], [1000, 0, 50])
        profiles = compute_user_profiles([cascade])
        matrix = pdi_parent_samples(cascade, profiles, PdiParams(1.0, 2.0), 7, 10000)
        assert np.all(matrix[:, 1] == 0)

    def test_structural_validity(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        for cascade in oracle_cascades:
            matrix = pdi_parent_samples(cascade, profiles, PdiParams(0.25, 1.1), 3, 50)
            for k in range(matrix.shape[1]):
                assert np.all(matrix[:, k] <= k) and np.all(matrix[:, k] >= 0)

    def test_edge_marginals_match_reference(self, oracle_cascades):
        profiles = compute_user_profiles(oracle_cascades)
        cascade = next(c for c in oracle_cascades if c.size == 4)
        params = PdiParams(0.5, 2.0)
        reps = 40000
        matrix = pdi_parent_samples(cascade, profiles, params, 11, reps)
        for i in range(1, cascade.size):
            freq = np.bincount(matrix[:, i - 1], minlength=i) / reps
            ref = reference_probs(cascade, i, profiles, params)
            assert np.all(np.abs(freq - ref) < 0.02)


class TestNaive:
    def test_size_two(self):
        assert naive_reconstruct(make_cascade("n", [0, 1], [1, 1])).parents == [0]

    def test_size_five_star(self):
        tree = naive_reconstruct(make_cascade("n", [0, 1, 2, 3, 4], [1] * 5))
        assert tree.parents == [0, 0, 0, 0]

    def test_pure_function(self, oracle_cascades):
        for c in oracle_cascades:
            assert naive_reconstruct(c) == naive_reconstruct(c)


class TestTid:
    def graph(self, edges):
        g = FollowerGraph()
        for a, b in edges:
            g.add(a, b)
        return g

    def test_most_recent_followed_wins(self):
        cascade = make_cascade("t", [0, 10, 20], [5, 5, 5])
        u = cascade.user_ids()
        g = self.graph([(u[2], u[0]), (u[2], u[1]), (u[1], u[0])])
        profiles = compute_user_profiles([cascade])
        tree = tid_reconstruct(cascade, g, profiles)
        assert tree.parents == [0, 1]

    def test_only_candidate(self):
        cascade = make_cascade("t", [0, 10], [5, 5])
        u = cascade.user_ids()
        tree = tid_reconstruct(cascade, self.graph([(u[1], u[0])]), compute_user_profiles([cascade]))
        assert tree.parents == [0]

    def test_fallback_to_largest_mean_followers(self):
        cascade = make_cascade("t", [0, 10, 20], [10, 500, 5])
        profiles = compute_user_profiles([cascade])
        fallbacks = []
        tree = tid_reconstruct(cascade, FollowerGraph(), profiles, fallbacks)
        assert tree.parents == [0, 1]
        assert fallbacks == [1, 2]

    def test_fallback_tie_earliest_index(self):
        cascade = make_cascade("t", [0, 1, 2], [7, 7, 1])
        tree = tid_reconstruct(cascade, FollowerGraph(), compute_user_profiles([cascade]))
        assert tree.parents == [0, 0]

    def test_recency_tie_latest_index(self):
        cascade = make_cascade("t", [0, 5, 5, 9], [1, 1, 1, 1])
        u = cascade.user_ids()
        g = self.graph([(u[3], u[1]), (u[3], u[2])])
        tree = tid_reconstruct(cascade, g, compute_user_profiles([cascade]))
        assert tree.parents[2] == 2


class TestBatchReconstruct:
    def corpus(self):
        return [
            make_cascade("b1", [0, 1, 2], [10, 20, 30]),
            make_cascade("b2", [0, 5, 9, 12], [1, 2, 3, 4]),
        ]

    def test_cardinality_and_realization_ids(self):
        corpus = self.corpus()
        profiles = compute_user_profiles(corpus)
        trees = list(
            batch_reconstruct(
                corpus, "pdi", params=PdiParams(0.5, 2.0), profiles=profiles,
                realizations=100, master_seed=1,
            )
        )
        assert len(trees) == 200
        assert [t.realization_id for t in trees[:100]] == list(range(100))
        assert all(t.cascade_id == "b1" for t in trees[:100])

    def test_worker_count_does_not_change_output(self):
        corpus = self.corpus()
        profiles = compute_user_profiles(corpus)
        kwargs = dict(params=PdiParams(0.25, 3.0), profiles=profiles, realizations=50, master_seed=9)
        serial = list(batch_reconstruct(corpus, "pdi", workers=1, **kwargs))
        parallel = list(batch_reconstruct(corpus, "pdi", workers=4, **kwargs))
        assert serial == parallel

    def test_nine_setting_grid_yields_900(self):
        corpus = [self.corpus()[0]]
        profiles = compute_user_profiles(corpus)
        trees = []
        for params in GRID:
            trees.extend(
                batch_reconstruct(corpus, "pdi", params=params, profiles=profiles,
                                  realizations=100, master_seed=0)
            )
        assert len(trees) == 900

    def test_deterministic_methods_reject_extra_realizations(self):
        corpus = self.corpus()
        with pytest.raises(ValueError):
            list(batch_reconstruct(corpus, "naive", realizations=5))

    def test_same_seed_same_trees_different_seed_differs(self):
        corpus = [make_cascade("d", [0, 1, 2, 3, 4, 5], [1, 9, 9, 9, 9, 9])]
        profiles = compute_user_profiles(corpus)
        kwargs = dict(params=PdiParams(0.5, 1.1), profiles=profiles, realizations=30)
        a = list(batch_reconstruct(corpus, "pdi", master_seed=1, **kwargs))
        b = list(batch_reconstruct(corpus, "pdi", master_seed=1, **kwargs))
        c = list(batch_reconstruct(corpus, "pdi", master_seed=2, **kwargs))
        assert a == b
        assert a != c


def test_tree_validity_helper():
    assert CascadeTree("x", [0, 1, 2]).is_valid()
    assert not CascadeTree("x", [0, 2]).is_valid()
