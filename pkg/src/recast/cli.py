"""Command-line pipeline driver.

Commands: ``synth``, ``reconstruct``, ``influence``, ``structure``,
``validate``. A run directory (``--out-dir``) threads them together:
reconstruct writes ``trees.jsonl`` there, influence and structure read it
back. Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path
from typing import Sequence

import numpy as np

from . import datafiles, pipeline
from .datafiles import encode_tree_lines, fmt, jnum, tree_line_prefix
from .errors import DataError, RecastError
from .ingest import FollowerGraph, compute_user_profiles
from .network import ResharingNetwork, node_strength, write_network_csv, write_strengths_csv
from .reconstruct import PdiParams, pdi_parent_samples, tid_reconstruct
from .stats import (
    DEFAULT_ALPHAS,
    DEFAULT_GAMMAS,
    METRIC_NAMES,
    Setting,
    binned_trend,
    ccdf,
    comparison_harness,
)
from .synth import SynthConfig, iter_corpus

logger = logging.getLogger("recast")

DEFAULT_REALIZATIONS = 100
DEFAULT_TOP_KS = (0.01, 0.05, 0.10)
DEFAULT_BINS = 500
DEFAULT_BOOTSTRAPS = 1000
_METHOD_ORDER = {"naive": 0, "tid": 1, "pdi": 2}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _add_shared(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="cascades.jsonl path")
    p.add_argument("--followers", help="followers.csv path")
    p.add_argument("--out-dir", default=".", help="run directory for outputs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--gamma", type=float, action="append")
    p.add_argument("--alpha", type=float, action="append")
    p.add_argument("--realizations", type=int)
    p.add_argument("--method", action="append", choices=("naive", "tid", "pdi"))
    p.add_argument("--top-k", type=float, action="append", dest="top_k")
    p.add_argument("--bins", type=int, default=DEFAULT_BINS)
    p.add_argument("--bootstraps", type=int, default=DEFAULT_BOOTSTRAPS)
    p.add_argument("--config", help="key = value file overriding flags")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recast", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic corpus with ground truth")
    _add_shared(p)
    p.add_argument("--n-cascades", type=int)
    p.add_argument("--size-exponent", type=float, default=2.0)
    p.add_argument("--size-min", type=int, default=3)
    p.add_argument("--size-max", type=int, default=300)
    p.add_argument("--follower-dist", choices=("lognormal", "powerlaw"), default="lognormal")
    p.add_argument("--follower-mu", type=float, default=3.0)
    p.add_argument("--follower-sigma", type=float, default=2.0)
    p.add_argument("--follower-exponent", type=float, default=2.5)
    p.add_argument("--follower-xmin", type=float, default=1.0)
    p.add_argument("--gap-exponent", type=float, default=2.0)
    p.add_argument("--gap-min", type=float, default=1.0)
    p.add_argument("--gen-gamma", type=float, default=0.5)
    p.add_argument("--gen-alpha", type=float, default=2.0)
    p.add_argument("--follow-probability", type=float, default=0.1)
    p.add_argument("--attachment", choices=("pdi", "uniform"), default="pdi")

    p = sub.add_parser("reconstruct", help="reconstruct cascade trees")
    _add_shared(p)

    p = sub.add_parser("influence", help="node-strength comparison vs the naive network")
    _add_shared(p)
    p.add_argument("--exclude-zero-strength", action="store_true")

    p = sub.add_parser("structure", help="cascade topology metrics, similarity, KS table")
    _add_shared(p)

    p = sub.add_parser("validate", help="parse inputs and report rejections")
    _add_shared(p)
    return parser


# ---------------------------------------------------------------------------
# Config file overlay

def _float_list(v: object) -> list[float]:
    if isinstance(v, (int, float)):
        return [float(v)]
    if isinstance(v, list):
        return [float(x) for x in v]
    return [float(x) for x in str(v).split(",") if x.strip()]


def _str_list(v: object) -> list[str]:
    if isinstance(v, list):
        return [str(x) for x in v]
    return [x.strip() for x in str(v).split(",") if x.strip()]


def _bool(v: object) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).lower() in ("1", "true", "yes", "on")


_CONFIG_COERCERS = {
    "input": str,
    "followers": str,
    "out_dir": str,
    "config": str,
    "seed": int,
    "workers": int,
    "realizations": int,
    "bins": int,
    "bootstraps": int,
    "gamma": _float_list,
    "alpha": _float_list,
    "top_k": _float_list,
    "method": _str_list,
    "exclude_zero_strength": _bool,
    "n_cascades": int,
    "size_exponent": float,
    "size_min": int,
    "size_max": int,
    "follower_dist": str,
    "follower_mu": float,
    "follower_sigma": float,
    "follower_exponent": float,
    "follower_xmin": float,
    "gap_exponent": float,
    "gap_min": float,
    "gen_gamma": float,
    "gen_alpha": float,
    "follow_probability": float,
    "attachment": str,
}


def apply_config_file(args: argparse.Namespace) -> None:
    """Overlay ``key = value`` settings from --config; file values win."""
    if not args.config:
        return
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    for line_number, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_number}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in _CONFIG_COERCERS:
            raise UsageError(f"{path}:{line_number}: unknown config key {key!r}")
        if not hasattr(args, key):
            raise UsageError(
                f"{path}:{line_number}: {key!r} does not apply to this command"
            )
        text = value.strip()
        try:
            parsed = json.loads(text)
        except json.JSONDecodeError:
            parsed = text
        try:
            setattr(args, key, _CONFIG_COERCERS[key](parsed))
        except (TypeError, ValueError) as exc:
            raise UsageError(f"{path}:{line_number}: bad value for {key!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# Shared helpers

def _require_input(args: argparse.Namespace) -> Path:
    if not args.input:
        raise UsageError("--input is required")
    return Path(args.input)


def _out_dir(args: argparse.Namespace) -> Path:
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_corpus(args: argparse.Namespace, out: Path):
    """Parse --input into (corpus, extra manifest outputs)."""
    corpus, rejections = datafiles.load_cascades(_require_input(args))
    extra_outputs = []
    if rejections:
        datafiles.write_rejections(out / "rejections.jsonl", rejections)
        logger.info("rejected %d records (see rejections.jsonl)", len(rejections))
        extra_outputs.append("rejections.jsonl")
    if not corpus:
        raise DataError("no usable cascades in input")
    return corpus, extra_outputs


def _grid_settings(args: argparse.Namespace) -> list[Setting]:
    gammas = args.gamma if args.gamma else list(DEFAULT_GAMMAS)
    alphas = args.alpha if args.alpha else list(DEFAULT_ALPHAS)
    try:
        settings = [
            Setting("pdi", PdiParams(g, a).gamma, PdiParams(g, a).alpha)
            for g in gammas
            for a in alphas
        ]
    except (RecastError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    return sorted(settings, key=Setting.sort_key)


def _top_ks(args: argparse.Namespace) -> list[float]:
    values = args.top_k if args.top_k else list(DEFAULT_TOP_KS)
    for k in values:
        if not 0.0 < k <= 1.0:
            raise UsageError(f"--top-k must be in (0, 1], got {k}")
    return values


# ---------------------------------------------------------------------------
# synth

def cmd_synth(args: argparse.Namespace) -> int:
    if args.n_cascades is None:
        raise UsageError("--n-cascades is required")
    try:
        config = SynthConfig(
            n_cascades=args.n_cascades,
            size_exponent=args.size_exponent,
            size_min=args.size_min,
            size_max=args.size_max,
            follower_dist=args.follower_dist,
            follower_mu=args.follower_mu,
            follower_sigma=args.follower_sigma,
            follower_exponent=args.follower_exponent,
            follower_xmin=args.follower_xmin,
            gap_exponent=args.gap_exponent,
            gap_min=args.gap_min,
            params=PdiParams(args.gen_gamma, args.gen_alpha),
            follow_probability=args.follow_probability,
            attachment=args.attachment,
            seed=args.seed,
        )
    except (RecastError, ValueError) as exc:
        raise UsageError(str(exc)) from exc

    out = _out_dir(args)
    n_events = 0
    edges: list[tuple[str, str]] = []
    with open(out / "cascades.jsonl", "w", encoding="utf-8") as cascades_fh, open(
        out / "truth.jsonl", "w", encoding="utf-8"
    ) as truth_fh:
        for gt in iter_corpus(config):
            record = {
                "cascade_id": gt.cascade.cascade_id,
                "events": [
                    {"post_id": e.post_id, "user_id": e.user_id, "t": e.t, "followers": e.followers}
                    for e in gt.cascade.events
                ],
            }
            cascades_fh.write(json.dumps(record, separators=(",", ":")) + "\n")
            truth_fh.write(
                json.dumps(
                    {"cascade_id": gt.tree.cascade_id, "parents": gt.tree.parents},
                    separators=(",", ":"),
                )
                + "\n"
            )
            n_events += gt.cascade.size
            edges.extend(gt.follows)
    datafiles.write_csv(out / "followers.csv", ["follower_id", "followee_id"], sorted(set(edges)))

    if config.n_cascades == 0:
        logger.warning("generated an empty corpus (n_cascades = 0)")
    datafiles.write_manifest(
        out,
        "synth",
        asdict(config),
        args.seed,
        inputs=[],
        outputs=["cascades.jsonl", "followers.csv", "truth.jsonl"],
    )
    print(
        f"synth: {config.n_cascades} cascades, {n_events} events, "
        f"{len(set(edges))} follower edges -> {out}"
    )
    return 0


# ---------------------------------------------------------------------------
# reconstruct

def _subgraph(followers: FollowerGraph, users: set[str]) -> FollowerGraph:
    sub = FollowerGraph()
    for user in users:
        for followee in followers.followees(user):
            if followee in users:
                sub.add(user, followee)
    return sub


def _encode_trees_task(task: tuple) -> tuple[str, int]:
    """One (method/setting, cascade block) serialized to JSONL text."""
    cascades, method, gamma, alpha, realizations, seed, profiles, followers = task
    lines: list[str] = []
    fallbacks = 0
    for cascade in cascades:
        if method == "pdi":
            params = PdiParams(gamma, alpha)
            matrix = pdi_parent_samples(cascade, profiles, params, seed, realizations)
        elif method == "naive":
            matrix = np.zeros((1, cascade.size - 1), dtype=np.int32)
        else:
            fallback_children: list[int] = []
            tree = tid_reconstruct(cascade, followers, profiles, fallback_children)
            fallbacks += len(fallback_children)
            matrix = np.asarray([tree.parents], dtype=np.int32)
        prefix = tree_line_prefix(cascade.cascade_id, method, gamma, alpha)
        encode_tree_lines(prefix, matrix, lines)
    return "".join(lines), fallbacks


def cmd_reconstruct(args: argparse.Namespace) -> int:
    methods = sorted(set(args.method or ["pdi"]), key=_METHOD_ORDER.__getitem__)
    settings = _grid_settings(args)
    realizations = args.realizations if args.realizations is not None else DEFAULT_REALIZATIONS
    if realizations < 1:
        raise UsageError("--realizations must be >= 1")

    out = _out_dir(args)
    corpus, extra_outputs = _load_corpus(args, out)
    profiles = compute_user_profiles(corpus)

    followers = None
    if "tid" in methods:
        if not args.followers:
            raise DataError("method tid requires --followers followers.csv")
        followers = datafiles.load_followers(args.followers).graph

    block_size = max(1, math.ceil(len(corpus) / (max(1, args.workers) * 4)))
    blocks = [corpus[i : i + block_size] for i in range(0, len(corpus), block_size)]
    # ship each worker only the slice of the profile/follower maps it needs
    block_users = [{e.user_id for c in block for e in c.events} for block in blocks]
    block_profiles = [{u: profiles[u] for u in users} for users in block_users]
    block_followers = [None] * len(blocks)
    if followers is not None:
        block_followers = [_subgraph(followers, users) for users in block_users]

    tasks: list[tuple] = []
    for method in methods:
        if method == "pdi":
            for setting in settings:
                for block, prof in zip(blocks, block_profiles):
                    tasks.append(
                        (block, "pdi", setting.gamma, setting.alpha, realizations, args.seed, prof, None)
                    )
        else:
            if realizations != 1:
                logger.warning("method %s is deterministic; using 1 realization", method)
            for block, prof, graph in zip(blocks, block_profiles, block_followers):
                tasks.append((block, method, None, None, 1, args.seed, prof, graph))

    fallbacks = 0
    with open(out / "trees.jsonl", "w", encoding="utf-8") as fh:
        if args.workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.workers) as pool:
                for text, fb in pool.map(_encode_trees_task, tasks, chunksize=1):
                    fh.write(text)
                    fallbacks += fb
        else:
            for task in tasks:
                text, fb = _encode_trees_task(task)
                fh.write(text)
                fallbacks += fb
    if "tid" in methods:
        logger.info("tid fallback (resharer follows no prior poster): %d edges", fallbacks)

    config = {
        "methods": methods,
        "gammas": [s.gamma for s in settings] if "pdi" in methods else [],
        "alphas": [s.alpha for s in settings] if "pdi" in methods else [],
        "realizations": realizations,
    }
    inputs = [args.input] + ([args.followers] if followers is not None else [])
    datafiles.write_manifest(
        out, "reconstruct", config, args.seed, inputs, ["trees.jsonl"] + extra_outputs
    )
    logger.info(
        "reconstruct: %d cascades, methods %s -> %s",
        len(corpus),
        "/".join(methods),
        out / "trees.jsonl",
    )
    return 0


# ---------------------------------------------------------------------------
# influence

def cmd_influence(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus, extra_outputs = _load_corpus(args, out)
    top_ks = _top_ks(args)
    trees_path = out / "trees.jsonl"

    universe = pipeline.user_universe(corpus)
    codes = pipeline.cascade_user_codes(corpus, universe)
    index_of = {c.cascade_id: i for i, c in enumerate(corpus)}

    naive_net = ResharingNetwork(universe)
    covered: set[str] = set()
    groups = datafiles.group_tree_records(datafiles.iter_tree_records(trees_path))
    for setting, cascade_id, matrix in groups:
        if setting.method != "naive":
            continue
        i = index_of.get(cascade_id)
        if i is None:
            raise DataError(f"tree references unknown cascade {cascade_id!r}")
        if cascade_id in covered:
            raise DataError(f"duplicate naive trees for cascade {cascade_id!r}")
        covered.add(cascade_id)
        events = corpus[i].events
        for k, parent in enumerate(matrix[0].tolist()):
            naive_net.add_edge(events[parent].user_id, events[k + 1].user_id)
    if not covered:
        raise DataError("missing naive baseline: no naive trees in trees.jsonl")
    if len(covered) != len(corpus):
        raise DataError(f"naive trees cover {len(covered)} of {len(corpus)} cascades")
    naive_table = node_strength(naive_net)
    naive = np.asarray([naive_table[u] for u in universe], dtype=np.int64)

    # one accumulator lives at a time: trees.jsonl groups records by setting,
    # so each setting summarizes (and frees its strength matrix) on transition
    results = []
    finished: set[Setting] = set()
    current: Setting | None = None
    acc: pipeline.StrengthAccumulator | None = None
    seen: set[str] = set()

    def _finish() -> None:
        if current is None:
            return
        if len(seen) != len(corpus):
            raise DataError(
                f"{current.label()} trees cover {len(seen)} of {len(corpus)} cascades"
            )
        results.append(
            pipeline.summarize_setting(
                current, acc.strength, naive, top_ks, args.exclude_zero_strength
            )
        )
        finished.add(current)

    groups = datafiles.group_tree_records(datafiles.iter_tree_records(trees_path))
    for setting, cascade_id, matrix in groups:
        if setting.method == "naive":
            continue
        i = index_of.get(cascade_id)
        if i is None:
            raise DataError(f"tree references unknown cascade {cascade_id!r}")
        if setting != current:
            if setting in finished:
                raise DataError(
                    f"{setting.label()} appears twice; trees file not grouped by setting"
                )
            _finish()
            current = setting
            acc = pipeline.StrengthAccumulator(len(universe), matrix.shape[0])
            seen = set()
        if cascade_id in seen:
            raise DataError(f"duplicate trees for cascade {cascade_id!r} in {setting.label()}")
        seen.add(cascade_id)
        acc.add(codes[i], matrix)
    _finish()
    if not results:
        raise DataError("no reconstructed (pdi/tid) trees in trees.jsonl")
    results.sort(key=lambda r: r.setting.sort_key())

    write_network_csv(out / "network.csv", naive_net)
    write_strengths_csv(out / "strengths.csv", naive_table)
    payload = {
        "top_k_values": [jnum(k) for k in top_ks],
        "exclude_zero_strength": bool(args.exclude_zero_strength),
        "users": universe,
        "naive_strength": naive.tolist(),
        "settings": [
            {
                "method": r.setting.method,
                "gamma": jnum(r.setting.gamma),
                "alpha": jnum(r.setting.alpha),
                "realizations": len(r.rho),
                "rho": {
                    "mean": jnum(r.rho_mean),
                    "std": jnum(r.rho_std),
                    "per_realization": [jnum(v) for v in r.rho],
                },
                "top_k": {
                    fmt(k): {
                        "mean": jnum(float(np.mean(v))),
                        "per_realization": [jnum(x) for x in v],
                    }
                    for k, v in r.top_k.items()
                },
                "mean_strength_change": [jnum(v) for v in r.mean_change.tolist()],
            }
            for r in results
        ],
    }
    with open(out / "stats.json", "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")

    config = {"top_k": top_ks, "exclude_zero_strength": bool(args.exclude_zero_strength)}
    datafiles.write_manifest(
        out,
        "influence",
        config,
        args.seed,
        [args.input, trees_path],
        ["stats.json", "strengths.csv", "network.csv"] + extra_outputs,
    )
    for r in results:
        logger.info("influence %s: mean rho %.4f", r.setting.label(), r.rho_mean)
    return 0


# ---------------------------------------------------------------------------
# structure

def cmd_structure(args: argparse.Namespace) -> int:
    out = _out_dir(args)
    corpus, extra_outputs = _load_corpus(args, out)
    trees_path = out / "trees.jsonl"
    settings = _grid_settings(args)
    expected = settings + [Setting("tid")]
    if args.bins < 1 or args.bootstraps < 1:
        raise UsageError("--bins and --bootstraps must be >= 1")

    size_of = {c.cascade_id: c.size for c in corpus}

    # pass 1: which settings are present, and the deterministic baselines
    present: set[Setting] = set()
    baselines: dict[str, np.ndarray] = {}
    groups = datafiles.group_tree_records(datafiles.iter_tree_records(trees_path))
    for setting, cascade_id, matrix in groups:
        present.add(setting)
        if cascade_id not in size_of:
            raise DataError(f"tree references unknown cascade {cascade_id!r}")
        if size_of[cascade_id] != matrix.shape[1] + 1:
            raise DataError(f"tree size mismatch for cascade {cascade_id!r}")
        if setting.method == "tid":
            baselines[cascade_id] = matrix[0]
    missing = [s for s in expected if s not in present]
    if missing:
        raise DataError("missing settings in trees.jsonl: " + ", ".join(s.label() for s in missing))

    # pass 2: metrics per tree, per-cascade summaries per setting
    accumulators: dict[Setting, pipeline.StructureAccumulator] = {}
    with open(out / "metrics.csv", "w", encoding="utf-8") as fh:
        fh.write("cascade_id,method,gamma,alpha,realization,size,depth,max_breadth,structural_virality\n")
        groups = datafiles.group_tree_records(datafiles.iter_tree_records(trees_path))
        for setting, cascade_id, matrix in groups:
            if setting.method == "naive":
                continue
            acc = accumulators.setdefault(setting, pipeline.StructureAccumulator(setting))
            d, b, sv = acc.add(cascade_id, matrix, baselines.get(cascade_id))
            size = matrix.shape[1] + 1
            g = fmt(setting.gamma) if setting.gamma is not None else ""
            a = fmt(setting.alpha) if setting.alpha is not None else ""
            for r in range(matrix.shape[0]):
                fh.write(
                    f"{cascade_id},{setting.method},{g},{a},{r},{size},"
                    f"{d[r]},{b[r]},{fmt(float(sv[r]))}\n"
                )

    for setting in expected:
        got = len(accumulators[setting].result.cascade_ids)
        if got != len(corpus):
            raise DataError(f"{setting.label()} trees cover {got} of {len(corpus)} cascades")

    sim_rows = []
    trend_rows = []
    for setting in settings:
        result = accumulators[setting].result
        sims = result.similarities
        for s in sims:
            sim_rows.append(
                (setting.gamma, setting.alpha, s.cascade_id, s.size, s.mean_pdi_pdi, s.mean_pdi_baseline, s.n_pairs)
            )
        if sims:
            bins = binned_trend(
                [float(s.size) for s in sims],
                [s.mean_pdi_pdi for s in sims],
                args.bins,
                args.bootstraps,
                seed=args.seed,
            )
            trend_rows.extend(
                (setting.gamma, setting.alpha, b.x_center, b.mean, b.ci_low, b.ci_high, b.count)
                for b in bins
            )
    datafiles.write_csv(
        out / "similarity.csv",
        ["gamma", "alpha", "cascade_id", "size", "mean_pdi_pdi", "mean_pdi_baseline", "n_pairs"],
        sim_rows,
    )
    datafiles.write_csv(
        out / "trend.csv",
        ["gamma", "alpha", "x_center", "mean", "ci_low", "ci_high", "count"],
        trend_rows,
    )

    ccdf_rows = []
    ordered = sorted(expected, key=Setting.sort_key)
    for setting in ordered:
        samples = accumulators[setting].result.metric_samples()
        for metric in METRIC_NAMES:
            curve = ccdf(samples[metric])
            label_g = setting.gamma if setting.method == "pdi" else None
            label_a = setting.alpha if setting.method == "pdi" else None
            ccdf_rows.extend(
                (metric, setting.method, label_g, label_a, x, s)
                for x, s in zip(curve.values.tolist(), curve.survival.tolist())
            )
    datafiles.write_csv(
        out / "ccdf.csv", ["metric", "method", "gamma", "alpha", "x", "survival"], ccdf_rows
    )

    harness_samples = {s: accumulators[s].result.metric_samples() for s in expected}
    rows = comparison_harness(harness_samples, expected=expected)

    def _ga(setting: Setting) -> tuple[str, str]:
        if setting.method == "pdi":
            return fmt(setting.gamma), fmt(setting.alpha)
        return setting.method.upper(), setting.method.upper()

    ks_rows = []
    for row in rows:
        g1, a1 = _ga(row.setting1)
        g2, a2 = _ga(row.setting2)
        ks_rows.append(
            (row.metric, g1, a1, g2, a2, row.result.statistic, row.result.p_value, row.result.p_adjusted, row.sig)
        )
    datafiles.write_csv(
        out / "ks_table.csv",
        ["metric", "gamma1", "alpha1", "gamma2", "alpha2", "statistic", "p", "p_adj", "sig"],
        ks_rows,
    )

    config = {
        "gammas": [s.gamma for s in settings],
        "alphas": sorted({s.alpha for s in settings}),
        "bins": args.bins,
        "bootstraps": args.bootstraps,
    }
    datafiles.write_manifest(
        out,
        "structure",
        config,
        args.seed,
        [args.input, trees_path],
        ["metrics.csv", "similarity.csv", "trend.csv", "ccdf.csv", "ks_table.csv"] + extra_outputs,
    )
    logger.info("structure: %d KS comparisons -> %s", len(rows), out / "ks_table.csv")
    return 0


# ---------------------------------------------------------------------------
# validate

def cmd_validate(args: argparse.Namespace) -> int:
    corpus, rejections = datafiles.load_cascades(_require_input(args))
    by_reason: dict[str, int] = {}
    for r in rejections:
        by_reason[r.reason] = by_reason.get(r.reason, 0) + 1
    print(f"accepted: {len(corpus)} cascades")
    print(f"rejected: {len(rejections)}")
    for reason in sorted(by_reason):
        print(f"  {reason}: {by_reason[reason]}")
    if args.out_dir != ".":
        out = _out_dir(args)
        datafiles.write_rejections(out / "rejections.jsonl", rejections)
        datafiles.write_manifest(
            out, "validate", {}, args.seed, [args.input], ["rejections.jsonl"]
        )
    if args.followers:
        result = datafiles.load_followers(args.followers)
        print(
            f"followers: {result.graph.n_edges} edges, "
            f"{result.self_loops_dropped} self-loops dropped, "
            f"{len(result.bad_rows)} bad rows"
        )
    return 0


# ---------------------------------------------------------------------------

COMMANDS = {
    "synth": cmd_synth,
    "reconstruct": cmd_reconstruct,
    "influence": cmd_influence,
    "structure": cmd_structure,
    "validate": cmd_validate,
}


def main(argv: Sequence[str] | None = None) -> int:
    if not logging.getLogger().handlers:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        apply_config_file(args)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except RecastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
