"""Weighted resharing networks aggregated from cascade trees.

Edge (i -> j, w): user j reshared user i's content w times. The node set is
the full corpus user universe, so strength comparisons across reconstruction
methods always cover identical nodes.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError
from .ingest import Cascade
from .reconstruct import CascadeTree


class ResharingNetwork:
    """Directed weighted edge map over a fixed user universe."""

    def __init__(self, users: Iterable[str] = ()) -> None:
        self.nodes: set[str] = set(users)
        self.weights: dict[tuple[str, str], int] = {}

    def add_edge(self, src: str, dst: str, weight: int = 1) -> None:
        self.nodes.add(src)
        self.nodes.add(dst)
        self.weights[(src, dst)] = self.weights.get((src, dst), 0) + weight

    def merge(self, other: "ResharingNetwork") -> None:
        self.nodes |= other.nodes
        for edge, weight in other.weights.items():
            self.weights[edge] = self.weights.get(edge, 0) + weight

    @property
    def total_weight(self) -> int:
        return sum(self.weights.values())


def build_network(
    trees: Iterable[CascadeTree], corpus: Sequence[Cascade]
) -> ResharingNetwork:
    """Aggregate one tree per cascade into a resharing network.

    Self-edges (a user resharing their own earlier post) are kept; they count
    toward strength like any reshare.
    """
    by_id = {c.cascade_id: c for c in corpus}
    net = ResharingNetwork(e.user_id for c in corpus for e in c.events)
    seen: set[str] = set()
    for tree in trees:
        cascade = by_id.get(tree.cascade_id)
        if cascade is None:
            raise DataError(f"tree references unknown cascade {tree.cascade_id!r}")
        if tree.cascade_id in seen:
            raise DataError(f"multiple trees for cascade {tree.cascade_id!r}; one network takes one realization each")
        seen.add(tree.cascade_id)
        events = cascade.events
        for k, parent in enumerate(tree.parents):
            net.add_edge(events[parent].user_id, events[k + 1].user_id)
    return net


def node_strength(net: ResharingNetwork) -> dict[str, int]:
    """Total reshares accumulated per user (sum of outgoing edge weights);
    users with none get 0."""
    strengths = dict.fromkeys(net.nodes, 0)
    for (src, _dst), weight in net.weights.items():
        strengths[src] += weight
    return strengths


def write_network_csv(path: str | Path, net: ResharingNetwork) -> None:
    """Edge list as ``src,dst,weight``, sorted for deterministic output."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["src", "dst", "weight"])
        for (src, dst), weight in sorted(net.weights.items()):
            writer.writerow([src, dst, weight])


def read_network_csv(path: str | Path) -> ResharingNetwork:
    net = ResharingNetwork()
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["src", "dst", "weight"]:
            raise DataError(f"{path}: expected header 'src,dst,weight'")
        for src, dst, weight in reader:
            net.add_edge(src, dst, int(weight))
    return net


def write_strengths_csv(path: str | Path, strengths: Mapping[str, int]) -> None:
    """Strength table as ``user_id,strength``, sorted by user id."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["user_id", "strength"])
        for user in sorted(strengths):
            writer.writerow([user, strengths[user]])


def top_k_fraction(strengths: Mapping[str, int], k: float) -> set[str]:
    """The ceil(k * N) highest-strength users; ties at the cut go to the
    lexicographically smaller user id."""
    if not 0.0 < k <= 1.0:
        raise ValueError(f"k must be in (0, 1], got {k}")
    if not strengths:
        raise ValueError("empty strength table")
    count = math.ceil(k * len(strengths))
    ranked = sorted(strengths, key=lambda u: (-strengths[u], u))
    return set(ranked[:count])
