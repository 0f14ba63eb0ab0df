"""On-disk formats and deterministic serialization.

All floating-point output goes through a 12-significant-digit formatter so
repeated runs with the same seed and config produce byte-identical files
regardless of worker count.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import __version__
from .errors import DataError
from .ingest import (
    Cascade,
    FollowerParseResult,
    Rejection,
    parse_cascades,
    parse_follower_edges,
)
from .stats import Setting


def fmt(value: object) -> str:
    """One CSV/JSON cell: floats at 12 significant digits, None empty."""
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        return f"{value:.12g}"
    return str(value)


def jnum(value: float | None) -> float | None:
    """Float rounded through the 12-digit formatter, for JSON output."""
    if value is None:
        return None
    return float(f"{value:.12g}")


def load_cascades(path: str | Path) -> tuple[list[Cascade], list[Rejection]]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"missing input file: {p}")
    with open(p, encoding="utf-8") as fh:
        return parse_cascades(fh)


def load_followers(path: str | Path) -> FollowerParseResult:
    p = Path(path)
    if not p.exists():
        raise DataError(f"missing input file: {p}")
    with open(p, encoding="utf-8", newline="") as fh:
        try:
            return parse_follower_edges(fh)
        except ValueError as exc:
            raise DataError(f"{p}: {exc}") from exc


def write_rejections(path: str | Path, rejections: Sequence[Rejection]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rejections:
            fh.write(json.dumps({"cascade_id": r.cascade_id, "reason": r.reason}) + "\n")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(cell) for cell in row) + "\n")


# ---------------------------------------------------------------------------
# trees.jsonl

@dataclass(frozen=True)
class TreeRecord:
    cascade_id: str
    method: str
    gamma: float | None
    alpha: float | None
    realization: int
    parents: list[int]

    @property
    def setting(self) -> Setting:
        if self.method == "pdi":
            return Setting("pdi", self.gamma, self.alpha)
        return Setting(self.method)


def tree_line_prefix(cascade_id: str, method: str, gamma: float | None, alpha: float | None) -> str:
    """Shared head of every realization line for one (cascade, setting)."""
    g = fmt(gamma) if gamma is not None else "null"
    a = fmt(alpha) if alpha is not None else "null"
    return (
        f'{{"cascade_id":{json.dumps(cascade_id)},"method":"{method}"'
        f',"gamma":{g},"alpha":{a},"realization":'
    )


def encode_tree_lines(prefix: str, matrix: np.ndarray, out: list[str]) -> None:
    for r in range(matrix.shape[0]):
        parents = ",".join(map(str, matrix[r].tolist()))
        out.append(f"{prefix}{r},\"parents\":[{parents}]}}\n")


def iter_tree_records(path: str | Path) -> Iterator[TreeRecord]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"missing trees file: {p} (run the reconstruct command first)")
    with open(p, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            try:
                obj = json.loads(line)
                yield TreeRecord(
                    cascade_id=obj["cascade_id"],
                    method=obj["method"],
                    gamma=obj["gamma"],
                    alpha=obj["alpha"],
                    realization=obj["realization"],
                    parents=obj["parents"],
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"{p}:{line_number}: bad tree record ({exc})") from exc


def group_tree_records(
    records: Iterable[TreeRecord],
) -> Iterator[tuple[Setting, str, np.ndarray]]:
    """Consecutive records of one (setting, cascade) as a parent matrix.

    Rows must arrive in realization order 0..R-1, which is how the
    reconstruct command writes them.
    """
    key: tuple[Setting, str] | None = None
    rows: list[list[int]] = []
    for rec in records:
        rec_key = (rec.setting, rec.cascade_id)
        if rec_key != key:
            if key is not None:
                yield key[0], key[1], np.asarray(rows, dtype=np.int32)
            key = rec_key
            rows = []
        if rec.realization != len(rows):
            raise DataError(
                f"unexpected realization {rec.realization} for cascade "
                f"{rec.cascade_id!r} (expected {len(rows)}); trees file out of order"
            )
        rows.append(rec.parents)
    if key is not None:
        yield key[0], key[1], np.asarray(rows, dtype=np.int32)


# ---------------------------------------------------------------------------
# Run manifest

def _digest(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_manifest(
    out_dir: str | Path,
    command: str,
    config: dict,
    seed: int | None,
    inputs: Sequence[str | Path],
    outputs: Sequence[str],
) -> None:
    """Record what produced this directory's outputs.

    Worker count and other scheduling details are deliberately absent: they
    must not (and do not) affect any output byte.
    """
    manifest = {
        "tool": "recast",
        "version": __version__,
        "command": command,
        "seed": seed,
        "config": config,
        "inputs": {str(p): _digest(Path(p)) for p in inputs},
        "outputs": sorted(outputs),
    }
    with open(Path(out_dir) / "run_manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
