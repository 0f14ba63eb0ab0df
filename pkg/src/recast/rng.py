"""Deterministic random substreams for parallel Monte Carlo reconstruction.

Every realization of every cascade draws its uniforms from a counter-based
SplitMix64 stream keyed by (master_seed, cascade_id, realization). Values are
a pure function of that triple, so results are identical no matter how work
is sharded across workers, and whole blocks of realizations can be generated
in one vectorized call.
"""

from __future__ import annotations

import hashlib

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX_A = np.uint64(0xBF58476D1CE4E5B9)
_MIX_B = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / (1 << 53)


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer, elementwise over uint64 arrays (wraps mod 2^64)."""
    z = (z ^ (z >> np.uint64(30))) * _MIX_A
    z = (z ^ (z >> np.uint64(27))) * _MIX_B
    return z ^ (z >> np.uint64(31))


def stream_key(master_seed: int, cascade_id: str) -> np.uint64:
    """64-bit stream key for one cascade, stable across runs and platforms.

    Hash-based rather than Python ``hash()`` (which is salted per process).
    """
    digest = hashlib.sha256(f"{master_seed}:{cascade_id}".encode()).digest()
    return np.uint64(int.from_bytes(digest[:8], "little"))


def realization_uniforms(
    key: np.uint64, realizations: int, draws: int, first_realization: int = 0
) -> np.ndarray:
    """Uniforms in [0, 1) for a block of realizations of one cascade.

    Returns shape ``(realizations, draws)`` where row ``r`` holds the draws
    for realization ``first_realization + r``. Row contents depend only on
    (key, realization index, draw index).
    """
    r = np.arange(first_realization, first_realization + realizations, dtype=np.uint64)
    subkeys = mix64(key + _GOLDEN * (r + np.uint64(1)))
    i = np.arange(1, draws + 1, dtype=np.uint64)
    vals = mix64(subkeys[:, None] + _GOLDEN * i[None, :])
    return (vals >> np.uint64(11)) * _INV_2_53


def derived_rng(seed: int, *context: int) -> np.random.Generator:
    """Independent numpy Generator for a (seed, context...) slot.

    Used where a full-featured generator is worth its construction cost:
    synthetic corpus generation and bootstrap resampling.
    """
    return np.random.default_rng(np.random.SeedSequence([seed & 0xFFFFFFFF, *context]))
