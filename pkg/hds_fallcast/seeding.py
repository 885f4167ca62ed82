"""Named random sub-streams derived from a single 64-bit seed.

Every random decision in the package (fold sampling, weight init, dropout,
shuffling, synthetic generation) draws from its own stream, so changing how
much randomness one consumer uses never perturbs another.

Example:
    >>> rng = substream(42, "folds")
    >>> rng2 = substream(42, "init", 3)
"""

from __future__ import annotations

import hashlib

import numpy as np

_SEED_MASK = (1 << 64) - 1


def _stable_key(part: str | int) -> int:
    if isinstance(part, int):
        return part & 0xFFFFFFFF
    digest = hashlib.blake2b(part.encode("utf-8"), digest_size=4).digest()
    return int.from_bytes(digest, "big")


def substream(seed: int, *names: str | int) -> np.random.Generator:
    """Return a generator for the sub-stream ``names`` of ``seed``.

    Args:
        seed: Root seed; reduced modulo 2**64.
        *names: Path of stream names or integer indices (e.g. ``"init", fold_index``).

    Returns:
        An independent ``numpy.random.Generator``.
    """
    sequence = np.random.SeedSequence(entropy=seed & _SEED_MASK, spawn_key=tuple(_stable_key(n) for n in names))
    return np.random.default_rng(sequence)


def child_seed(seed: int, *names: str | int) -> int:
    """Derive a 64-bit integer seed for the sub-stream ``names`` of ``seed``."""
    return int(substream(seed, *names).integers(0, 2**63 - 1, dtype=np.int64))
