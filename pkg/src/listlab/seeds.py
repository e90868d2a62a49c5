"""Deterministic RNG stream derivation.

Every randomized operation takes an explicit seed; substreams are derived
from (seed, path) so trial-parallel and serial runs see identical draws.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(seed: int, *path: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(p) for p in path))


def rng_for(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(seed_sequence(seed, *path))


def child_seed(seed: int, *path: int) -> int:
    """A derived 64-bit integer seed, e.g. for provenance records."""
    return int(seed_sequence(seed, *path).generate_state(1, np.uint64)[0])
