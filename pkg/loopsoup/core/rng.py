"""
Random stream derivation.

A run is identified by a 64-bit master seed. Replica ``i`` draws from the
generator seeded with ``derive_seed(master, i)``, which hashes the pair through
``numpy.random.SeedSequence`` (entropy = master, spawn key = (i,)).
"""

from typing import Union

import numpy as np

from loopsoup.core.errors import ParameterError

SeedLike = Union[int, np.random.Generator]

_MASK64 = (1 << 64) - 1


def derive_seed(master: int, stream: int) -> int:
    """Return the 64-bit seed of stream ``stream`` under ``master``."""
    if master < 0 or stream < 0:
        raise ParameterError("seeds and stream indices must be non-negative")
    seq = np.random.SeedSequence(master & _MASK64, spawn_key=(stream,))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator for ``seed``; an existing generator is passed through."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(int(seed) & _MASK64))


def replica_rng(master: int, stream: int) -> np.random.Generator:
    return make_rng(derive_seed(master, stream))
