"""Deterministic, splittable random streams.

Every randomized routine in the package draws from a named stream derived
from (seed, *path).  Streams with distinct paths are statistically
independent, and a stream's draws depend only on its own identity, so
results are reproducible regardless of call interleaving or threading.
"""

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def _key(part) -> int:
    if isinstance(part, (int, np.integer)):
        return int(part) & _MASK64
    digest = hashlib.blake2s(str(part).encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def stream(seed, *path) -> np.random.Generator:
    """Return the PCG64 generator identified by (seed, *path)."""
    ss = np.random.SeedSequence(entropy=_key(seed), spawn_key=tuple(_key(p) for p in path))
    return np.random.default_rng(ss)
