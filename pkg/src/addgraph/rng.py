"""Counter-based random streams.

A realization is identified by a 64-bit seed. The uniform variate for the
vertex pair with counter kappa = i*N + j is a pure function of (seed, kappa),
so pairs can be visited in any order or split across threads without
changing a single draw.

The mixer is the SplitMix64 finalizer. A variate is
``mix(mix(kappa + key_a) ^ key_b) >> 11`` scaled by 2**-53, with the two
keys derived from the seed.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV_2_53 = 1.0 / (1 << 53)


def mix64(x: int) -> int:
    x &= MASK64
    x = ((x ^ (x >> 30)) * _M1) & MASK64
    x = ((x ^ (x >> 27)) * _M2) & MASK64
    return x ^ (x >> 31)


def mix64_array(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.uint64)
    x = (x ^ (x >> np.uint64(30))) * np.uint64(_M1)
    x = (x ^ (x >> np.uint64(27))) * np.uint64(_M2)
    return x ^ (x >> np.uint64(31))


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed must be in [0, 2**64), got {seed}")
    return seed


def stream_keys(seed: int) -> tuple[int, int]:
    seed = check_seed(seed)
    return mix64(seed), mix64(seed ^ GOLDEN)


def realization_seed(master_seed: int, index: int) -> int:
    """Seed of realization ``index``; injective in ``index`` for a fixed master."""
    return mix64(mix64(check_seed(master_seed)) + int(index))


def uniforms(seed: int, counters: np.ndarray) -> np.ndarray:
    """Uniform [0, 1) variates for the given pair counters."""
    key_a, key_b = stream_keys(seed)
    return uniforms_from_keys(key_a, key_b, counters)


def uniforms_from_keys(key_a: int, key_b: int, counters: np.ndarray) -> np.ndarray:
    c = np.asarray(counters, dtype=np.uint64)
    h = mix64_array(mix64_array(c + np.uint64(key_a)) ^ np.uint64(key_b))
    return (h >> np.uint64(11)).astype(np.float64) * _INV_2_53
