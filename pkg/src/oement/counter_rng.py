"""
SplitMix64 used as a counter-based generator.

Output ``n`` of the SplitMix64 stream seeded with ``s`` is
``mix(s + (n + 1) * 0x9E3779B97F4A7C15)`` (mod 2**64), so any output can be
computed directly from its index. Samples therefore do not depend on
chunking or evaluation order.

Reference vector: seed 1234567 yields 6457827717110365317,
3203168211198807973, 9817491932198370423, ...
"""
from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, index) -> np.ndarray:
    """Outputs number ``index`` (array of non-negative ints) of the stream for ``seed``."""
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % 2**64) + (idx + np.uint64(1)) * GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
        return z ^ (z >> np.uint64(31))


def uniform(seed: int, index) -> np.ndarray:
    """Doubles in [0, 1) from the top 53 bits of each output."""
    return (splitmix64(seed, index) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def derive_seed(seed: int, index: int) -> int:
    """Independent child seed for grid point ``index``."""
    return int(splitmix64(seed, index))
