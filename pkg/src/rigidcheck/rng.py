"""Counter-based seeding for reproducible, scheduling-independent sampling.

A master seed expands into one independent substream per sample index via
SplitMix64, so results are identical no matter how work is sharded
across workers.
"""

from __future__ import annotations

import random

_MASK = (1 << 64) - 1
DEFAULT_SEED = 0x5EED


def splitmix64(state: int) -> int:
    state = (state + 0x9E3779B97F4A7C15) & _MASK
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def substream_seed(master: int, index: int) -> int:
    """Seed for the index-th substream of the master seed."""
    return splitmix64(splitmix64(master & _MASK) ^ (index & _MASK))


def substream(master: int, index: int) -> random.Random:
    return random.Random(substream_seed(master, index))
