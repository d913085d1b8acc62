"""Reproducible random streams.

All randomness goes through numpy's Philox4x64 counter-based generator,
keyed by the 64-bit user seed. Trial ``k`` of a run uses the key's stream
jumped ``k`` times (each jump advances the counter by 2**128 draws), so
trials are independent and reproducible across platforms.
"""

import numpy as np

SEED_MASK = (1 << 64) - 1


def make_rng(seed, stream=0):
    if seed is None:
        raise ValueError("a seed is required for reproducible runs")
    bitgen = np.random.Philox(key=int(seed) & SEED_MASK)
    if stream:
        bitgen = bitgen.jumped(int(stream))
    return np.random.Generator(bitgen)
