"""
Seeded random number generation.

All randomness in qktdiscord goes through :func:`make_rng`, which wraps
numpy's Philox4x64 counter-based bit generator. Philox output depends only
on (seed, counter), so streams are identical across platforms and numpy
builds that ship the same bit generator.
"""

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    """
    Create a deterministic generator for the given seed.

    Args:
        seed: Non-negative integer seed

    Returns:
        np.random.Generator: Generator backed by Philox

    Raises:
        ValueError: If the seed is negative
    """
    if int(seed) < 0:
        raise ValueError(f"Seed must be non-negative, got {seed}")
    return np.random.Generator(np.random.Philox(int(seed)))
