"""
Shared sampling helpers for the qktdiscord tests.
"""

import math
from typing import Iterator, Tuple

import numpy as np

from qktdiscord.core.correlations import BellDiagonalParams
from qktdiscord.utils.rng import make_rng

# Correlation vectors of the four Bell states; physical c are their convex hull
BELL_VERTICES = np.array(
    [
        [-1.0, -1.0, -1.0],
        [-1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0],
    ]
)


def random_bell_params(rng: np.random.Generator, margin: float = 0.0) -> BellDiagonalParams:
    """
    Uniform draw from the tetrahedron of valid correlations.

    Every validity number is at least 4 * margin.
    """
    weights = rng.dirichlet(np.ones(4))
    weights = (1.0 - 4.0 * margin) * weights + margin
    c = weights @ BELL_VERTICES
    return BellDiagonalParams(float(c[0]), float(c[1]), float(c[2]))


def random_inputs(
    seed: int, count: int, margin: float = 0.0
) -> Iterator[Tuple[BellDiagonalParams, float, float]]:
    """Yield (c, F, alpha) triples with F uniform on [0, 1] and alpha on (-pi, pi]."""
    rng = make_rng(seed)
    for _ in range(count):
        c = random_bell_params(rng, margin)
        F = float(rng.random())
        alpha = float(math.pi - 2.0 * math.pi * rng.random())
        yield c, F, alpha


def amplitude(F: float, alpha: float) -> complex:
    return math.sqrt(F) * complex(math.cos(alpha), math.sin(alpha))
