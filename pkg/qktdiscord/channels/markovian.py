"""
Memoryless phase-damping source.

The amplitude decays as f(n) = exp(-gamma n) with zero phase, so
F(n) = exp(-2 gamma n). This is the dephasing a Markovian multi-mode
oscillator bath produces; the chaotic kicked top approaches it at large J.
"""

import math
from typing import List

import numpy as np

from qktdiscord.channels.base import DephasingSource
from qktdiscord.channels.registry import register_source
from qktdiscord.core.kicked_top import DecayFit


def markovian_amplitude(gamma: float, n: int) -> complex:
    """
    f(n) = exp(-gamma n), real and positive.

    Raises:
        ValueError: If gamma or n is negative
    """
    if not math.isfinite(gamma) or gamma < 0:
        raise ValueError(f"gamma must be finite and non-negative, got {gamma}")
    if n < 0:
        raise ValueError(f"Kick index must be non-negative, got {n}")
    return complex(math.exp(-gamma * n), 0.0)


@register_source("markovian")
class MarkovianSource(DephasingSource):
    """Phase-damping amplitude exp(-gamma n) with a per-kick rate gamma."""

    @classmethod
    def get_required_config(cls) -> List[str]:
        return ["gamma"]

    def validate_config(self) -> bool:
        if not self.basic_config_validation():
            return False
        gamma = self.get_config_value("gamma")
        return isinstance(gamma, (int, float)) and math.isfinite(gamma) and gamma >= 0

    @classmethod
    def from_decay_fit(cls, fit: DecayFit) -> "MarkovianSource":
        """
        Match an exponential fit of a kicked-top fidelity decay: gamma = rate / 2.

        Raises:
            ValueError: If the fit is not exponential or the rate is not a decay
        """
        if fit.model != "exponential":
            raise ValueError(f"A Markovian rate needs an exponential fit, got {fit.model}")
        if fit.rate <= 0:
            raise ValueError(f"Fitted rate {fit.rate} is not a decay")
        return cls({"gamma": fit.rate / 2.0})

    @property
    def gamma(self) -> float:
        return float(self.get_config_value("gamma"))

    def amplitude(self, n: int) -> complex:
        return markovian_amplitude(self.gamma, n)

    def amplitudes(self, n_max: int) -> np.ndarray:
        if n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {n_max}")
        return np.exp(-self.gamma * np.arange(n_max + 1)).astype(complex)
