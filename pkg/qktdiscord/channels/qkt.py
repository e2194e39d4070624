"""
Kicked-top driven dephasing source.
"""

from typing import List, Optional

import numpy as np

from qktdiscord.channels.base import DephasingSource
from qktdiscord.channels.registry import register_source
from qktdiscord.core.kicked_top import FidelitySeries, KickedTopParams, fidelity_series
from qktdiscord.core.spin_algebra import (
    SpinCoherentAngles,
    SpinOperatorSet,
    cached_spin_operators,
    spin_coherent_state,
)
from qktdiscord.utils.logging import get_logger

logger = get_logger("channels.qkt")


@register_source("qkt")
class QKTSource(DephasingSource):
    """Fidelity amplitudes of a quantum kicked top coupled to the dephasing qubit."""

    @classmethod
    def get_required_config(cls) -> List[str]:
        return ["series"]

    @classmethod
    def get_optional_config(cls) -> List[str]:
        return ["params", "angles"]

    def validate_config(self) -> bool:
        return self.basic_config_validation() and isinstance(
            self.get_config_value("series"), FidelitySeries
        )

    @classmethod
    def from_parameters(
        cls,
        params: KickedTopParams,
        angles: SpinCoherentAngles,
        n_max: int,
        ops: Optional[SpinOperatorSet] = None,
    ) -> "QKTSource":
        """
        Evolve the coherent state at ``angles`` for n_max kicks and wrap the result.

        Args:
            params: Kicked top parameters
            angles: Initial coherent-state direction
            n_max: Number of kicks to precompute
            ops: Spin operators; the cached set for params.spin when omitted
        """
        ops = ops if ops is not None else cached_spin_operators(params.spin)
        psi0 = spin_coherent_state(ops, angles)
        series = fidelity_series(params, ops, psi0, n_max)
        logger.debug(f"QKT source ready: {params.regime.value} regime, {n_max} kicks")
        return cls({"series": series, "params": params, "angles": angles})

    @property
    def recorded_series(self) -> FidelitySeries:
        return self.get_config_value("series")

    @property
    def n_max(self) -> int:
        return self.recorded_series.n_max

    @property
    def epsilon(self) -> Optional[float]:
        return self.recorded_series.epsilon

    def amplitude(self, n: int) -> complex:
        if not (0 <= n <= self.n_max):
            raise ValueError(f"Kick index {n} outside precomputed range 0..{self.n_max}")
        return complex(self.recorded_series.f[n])

    def amplitudes(self, n_max: int) -> np.ndarray:
        if not (0 <= n_max <= self.n_max):
            raise ValueError(f"n_max {n_max} outside precomputed range 0..{self.n_max}")
        return np.array(self.recorded_series.f[: n_max + 1])

    def series(self, n_max: Optional[int] = None) -> FidelitySeries:
        if n_max is None or n_max == self.n_max:
            return self.recorded_series
        return super().series(n_max)
