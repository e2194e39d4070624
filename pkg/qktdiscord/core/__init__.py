"""
Core module for the qktdiscord package.

Spin algebra, kicked-top evolution and correlation measures. Scenario
execution lives in :mod:`qktdiscord.core.runner` and
:mod:`qktdiscord.core.batch_runner`.
"""

from qktdiscord.core.errors import (
    ConfigError,
    NumericalInvariantError,
    OutputError,
    PreconditionError,
    QKTDiscordError,
    TridiagonalNoConvergence,
)
from qktdiscord.core.spin_algebra import (
    SpinCoherentAngles,
    SpinOperatorSet,
    SpinParams,
    build_spin_operators,
    spin_coherent_state,
)
from qktdiscord.core.kicked_top import FidelitySeries, KickedTopParams, fidelity_series
from qktdiscord.core.correlations import BellDiagonalParams, CorrelationRecord, XState

__all__ = [
    "ConfigError",
    "NumericalInvariantError",
    "OutputError",
    "PreconditionError",
    "QKTDiscordError",
    "TridiagonalNoConvergence",
    "SpinCoherentAngles",
    "SpinOperatorSet",
    "SpinParams",
    "build_spin_operators",
    "spin_coherent_state",
    "FidelitySeries",
    "KickedTopParams",
    "fidelity_series",
    "BellDiagonalParams",
    "CorrelationRecord",
    "XState",
]
