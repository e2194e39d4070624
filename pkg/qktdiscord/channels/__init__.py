"""
Dephasing sources for the qubit pair.

Importing this package registers the built-in sources with the source registry.
"""

from qktdiscord.channels.base import DephasingSource
from qktdiscord.channels.registry import SourceRegistry, create_source, register_source, registry
from qktdiscord.channels.markovian import MarkovianSource, markovian_amplitude
from qktdiscord.channels.qkt import QKTSource
from qktdiscord.channels.dynamics import (
    CCDynamicsClass,
    SuddenChangeReport,
    classify_cc_dynamics,
    fluctuation_amplitude,
    sudden_change_time,
    theta_gap,
)

__all__ = [
    "DephasingSource",
    "SourceRegistry",
    "create_source",
    "register_source",
    "registry",
    "MarkovianSource",
    "markovian_amplitude",
    "QKTSource",
    "CCDynamicsClass",
    "SuddenChangeReport",
    "classify_cc_dynamics",
    "fluctuation_amplitude",
    "sudden_change_time",
    "theta_gap",
]
