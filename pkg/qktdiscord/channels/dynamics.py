"""
Classification of classical-correlation dynamics under dephasing.

The classical correlation follows whichever of theta_1 = |c_z| and theta_2(F, alpha)
is larger. Its qualitative behaviour is fixed by the initial correlations:

- constant:        |c_z| >= max(|c_x|, |c_y|), theta_1 always wins
- monotonic_decay: c_z = 0, only theta_2 contributes
- sudden_change:   otherwise; CC has a kink where theta_2 drops below theta_1
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from qktdiscord.channels.base import DephasingSource
from qktdiscord.core.correlations import BellDiagonalParams, theta_values
from qktdiscord.core.errors import PreconditionError
from qktdiscord.utils.logging import get_logger

logger = get_logger("channels.dynamics")


class CCDynamicsClass(str, Enum):
    CONSTANT = "constant"
    SUDDEN_CHANGE = "sudden_change"
    MONOTONIC_DECAY = "monotonic_decay"


@dataclass
class SuddenChangeReport:
    """
    Branch crossings of theta_2 against theta_1.

    ``crossings`` are interpolated (fractional) kick times; ``crossing_indices``
    the kick n at which the branch flips between n and n + 1. ``first_crossing``
    is None when no crossing happens within the run.
    """

    crossings: List[float] = field(default_factory=list)
    crossing_indices: List[int] = field(default_factory=list)
    n_max: int = 0

    @property
    def first_crossing(self) -> Optional[float]:
        return self.crossings[0] if self.crossings else None

    @property
    def found(self) -> bool:
        return bool(self.crossings)

    def to_dict(self) -> Dict:
        return {
            "first_crossing": self.first_crossing if self.found else "none",
            "crossings": list(self.crossings),
            "crossing_indices": list(self.crossing_indices),
            "n_max": self.n_max,
        }


def classify_cc_dynamics(c) -> CCDynamicsClass:
    """Label the CC dynamics that the correlations c produce under any dephasing."""
    if not isinstance(c, BellDiagonalParams):
        c = BellDiagonalParams(*c)
    if abs(c.c_z) >= max(abs(c.c_x), abs(c.c_y)):
        return CCDynamicsClass.CONSTANT
    if c.c_z == 0:
        return CCDynamicsClass.MONOTONIC_DECAY
    return CCDynamicsClass.SUDDEN_CHANGE


def theta_gap(c, source: DephasingSource, n_max: int) -> np.ndarray:
    """theta_2(n) - theta_1 for n = 0..n_max."""
    amplitudes = source.amplitudes(n_max)
    gap = np.empty(amplitudes.size)
    for n, f in enumerate(amplitudes):
        F = min(abs(f) ** 2, 1.0)
        theta_1, theta_2 = theta_values(c, F, math.atan2(f.imag, f.real))
        gap[n] = theta_2 - theta_1
    return gap


def sudden_change_time(c, source: DephasingSource, n_max: int) -> SuddenChangeReport:
    """
    Locate every flip between the theta_2 >= theta_1 and theta_2 < theta_1 branches.

    A flip between kicks n and n + 1 is reported at the linearly interpolated
    zero of theta_2 - theta_1; an exact tie resolves to the earlier kick.

    Raises:
        PreconditionError: If c does not belong to the sudden_change class
    """
    if not isinstance(c, BellDiagonalParams):
        c = BellDiagonalParams(*c)
    label = classify_cc_dynamics(c)
    if label is not CCDynamicsClass.SUDDEN_CHANGE:
        raise PreconditionError(
            f"Correlations {c.as_tuple()} give {label.value} CC dynamics, not sudden_change"
        )

    gap = theta_gap(c, source, n_max)
    on_theta_2 = gap >= 0
    report = SuddenChangeReport(n_max=n_max)
    for n in np.flatnonzero(on_theta_2[:-1] != on_theta_2[1:]):
        n = int(n)
        before, after = gap[n], gap[n + 1]
        fraction = 0.0 if before == 0 else before / (before - after)
        report.crossing_indices.append(n)
        report.crossings.append(n + fraction)

    if report.found:
        logger.debug(
            f"{len(report.crossings)} CC branch crossings, first at n={report.first_crossing:.3f}"
        )
    else:
        logger.info(f"No CC branch crossing within {n_max} kicks")
    return report


def fluctuation_amplitude(source: DephasingSource, window: Tuple[int, int]) -> float:
    """
    Standard deviation of F over an inclusive kick window.

    Measures the residual memory of a finite-J top; exactly zero for a
    constant F and small for a smooth Markovian tail.
    """
    start, end = window
    if not (0 <= start <= end):
        raise ValueError(f"Invalid window {window}")
    fidelity = np.abs(source.amplitudes(end)[start:]) ** 2
    return float(np.std(fidelity))
