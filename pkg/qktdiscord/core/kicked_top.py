"""
Quantum kicked top coupled to a dephasing qubit.

The qubit operator sigma_z^B commutes with everything on the top side, so the
Floquet operator splits into two branches U_+ and U_-, one per qubit eigenvalue:

    U_s = exp[-i (nu + s epsilon) J_x] exp[-i (eta / 2J) J_z^2],   s = +1, -1 (0 unperturbed)

The fidelity amplitude f_n = <psi0| (U_+^dagger)^n (U_-)^n |psi0> is obtained by
co-evolving psi0 under both branches and taking overlaps after every kick.
The time unit is the kick period.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from qktdiscord.core.spin_algebra import SpinOperatorSet, SpinParams, StateVector
from qktdiscord.utils.logging import get_logger

logger = get_logger("kicked_top")

DEFAULT_REVIVAL_THRESHOLD = 0.5
DEFAULT_REVIVAL_NEIGHBORHOOD = 5
DEFAULT_FIT_FLOOR = math.exp(-2.0)
AMPLITUDE_TOLERANCE = 1e-10

REGULAR_ETA_MAX = 2.5
CHAOTIC_ETA_MIN = 3.0


class Branch(str, Enum):
    """Qubit eigenbranch selecting the sign of the coupling term."""

    PLUS = "plus"
    MINUS = "minus"
    UNPERTURBED = "unperturbed"

    @property
    def sign(self) -> int:
        return {"plus": 1, "minus": -1, "unperturbed": 0}[self.value]


class Regime(str, Enum):
    """Chaoticity label of the classical top at nu = pi/2."""

    REGULAR = "regular"
    MIXED = "mixed"
    CHAOTIC = "chaotic"


@dataclass(frozen=True)
class KickedTopParams:
    """Precession angle nu, kick strength eta, coupling epsilon and the top's spin."""

    nu: float
    eta: float
    epsilon: float
    spin: SpinParams

    def __post_init__(self):
        for name in ("nu", "eta", "epsilon"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
        if self.eta < 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be non-negative, got {self.epsilon}")

    @property
    def regime(self) -> Regime:
        return regime(self.eta)


def regime(eta: float) -> Regime:
    """
    Classify a kick strength.

    Regular for eta <= 2.5, chaotic for eta >= 3, mixed in between. The
    thresholds refer to nu = pi/2; any eta is accepted by the simulator.
    """
    if eta <= REGULAR_ETA_MAX:
        return Regime.REGULAR
    if eta >= CHAOTIC_ETA_MIN:
        return Regime.CHAOTIC
    return Regime.MIXED


@dataclass(frozen=True, eq=False)
class FidelitySeries:
    """
    Per-kick fidelity amplitudes f_n, n = 0..n_max.

    Attributes:
        f: Complex amplitudes, f[0] == 1
        epsilon: Coupling that produced the series, when known
        norm_drift: Largest deviation from unit norm of the co-evolved states
    """

    f: np.ndarray
    epsilon: Optional[float] = None
    norm_drift: float = 0.0

    def __post_init__(self):
        amplitudes = np.array(self.f, dtype=complex).ravel()
        if amplitudes.size == 0:
            raise ValueError("A fidelity series needs at least the n = 0 entry")
        if abs(amplitudes[0] - 1.0) > 1e-12:
            raise ValueError(f"f_0 must equal 1, got {amplitudes[0]}")
        peak = float(np.max(np.abs(amplitudes)))
        if peak > 1.0 + AMPLITUDE_TOLERANCE:
            raise ValueError(f"|f_n| must not exceed 1, got {peak}")
        amplitudes[0] = 1.0
        amplitudes.setflags(write=False)
        object.__setattr__(self, "f", amplitudes)

    @classmethod
    def from_fidelity(
        cls, fidelity, alpha=None, epsilon: Optional[float] = None
    ) -> "FidelitySeries":
        """Build a series from F_n (and optionally alpha_n) instead of f_n."""
        magnitude = np.sqrt(np.asarray(fidelity, dtype=float))
        phase = 0.0 if alpha is None else np.asarray(alpha, dtype=float)
        return cls(f=magnitude * np.exp(1j * phase), epsilon=epsilon)

    def __len__(self) -> int:
        return self.f.size

    @property
    def n_max(self) -> int:
        return self.f.size - 1

    @property
    def kicks(self) -> np.ndarray:
        return np.arange(self.f.size)

    @property
    def fidelity(self) -> np.ndarray:
        """F_n = |f_n|^2."""
        return np.abs(self.f) ** 2

    @property
    def alpha(self) -> np.ndarray:
        """Principal phase alpha_n = arg f_n in (-pi, pi]."""
        phase = np.angle(self.f)
        return np.where(phase <= -math.pi, phase + 2 * math.pi, phase)

    @property
    def alpha_unwrapped(self) -> np.ndarray:
        """alpha_n made continuous across kicks, for plotting."""
        return np.unwrap(np.angle(self.f))

    @property
    def phase_factor(self) -> np.ndarray:
        """|cos 2 alpha| + |sin 2 alpha|, the alpha dependence of theta_2."""
        doubled = 2.0 * self.alpha
        return np.abs(np.cos(doubled)) + np.abs(np.sin(doubled))


@dataclass
class RevivalReport:
    """Revivals of F found by :func:`detect_revivals`."""

    revival_times: List[int] = field(default_factory=list)
    revival_peaks: List[float] = field(default_factory=list)
    estimated_period: Optional[float] = None
    k_estimate: Optional[float] = None
    threshold: float = DEFAULT_REVIVAL_THRESHOLD

    def to_dict(self) -> Dict:
        return {
            "revival_times": list(self.revival_times),
            "revival_peaks": list(self.revival_peaks),
            "estimated_period": self.estimated_period,
            "k_estimate": self.k_estimate,
            "threshold": self.threshold,
        }


@dataclass
class DecayFit:
    """
    Least-squares fit of log F on a kick window.

    ``model`` is "gaussian" (log F = -rate n^2) or "exponential" (log F = -rate n);
    ``residual`` is the RMS error on log F; ``window`` is inclusive.
    """

    model: str
    rate: float
    window: Tuple[int, int]
    residual: float

    def to_dict(self) -> Dict:
        return {
            "model": self.model,
            "rate": self.rate,
            "window": list(self.window),
            "residual": self.residual,
        }


def build_floquet(
    params: KickedTopParams, ops: SpinOperatorSet, branch: Branch
) -> np.ndarray:
    """
    One-kick propagator exp[-i (nu + s epsilon) J_x] exp[-i (eta/2J) J_z^2].

    The precession factor comes from the cached J_x spectrum; the kick factor
    is diagonal, so the product is a column scaling.

    Raises:
        ValueError: If ops was built for a different spin
    """
    if ops.dim != params.spin.dim:
        raise ValueError(
            f"Operator dimension {ops.dim} does not match spin j={params.spin.j} (dim {params.spin.dim})"
        )
    branch = Branch(branch)
    angle = params.nu + branch.sign * params.epsilon

    vectors = ops.jx_eigenvectors
    precession = (vectors * np.exp(-1j * angle * ops.jx_eigenvalues)) @ vectors.T
    m = params.spin.magnetic_numbers
    kick = np.exp(-1j * params.eta / (2.0 * params.spin.j) * m**2)
    return precession * kick[None, :]


def unitarity_residual(u: np.ndarray) -> float:
    """||U^dagger U - I||_max."""
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def evolve(u: np.ndarray, psi0: StateVector, n: int) -> StateVector:
    """Apply U to psi0 n times."""
    if n < 0:
        raise ValueError(f"Kick count must be non-negative, got {n}")
    if u.shape != (psi0.size, psi0.size):
        raise ValueError(f"Unitary shape {u.shape} does not match state length {psi0.size}")
    psi = np.array(psi0, dtype=complex)
    for _ in range(n):
        psi = u @ psi
    return psi


def fidelity_series(
    params: KickedTopParams,
    ops: SpinOperatorSet,
    psi0: StateVector,
    n_max: int,
    swap_branches: bool = False,
) -> FidelitySeries:
    """
    Fidelity amplitudes f_n = <psi_n^+ | psi_n^->, n = 0..n_max.

    Args:
        params: Kicked top parameters
        ops: Spin operators for params.spin
        psi0: Normalized initial state of the top
        n_max: Number of kicks
        swap_branches: Evolve with U_- and U_+ exchanged (gives the conjugate series)

    Returns:
        FidelitySeries
    """
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    norm = float(np.linalg.norm(psi0))
    if abs(norm - 1.0) > AMPLITUDE_TOLERANCE:
        raise ValueError(f"Initial state must be normalized, norm is {norm}")

    if params.epsilon == 0.0:
        logger.debug("epsilon = 0: both branches coincide, f_n = 1")
        return FidelitySeries(f=np.ones(n_max + 1, dtype=complex), epsilon=0.0)

    u_plus = build_floquet(params, ops, Branch.PLUS)
    u_minus = build_floquet(params, ops, Branch.MINUS)
    if swap_branches:
        u_plus, u_minus = u_minus, u_plus

    amplitudes = np.empty(n_max + 1, dtype=complex)
    amplitudes[0] = 1.0
    plus = np.array(psi0, dtype=complex)
    minus = plus.copy()
    for n in range(1, n_max + 1):
        plus = u_plus @ plus
        minus = u_minus @ minus
        amplitudes[n] = np.vdot(plus, minus)

    drift = max(abs(np.linalg.norm(plus) - 1.0), abs(np.linalg.norm(minus) - 1.0))
    logger.debug(
        f"Fidelity series: j={params.spin.j} eta={params.eta} epsilon={params.epsilon} "
        f"kicks={n_max} norm drift={drift:.2e}"
    )
    return FidelitySeries(f=amplitudes, epsilon=params.epsilon, norm_drift=float(drift))


def detect_revivals(
    series: FidelitySeries,
    threshold: float = DEFAULT_REVIVAL_THRESHOLD,
    neighborhood: int = DEFAULT_REVIVAL_NEIGHBORHOOD,
) -> RevivalReport:
    """
    Locate revivals of F_n.

    A candidate is a kick n >= 1 with F_n >= threshold that rises from F_{n-1}
    and is the maximum of its +/- neighborhood. Candidates inside the same
    above-threshold excursion count once (highest peak, earliest on ties), and
    the excursion that starts at n = 0 is the initial decay, not a revival.

    Raises:
        ValueError: If the series is shorter than 3 or threshold is outside (0, 1)
    """
    if len(series) < 3:
        raise ValueError("Revival detection needs at least 3 kicks")
    if not (0.0 < threshold < 1.0):
        raise ValueError(f"threshold must lie in (0, 1), got {threshold}")

    fidelity = series.fidelity
    padded = np.pad(fidelity, neighborhood, constant_values=-np.inf)
    window_max = np.lib.stride_tricks.sliding_window_view(padded, 2 * neighborhood + 1).max(axis=1)

    above = fidelity >= threshold
    rising = np.zeros_like(above)
    rising[1:] = fidelity[1:] > fidelity[:-1]
    candidates = np.flatnonzero(above & rising & (fidelity >= window_max))

    # excursion id: increments at every start of an above-threshold run
    starts = above & ~np.concatenate(([False], above[:-1]))
    excursion = np.cumsum(starts)
    initial = excursion[0] if above[0] else -1

    best: Dict[int, int] = {}
    for n in candidates:
        run = int(excursion[n])
        if run == initial:
            continue
        if run not in best or fidelity[n] > fidelity[best[run]]:
            best[run] = int(n)

    times = sorted(best.values())
    report = RevivalReport(
        revival_times=times,
        revival_peaks=[float(fidelity[n]) for n in times],
        threshold=threshold,
    )
    if len(times) >= 2:
        report.estimated_period = float(np.mean(np.diff(times)))
    elif times:
        # a lone revival is one period after the initial state
        report.estimated_period = float(times[0])
    if report.estimated_period is not None and series.epsilon is not None:
        report.k_estimate = report.estimated_period * series.epsilon
    logger.debug(f"Detected {len(times)} revivals above F={threshold}")
    return report


def default_fit_window(series: FidelitySeries, floor: float = DEFAULT_FIT_FLOOR) -> Tuple[int, int]:
    """From n = 1 to the first kick with F below floor, or the end of the series."""
    fidelity = series.fidelity
    if series.n_max < 1:
        raise ValueError("Decay fitting needs at least one kick")
    below = np.flatnonzero(fidelity[1:] < floor)
    end = int(below[0]) + 1 if below.size else series.n_max
    return 1, end


def _fit_model(kicks: np.ndarray, log_fidelity: np.ndarray, model: str) -> Tuple[float, float]:
    x = kicks.astype(float) ** 2 if model == "gaussian" else kicks.astype(float)
    (slope,), _, _, _ = np.linalg.lstsq(x[:, None], log_fidelity, rcond=None)
    rate = -float(slope)
    residual = float(np.sqrt(np.mean((log_fidelity + rate * x) ** 2)))
    return rate, residual


def fit_decay(
    series: FidelitySeries,
    window: Optional[Tuple[int, int]] = None,
    model: str = "auto",
) -> DecayFit:
    """
    Fit log F_n = -rate * n (exponential) or -rate * n^2 (gaussian).

    Args:
        series: Fidelity series
        window: Inclusive kick interval; defaults to :func:`default_fit_window`
        model: "gaussian", "exponential" or "auto" (fit both, keep the lower residual)

    Raises:
        ValueError: Unknown model, bad window, F = 0 inside the window, or a
            fitted rate that is not positive
    """
    if model not in ("gaussian", "exponential", "auto"):
        raise ValueError(f"Unknown decay model: {model}")
    start, end = window if window is not None else default_fit_window(series)
    if not (0 <= start <= end <= series.n_max) or end == 0:
        raise ValueError(f"Fit window {(start, end)} outside series bounds 0..{series.n_max}")

    kicks = np.arange(start, end + 1)
    fidelity = series.fidelity[start : end + 1]
    if np.any(fidelity <= 0.0):
        raise ValueError("Fit window contains F = 0; log F is undefined")
    log_fidelity = np.log(fidelity)

    models = ("gaussian", "exponential") if model == "auto" else (model,)
    fits = []
    for name in models:
        rate, residual = _fit_model(kicks, log_fidelity, name)
        fits.append(DecayFit(model=name, rate=rate, window=(start, end), residual=residual))
    best = min(fits, key=lambda fit: fit.residual)
    if best.rate <= 0:
        raise ValueError(f"Fitted {best.model} rate {best.rate:.3e} is not a decay")
    logger.debug(f"Decay fit {best.model}: rate={best.rate:.4e} residual={best.residual:.2e}")
    return best
