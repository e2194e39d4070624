"""
Correlation measures of the two-qubit X state produced by one-sided dephasing.

The reduced state of qubits A and B after n kicks is fixed by the initial
Bell-diagonal correlations c = (c_x, c_y, c_z) and the fidelity amplitude
f = sqrt(F) exp(i alpha):

    diag((1+c_z)/4, (1-c_z)/4, (1-c_z)/4, (1+c_z)/4),
    rho_14 = (c_x - c_y) f / 4,  rho_23 = (c_x + c_y) f / 4

in the basis |00>, |01>, |10>, |11>. Entropies are in bits with 0 log 0 = 0.
"""

import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import xlogy

from qktdiscord.utils.logging import get_logger

logger = get_logger("correlations")

PHYSICALITY_TOLERANCE = 1e-12
EIGENVALUE_TOLERANCE = 1e-10
THETA_CLAMP_TOLERANCE = 1e-9
DEFAULT_COARSE_GRID = 64
DEFAULT_REFINE_ITERS = 40

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_IDENTITY = np.eye(2, dtype=complex)
_SPIN_FLIP = np.kron(_PAULI[1], _PAULI[1])


def xlog2x(p):
    """p log2 p with 0 log 0 = 0."""
    return xlogy(p, p) / math.log(2.0)


def binary_entropy(p):
    """H_b(p) in bits."""
    p = np.clip(p, 0.0, 1.0)
    return -(xlog2x(p) + xlog2x(1.0 - p))


@dataclass(frozen=True)
class BellDiagonalParams:
    """Correlation coefficients c_x, c_y, c_z of the initial Bell-diagonal state."""

    c_x: float
    c_y: float
    c_z: float

    def __post_init__(self):
        for name in ("c_x", "c_y", "c_z"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value}")
            if abs(value) > 1.0 + PHYSICALITY_TOLERANCE:
                raise ValueError(f"{name} must lie in [-1, 1], got {value}")
        worst = min(self.validity_numbers)
        if worst < -PHYSICALITY_TOLERANCE:
            raise ValueError(
                f"Unphysical correlations {self.as_tuple()}: validity number {worst:.3e} < 0"
            )

    @property
    def validity_numbers(self) -> Tuple[float, float, float, float]:
        """Four times the Bell-state weights; all must be non-negative."""
        cx, cy, cz = self.c_x, self.c_y, self.c_z
        return (
            1 - cx - cy - cz,
            1 - cx + cy + cz,
            1 + cx - cy + cz,
            1 + cx + cy - cz,
        )

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.c_x, self.c_y, self.c_z)


@dataclass(frozen=True, eq=False)
class XState:
    """A 4x4 two-qubit density matrix with the X-shaped sparsity pattern."""

    rho: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.rho)

    def reduced(self, keep: str) -> np.ndarray:
        return partial_trace(self.rho, keep)

    def validate(self) -> "XState":
        """
        Check hermiticity, trace, positivity and the zero pattern.

        Raises:
            ValueError: On the first violated property
        """
        rho = self.rho
        if np.max(np.abs(rho - rho.conj().T)) > PHYSICALITY_TOLERANCE:
            raise ValueError("X state is not Hermitian")
        if abs(np.trace(rho) - 1.0) > PHYSICALITY_TOLERANCE:
            raise ValueError(f"X state trace is {np.trace(rho)}")
        if np.min(self.eigenvalues()) < -EIGENVALUE_TOLERANCE:
            raise ValueError("X state has a negative eigenvalue")
        for i, k in ((0, 1), (0, 2), (1, 3), (2, 3)):
            if rho[i, k] != 0 or rho[k, i] != 0:
                raise ValueError(f"X state entry ({i + 1},{k + 1}) must vanish")
        return self


@dataclass
class CorrelationRecord:
    """All correlation measures at one time point (information quantities in bits)."""

    F: float
    alpha: float
    lambdas: Tuple[float, float, float, float]
    Q: float
    CC: float
    MI: float
    REE: float
    concurrence: float

    def check_invariants(self, tolerance: float = 1e-9) -> List[str]:
        """Return the names of violated invariants (empty when consistent)."""
        problems = []
        if abs(sum(self.lambdas) - 1.0) > 1e-10:
            problems.append("lambda_sum")
        if min(self.lambdas) < -PHYSICALITY_TOLERANCE:
            problems.append("lambda_positive")
        if abs(self.CC - (self.MI - self.Q)) > tolerance:
            problems.append("cc_identity")
        if self.Q < -tolerance or self.Q > self.MI + tolerance:
            problems.append("discord_bounds")
        return problems

    def to_dict(self) -> Dict[str, float]:
        row = asdict(self)
        lambdas = row.pop("lambdas")
        for index, value in enumerate(lambdas, start=1):
            row[f"l{index}"] = value
        return row


@dataclass
class DiscordOracleResult:
    """Outcome of the brute-force discord minimization."""

    quantum_discord: float
    classical_correlation: float
    conditional_entropy: float
    theta: float
    phi: float

    @property
    def direction(self) -> Tuple[float, float, float]:
        return (
            math.sin(self.theta) * math.cos(self.phi),
            math.sin(self.theta) * math.sin(self.phi),
            math.cos(self.theta),
        )


@dataclass
class DiscordAlphaDiagnostic:
    """Closed-form versus numeric discord across a sweep of alpha at fixed (c, F)."""

    alphas: List[float] = field(default_factory=list)
    closed_form: List[float] = field(default_factory=list)
    numeric: List[float] = field(default_factory=list)

    @property
    def closed_form_variation(self) -> float:
        return float(np.ptp(self.closed_form)) if self.closed_form else 0.0

    @property
    def numeric_variation(self) -> float:
        return float(np.ptp(self.numeric)) if self.numeric else 0.0

    @property
    def max_discrepancy(self) -> float:
        if not self.alphas:
            return 0.0
        return float(np.max(np.abs(np.subtract(self.closed_form, self.numeric))))

    def to_dict(self) -> Dict:
        return {
            "alphas": list(self.alphas),
            "closed_form": list(self.closed_form),
            "numeric": list(self.numeric),
            "closed_form_variation": self.closed_form_variation,
            "numeric_variation": self.numeric_variation,
            "max_discrepancy": self.max_discrepancy,
        }


def _as_params(c) -> BellDiagonalParams:
    return c if isinstance(c, BellDiagonalParams) else BellDiagonalParams(*c)


def _check_fidelity(F: float) -> float:
    if F is None or math.isnan(F):
        raise ValueError("Fidelity F must not be NaN")
    if F < -PHYSICALITY_TOLERANCE or F > 1.0 + EIGENVALUE_TOLERANCE:
        raise ValueError(f"Fidelity F must lie in [0, 1], got {F}")
    return min(max(F, 0.0), 1.0)


def xstate(c, f: complex) -> XState:
    """
    Reduced two-qubit state for correlations c and fidelity amplitude f.

    Raises:
        ValueError: Unphysical c or |f| > 1
    """
    c = _as_params(c)
    f = complex(f)
    if math.isnan(f.real) or math.isnan(f.imag):
        raise ValueError("Fidelity amplitude must not be NaN")
    if abs(f) > 1.0 + PHYSICALITY_TOLERANCE:
        raise ValueError(f"|f| must not exceed 1, got {abs(f)}")

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = (1.0 + c.c_z) / 4.0
    rho[1, 1] = rho[2, 2] = (1.0 - c.c_z) / 4.0
    rho[0, 3] = (c.c_x - c.c_y) * f / 4.0
    rho[1, 2] = (c.c_x + c.c_y) * f / 4.0
    rho[3, 0] = np.conj(rho[0, 3])
    rho[2, 1] = np.conj(rho[1, 2])
    return XState(rho=rho)


def xstate_eigenvalues(c, F: float) -> Tuple[float, float, float, float]:
    """
    Closed-form spectrum (lambda_1, lambda_2, lambda_3, lambda_4), in that order:

        lambda_1,2 = [1 + c_z +/- |c_x - c_y| sqrt(F)] / 4
        lambda_3,4 = [1 - c_z +/- |c_x + c_y| sqrt(F)] / 4
    """
    c = _as_params(c)
    root = math.sqrt(_check_fidelity(F))
    minus = abs(c.c_x - c.c_y) * root
    plus = abs(c.c_x + c.c_y) * root
    return (
        (1.0 + c.c_z + minus) / 4.0,
        (1.0 + c.c_z - minus) / 4.0,
        (1.0 - c.c_z + plus) / 4.0,
        (1.0 - c.c_z - plus) / 4.0,
    )


def theta_values(c, F: float, alpha: float) -> Tuple[float, float]:
    """
    Unclamped (theta_1, theta_2) entering the classical correlation.

    theta_1 = |c_z|,
    theta_2 = sqrt([2(c_x^2 + c_y^2) + 2|c_x^2 - c_y^2| (|cos 2a| + |sin 2a|)] F) / 2
    """
    c = _as_params(c)
    if alpha is None or math.isnan(alpha):
        raise ValueError("Phase alpha must not be NaN")
    F = _check_fidelity(F)
    factor = abs(math.cos(2.0 * alpha)) + abs(math.sin(2.0 * alpha))
    squares = c.c_x**2 + c.c_y**2
    difference = abs(c.c_x**2 - c.c_y**2)
    theta_2 = math.sqrt((2.0 * squares + 2.0 * difference * factor) * F) / 2.0
    return abs(c.c_z), theta_2


def clamp_theta(value: float, name: str = "theta", tolerance: float = THETA_CLAMP_TOLERANCE) -> float:
    """Clamp into [0, 1]; clamps larger than tolerance are logged as formula-domain warnings."""
    clamped = min(max(value, 0.0), 1.0)
    if abs(clamped - value) > tolerance:
        logger.warning(f"{name}={value:.12f} outside [0, 1]; clamped to {clamped}")
    return clamped


def classical_correlation(c, F: float, alpha: float) -> float:
    """
    C = 1 - min(H_b((1 + theta_1)/2), H_b((1 + theta_2)/2)).

    Raises:
        ValueError: NaN or out-of-range inputs
    """
    theta_1, theta_2 = theta_values(c, F, alpha)
    theta_1 = clamp_theta(theta_1, "theta_1")
    theta_2 = clamp_theta(theta_2, "theta_2")
    entropy = min(
        binary_entropy((1.0 + theta_1) / 2.0),
        binary_entropy((1.0 + theta_2) / 2.0),
    )
    return float(1.0 - entropy)


def _entropy_sum(lambdas: Sequence[float]) -> float:
    values = np.clip(np.asarray(lambdas, dtype=float), 0.0, None)
    return float(np.sum(xlog2x(values)))


def quantum_discord(c, F: float, alpha: float) -> float:
    """Q = 2 + sum_i lambda_i log2 lambda_i - C."""
    lambdas = xstate_eigenvalues(c, F)
    return 2.0 + _entropy_sum(lambdas) - classical_correlation(c, F, alpha)


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Reduce a two-qubit density matrix to qubit "A" or "B"."""
    tensor = np.asarray(rho).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ijkj->ik", tensor)
    if keep == "B":
        return np.einsum("jijk->ik", tensor)
    raise ValueError(f"keep must be 'A' or 'B', got {keep}")


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose on qubit B."""
    return np.asarray(rho).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """S(rho) in bits; eigenvalue dust below zero is clipped."""
    eigenvalues = np.linalg.eigvalsh(rho)
    if np.min(eigenvalues) < -EIGENVALUE_TOLERANCE:
        raise ValueError(f"Density matrix has eigenvalue {np.min(eigenvalues):.3e} < 0")
    return -_entropy_sum(eigenvalues)


def mutual_information(s: XState) -> float:
    """I = S(rho_A) + S(rho_B) - S(rho_AB)."""
    return (
        von_neumann_entropy(s.reduced("A"))
        + von_neumann_entropy(s.reduced("B"))
        - von_neumann_entropy(s.rho)
    )


def correlation_tensor(rho: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Local Bloch vectors a, b and correlation matrix T_ij = Tr(rho s_i x s_j)."""
    a = np.array([np.real(np.trace(rho @ np.kron(s, _IDENTITY))) for s in _PAULI])
    b = np.array([np.real(np.trace(rho @ np.kron(_IDENTITY, s))) for s in _PAULI])
    t = np.array(
        [[np.real(np.trace(rho @ np.kron(si, sj))) for sj in _PAULI] for si in _PAULI]
    )
    return a, b, t


def _conditional_entropy(a, b, t, theta, phi) -> np.ndarray:
    """Post-measurement entropy of A for projective measurements of B along (theta, phi)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = np.stack(
        (np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)), axis=-1
    )
    bn = n @ b
    tn = n @ t.T
    total = np.zeros(bn.shape)
    for sign in (1.0, -1.0):
        weight = 1.0 + sign * bn
        bloch = np.linalg.norm(a + sign * tn, axis=-1)
        with np.errstate(divide="ignore", invalid="ignore"):
            radius = np.where(weight > 0, bloch / np.where(weight > 0, weight, 1.0), 0.0)
        total += 0.5 * weight * binary_entropy((1.0 + np.clip(radius, 0.0, 1.0)) / 2.0)
    return total


def discord_numeric(
    s: XState,
    coarse_grid: int = DEFAULT_COARSE_GRID,
    refine_iters: int = DEFAULT_REFINE_ITERS,
) -> DiscordOracleResult:
    """
    Discord by direct minimization over projective measurements on B.

    A coarse_grid x coarse_grid grid over the upper half sphere of measurement
    directions is scanned first; the best point is then refined by coordinate
    descent whose step halves whenever no neighbour improves, for at most
    refine_iters rounds.

    Returns:
        DiscordOracleResult with Q* = I - C*
    """
    if coarse_grid < 2:
        raise ValueError(f"coarse_grid must be at least 2, got {coarse_grid}")
    a, b, t = correlation_tensor(s.rho)

    thetas = np.linspace(0.0, 0.5 * math.pi, coarse_grid)
    phis = np.linspace(0.0, 2.0 * math.pi, coarse_grid, endpoint=False)
    grid_theta, grid_phi = np.meshgrid(thetas, phis, indexing="ij")
    values = _conditional_entropy(a, b, t, grid_theta, grid_phi)
    index = np.unravel_index(np.argmin(values), values.shape)
    theta, phi = float(grid_theta[index]), float(grid_phi[index])
    best = float(values[index])

    step_theta = thetas[1] - thetas[0]
    step_phi = phis[1] - phis[0]
    for _ in range(refine_iters):
        trial_theta = np.array([theta + step_theta, theta - step_theta, theta, theta])
        trial_phi = np.array([phi, phi, phi + step_phi, phi - step_phi])
        trials = _conditional_entropy(a, b, t, trial_theta, trial_phi)
        pick = int(np.argmin(trials))
        if trials[pick] < best:
            best = float(trials[pick])
            theta, phi = float(trial_theta[pick]), float(trial_phi[pick])
        else:
            step_theta *= 0.5
            step_phi *= 0.5

    entropy_a = von_neumann_entropy(s.reduced("A"))
    classical = entropy_a - best
    discord = mutual_information(s) - classical
    return DiscordOracleResult(
        quantum_discord=float(discord),
        classical_correlation=float(classical),
        conditional_entropy=best,
        theta=theta,
        phi=phi % (2.0 * math.pi),
    )


def ree(c, F: float) -> float:
    """
    Relative entropy of entanglement E = 1 + b log2 b + (1 - b) log2 (1 - b),
    b = max(1/2, lambda_max).
    """
    beta = max(0.5, max(xstate_eigenvalues(c, F)))
    return float(1.0 + xlog2x(beta) + xlog2x(1.0 - beta))


def concurrence(s: XState) -> float:
    """X-state concurrence 2 max(0, |rho_23| - sqrt(rho_11 rho_44), |rho_14| - sqrt(rho_22 rho_33))."""
    rho = s.rho
    diagonal = np.clip(np.real(np.diag(rho)), 0.0, None)
    first = abs(rho[1, 2]) - math.sqrt(diagonal[0] * diagonal[3])
    second = abs(rho[0, 3]) - math.sqrt(diagonal[1] * diagonal[2])
    return float(min(1.0, 2.0 * max(0.0, first, second)))


def concurrence_wootters(rho: np.ndarray) -> float:
    """
    Wootters concurrence of an arbitrary two-qubit density matrix.

    Uses the Hermitian form sqrt(rho) rho~ sqrt(rho), rho~ = (s_y x s_y) rho* (s_y x s_y).
    """
    eigenvalues, vectors = np.linalg.eigh(rho)
    root = (vectors * np.sqrt(np.clip(eigenvalues, 0.0, None))) @ vectors.conj().T
    flipped = _SPIN_FLIP @ np.conj(rho) @ _SPIN_FLIP
    singular = np.sqrt(np.clip(np.linalg.eigvalsh(root @ flipped @ root), 0.0, None))
    singular = np.sort(singular)[::-1]
    return float(max(0.0, singular[0] - singular[1] - singular[2] - singular[3]))


def correlation_record(c, f: complex) -> CorrelationRecord:
    """Evaluate every measure for correlations c at fidelity amplitude f."""
    c = _as_params(c)
    f = complex(f)
    F = min(abs(f) ** 2, 1.0)
    alpha = math.atan2(f.imag, f.real)
    if alpha <= -math.pi:
        alpha += 2.0 * math.pi
    state = xstate(c, f)
    lambdas = xstate_eigenvalues(c, F)
    classical = classical_correlation(c, F, alpha)
    discord = 2.0 + _entropy_sum(lambdas) - classical
    return CorrelationRecord(
        F=F,
        alpha=alpha,
        lambdas=lambdas,
        Q=discord,
        CC=classical,
        MI=mutual_information(state),
        REE=ree(c, F),
        concurrence=concurrence(state),
    )


def discord_alpha_diagnostic(
    c,
    F: float,
    alphas: Sequence[float],
    coarse_grid: int = DEFAULT_COARSE_GRID,
    refine_iters: int = DEFAULT_REFINE_ITERS,
) -> DiscordAlphaDiagnostic:
    """Closed-form and numeric discord for each alpha at fixed (c, F)."""
    c = _as_params(c)
    diagnostic = DiscordAlphaDiagnostic()
    for alpha in alphas:
        state = xstate(c, math.sqrt(_check_fidelity(F)) * complex(math.cos(alpha), math.sin(alpha)))
        diagnostic.alphas.append(float(alpha))
        diagnostic.closed_form.append(quantum_discord(c, F, alpha))
        diagnostic.numeric.append(
            discord_numeric(state, coarse_grid, refine_iters).quantum_discord
        )
    logger.debug(
        f"alpha sweep over {len(diagnostic.alphas)} points: closed-form variation "
        f"{diagnostic.closed_form_variation:.3e}, numeric variation {diagnostic.numeric_variation:.3e}"
    )
    return diagnostic


def discord_zero_candidates(discord: Sequence[float], tolerance: float = 1e-3) -> List[int]:
    """Kicks where Q reaches a local minimum within tolerance of zero."""
    values = np.asarray(discord, dtype=float)
    candidates = []
    for n, value in enumerate(values):
        if value > tolerance:
            continue
        left = values[n - 1] if n > 0 else math.inf
        right = values[n + 1] if n + 1 < values.size else math.inf
        if value <= left and value <= right:
            candidates.append(n)
    return candidates
