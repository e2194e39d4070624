"""
Spin-J angular momentum algebra.

Builds the (2J+1)-dimensional matrices J_x, J_y, J_z in the J_z eigenbasis
ordered m = J, J-1, ..., -J (row 0 is |J, J>), diagonalizes J_x with a
tridiagonal QL solver, and produces rotation unitaries and spin coherent
states from that single spectral decomposition.

Phase convention: |theta, phi> is exp[-i theta (J_x sin phi - J_y cos phi)] |J, J>
evaluated as written. With this exponential the Bloch vector of the state points
along (-sin theta cos phi, -sin theta sin phi, cos theta); amplitude moduli follow
sqrt(C(2J, J+m)) cos^(J+m)(theta/2) sin^(J-m)(theta/2). Global phases cancel in every
quantity computed downstream.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Tuple

import numpy as np

from qktdiscord.core.errors import TridiagonalNoConvergence
from qktdiscord.utils.logging import get_logger
from qktdiscord.utils.rng import make_rng

logger = get_logger("spin_algebra")

MAX_SPIN = 2048
QL_ITERATION_FACTOR = 50

# A state vector is a 1-D complex numpy array of length dim with unit norm.
StateVector = np.ndarray


@dataclass(frozen=True)
class SpinParams:
    """Spin quantum number J (positive integer or half-integer)."""

    j: float

    def __post_init__(self):
        twice = 2 * float(self.j)
        if not math.isfinite(twice) or twice <= 0 or twice != round(twice):
            raise ValueError(f"Spin j must be a positive integer or half-integer, got {self.j}")
        if twice / 2 > MAX_SPIN:
            raise ValueError(f"Spin j={self.j} exceeds the supported maximum {MAX_SPIN}")
        object.__setattr__(self, "j", round(twice) / 2)

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def is_half_integer(self) -> bool:
        return int(round(2 * self.j)) % 2 == 1

    @property
    def magnetic_numbers(self) -> np.ndarray:
        """m values in basis order: J, J-1, ..., -J."""
        return self.j - np.arange(self.dim, dtype=float)


@dataclass(frozen=True, eq=False)
class SpinOperatorSet:
    """
    Angular momentum matrices for one spin, plus the spectral decomposition of J_x.

    All arrays are read-only so a set can be shared between worker threads.
    """

    params: SpinParams
    jx: np.ndarray
    jy: np.ndarray
    jz: np.ndarray
    jx_eigenvalues: np.ndarray
    jx_eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.params.dim


@dataclass(frozen=True)
class SpinCoherentAngles:
    """Polar angle theta in [0, pi] and azimuth phi in [0, 2 pi)."""

    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not (0.0 <= self.phi < 2 * math.pi):
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")


def eig_symmetric_tridiagonal(
    diag, offdiag, iteration_factor: int = QL_ITERATION_FACTOR
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Diagonalize a real symmetric tridiagonal matrix.

    Implicit QL iteration with a Wilkinson-type shift, accumulating the Givens
    rotations into the eigenvector matrix.

    Args:
        diag: Main diagonal (length n >= 1)
        offdiag: Sub/super diagonal (length n - 1)
        iteration_factor: Total shift budget is iteration_factor * n

    Returns:
        Tuple of (eigenvalues ascending, orthonormal eigenvectors as columns)

    Raises:
        ValueError: On empty, non-finite or mismatched input
        TridiagonalNoConvergence: If the shift budget is exhausted
    """
    d = np.array(diag, dtype=float).ravel()
    n = d.size
    if n == 0:
        raise ValueError("Tridiagonal matrix must have at least one row")
    off = np.array(offdiag, dtype=float).ravel()
    if off.size != n - 1:
        raise ValueError(
            f"Off-diagonal length {off.size} does not match diagonal length {n} - 1"
        )
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(off))):
        raise ValueError("Tridiagonal entries must be finite")

    d = d.tolist()
    e = off.tolist() + [0.0]
    # Rows of zt are eigenvector columns; row updates keep memory access contiguous.
    zt = np.eye(n)
    eps = np.finfo(float).eps
    budget = iteration_factor * n
    iterations = 0

    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == l:
                break
            iterations += 1
            if iterations > budget:
                raise TridiagonalNoConvergence(iterations - 1, np.array(d))

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                upper = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * upper
                zt[i] = c * zt[i] - s * upper
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    logger.debug(f"Tridiagonal QL converged in {iterations} shifts for n={n}")
    values = np.array(d)
    order = np.argsort(values, kind="stable")
    return values[order], zt.T[:, order].copy()


def spin_matrices(p: SpinParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Dense J_x, J_y, J_z for spin p.j in the J_z basis (row 0 is m = J).

    Matrix elements follow <m+1|J_+|m> = sqrt(J(J+1) - m(m+1)),
    J_x = (J_+ + J_-)/2 and J_y = (J_+ - J_-)/(2i).
    """
    j = p.j
    m = p.magnetic_numbers
    lower = m[1:]
    ladder = np.sqrt(np.clip(j * (j + 1.0) - lower * (lower + 1.0), 0.0, None))

    j_plus = np.diag(ladder, k=1)
    jx = 0.5 * (j_plus + j_plus.T)
    jy = (j_plus - j_plus.T) / 2j
    jz = np.diag(m)
    return jx, jy, jz


def build_spin_operators(p: SpinParams, iteration_factor: int = QL_ITERATION_FACTOR) -> SpinOperatorSet:
    """
    Construct J_x, J_y, J_z for spin p.j and diagonalize J_x.

    Args:
        p: Spin parameters
        iteration_factor: Shift budget per row for the J_x diagonalization

    Returns:
        SpinOperatorSet: Operators with the J_x spectrum populated
    """
    if not isinstance(p, SpinParams):
        p = SpinParams(p)
    jx, jy, jz = spin_matrices(p)

    eigenvalues, eigenvectors = eig_symmetric_tridiagonal(
        np.zeros(p.dim), np.diagonal(jx, offset=1), iteration_factor=iteration_factor
    )

    for array in (jx, jy, jz, eigenvalues, eigenvectors):
        array.setflags(write=False)

    logger.debug(f"Built spin operators for j={p.j} (dim={p.dim})")
    return SpinOperatorSet(
        params=p,
        jx=jx,
        jy=jy,
        jz=jz,
        jx_eigenvalues=eigenvalues,
        jx_eigenvectors=eigenvectors,
    )


@lru_cache(maxsize=16)
def cached_spin_operators(
    p: SpinParams, iteration_factor: int = QL_ITERATION_FACTOR
) -> SpinOperatorSet:
    """Memoized :func:`build_spin_operators`; operator sets are immutable."""
    return build_spin_operators(p, iteration_factor)


def _gauge_phases(dim: int, axis_phi: float) -> np.ndarray:
    # J_x sin(phi) - J_y cos(phi) = D J_x D^dagger with D = diag(exp(-i k (pi/2 - phi)))
    chi = 0.5 * math.pi - axis_phi
    return np.exp(-1j * chi * np.arange(dim))


def axis_rotation_unitary(ops: SpinOperatorSet, axis_phi: float, angle: float) -> np.ndarray:
    """
    Rotation exp[-i angle (J_x sin(axis_phi) - J_y cos(axis_phi))].

    Args:
        ops: Spin operators
        axis_phi: Azimuth parameter of the in-plane generator (radians)
        angle: Rotation angle (radians)

    Returns:
        np.ndarray: dim x dim unitary matrix
    """
    if not (math.isfinite(axis_phi) and math.isfinite(angle)):
        raise ValueError("Rotation axis and angle must be finite")
    if angle == 0.0:
        return np.eye(ops.dim, dtype=complex)

    vectors = ops.jx_eigenvectors
    phases = np.exp(-1j * angle * ops.jx_eigenvalues)
    inner = (vectors * phases) @ vectors.T
    gauge = _gauge_phases(ops.dim, axis_phi)
    return gauge[:, None] * inner * gauge.conj()[None, :]


def spin_coherent_state(ops: SpinOperatorSet, angles: SpinCoherentAngles) -> StateVector:
    """
    Spin coherent state |theta, phi> = exp[-i theta (J_x sin phi - J_y cos phi)] |J, J>.

    Only the first column of the rotation is formed.
    """
    if angles.theta == 0.0:
        state = np.zeros(ops.dim, dtype=complex)
        state[0] = 1.0
        return state

    vectors = ops.jx_eigenvectors
    phases = np.exp(-1j * angles.theta * ops.jx_eigenvalues)
    column = vectors @ (phases * vectors[0, :])
    # gauge[0] == 1, so the right-hand gauge factor drops out for column 0
    return _gauge_phases(ops.dim, angles.phi) * column


def sample_sphere_angles(seed: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw directions uniformly on the sphere.

    cos(theta) is uniform on [-1, 1] and phi uniform on [0, 2 pi). Draws are taken
    as (cos, phi) pairs so the first pair does not depend on size.

    Returns:
        Tuple of (theta array, phi array)
    """
    if size < 0:
        raise ValueError(f"size must be non-negative, got {size}")
    uniforms = make_rng(seed).random((size, 2))
    cos_theta = 2.0 * uniforms[:, 0] - 1.0
    theta = np.arccos(np.clip(cos_theta, -1.0, 1.0))
    phi = 2.0 * math.pi * uniforms[:, 1]
    return theta, phi


def random_sphere_angles(seed: int) -> SpinCoherentAngles:
    """A single uniformly distributed direction, deterministic in seed."""
    theta, phi = sample_sphere_angles(seed, 1)
    return SpinCoherentAngles(theta=float(theta[0]), phi=float(phi[0]))


def expectation(ops: SpinOperatorSet, psi: StateVector) -> Tuple[float, float, float]:
    """Return (<J_x>, <J_y>, <J_z>) for a normalized state."""
    return tuple(
        float(np.real(np.vdot(psi, op @ psi))) for op in (ops.jx, ops.jy, ops.jz)
    )


def operator_residuals(ops: SpinOperatorSet) -> Dict[str, float]:
    """
    Max-norm residuals of the defining identities.

    Keys: ``commutator`` (worst of the three cyclic [J_a, J_b] = i J_c),
    ``casimir`` (J^2 - J(J+1) I), ``jx_orthogonality`` (V^T V - I).
    """
    jx, jy, jz = ops.jx, ops.jy, ops.jz
    commutator = max(
        np.max(np.abs(a @ b - b @ a - 1j * c))
        for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy))
    )
    j = ops.params.j
    identity = np.eye(ops.dim)
    casimir = np.max(np.abs(jx @ jx + jy @ jy + jz @ jz - j * (j + 1.0) * identity))
    vectors = ops.jx_eigenvectors
    orthogonality = np.max(np.abs(vectors.T @ vectors - identity))
    return {
        "commutator": float(commutator),
        "casimir": float(casimir),
        "jx_orthogonality": float(orthogonality),
    }
