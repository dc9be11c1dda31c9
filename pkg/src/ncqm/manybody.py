"""N-particle kinetic energy with noncommuting coordinates and momenta.

The momentum representation ``p_i = -i hbar sum_j c_ij grad_j`` turns the
kinetic energy into a quadratic form ``-hbar^2/2 sum_jk K_jk grad_j.grad_k``
with ``K = c^T diag(1/m) c``. A linear change of coordinates ``R = T r``
maps it to ``T K T^T``; the generalized Jacobi coordinates pick the last
row of ``T`` so the centre-of-mass block decouples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import NoncommParams, r_vector_coefficients
from .constants import ParticlePair
from .errors import DomainError, SingularAlgebraError
from .operators import CommutatorReport, check_commutator_table, momentum_coefficients

OMEGA_QUARTER = 0.0211547


@dataclass(frozen=True)
class NBodySystem:
    masses: tuple
    eps: np.ndarray

    def __post_init__(self):
        masses = tuple(float(m) for m in self.masses)
        eps = np.array(self.eps, dtype=float)
        n = len(masses)
        if n < 2:
            raise DomainError("need at least two particles")
        if any(not (m > 0) or not math.isfinite(m) for m in masses):
            raise DomainError("masses must be positive and finite")
        if eps.shape != (n, n):
            raise DomainError(f"eps must be {n}x{n}, got {eps.shape}")
        if np.any(np.diag(eps) != 0.0):
            raise DomainError("eps must have a zero diagonal")
        if np.any(eps.sum(axis=1) >= 1.0):
            raise DomainError("every row of eps must sum to less than 1")
        eps.setflags(write=False)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "eps", eps)

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def mass_array(self) -> np.ndarray:
        return np.array(self.masses)

    @property
    def total_mass(self) -> float:
        return float(sum(self.masses))

    @classmethod
    def identical(cls, n: int, eps: float, mass: float = 1.0) -> "NBodySystem":
        e = np.full((n, n), float(eps))
        np.fill_diagonal(e, 0.0)
        return cls(tuple([mass] * n), e)

    @classmethod
    def from_pair(cls, params: NoncommParams, pair: ParticlePair) -> "NBodySystem":
        return cls((pair.m1, pair.m2), params.eps_matrix)


@dataclass(frozen=True)
class KineticForm:
    """Diagonal weights A_i (dimensionless) and cross weights B_ik (1/mass).

    The kinetic operator is
    ``-hbar^2/2 sum_i [A_i/m_i Lap_i + sum_{k>i} 2 B_ik grad_i.grad_k]``.
    """

    A: np.ndarray
    B: np.ndarray
    masses: tuple

    @property
    def matrix(self) -> np.ndarray:
        """Symmetric coefficient matrix K over gradient components."""
        k = np.array(self.B, dtype=float)
        np.fill_diagonal(k, np.asarray(self.A) / np.asarray(self.masses))
        return k


def kinetic_coefficients(system: NBodySystem) -> KineticForm:
    """Closed-form A_i and B_ik of the N-body kinetic operator."""
    e = system.eps
    m = system.mass_array
    n = system.n
    rows = e.sum(axis=1)
    A = (1.0 - rows) ** 2 + (m[:, None] / m[None, :] * e**2).sum(axis=1)
    B = np.zeros((n, n))
    for i in range(n):
        for k in range(n):
            if i == k:
                continue
            s = np.sum(e[k] * e[i] / m - e[k, i] * e[i] / m[i] - e[i, k] * e[k] / m[k])
            B[i, k] = e[k, i] / m[i] + e[i, k] / m[k] + s
    return KineticForm(A, B, system.masses)


def kinetic_matrix(system: NBodySystem) -> np.ndarray:
    """K = c^T diag(1/m) c, built directly from the momentum representation."""
    c = momentum_coefficients(system.eps)
    return c.T @ np.diag(1.0 / system.mass_array) @ c


def jacobi_parameters_3body(system: NBodySystem, tol: float = 1e-12) -> tuple[float, float]:
    """a_1, a_2 of the three-body free-motion coordinate."""
    if system.n != 3:
        raise DomainError("three particles required")
    e = system.eps
    m1, m2, m3 = system.masses
    M = system.total_mass
    e12, e13, e21, e23, e31, e32 = e[0, 1], e[0, 2], e[1, 0], e[1, 2], e[2, 0], e[2, 1]
    d = (
        (-1 + e21 + e23) * (-1 + e31 + e13)
        + e32 * (-1 + e21 + e13)
        + e12 * (-1 + e23 + e31 + e32)
    )
    if abs(d) < tol:
        raise SingularAlgebraError(f"three-body transformation is singular (d={d:.3g})")
    a1 = (
        m1 * (e13 * (1 - e21 - e23 - e32) + e12 * (1 - e23 - e31 - e32))
        + m2 * (e21 * (-1 + e31 + e32) + e23 * e31)
        + m3 * (e31 * (-1 + e21 + e23) + e21 * e32)
    ) / (M * d)
    a2 = (
        m2 * (e21 * (1 - e31 - e32 - e13) + e23 * (1 - e31 - e12 - e13))
        + m1 * (e13 * e32 + e12 * (-1 + e31 + e32))
        + m3 * (e32 * (-1 + e13 + e12) + e12 * e31)
    ) / (M * d)
    return a1, a2


def jacobi_parameters(system: NBodySystem) -> np.ndarray:
    """a_1..a_{N-1} for any N, from R_N = c^{-1} m r / M."""
    c = momentum_coefficients(system.eps)
    if abs(np.linalg.det(c)) < 1e-12:
        raise SingularAlgebraError("momentum coefficient matrix is singular")
    m = system.mass_array
    t = np.linalg.solve(c, m) / system.total_mass
    return (t - m / system.total_mass)[:-1]


def transformation_matrix(system: NBodySystem, a) -> np.ndarray:
    """Rows of R = T r: Jacobi coordinates, then the free-motion coordinate."""
    m = system.mass_array
    n = system.n
    a = np.asarray(a, dtype=float)
    if a.shape != (n - 1,):
        raise DomainError(f"need {n - 1} a-parameters")
    T = np.zeros((n, n))
    for k in range(n - 1):
        T[k, : k + 1] = m[: k + 1] / m[: k + 1].sum()
        T[k, k + 1] = -1.0
    T[-1] = m / m.sum()
    T[-1, :-1] += a
    T[-1, -1] -= a.sum()
    return T


@dataclass(frozen=True)
class DecouplingReport:
    residual: float
    cm_coefficient: float
    transformed: np.ndarray
    a: tuple


def transform_and_check_decoupling(system: NBodySystem, a=None) -> DecouplingReport:
    """Apply the generalized Jacobi transformation and measure leftover cross terms.

    ``a`` defaults to the two-body coefficients for N = 2 and the closed-form
    three-body values for N = 3; larger systems need ``a`` from the caller.
    ``residual`` is the largest |K'_{kN}|, k < N, scaled by the largest
    |K'| entry; ``cm_coefficient`` is K'_{NN} (1/M when decoupled).
    """
    n = system.n
    if a is None:
        if n == 2:
            eps = system.eps
            params = NoncommParams.from_eps(eps[0, 1], eps[1, 0])
            pair = ParticlePair(*system.masses)
            t1, _ = r_vector_coefficients(params, pair)
            a = [t1 - pair.fraction1]
        elif n == 3:
            a = jacobi_parameters_3body(system)
        else:
            raise DomainError("a-parameters must be supplied for N > 3")
    T = transformation_matrix(system, a)
    if abs(np.linalg.det(T)) < 1e-300:
        raise SingularAlgebraError("transformation is singular")
    K = kinetic_coefficients(system).matrix
    Kp = T @ K @ T.T
    scale = np.max(np.abs(Kp))
    residual = float(np.max(np.abs(Kp[:-1, -1])) / scale)
    return DecouplingReport(residual, float(Kp[-1, -1]), Kp, tuple(float(x) for x in a))


def normed_jacobi(n: int) -> np.ndarray:
    """Orthogonal matrix of the normed Jacobi coordinates q = Q r."""
    Q = np.zeros((n, n))
    for k in range(1, n):
        Q[k - 1, :k] = 1.0 / k
        Q[k - 1, k] = -1.0
        Q[k - 1] *= math.sqrt(k / (k + 1))
    Q[-1] = 1.0 / math.sqrt(n)
    return Q


def identical_particle_coefficient(n: int, eps: float, mass: float = 1.0, hbar: float = 1.0) -> float:
    """Prefactor hbar^2 (1 - N eps)^2 / 2m of the relative Laplacians."""
    if n < 2:
        raise DomainError("need at least two particles")
    if eps < 0:
        raise DomainError("eps must be non-negative")
    if n * eps >= 1.0:
        raise DomainError(f"N*eps = {n * eps} >= 1: kinetic term degenerates")
    return hbar**2 * (1.0 - n * eps) ** 2 / (2.0 * mass)


def identical_relative_block(n: int, eps: float, mass: float = 1.0) -> np.ndarray:
    """Relative-coordinate block of K in normed Jacobi coordinates, times 1/2."""
    Q = normed_jacobi(n)
    K = kinetic_coefficients(NBodySystem.identical(n, eps, mass)).matrix
    return 0.5 * (Q @ K @ Q.T)[:-1, :-1]


def identical_eps_from_kappa(kappa: float) -> float:
    if kappa < 0:
        raise DomainError("kappa must be non-negative")
    return kappa / (1.0 + kappa)


def kappa_from_force(mean_abs_force_reduced: float, omega: float = OMEGA_QUARTER) -> float:
    """kappa = 2 omega <|F|> with the force in units of m^2 c^3 / hbar."""
    return 2.0 * omega * mean_abs_force_reduced


def check_nbody_commutators(system: NBodySystem, degree: int = 3, dims: int = 1) -> CommutatorReport:
    """Commutator table of the N-body representation on polynomial test functions."""
    return check_commutator_table(system.eps, degree, dims)
