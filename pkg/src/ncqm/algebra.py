"""Noncommutativity parameters of a two-particle system.

``eps12`` measures how a position measurement on particle 1 kicks
particle 2 and ``eps21`` the reverse. Both follow from the dimensionless
mean-force parameter ``xi`` and the calibration constant ``omega``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ParticlePair
from .errors import DomainError, SingularAlgebraError
from .operators import CommutatorReport, check_commutator_table


@dataclass(frozen=True)
class NoncommParams:
    """eps12, eps21 and the quantities derived from them.

    ``omega`` and ``xi`` are ``None`` when the parameters were given
    directly (see :meth:`from_eps`).
    """

    eps12: float
    eps21: float
    beta: float
    omega: float | None = None
    xi: float | None = None

    def __post_init__(self):
        for name in ("eps12", "eps21"):
            value = getattr(self, name)
            if not (0.0 <= value < 1.0):
                raise DomainError(f"{name} must lie in [0, 1), got {value}")

    @property
    def eta(self):
        if self.omega is None or self.xi is None:
            return None
        return float(self.omega) * self.xi

    @property
    def eps_matrix(self) -> np.ndarray:
        return np.array([[0.0, self.eps12], [self.eps21, 0.0]])

    @classmethod
    def from_eps(cls, eps12: float, eps21: float) -> "NoncommParams":
        return cls(eps12, eps21, 1.0 - eps12 - eps21)


def beta_full(omega, xi, ratio) -> float:
    """Kinetic rescaling factor for a given ``omega*xi`` and ``mu/M``.

    beta = (1 - u^2 r^2) / (1 + u^2 r^2 + u (1 - 2 r)),  u = omega*xi, r = mu/M.
    """
    u = float(omega) * xi
    if u < 0:
        raise DomainError(f"omega*xi must be non-negative, got {u}")
    if not (0.0 <= ratio <= 0.25):
        raise DomainError(f"mu/M must lie in [0, 1/4], got {ratio}")
    ur2 = (u * ratio) ** 2
    return (1.0 - ur2) / (1.0 + ur2 + u * (1.0 - 2.0 * ratio))


def eps_from_xi(omega, xi, pair: ParticlePair) -> NoncommParams:
    if omega < 0 or xi < 0:
        raise DomainError("omega and xi must be non-negative")
    u = float(omega) * xi
    a = u * pair.fraction2**2
    b = u * pair.fraction1**2
    eps12 = a / (1.0 + a)
    eps21 = b / (1.0 + b)
    return NoncommParams(eps12, eps21, beta_full(omega, xi, pair.ratio), omega, xi)


def _require_beta(params: NoncommParams):
    if params.beta == 0.0 or abs(params.beta) < 1e-300:
        raise SingularAlgebraError("beta = 1 - eps12 - eps21 vanishes")


@dataclass(frozen=True)
class AngularCoefficients:
    """Weights C_ij of [r_i x p_j] in the total angular momentum."""

    c11: float
    c12: float
    c21: float
    c22: float

    def reconstruction_residuals(self, params: NoncommParams) -> np.ndarray:
        """Deviations of sum_j C_ij c_jk from the identity (all should vanish)."""
        e12, e21 = params.eps12, params.eps21
        return np.array(
            [
                self.c11 * (1.0 - e12) + self.c12 * e12 - 1.0,
                self.c11 * e21 + self.c12 * (1.0 - e21),
                self.c22 * (1.0 - e21) + self.c21 * e21 - 1.0,
                self.c22 * e12 + self.c21 * (1.0 - e12),
            ]
        )


def angular_coefficients(params: NoncommParams) -> AngularCoefficients:
    _require_beta(params)
    b = params.beta
    return AngularCoefficients(
        c11=(1.0 - params.eps21) / b,
        c12=-params.eps21 / b,
        c21=-params.eps12 / b,
        c22=(1.0 - params.eps12) / b,
    )


def r_vector_coefficients(params: NoncommParams, pair: ParticlePair) -> tuple[float, float]:
    """Coefficients of r1 and r2 in the free-motion coordinate R."""
    _require_beta(params)
    f1, f2 = pair.fraction1, pair.fraction2
    kappa = (f1 * params.eps12 - f2 * params.eps21) / params.beta
    return f1 + kappa, f2 - kappa


def check_commutators(
    params: NoncommParams, degree: int = 3, dims: int = 1, representation=None
) -> CommutatorReport:
    """Check the two-particle commutator algebra on polynomials up to ``degree``.

    Raises :class:`~ncqm.errors.IdentityViolation` if any residual exceeds
    1e-12 (hbar = 1). ``report.poisson`` holds the brackets {x_i, p_k}.
    """
    if degree < 1:
        raise DomainError("degree must be >= 1")
    return check_commutator_table(params.eps_matrix, degree, dims, representation)

