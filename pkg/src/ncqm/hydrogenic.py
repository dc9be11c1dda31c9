"""Closed-form Coulomb results of the modified two-body equation.

For a hydrogenlike system the ground-state mean force is known in closed
form, which turns the self-consistency condition into the scalar equation

    eta / (1 + eta)^4 = 4 omega (alpha Z)^3 ,    eta = omega * xi0 ,

and every level follows as ``E_n = -(mu c^2 / 2) (alpha Z / n)^2 (1 + eta)^2``.

``omega`` and ``alphaZ`` may be given as :class:`fractions.Fraction`; the
root is then bracketed from exact input and the tangency ``4 omega
(alpha Z)^3 = 27/256`` is detected exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from .constants import DEFAULT_CONSTANTS, Constants, ParticlePair, compton_length
from .errors import DomainError, NoBoundState

#: maximum of eta/(1+eta)^4, attained at eta = 1/3
TANGENCY = Fraction(27, 256)
ETA_CRITICAL = Fraction(1, 3)



def _mpf(x):
    if isinstance(x, Rational):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _rhs(omega, alphaZ):
    """4 omega (alpha Z)^3, exact when both inputs are rational."""
    if isinstance(omega, Rational) and isinstance(alphaZ, Rational):
        return 4 * Fraction(omega) * Fraction(alphaZ) ** 3
    return None


def _bisect(fn, lo, hi, tol):
    flo = fn(lo)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        fmid = fn(mid)
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return (lo + hi) / 2


def solve_eta0(omega, alphaZ, branch: str = "lower") -> float:
    """Root of ``eta/(1+eta)^4 = 4 omega (alpha Z)^3``.

    ``branch="lower"`` gives the physical root on [0, 1/3]; ``"upper"``
    gives the second root on [1/3, inf), which is only of interest for
    plotting the graphical solution.

    Raises :class:`NoBoundState` when ``4 omega (alpha Z)^3 > 27/256``.
    """
    if omega < 0 or alphaZ <= 0:
        raise DomainError(f"need omega >= 0 and alphaZ > 0, got {omega}, {alphaZ}")
    if branch not in ("lower", "upper"):
        raise DomainError(f"unknown branch {branch!r}")
    exact = _rhs(omega, alphaZ)
    with mpmath.workdps(50):
        rhs = _mpf(exact) if exact is not None else 4 * _mpf(omega) * _mpf(alphaZ) ** 3
        top = _mpf(TANGENCY)
        if rhs > top:
            raise NoBoundState(
                "no bound state: 4*omega*(alpha Z)^3 exceeds 27/256",
                omega=float(omega),
                alphaZ=float(alphaZ),
                rhs=float(rhs),
            )
        if rhs == 0:
            return 0.0 if branch == "lower" else math.inf
        if rhs == top:
            return 1.0 / 3.0

        def g(eta):
            return eta / (1 + eta) ** 4 - rhs

        third = mpmath.mpf(1) / 3
        if branch == "lower":
            root = _bisect(g, mpmath.mpf(0), third, mpmath.mpf(10) ** -40)
        else:
            hi = mpmath.mpf(1)
            while g(hi) > 0:
                hi *= 2
            root = _bisect(g, third, hi, mpmath.mpf(10) ** -40 * hi)
        return float(root)


def _exact_cube_root(q: Fraction):
    def icbrt(n):
        r = round(n ** (1.0 / 3.0))
        for cand in (r - 1, r, r + 1):
            if cand**3 == n:
                return cand
        return None

    num, den = icbrt(q.numerator), icbrt(q.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def critical_coupling(omega):
    """alpha*Z at which the ground state disappears: (27 / (1024 omega))^(1/3).

    Returns a :class:`~fractions.Fraction` if ``omega`` is rational and the
    cube root is exact (e.g. 27/32 for omega = 32/729).
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    if isinstance(omega, Rational):
        q = Fraction(27, 1024) / Fraction(omega)
        root = _exact_cube_root(q)
        if root is not None:
            return root
        return float(q) ** (1.0 / 3.0)
    return (27.0 / (1024.0 * omega)) ** (1.0 / 3.0)


def critical_charge(omega, constants: Constants = DEFAULT_CONSTANTS) -> float:
    return float(critical_coupling(omega)) / constants.alpha


def ground_eta(Z, omega, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """eta0 = omega*xi0 of the ground state of charge ``Z``."""
    if omega == 0:
        return 0.0
    return solve_eta0(omega, constants.alpha * Z)


def schrodinger_level(Z, n, constants: Constants = DEFAULT_CONSTANTS, mu: float | None = None) -> float:
    mu = constants.electron_rest_energy if mu is None else mu
    return -0.5 * mu * (constants.alpha * Z / n) ** 2


def _check_quantum_numbers(n, l):
    if int(n) != n or int(l) != l or n < 1 or not (0 <= l <= n - 1):
        raise DomainError(f"invalid quantum numbers n={n}, l={l}")


def energy_level(
    Z, n: int, l: int = 0, omega=Fraction(32, 729), constants: Constants = DEFAULT_CONSTANTS,
    mu: float | None = None,
) -> float:
    """Bound-state energy in eV.

    ``mu`` is the reduced mass (eV); by default the electron mass, i.e. an
    infinitely heavy nucleus. The level does not depend on ``l``.
    """
    _check_quantum_numbers(n, l)
    if Z <= 0:
        raise DomainError(f"Z must be positive, got {Z}")
    eta = ground_eta(Z, omega, constants)
    return schrodinger_level(Z, n, constants, mu) * (1.0 + eta) ** 2


def level_gap_1s2s(
    Z, omega=Fraction(32, 729), constants: Constants = DEFAULT_CONSTANTS, mu: float | None = None
) -> float:
    """E(2s) - E(1s) in eV, both levels using the ground-state eta0."""
    eta = ground_eta(Z, omega, constants)
    scale = (1.0 + eta) ** 2
    return (schrodinger_level(Z, 2, constants, mu) - schrodinger_level(Z, 1, constants, mu)) * scale


def mean_distance_reduced(alphaZ, omega) -> float:
    """Ground-state <|r2 - r1|> in units of hbar/(mu c)."""
    eta = 0.0 if omega == 0 else solve_eta0(omega, alphaZ)
    return 1.5 / float(alphaZ) / (1.0 + eta) ** 2


def mean_distance_ground(
    Z, omega, pair: ParticlePair, constants: Constants = DEFAULT_CONSTANTS
) -> float:
    """Ground-state mean interparticle distance in cm."""
    return mean_distance_reduced(constants.alpha * Z, omega) * compton_length(pair.mu, constants)


@dataclass(frozen=True)
class RadialWavefunction:
    """chi_nl(r) for the beta-rescaled Coulomb problem.

    ``r`` is measured in units of the Bohr radius ``a0`` (pass ``a0`` to
    use another length unit). ``effective_bohr`` is ``a0 beta^2 / Z``.
    """

    Z: float
    n: int
    l: int
    beta: float
    a0: float = 1.0

    @property
    def effective_bohr(self) -> float:
        return self.a0 * self.beta**2 / self.Z

    @property
    def normalization(self) -> float:
        n, l = self.n, self.l
        k = 2.0 / (n * self.effective_bohr)
        return (
            math.sqrt(math.factorial(n + l) / (2 * n * math.factorial(n - l - 1)))
            / math.factorial(2 * l + 1)
            * k ** (l + 1.5)
        )

    def hypergeometric(self, x):
        """Terminating 1F1(-(n-l-1); 2l+2; x) as a polynomial."""
        m = self.n - self.l - 1
        b = 2 * self.l + 2
        x = np.asarray(x, dtype=float)
        term = np.ones_like(x)
        total = np.ones_like(x)
        for j in range(m):
            term = term * (j - m) / ((b + j) * (j + 1)) * x
            total = total + term
        return total

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        x = 2.0 * r / (self.n * self.effective_bohr)
        return (
            self.normalization
            * r ** (self.l + 1)
            * self.hypergeometric(x)
            * np.exp(-0.5 * x)
        )

    def node_positions(self) -> np.ndarray:
        """Radial nodes in (0, inf), from the roots of the polynomial factor."""
        m = self.n - self.l - 1
        if m == 0:
            return np.empty(0)
        b = 2 * self.l + 2
        coeffs = [1.0]
        for j in range(m):
            coeffs.append(coeffs[-1] * (j - m) / ((b + j) * (j + 1)))
        roots = np.roots(coeffs[::-1])
        x = np.sort(roots.real[np.abs(roots.imag) < 1e-9])
        return x * self.n * self.effective_bohr / 2.0


def radial_wavefunction(Z, n: int, l: int, beta: float, a0: float = 1.0) -> RadialWavefunction:
    _check_quantum_numbers(n, l)
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if Z <= 0:
        raise DomainError(f"Z must be positive, got {Z}")
    return RadialWavefunction(Z, int(n), int(l), beta, a0)


def schrodinger_curve(alphaZ: float) -> float:
    """Ground-state energy / (mu c^2) of the Schrodinger equation."""
    if alphaZ <= 0:
        raise DomainError("alphaZ must be positive")
    return -0.5 * alphaZ**2


def dirac_curve(alphaZ: float) -> float:
    """1s binding / (mu c^2) of the Dirac equation, valid for 0 < alphaZ <= 1."""
    if not (0 < alphaZ <= 1):
        raise DomainError(f"Dirac ground state needs 0 < alphaZ <= 1, got {alphaZ}")
    return math.sqrt(1.0 - alphaZ**2) - 1.0


def klein_gordon_curve(alphaZ: float) -> float:
    """1s binding / (mu c^2) of the Klein-Gordon equation, valid for 0 < alphaZ <= 1/2."""
    if not (0 < alphaZ <= 0.5):
        raise DomainError(f"Klein-Gordon ground state needs 0 < alphaZ <= 1/2, got {alphaZ}")
    denom = 0.5 + math.sqrt(max(0.25 - alphaZ**2, 0.0))
    return (1.0 + (alphaZ / denom) ** 2) ** -0.5 - 1.0


def model_curve(alphaZ: float, omega=Fraction(32, 729)) -> float:
    """Ground-state energy / (mu c^2) of the noncommutative model."""
    eta = solve_eta0(omega, alphaZ) if omega else 0.0
    return -0.5 * alphaZ**2 * (1.0 + eta) ** 2


def comparison_curves(alphaZ: float, strict: bool = False) -> tuple[float, float, float]:
    """(Schrodinger, Dirac, Klein-Gordon) ground-state energies per mu c^2.

    Curves outside their domain are reported as NaN, or raise
    :class:`DomainError` when ``strict`` is set.
    """
    out = []
    for curve in (schrodinger_curve, dirac_curve, klein_gordon_curve):
        try:
            out.append(curve(alphaZ))
        except DomainError:
            if strict:
                raise
            out.append(math.nan)
    return tuple(out)
