"""Self-consistent ground states and calibration of omega.

The kinetic factor beta depends on the ground-state mean force through
xi = 2 <|dV/dr|> (reduced units), and the ground state depends on beta.
:func:`solve_self_consistent` iterates this loop for any central
potential; :func:`calibrate_omega` fixes omega for a given mu/M so that the
smallest Coulomb ground-state mean distance equals the resolution limit
sqrt(1 - 2 mu/M) hbar/(mu c).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .algebra import NoncommParams, beta_full, eps_from_xi
from .constants import ParticlePair
from .errors import CalibrationError, ConvergenceError, DomainError, NoBoundState
from .radial import Potential, RadialProblem, RadialSolution, solve_bound_state

OMEGA_HEAVY = Fraction(32, 729)


@dataclass
class SelfConsistentResult:
    params: NoncommParams
    solution: RadialSolution
    iterations: int
    residual: float
    history: list = field(default_factory=list, repr=False)

    @property
    def energy(self) -> float:
        """Relative-motion energy in eV."""
        return self.solution.energy

    @property
    def beta(self) -> float:
        return self.params.beta

    @property
    def xi_from_solution(self) -> float:
        return 2.0 * self.solution.mean_abs_force


def solve_self_consistent(
    potential: Potential,
    pair: ParticlePair,
    omega,
    damping: float = 0.5,
    tol: float = 1e-10,
    max_iter: int = 10000,
    eta_ceiling: float = 10.0,
    n_points: int = 20000,
) -> SelfConsistentResult:
    """Damped fixed-point iteration xi -> beta -> ground state -> xi.

    Starts from xi = 0 (Schrodinger) and mixes ``damping`` of each update;
    the mixing is halved whenever the residual grows while the update
    changes sign (an oscillation). The iterate is
    declared divergent (:class:`NoBoundState`) once ``omega * xi`` exceeds
    ``eta_ceiling`` or beta drops to zero, and likewise if the ground state
    disappears along the way.
    """
    if omega < 0:
        raise DomainError(f"omega must be non-negative, got {omega}")
    ratio = pair.ratio
    mu = pair.mu if math.isfinite(pair.mu) else pair.m1

    def ground_state(beta, guess):
        problem = RadialProblem(potential, l=0, beta=beta, mu=mu, n_points=n_points)
        return solve_bound_state(problem, 0, energy_guess=guess)

    if omega == 0:
        sol = ground_state(1.0, None)
        xi = 2.0 * sol.mean_abs_force
        return SelfConsistentResult(eps_from_xi(0, xi, pair), sol, 1, 0.0, [0.0])

    omega_f = float(omega)
    xi = 0.0
    mix = damping
    guess = None
    history = []
    last_step = 0.0
    for iteration in range(1, max_iter + 1):
        beta = beta_full(omega_f, xi, ratio)
        if beta <= 0.0 or omega_f * xi > eta_ceiling:
            raise NoBoundState(
                "self-consistency diverged: beyond critical coupling",
                iterations=iteration, xi=xi, beta=beta, history=history,
            )
        try:
            sol = ground_state(beta, guess)
        except NoBoundState as exc:
            raise NoBoundState(
                f"ground state lost at beta={beta:.6g}", iterations=iteration, xi=xi, history=history
            ) from exc
        guess = sol.energy_reduced
        xi_out = 2.0 * sol.mean_abs_force
        residual = abs(xi_out - xi) / max(xi, 1.0)
        step = xi_out - xi
        # only an oscillating residual increase is damped; a growing
        # residual with a steady sign is a runaway and must stay visible
        if history and residual > history[-1] and step * last_step < 0.0:
            mix *= 0.5
        last_step = step
        history.append(residual)
        if residual <= tol:
            params = eps_from_xi(omega_f, xi, pair)
            return SelfConsistentResult(params, sol, iteration, residual, history)
        xi += mix * step

    raise ConvergenceError(
        "self-consistency did not converge", iterations=max_iter, residual=history[-1], xi=xi
    )


def _tangency_condition(eta, ratio):
    # d/d(eta) [eta beta(eta)^4] = 0  <=>  beta + 4 eta beta' = 0, multiplied by D^2
    r2 = ratio * ratio
    num = 1.0 - eta * eta * r2
    den = 1.0 + eta * eta * r2 + eta * (1.0 - 2.0 * ratio)
    dnum = -2.0 * eta * r2
    dden = 2.0 * eta * r2 + (1.0 - 2.0 * ratio)
    return num * den + 4.0 * eta * (dnum * den - num * dden)


def coulomb_tangency(ratio: float) -> tuple[float, float, float]:
    """(eta*, beta*, g_max) where g(eta) = eta beta(eta)^4 peaks.

    For the Coulomb potential the fixed point is ``g(eta) = 4 omega (alpha Z)^3``,
    so solutions exist only while ``4 omega (alpha Z)^3 <= g_max``.
    """
    if not (0.0 <= ratio <= 0.25):
        raise DomainError(f"mu/M must lie in [0, 1/4], got {ratio}")
    if ratio == 0.0:
        eta = 1.0 / 3.0
    else:
        hi = min(1.0 / ratio, 1e6)
        eta = brentq(_tangency_condition, 0.0, hi, args=(ratio,), xtol=1e-15, rtol=1e-15)
    beta = beta_full(1.0, eta, ratio)
    return eta, beta, eta * beta**4


def coulomb_fixed_point(omega, alphaZ, ratio, tol=1e-15, max_iter=1_000_000):
    """Closed-form Coulomb fixed point eta = 4 omega (alpha Z)^3 / beta(eta)^4.

    Returns eta, or None if the iteration runs away (no solution).
    """
    c = 4.0 * float(omega) * alphaZ**3
    eta = 0.0
    for _ in range(max_iter):
        beta = beta_full(1.0, eta, ratio)
        if beta <= 0.0:
            return None
        new = c / beta**4
        if abs(new - eta) <= tol * max(new, 1e-300):
            return new
        if new > 1.0 / ratio if ratio else new > 1e3:
            return None
        eta = new
    return None


def tangency_by_bisection(omega, ratio, rel_width=1e-6):
    """Largest alpha*Z with a Coulomb fixed point, by bisection on existence."""
    lo, hi = 1e-3, 1.0
    while coulomb_fixed_point(omega, hi, ratio) is not None:
        hi *= 2.0
    while coulomb_fixed_point(omega, lo, ratio) is None:
        lo /= 2.0
    while hi - lo > rel_width * lo:
        mid = 0.5 * (lo + hi)
        if coulomb_fixed_point(omega, mid, ratio) is None:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class OmegaCalibration:
    """Result of :func:`calibrate_omega`; lengths in hbar/(mu c)."""

    ratio: float
    omega: float
    critical_alphaZ: float
    eta_critical: float
    beta_critical: float
    min_mean_distance: float
    delta12: float

    @property
    def relative_mismatch(self) -> float:
        return abs(self.min_mean_distance - self.delta12) / self.delta12


def _critical_distance(omega, beta_c, g_max):
    alphaZ_c = (g_max / (4.0 * omega)) ** (1.0 / 3.0)
    return 1.5 * beta_c**2 / alphaZ_c, alphaZ_c


def calibrate_omega(ratio: float) -> OmegaCalibration:
    """Omega for which the minimum Coulomb mean distance equals the resolution limit."""
    eta_c, beta_c, g_max = coulomb_tangency(ratio)
    target = math.sqrt(1.0 - 2.0 * ratio)

    def mismatch(omega):
        return _critical_distance(omega, beta_c, g_max)[0] - target

    lo, hi = 1e-8, 1.0
    sweep = [(w, mismatch(w)) for w in (lo, hi)]
    if mismatch(lo) * mismatch(hi) > 0:
        raise CalibrationError(f"cannot bracket omega for mu/M={ratio}", sweep=sweep)
    omega = brentq(mismatch, lo, hi, xtol=1e-17, rtol=1e-15, maxiter=500)
    distance, alphaZ_c = _critical_distance(omega, beta_c, g_max)
    return OmegaCalibration(ratio, omega, alphaZ_c, eta_c, beta_c, distance, target)


def omega_approximation(ratio: float) -> float:
    """Linear fit omega ~ 32 (1 - 2 mu/M) / 729."""
    return 32.0 * (1.0 - 2.0 * ratio) / 729.0


def omega_curve(samples: int = 51) -> np.ndarray:
    """Calibrated omega on a uniform mu/M grid over [0, 1/4]; columns (ratio, omega)."""
    if samples < 2:
        raise DomainError("need at least 2 samples")
    ratios = np.linspace(0.0, 0.25, samples)
    return np.array([[r, calibrate_omega(float(r)).omega] for r in ratios])


def validate_calibration(cal: OmegaCalibration, n_points: int = 20000) -> dict:
    """Cross-check the calibration point with the grid solver.

    Solves the Coulomb ground state at the critical coupling with beta*
    and returns the grid values of <r> and of the fixed-point xi next to the
    closed-form ones.
    """
    problem = RadialProblem(Potential.coulomb(cal.critical_alphaZ), beta=cal.beta_critical, n_points=n_points)
    sol = solve_bound_state(problem)
    return {
        "mean_r_grid": sol.mean_r,
        "mean_r_closed": cal.min_mean_distance,
        "xi_grid": 2.0 * sol.mean_abs_force,
        "xi_closed": cal.eta_critical / cal.omega,
    }


def breakdown_coupling(
    kind: str,
    screening: float,
    pair: ParticlePair,
    omega,
    lo: float,
    hi: float,
    rel_width: float = 1e-3,
) -> tuple[float, float]:
    """Bracket the coupling where the self-consistent ground state disappears.

    ``lo`` must converge and ``hi`` must fail; returns the final (lo, hi).
    """
    def ok(g):
        try:
            solve_self_consistent(Potential(kind, g, screening), pair, omega)
            return True
        except NoBoundState:
            return False

    if not ok(lo) or ok(hi):
        raise DomainError(f"[{lo}, {hi}] does not bracket the breakdown of {kind}(a={screening})")
    while hi - lo > rel_width * lo:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def coupling_scan(kind: str, screening: float, pair: ParticlePair, omega, couplings) -> list[dict]:
    """Self-consistent ground state for each coupling; failures are recorded, not raised."""
    rows = []
    for g in couplings:
        row = {"coupling": float(g), "converged": False, "mean_r": math.nan, "energy": math.nan, "reason": ""}
        try:
            res = solve_self_consistent(Potential(kind, float(g), screening), pair, omega)
        except NoBoundState as exc:
            row["reason"] = str(exc)
        else:
            row.update(converged=True, mean_r=res.solution.mean_r, energy=res.solution.energy_reduced)
        rows.append(row)
    return rows
