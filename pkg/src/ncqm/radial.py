"""Bound states of the beta-rescaled radial equation for central potentials.

Everything here works in reduced units: lengths in hbar/(mu c), energies in
mu c^2, so hbar = c = mu = 1 and the radial equation reads

    -(beta^2 / 2) (chi'' - l(l+1)/r^2 chi) + v(r) chi = e chi .

Potentials carry a dimensionless coupling ``g`` (alpha*Z for Coulomb) and,
for the screened kinds, a screening length in hbar/(mu c).

The eigenvalue search uses Numerov's method on a logarithmic grid
(``chi = r^{1/2} y(ln r)``), node counting to bracket the requested
excitation and the usual cusp correction at the outer turning point to
refine the energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import simpson

from . import _numerov
from .constants import DEFAULT_CONSTANTS, Constants
from .errors import ConvergenceError, DomainError, NoBoundState

KINDS = ("coulomb", "yukawa", "hulthen")

# decay exponent (in e-folds) beyond the turning point kept on the grid;
# the tail is dropped below exp(-45)
_TAIL_EFOLDS = 45.0
# minimal decay required before the grid is extended: |chi| < 1e-10 * max
_MIN_EFOLDS = 23.0


@dataclass(frozen=True)
class Potential:
    """Attractive central potential in reduced units.

    * coulomb: ``v = -g / r``
    * yukawa:  ``v = -g exp(-r/a) / r``
    * hulthen: ``v = -g exp(-r/a) / (a (1 - exp(-r/a)))``
    """

    kind: str
    coupling: float
    screening: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if not self.coupling > 0:
            raise DomainError(f"coupling must be positive, got {self.coupling}")
        if self.kind != "coulomb" and not (self.screening and self.screening > 0):
            raise DomainError(f"{self.kind} potential needs a positive screening length")

    @classmethod
    def coulomb(cls, alphaZ: float) -> "Potential":
        return cls("coulomb", alphaZ)

    @classmethod
    def yukawa(cls, coupling: float, screening: float) -> "Potential":
        return cls("yukawa", coupling, screening)

    @classmethod
    def hulthen(cls, coupling: float, screening: float) -> "Potential":
        return cls("hulthen", coupling, screening)

    def scaled(self, factor: float) -> "Potential":
        return replace(self, coupling=self.coupling * factor)

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        g = self.coupling
        if self.kind == "coulomb":
            return -g / r
        x = r / self.screening
        if self.kind == "yukawa":
            return -g * np.exp(-x) / r
        return -(g / self.screening) * np.exp(-x) / -np.expm1(-x)

    def derivative(self, r):
        """dV/dr (positive for these attractive potentials)."""
        r = np.asarray(r, dtype=float)
        g = self.coupling
        if self.kind == "coulomb":
            return g / r**2
        a = self.screening
        x = r / a
        if self.kind == "yukawa":
            return g * np.exp(-x) * (1.0 / r**2 + 1.0 / (a * r))
        return (g / a**2) * np.exp(-x) / np.expm1(-x) ** 2


@dataclass(frozen=True)
class RadialProblem:
    """Radial equation with kinetic prefactor beta^2/2 (effective mass mu/beta^2).

    ``mu`` (eV) only enters unit conversions of the results. Grid bounds
    default to ``1e-7`` and ``50`` effective Bohr radii ``beta^2 / g``.
    """

    potential: Potential
    l: int = 0
    beta: float = 1.0
    mu: float = DEFAULT_CONSTANTS.electron_rest_energy
    r_min: float | None = None
    r_max: float | None = None
    n_points: int = 20000

    def __post_init__(self):
        if int(self.l) != self.l or self.l < 0:
            raise DomainError(f"l must be a non-negative integer, got {self.l}")
        if not self.beta > 0:
            raise DomainError(f"kinetic prefactor needs beta > 0, got {self.beta}")
        if self.n_points < 1000:
            raise DomainError("grid needs at least 1000 points")
        r_min, r_max = self.bounds
        if not (0 < r_min < r_max):
            raise DomainError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")

    @property
    def effective_bohr(self) -> float:
        return self.beta**2 / self.potential.coupling

    @property
    def mass_factor(self) -> float:
        """Effective mass mu / beta^2 in eV."""
        return self.mu / self.beta**2

    @property
    def bounds(self) -> tuple[float, float]:
        a = self.effective_bohr
        r_min = 1e-7 * a if self.r_min is None else self.r_min
        r_max = 50.0 * a if self.r_max is None else self.r_max
        return r_min, r_max

    def grid(self, r_max=None):
        """(r, dx) of the logarithmic grid; ``r_max`` overrides keeping the step."""
        r_min, r_max0 = self.bounds
        dx = math.log(r_max0 / r_min) / (self.n_points - 1)
        r_max = r_max0 if r_max is None else r_max
        n = int(math.ceil(math.log(r_max / r_min) / dx)) + 1
        x = math.log(r_min) + dx * np.arange(n)
        return np.exp(x), dx


@dataclass
class RadialSolution:
    """Normalised bound state of a :class:`RadialProblem` (reduced units).

    ``chi`` is sampled on ``r``; expectation values are stored in
    reduced units, ``energy`` is in eV.
    """

    problem: RadialProblem
    energy_reduced: float
    r: np.ndarray = field(repr=False)
    chi: np.ndarray = field(repr=False)
    nodes: int
    mean_r: float
    mean_inv_r2: float
    mean_potential: float
    mean_abs_force: float
    iterations: int = 0

    @property
    def energy(self) -> float:
        """Eigenvalue in eV."""
        return self.energy_reduced * self.problem.mu

    @property
    def norm(self) -> float:
        return _integrate(self.chi**2 * self.r, self.r)


def _origin_piece(w, x):
    """Integral over (0, r_min) assuming a power law ``w ~ r^p`` below the grid."""
    if w[0] == 0.0 or w[1] == 0.0 or (w[0] > 0) != (w[1] > 0):
        return 0.0
    p = math.log(w[1] / w[0]) / (x[1] - x[0])
    return w[0] / p if p > 0 else 0.0


def _integrate(values_times_r, r):
    """Integral over r of ``f`` given ``f * r`` sampled on a log grid."""
    x = np.log(r)
    return simpson(values_times_r, x=x) + _origin_piece(values_times_r, x)


def _checked_integrals(rows, r, names):
    """Integrate each row of ``rows`` (``f * r`` samples), checking h against 2h."""
    x = np.log(r)
    rows = np.atleast_2d(rows)
    fine_all = simpson(rows, x=x, axis=-1)
    coarse_all = simpson(rows[:, ::2], x=x[::2], axis=-1)
    out = []
    for row, fine, coarse, what in zip(rows, fine_all, coarse_all, names):
        head = _origin_piece(row, x)
        fine, coarse = fine + head, coarse + head
        scale = max(abs(fine), 1e-300)
        if abs(fine - coarse) > 1e-6 * scale:
            raise ConvergenceError(
                f"quadrature of {what} not converged near the origin",
                fine=fine,
                coarse=coarse,
            )
        out.append(float(fine))
    return out


def _checked_integral(values_times_r, r, what):
    return _checked_integrals(values_times_r, r, [what])[0]


def _bisect_energy(lo, hi):
    if hi < 0 and lo / hi > 10.0:
        return -math.sqrt(lo * hi)
    return 0.5 * (lo + hi)


def _solve_on_grid(problem: RadialProblem, r, dx, node_target, guess, tol, max_iter):
    """Return (energy, y, icl, jstart, iterations) on a fixed grid."""
    beta2 = problem.beta**2
    l = problem.l
    g = problem.potential.coupling
    v = problem.potential(r)
    r2 = r * r
    veff = v + 0.5 * beta2 * l * (l + 1) / r2
    ddx12 = dx * dx / 12.0
    lhalf2 = (l + 0.5) ** 2
    n = r.shape[0]

    e_lo = float(veff.min())
    e_hi = min(float(veff[-1]), 0.0)
    if e_hi <= e_lo:
        raise NoBoundState("potential has no well on the grid", node_target=node_target)

    y = np.zeros(n)
    # leading small-r behaviour r^{l+1} (1 - g r / (beta^2 (l+1))), in y = chi / sqrt(r)
    start = r[:2] ** (l + 0.5) * (1.0 - g * r[:2] / (beta2 * (l + 1)))

    if guess is None or not (e_lo < guess < e_hi):
        n_eff = node_target + l + 1
        guess = -0.5 * g * g / (beta2 * n_eff * n_eff)
        if not (e_lo < guess < e_hi):
            guess = _bisect_energy(e_lo, e_hi)
    e = guess

    for iteration in range(1, max_iter + 1):
        k2 = (2.0 / beta2) * (e - v) * r2 - lhalf2
        f = 1.0 + ddx12 * k2
        icl = _numerov.turning_point(k2)
        if icl < 0:
            if k2[-1] > 0:
                e_hi = e
            else:
                e_lo = e
            e = _bisect_energy(e_lo, e_hi)
            continue
        if icl < 3:
            e_lo = e
            e = _bisect_energy(e_lo, e_hi)
            continue
        if icl > n - 4:
            e_hi = e
            e = _bisect_energy(e_lo, e_hi)
            continue
        nodes = _numerov.outward(f, y, start[0], start[1], icl)
        if nodes != node_target:
            if nodes > node_target:
                e_hi = e
            else:
                e_lo = e
            e = _bisect_energy(e_lo, e_hi)
            if e_hi - e_lo <= 1e-15 * abs(e):
                raise ConvergenceError(
                    "energy bracket collapsed without matching node count",
                    energy=e, nodes=nodes, node_target=node_target,
                )
            continue
        jstart = _numerov.decay_index(k2, icl, dx, _TAIL_EFOLDS)
        jstart = n - 1 if jstart < 0 else max(jstart, icl + 2)
        y_icl = y[icl]
        _numerov.inward(f, y, jstart, icl, dx)
        y[icl:jstart + 1] *= y_icl / y[icl]
        y[jstart + 1:] = 0.0
        norm = np.sum(y[: jstart + 1] ** 2 * r2[: jstart + 1]) * dx
        y /= math.sqrt(norm)
        ycusp = (y[icl - 1] * f[icl - 1] + y[icl + 1] * f[icl + 1] + 10.0 * f[icl] * y[icl]) / 12.0
        dfcusp = f[icl] * (y[icl] / ycusp - 1.0)
        de = 0.5 * beta2 * dfcusp / ddx12 * ycusp * ycusp * dx
        if abs(de) <= tol * abs(e):
            return e, y, icl, jstart, iteration
        if de > 0:
            e_lo = e
        else:
            e_hi = e
        e_new = e + de
        e = e_new if e_lo < e_new < e_hi else _bisect_energy(e_lo, e_hi)
        if e_hi - e_lo <= tol * abs(e):
            return e, y, icl, jstart, iteration

    raise ConvergenceError(
        "eigenvalue refinement did not converge",
        energy=e, bracket=(e_lo, e_hi), node_target=node_target,
    )


def bound_state_exists(problem: RadialProblem, node_target: int = 0) -> bool:
    """Node-count test at the top of the well on a generously extended grid."""
    _, r_max = problem.bounds
    r, dx = problem.grid(r_max * 1024.0)
    beta2 = problem.beta**2
    l = problem.l
    v = problem.potential(r)
    veff = v + 0.5 * beta2 * l * (l + 1) / r**2
    e_top = min(float(veff[-1]), 0.0)
    k2 = (2.0 / beta2) * (e_top - v) * r * r - (l + 0.5) ** 2
    f = 1.0 + dx * dx / 12.0 * k2
    y = np.zeros(r.shape[0])
    g = problem.potential.coupling
    start = r[:2] ** (l + 0.5) * (1.0 - g * r[:2] / (beta2 * (l + 1)))
    nodes = _numerov.outward(f, y, start[0], start[1], r.shape[0] - 1)
    return nodes > node_target


def solve_bound_state(
    problem: RadialProblem,
    node_target: int = 0,
    energy_guess: float | None = None,
    tol: float = 1e-13,
    max_iter: int = 500,
    max_extensions: int = 20,
) -> RadialSolution:
    """Eigenstate with ``node_target`` radial nodes.

    ``energy_guess`` (reduced units) warm-starts the refinement. The grid is
    extended outward (same step) until the wavefunction has decayed below
    1e-10 of its maximum.

    Raises :class:`NoBoundState` if no state with that many nodes exists.
    """
    if node_target < 0:
        raise DomainError("node_target must be >= 0")
    if not bound_state_exists(problem, node_target):
        raise NoBoundState(
            f"no bound state with {node_target} nodes",
            potential=problem.potential, l=problem.l, beta=problem.beta,
        )
    _, r_max = problem.bounds
    guess = energy_guess
    total_iter = 0
    for _ in range(max_extensions + 1):
        r, dx = problem.grid(r_max)
        e, y, icl, jstart, iters = _solve_on_grid(problem, r, dx, node_target, guess, tol, max_iter)
        total_iter += iters
        k2 = (2.0 / problem.beta**2) * (e - problem.potential(r)) * r * r - (problem.l + 0.5) ** 2
        if _numerov.decay_index(k2, icl, dx, _MIN_EFOLDS) >= 0:
            break
        r_max *= 2.0
        guess = e
    else:
        raise ConvergenceError("wavefunction tail does not decay inside the extended grid", r_max=r_max)
    return _finish(problem, e, r, y, total_iter)


def _finish(problem, e, r, y, iterations):
    chi = np.sqrt(r) * y
    w = chi * chi * r  # chi^2 dr = w dx
    norm = _integrate(w, r)
    chi /= math.sqrt(norm)
    w /= norm
    pot = problem.potential
    mean_r, mean_inv_r2, mean_potential, mean_force = _checked_integrals(
        np.stack([w * r, w / (r * r), w * pot(r), w * np.abs(pot.derivative(r))]),
        r,
        ["<r>", "<1/r^2>", "<V>", "<|dV/dr|>"],
    )
    nodes = _numerov.count_nodes(chi, chi.shape[0] - 1)
    return RadialSolution(
        problem=problem,
        energy_reduced=e,
        r=r,
        chi=chi,
        nodes=int(nodes),
        mean_r=mean_r,
        mean_inv_r2=mean_inv_r2,
        mean_potential=mean_potential,
        mean_abs_force=mean_force,
        iterations=iterations,
    )


def mean_abs_force(solution: RadialSolution, potential: Potential | None = None) -> float:
    """<|dV/dr|> on the solution, in reduced units mu c^2 / (hbar / mu c).

    ``potential`` defaults to the one the solution was computed with.
    """
    if potential is None or potential == solution.problem.potential:
        return solution.mean_abs_force
    w = solution.chi**2 * solution.r
    return _checked_integral(w * np.abs(potential.derivative(solution.r)), solution.r, "<|dV/dr|>")


def force_in_mev_per_cm(force_reduced: float, mu: float, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Convert a reduced-unit force to MeV/cm for reduced mass ``mu`` (eV)."""
    mu_mev = mu * 1e-6
    return force_reduced * mu_mev * mu_mev / constants.hbar_c_mev_cm
