import math

import numpy as np
import pytest
from scipy.linalg import eigh_tridiagonal

from ncqm.constants import DEFAULT_CONSTANTS
from ncqm.errors import DomainError, NoBoundState
from ncqm.radial import (
    Potential,
    RadialProblem,
    bound_state_exists,
    force_in_mev_per_cm,
    mean_abs_force,
    solve_bound_state,
)

ALPHA = DEFAULT_CONSTANTS.alpha

# Lowest eigenvalues (units of mu c^2, beta = 1) from a second-order
# finite-difference diagonalization on [0, R], R = 120-150, with 24k and 48k
# points and h^2 Richardson extrapolation. Finer grids lose digits to roundoff.
FD_ORACLE = {
    ("yukawa", 0.5, 10.0): -0.081702127840108,
    ("yukawa", 0.6, 2.0): -0.013384256288098,
    ("hulthen", 0.5, 10.0): -0.101249999994053,
}


def coulomb_energy(g, n, beta):
    return -0.5 * g**2 / (n**2 * beta**2)


@pytest.mark.parametrize("beta", [1.0, 0.9, 0.75])
@pytest.mark.parametrize("n,l", [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)])
def test_coulomb_oracle(n, l, beta):
    g = 0.3
    sol = solve_bound_state(RadialProblem(Potential.coulomb(g), l=l, beta=beta), node_target=n - l - 1)
    assert sol.energy_reduced == pytest.approx(coulomb_energy(g, n, beta), rel=1e-8)
    assert sol.nodes == n - l - 1
    assert sol.norm == pytest.approx(1.0, rel=1e-8)
    a = beta**2 / g
    assert sol.mean_r == pytest.approx(a * (3 * n * n - l * (l + 1)) / 2, rel=1e-8)
    assert sol.mean_inv_r2 == pytest.approx(1 / (a * a * n**3 * (l + 0.5)), rel=1e-8)


def test_beta_rescaling():
    pot = Potential.coulomb(0.2)
    e1 = solve_bound_state(RadialProblem(pot, beta=1.0)).energy_reduced
    e9 = solve_bound_state(RadialProblem(pot, beta=0.9)).energy_reduced
    assert e9 / e1 == pytest.approx(1 / 0.81, rel=1e-9)


@pytest.mark.parametrize("g", [ALPHA, 0.1, 0.8])
def test_virial(g):
    sol = solve_bound_state(RadialProblem(Potential.coulomb(g), beta=0.95))
    assert sol.mean_potential == pytest.approx(2 * sol.energy_reduced, rel=1e-6)


def test_boundary_decay():
    sol = solve_bound_state(RadialProblem(Potential.yukawa(0.5, 10.0)))
    peak = np.max(np.abs(sol.chi))
    assert abs(sol.chi[0]) / peak < 1e-6
    assert abs(sol.chi[-1]) / peak < 1e-10


def test_grid_refinement():
    pot = Potential.hulthen(0.7, 3.0)
    e1 = solve_bound_state(RadialProblem(pot, n_points=20000)).energy_reduced
    e2 = solve_bound_state(RadialProblem(pot, n_points=40000)).energy_reduced
    assert abs(e1 - e2) / abs(e2) < 1e-10


def test_eigenvalues_increase_with_nodes():
    problem = RadialProblem(Potential.yukawa(1.0, 50.0), l=1)
    energies = [solve_bound_state(problem, k).energy_reduced for k in range(4)]
    assert all(b > a for a, b in zip(energies, energies[1:]))


@pytest.mark.parametrize("key", sorted(FD_ORACLE))
def test_screened_against_finite_differences(key):
    kind, g, a = key
    sol = solve_bound_state(RadialProblem(Potential(kind, g, a)))
    assert sol.energy_reduced == pytest.approx(FD_ORACLE[key], rel=1e-8)


def test_hulthen_closed_form():
    g, a = 0.5, 10.0
    exact = -((2 * g * a - 1) / 2) ** 2 / (2 * a * a)
    sol = solve_bound_state(RadialProblem(Potential.hulthen(g, a)))
    assert sol.energy_reduced == pytest.approx(exact, rel=1e-9)


def _fd_lowest(V, R=40.0, n=40000):
    h = R / (n + 1)
    r = h * np.arange(1, n + 1)
    d = 1 / h**2 + V(r)
    e = np.full(n - 1, -0.5 / h**2)
    return eigh_tridiagonal(d, e, select="i", select_range=(0, 0))[0][0]


def test_weak_short_yukawa_unbound():
    pot = Potential.yukawa(0.1, 0.5)
    assert _fd_lowest(pot) > 0
    assert not bound_state_exists(RadialProblem(pot))
    with pytest.raises(NoBoundState):
        solve_bound_state(RadialProblem(pot))


def test_missing_excited_state():
    pot = Potential.hulthen(0.5, 2.0)
    solve_bound_state(RadialProblem(pot))
    with pytest.raises(NoBoundState):
        solve_bound_state(RadialProblem(pot), node_target=1)


def test_coulomb_force_expectation():
    g = 0.2
    sol = solve_bound_state(RadialProblem(Potential.coulomb(g)))
    assert mean_abs_force(sol) == pytest.approx(g * 2 * g**2, rel=1e-8)


def test_hydrogen_force():
    sol = solve_bound_state(RadialProblem(Potential.coulomb(ALPHA)))
    force = force_in_mev_per_cm(mean_abs_force(sol), DEFAULT_CONSTANTS.electron_rest_energy)
    assert force == pytest.approx(1.03e4, rel=5e-3)


def test_force_linear_in_potential():
    sol = solve_bound_state(RadialProblem(Potential.yukawa(0.5, 10.0)))
    f1 = mean_abs_force(sol)
    f3 = mean_abs_force(sol, Potential.yukawa(1.5, 10.0))
    assert f3 == pytest.approx(3 * f1, rel=1e-12)


def test_energy_in_ev():
    sol = solve_bound_state(RadialProblem(Potential.coulomb(ALPHA)))
    assert sol.energy == pytest.approx(-13.6057, abs=1e-4)


def test_potentials_vanish_far_away():
    for pot in (Potential.coulomb(1.0), Potential.yukawa(1.0, 1.0), Potential.hulthen(1.0, 1.0)):
        assert abs(pot(1e6)) < 1e-5


def test_hulthen_short_distance():
    pot = Potential.hulthen(0.4, 5.0)
    r = 1e-6
    assert pot(r) == pytest.approx(-0.4 / r, rel=1e-6)


@pytest.mark.parametrize("kind", ["yukawa", "hulthen"])
def test_derivative_matches_finite_difference(kind):
    pot = Potential(kind, 0.7, 2.0)
    r = np.array([0.05, 0.5, 3.0, 10.0])
    h = 1e-6 * r
    fd = (pot(r + h) - pot(r - h)) / (2 * h)
    np.testing.assert_allclose(pot.derivative(r), fd, rtol=1e-7)


def test_problem_validation():
    pot = Potential.coulomb(0.1)
    with pytest.raises(DomainError):
        RadialProblem(pot, beta=0.0)
    with pytest.raises(DomainError):
        RadialProblem(pot, n_points=999)
    with pytest.raises(DomainError):
        RadialProblem(pot, l=-1)
    with pytest.raises(DomainError):
        Potential("square", 1.0)
    with pytest.raises(DomainError):
        Potential.yukawa(1.0, 0.0)
