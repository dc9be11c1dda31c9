"""Bound states of two- and few-particle systems whose coordinates and
momenta do not commute across particles."""

from .algebra import (
    AngularCoefficients,
    NoncommParams,
    angular_coefficients,
    beta_full,
    check_commutators,
    eps_from_xi,
    r_vector_coefficients,
)
from .constants import (
    DEFAULT_CONSTANTS,
    Constants,
    ParticlePair,
    blow_force_coordinate,
    blow_force_momentum,
    compton_length,
    delta12,
    load_constants,
)
from .errors import (
    CalibrationError,
    ConvergenceError,
    DatasetError,
    DomainError,
    IdentityViolation,
    NCQMError,
    NoBoundState,
    SingularAlgebraError,
)
from .hydrogenic import (
    critical_coupling,
    energy_level,
    level_gap_1s2s,
    mean_distance_ground,
    radial_wavefunction,
    solve_eta0,
)
from .manybody import (
    KineticForm,
    NBodySystem,
    identical_eps_from_kappa,
    identical_particle_coefficient,
    jacobi_parameters_3body,
    kinetic_coefficients,
    transform_and_check_decoupling,
)
from .radial import Potential, RadialProblem, RadialSolution, solve_bound_state
from .selfconsistent import (
    OmegaCalibration,
    SelfConsistentResult,
    calibrate_omega,
    omega_curve,
    solve_self_consistent,
)

__version__ = "0.1.0"
