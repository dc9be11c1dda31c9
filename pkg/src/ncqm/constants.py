"""Physical constants, particle pairs and Compton-scale estimates.

Units used at this layer:

* masses are rest energies ``m c^2`` in eV,
* lengths are in cm,
* forces are in MeV/cm,
* momenta are ``p c`` in MeV (i.e. momentum in MeV/c).
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import DomainError

FM_TO_CM = 1e-13


@dataclass(frozen=True)
class Constants:
    """Constant set used by every computation.

    Defaults are CODATA 2018. Older vintages can be loaded with
    :func:`load_constants` to study their effect on the tables.
    """

    alpha: float = 7.2973525693e-3
    electron_rest_energy: float = 510998.95  # eV
    hbar_c: float = 197.3269804  # MeV fm
    masses: dict = field(
        default_factory=lambda: {
            "electron": 510998.95,
            "proton": 938272088.16,
            "neutron": 939565420.52,
            "deuteron": 1875612942.57,
        }
    )

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.electron_rest_energy <= 0 or self.hbar_c <= 0:
            raise DomainError("constants must be strictly positive")
        for name, value in self.masses.items():
            if value <= 0:
                raise DomainError(f"mass of {name!r} must be positive")

    @property
    def hbar_c_ev_cm(self) -> float:
        """hbar*c in eV cm."""
        return self.hbar_c * 1e6 * FM_TO_CM

    @property
    def hbar_c_mev_cm(self) -> float:
        return self.hbar_c * FM_TO_CM

    def mass(self, name: str) -> float:
        if name == "electron":
            return self.electron_rest_energy
        try:
            return self.masses[name]
        except KeyError:
            raise DomainError(f"unknown particle {name!r}") from None


DEFAULT_CONSTANTS = Constants()


def load_constants(path=None, base: Constants = DEFAULT_CONSTANTS) -> Constants:
    """Read constant overrides from an INI-style file.

    Recognised layout::

        [constants]
        alpha = 7.2973525698e-3
        electron_rest_energy = 510998.910   # eV
        hbar_c = 197.3269631                # MeV fm

        [masses]
        proton = 938272013.0                # eV

    Keys not present keep the values of ``base``.
    """
    if path is None:
        return base
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    text = Path(path).read_text()
    parser.read_string(text)
    kwargs = {}
    if parser.has_section("constants"):
        for key, raw in parser.items("constants"):
            if key not in ("alpha", "electron_rest_energy", "hbar_c"):
                raise DomainError(f"unknown constant {key!r} in {path}")
            kwargs[key] = float(raw)
    masses = dict(base.masses)
    if parser.has_section("masses"):
        for key, raw in parser.items("masses"):
            masses[key] = float(raw)
    if "electron_rest_energy" in kwargs:
        masses["electron"] = kwargs["electron_rest_energy"]
    return replace(base, masses=masses, **kwargs)


@dataclass(frozen=True)
class ParticlePair:
    """Two particles with rest energies ``m1``, ``m2`` (eV).

    ``m2 = inf`` is allowed and represents an infinitely heavy partner.
    """

    m1: float
    m2: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0):
            raise DomainError(f"masses must be positive, got {self.m1}, {self.m2}")
        if math.isinf(self.m1) and math.isinf(self.m2):
            raise DomainError("at most one mass may be infinite")

    @property
    def mu(self) -> float:
        """Reduced mass (eV)."""
        return 1.0 / (1.0 / self.m1 + 1.0 / self.m2)

    @property
    def M(self) -> float:
        return self.m1 + self.m2

    @property
    def ratio(self) -> float:
        """mu/M = m1 m2 / (m1 + m2)^2, in [0, 1/4]."""
        if math.isinf(self.m1) or math.isinf(self.m2):
            return 0.0
        s = self.m1 + self.m2
        # rounding can push equal masses a few ulp above 1/4
        return min((self.m1 / s) * (self.m2 / s), 0.25)

    @property
    def fraction1(self) -> float:
        """m1/M."""
        if math.isinf(self.m1):
            return 1.0
        if math.isinf(self.m2):
            return 0.0
        return self.m1 / (self.m1 + self.m2)

    @property
    def fraction2(self) -> float:
        """m2/M."""
        if math.isinf(self.m2):
            return 1.0
        if math.isinf(self.m1):
            return 0.0
        return self.m2 / (self.m1 + self.m2)

    @classmethod
    def named(cls, first: str, second: str, constants: Constants = DEFAULT_CONSTANTS):
        return cls(constants.mass(first), constants.mass(second))

    @classmethod
    def with_ratio(cls, ratio: float, mu: float):
        """Pair with a prescribed reduced mass and mu/M."""
        if not (0.0 <= ratio <= 0.25):
            raise DomainError(f"mu/M must lie in [0, 1/4], got {ratio}")
        if ratio == 0.0:
            return cls(mu, math.inf)
        # m1 m2 = mu M, m1 + m2 = M = mu / ratio
        M = mu / ratio
        disc = math.sqrt(max(M * M - 4.0 * mu * M, 0.0))
        return cls(0.5 * (M + disc), 0.5 * (M - disc))


def compton_length(mass: float, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """hbar/(m c) in cm for a rest energy ``mass`` in eV."""
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    return constants.hbar_c_ev_cm / mass


def delta12(pair: ParticlePair, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Resolution limit on the interparticle distance, in cm.

    ``(hbar/mu c) sqrt(1 - 2 mu/M)``, i.e. the two Compton lengths added
    in quadrature.
    """
    return compton_length(pair.mu, constants) * math.sqrt(1.0 - 2.0 * pair.ratio)


def blow_force_coordinate(delta_x: float, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Force (MeV/cm) of the kick that accompanies a position measurement of accuracy ``delta_x`` (cm)."""
    if not delta_x > 0:
        raise DomainError(f"delta_x must be positive, got {delta_x}")
    return constants.hbar_c_mev_cm / (2.0 * delta_x**2)


def blow_force_momentum(delta_p: float, constants: Constants = DEFAULT_CONSTANTS) -> float:
    """Force (MeV/cm) for a momentum measurement with accuracy ``delta_p`` (MeV/c)."""
    if not delta_p > 0:
        raise DomainError(f"delta_p must be positive, got {delta_p}")
    return 2.0 * delta_p**2 / constants.hbar_c_mev_cm
