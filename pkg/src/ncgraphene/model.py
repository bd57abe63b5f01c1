"""Deformed Landau levels of graphene in a magnetic field.

When both the coordinate and the momentum commutators acquire constant
deformations, the relativistic Landau ladder of graphene keeps its
square-root shape but every level is rescaled by a single factor

    A = (1 + theta_bar) * (1 + theta_bar + eta_bar),

where ``theta_bar`` and ``eta_bar`` are the dimensionless spatial and
momentum deformation strengths.  Everything downstream (matrix oracle,
partition function, thermodynamics) consumes the deformation through the
constants computed here.

Two unit modes are supported: a reduced mode with l_B = hbar = k_B = v_F = 1
(the convention used for all numerical sweeps), and an SI mode where the
magnetic length follows from the applied field.  Energies are conventionally
reported divided by the scale kappa = sqrt(2) * hbar * v_F / l_B, which makes
spectra identical across unit modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

# SI constants (2019 exact values where applicable)
HBAR_SI = 1.054571817e-34        # J s
E_CHARGE_SI = 1.602176634e-19    # C
K_B_SI = 1.380649e-23            # J / K
V_F_GRAPHENE_SI = 1.0e6          # m / s, standard Fermi velocity ~ c/300

# Characteristic temperature commonly quoted for this crossover scale.
# Recorded for reference only; the library always computes T0 = kappa / k_B
# from the active scales instead of assuming this number.
REPORTED_T0_KELVIN = 5.93e9

# Upper end of the deformation range used in extended parameter sweeps.  The
# physically motivated regime is theta_bar, eta_bar <~ 0.1; larger values are
# accepted for plotting/exploration and are not capped.
PHYSICAL_DEFORMATION_BOUND = 0.1


class UnitMode(str, Enum):
    REDUCED = "reduced"
    SI = "si"


def _check_finite_nonneg(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    if value < 0.0:
        raise ValueError(f"{name} must be non-negative, got {value!r}")
    return value


def _check_finite_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class NCParams:
    """Dimensionless deformation pair.

    ``theta_bar`` is the spatial deformation in units of 2 l_B**2 and
    ``eta_bar`` the momentum deformation in units of hbar**2 / l_B**2.
    Both must be non-negative and finite.
    """

    theta_bar: float = 0.0
    eta_bar: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta_bar", _check_finite_nonneg("theta_bar", self.theta_bar))
        object.__setattr__(self, "eta_bar", _check_finite_nonneg("eta_bar", self.eta_bar))

    @property
    def commutative(self) -> bool:
        return self.theta_bar == 0.0 and self.eta_bar == 0.0


@dataclass(frozen=True)
class PhysicalScales:
    """Unit system: hbar, Boltzmann constant, magnetic length, Fermi velocity.

    ``kappa`` (the level spacing scale) and ``T0`` (the characteristic
    temperature) are always derived properties, never stored.
    """

    hbar: float = 1.0
    k_B: float = 1.0
    l_B: float = 1.0
    v_F: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "k_B", "l_B", "v_F"):
            object.__setattr__(self, name, _check_finite_positive(name, getattr(self, name)))

    @property
    def kappa(self) -> float:
        """Energy scale sqrt(2) * hbar * v_F / l_B of the level ladder."""
        return math.sqrt(2.0) * self.hbar * self.v_F / self.l_B

    @property
    def T0(self) -> float:
        """Characteristic temperature kappa / k_B separating the low- and
        high-temperature regimes of the reduced description."""
        return self.kappa / self.k_B

    @classmethod
    def reduced(cls) -> "PhysicalScales":
        """Natural units l_B = hbar = k_B = v_F = 1 (kappa = sqrt(2))."""
        return cls()

    @classmethod
    def si(cls, b_field: float, v_F: float = V_F_GRAPHENE_SI) -> "PhysicalScales":
        """SI units with the magnetic length set by the field ``b_field`` (tesla)."""
        return cls(hbar=HBAR_SI, k_B=K_B_SI, l_B=magnetic_length(b_field), v_F=v_F)

    @classmethod
    def from_mode(cls, mode: UnitMode, b_field: float | None = None) -> "PhysicalScales":
        if mode == UnitMode.REDUCED:
            return cls.reduced()
        if b_field is None:
            raise ValueError("SI mode requires a magnetic field")
        return cls.si(b_field)


@dataclass(frozen=True)
class DeformationFactor:
    """Derived coupling constants of the deformed model.

    ``a_value``    the level rescaling A = (1+theta_bar)(1+theta_bar+eta_bar)
    ``lambda_c``   momentum prefactor 1 + theta_bar
    ``omega_c``    confinement coupling in units of hbar / (2 l_B**2)
    ``q_coupling`` ladder coupling in units of hbar / l_B; q_coupling**2 = 2A
    """

    a_value: float
    lambda_c: float
    omega_c: float
    q_coupling: float


def deformation_factor(params: NCParams) -> DeformationFactor:
    """Compute the coupling constants (A, lambda, Omega, Q) for ``params``.

    The factor A multiplies the level index inside the square-root spectrum;
    A >= 1, with equality only in the commutative limit.
    """
    lam = 1.0 + params.theta_bar
    omega = lam + params.eta_bar           # in units of hbar / (2 l_B^2)
    a_value = lam * omega
    q = math.sqrt(2.0 * a_value)           # in units of hbar / l_B
    return DeformationFactor(a_value=a_value, lambda_c=lam, omega_c=omega, q_coupling=q)


@dataclass(frozen=True)
class LandauLevel:
    n: int
    band: int          # +1 conduction (electrons), -1 valence (holes)
    energy: float      # in the units fixed by the scales used to build it


def _check_level_index(n) -> int:
    try:
        n = int(n)
    except (TypeError, ValueError):
        raise ValueError(f"level index must be an integer, got {n!r}") from None
    if n < 0:
        raise ValueError(f"level index must be non-negative, got {n}")
    return n


def _check_band(band) -> int:
    if band not in (1, -1):
        raise ValueError(f"band must be +1 or -1, got {band!r}")
    return int(band)


def landau_level(n: int, band: int, params: NCParams, scales: PhysicalScales) -> LandauLevel:
    """Deformed Landau level: energy = band * kappa * sqrt(A * n).

    The n = 0 level sits at zero energy for both bands; the two bands are
    exact mirror images of each other.
    """
    n = _check_level_index(n)
    band = _check_band(band)
    a_value = deformation_factor(params).a_value
    energy = band * scales.kappa * math.sqrt(a_value * n)
    return LandauLevel(n=n, band=band, energy=energy)


def reduced_landau_energy(n: int, band: int, params: NCParams) -> float:
    """Level energy divided by kappa: band * sqrt(A * n), unit-mode independent."""
    n = _check_level_index(n)
    band = _check_band(band)
    return band * math.sqrt(deformation_factor(params).a_value * n)


def magnetic_length(b_field: float, hbar: float = HBAR_SI, e_charge: float = E_CHARGE_SI) -> float:
    """Cyclotron length sqrt(hbar / (e B)); rejects non-positive inputs."""
    b_field = _check_finite_positive("b_field", b_field)
    hbar = _check_finite_positive("hbar", hbar)
    e_charge = _check_finite_positive("e_charge", e_charge)
    return math.sqrt(hbar / (e_charge * b_field))
