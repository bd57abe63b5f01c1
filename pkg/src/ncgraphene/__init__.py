"""Deformed Landau levels of graphene and their thermodynamics.

Library layout:

``model``      deformation parameters, unit scales, analytic level ladder
``fock``       truncated number-basis oracle validating the analytic levels
``partition``  three partition-function evaluation schemes with derivatives
``thermo``     reduced free energy, internal energy, entropy, specific heat
``sweep``      grid sweeps, presets, CSV/JSON emission
``cli``        the ``ncgraphene`` command-line front end
"""

from .model import (
    DeformationFactor,
    LandauLevel,
    NCParams,
    PhysicalScales,
    UnitMode,
    deformation_factor,
    landau_level,
    magnetic_length,
    reduced_landau_energy,
)
from .fock import (
    FockRep,
    SpectrumReport,
    build_hamiltonian,
    build_ladder,
    commutator_defect,
    eig_hermitian,
    spectrum_report,
)
from .partition import (
    LogZDerivatives,
    PartitionEvaluation,
    Scheme,
    SumControl,
    convergence_integral,
    evaluate,
    n_particle_log_z,
    relative_error,
    z_direct,
    z_euler_maclaurin,
    z_hurwitz,
)
from .thermo import (
    ThermoPoint,
    asymptotic_high_t,
    heat_capacity_peak,
    thermo_point,
    thermo_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "DeformationFactor",
    "FockRep",
    "LandauLevel",
    "LogZDerivatives",
    "NCParams",
    "PartitionEvaluation",
    "PhysicalScales",
    "Scheme",
    "SpectrumReport",
    "SumControl",
    "ThermoPoint",
    "UnitMode",
    "asymptotic_high_t",
    "build_hamiltonian",
    "build_ladder",
    "commutator_defect",
    "convergence_integral",
    "deformation_factor",
    "eig_hermitian",
    "evaluate",
    "heat_capacity_peak",
    "landau_level",
    "magnetic_length",
    "n_particle_log_z",
    "reduced_landau_energy",
    "relative_error",
    "spectrum_report",
    "thermo_point",
    "thermo_sweep",
    "z_direct",
    "z_euler_maclaurin",
    "z_hurwitz",
]
