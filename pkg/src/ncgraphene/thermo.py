"""Reduced thermodynamic functions built on top of any partition evaluation.

With lnZ and its two tau-derivatives in hand, the canonical quantities in
reduced form are

    F/kappa = -tau ln Z
    U/kappa = tau^2 d(lnZ)/dtau
    S/k_B   = ln Z + tau d(lnZ)/dtau
    C/k_B   = 2 tau d(lnZ)/dtau + tau^2 d2(lnZ)/dtau2

All four scale linearly with the particle number.  At high temperature the
gas obeys the two-dimensional ultra-relativistic Dulong-Petit limits
U/kappa -> 2 tau and C/k_B -> 2 independently of the deformation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import NCParams
from .partition import PartitionEvaluation, Scheme, SumControl, evaluate, n_particle_log_z


@dataclass(frozen=True)
class ThermoPoint:
    tau: float
    f_bar: float        # free energy / kappa
    u_bar: float        # internal energy / kappa
    s_bar: float        # entropy / k_B
    c_bar: float        # specific heat / k_B
    n_particles: int
    scheme: Scheme


def thermo_point(evaluation: PartitionEvaluation, n_particles: int = 1) -> ThermoPoint:
    """Reduced thermodynamic record from one partition evaluation."""
    tau = evaluation.tau
    logz = n_particle_log_z(evaluation, n_particles)
    f_bar = -tau * logz.log_z
    u_bar = tau * tau * logz.dlog_z
    s_bar = logz.log_z + tau * logz.dlog_z
    c_bar = 2.0 * tau * logz.dlog_z + tau * tau * logz.d2log_z
    for name, value in (("f_bar", f_bar), ("u_bar", u_bar), ("s_bar", s_bar), ("c_bar", c_bar)):
        if not math.isfinite(value):
            raise ValueError(f"non-finite {name} at tau={tau}: {value!r}")
    return ThermoPoint(
        tau=tau,
        f_bar=f_bar,
        u_bar=u_bar,
        s_bar=s_bar,
        c_bar=c_bar,
        n_particles=int(n_particles),
        scheme=evaluation.scheme,
    )


def asymptotic_high_t(tau: float, params: NCParams) -> tuple[float, float]:
    """High-temperature limits (U/kappa, C/k_B) = (2 tau, 2).

    The specific-heat limit carries no deformation dependence at all; the
    pair is returned for comparison against exact values.
    """
    tau = float(tau)
    if tau <= 0.0:
        raise ValueError(f"tau must be positive, got {tau!r}")
    del params  # the limits do not depend on the deformation
    return 2.0 * tau, 2.0


def thermo_sweep(taus: Iterable[float], params: NCParams, scheme: Scheme,
                 n_particles: int = 1, control: SumControl | None = None) -> list[ThermoPoint]:
    """Evaluate the thermodynamic record over a temperature grid, in order.

    Output order follows the input grid exactly; a failure at any grid point
    is re-raised with the point index attached.
    """
    taus = list(taus)
    if not taus:
        raise ValueError("temperature grid must be non-empty")
    points = []
    for i, tau in enumerate(taus):
        try:
            points.append(thermo_point(evaluate(scheme, tau, params, control), n_particles))
        except ValueError as exc:
            raise ValueError(f"grid point {i} (tau={tau!r}): {exc}") from exc
    return points


def heat_capacity_peak(points: Sequence[ThermoPoint]) -> ThermoPoint:
    """Grid point with the largest specific heat.

    A pure argmax over the supplied grid; no claim is made about the location
    of the continuum maximum.
    """
    if not points:
        raise ValueError("need at least one point")
    return max(points, key=lambda pt: pt.c_bar)
