"""Relativistic beam kinematics and validity-regime diagnostics.

Energies are given per nucleon (MeV/u) and converted to the projectile speed
in atomic units.  The regime checks are heuristics with configurable
thresholds: they warn, never fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .atomic_data import MoleculeGeometry

__all__ = ["CollisionParams", "RegimeWarning", "velocity_from_energy", "validate_regime"]

C_AU = 137.035999            # speed of light, atomic units
AMU_MEV = 931.494            # m_u c^2 in MeV
AMU_ME = AMU_MEV / 0.51099895  # nucleon mass in electron masses

# Heuristic thresholds for the diagnostics (see validate_regime).
SUDDEN_RATIO_MAX = 0.1
MIN_NET_CHARGE = 5
MIN_KL = 100.0
TAU_E_TARGET = 1.0   # outer-shell orbital period, a.u.
ATOM_SIZE_AU = 1.0   # characteristic neutral-atom size, a.u.


@dataclass(frozen=True)
class CollisionParams:
    """Beam kinematics derived from the kinetic energy per nucleon."""

    energy_mev_u: float
    gamma: float
    beta: float
    velocity_au: float


@dataclass(frozen=True)
class RegimeWarning:
    name: str
    ratio: float
    threshold: float
    message: str

    def __str__(self) -> str:
        return self.message


def velocity_from_energy(energy_mev_u: float) -> CollisionParams:
    """Relativistic conversion MeV/u -> speed in a.u."""
    if not (energy_mev_u > 0) or math.isinf(energy_mev_u):
        raise ValueError(f"energy must be positive and finite, got {energy_mev_u}")
    gamma = 1.0 + energy_mev_u / AMU_MEV
    beta = math.sqrt(1.0 - 1.0 / (gamma * gamma))
    return CollisionParams(
        energy_mev_u=energy_mev_u,
        gamma=gamma,
        beta=beta,
        velocity_au=beta * C_AU,
    )


def validate_regime(
    params: CollisionParams,
    proj,
    geom: MoleculeGeometry,
    *,
    sudden_ratio_max: float = SUDDEN_RATIO_MAX,
    min_net_charge: float = MIN_NET_CHARGE,
    min_kl: float = MIN_KL,
) -> list[RegimeWarning]:
    """Check the sudden, high-charge, and eikonal heuristics.

    Sudden condition: the per-atom collision time (atom size over gamma*v)
    must be short against the projectile-electron period (~1 a.u. for the
    outer-shell estimate).  The molecular extent enters only the eikonal
    check k*L, where k is the projectile momentum per nucleon.
    """
    warnings: list[RegimeWarning] = []

    tau_c = ATOM_SIZE_AU / (params.gamma * params.velocity_au)
    if tau_c >= sudden_ratio_max * TAU_E_TARGET:
        warnings.append(RegimeWarning(
            name="sudden",
            ratio=tau_c / TAU_E_TARGET,
            threshold=sudden_ratio_max,
            message=(
                f"sudden-approximation ratio tau_c/tau_e = {tau_c:.3g} >= "
                f"{sudden_ratio_max:g}: collision may not be sudden"
            ),
        ))

    net_charge = proj.Z_nucleus - proj.N_P
    if net_charge < min_net_charge:
        warnings.append(RegimeWarning(
            name="charge",
            ratio=float(net_charge),
            threshold=float(min_net_charge),
            message=(
                f"projectile net charge {net_charge:g} < {min_net_charge:g}: "
                "high-charge expansion may be inaccurate"
            ),
        ))

    k = params.gamma * AMU_ME * params.velocity_au
    length = max(geom.extent, ATOM_SIZE_AU)
    kl = k * length
    if kl < min_kl:
        warnings.append(RegimeWarning(
            name="eikonal",
            ratio=kl,
            threshold=min_kl,
            message=f"eikonal product k*L = {kl:.3g} < {min_kl:g}: straight-line "
                    "approximation questionable",
        ))

    return warnings
