#!/usr/bin/env python3
"""Reproduce the fixed-orientation angular anisotropy scans.

For each charge state (Fe25+, Fe24+, Fe23+) and beam energy (10, 100,
1000 MeV/u), computes the electron-loss cross sections on oriented N2 over a
grid of polar angles theta and prints the relative anisotropy

    delta(theta) = sigma(theta) / sigma(pi/2) - 1

for every loss channel m = 1..N_P.

Usage:
    python scripts/reproduce_angular_scans.py [--points N] [--tolerance TOL]
"""

import argparse

import numpy as np

from molstrip.atomic_data import MoleculeGeometry, builtin_hfs_table
from molstrip.cross_section import CollisionSystem, delta_scan
from molstrip.form_factor import ProjectileSpec, default_ionization_table
from molstrip.kinematics import velocity_from_energy

CHARGE_STATES = {"Fe25+": 1, "Fe24+": 2, "Fe23+": 3}
ENERGIES_MEV_U = (10.0, 100.0, 1000.0)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=13, help="theta grid size")
    parser.add_argument("--tolerance", type=float, default=1e-3)
    args = parser.parse_args()

    nitrogen = builtin_hfs_table()[7]
    geometry = MoleculeGeometry.diatomic(nitrogen, nitrogen, 2.07)
    table = default_ionization_table()
    thetas = np.linspace(0.0, np.pi / 2, args.points)

    for label, n_p in CHARGE_STATES.items():
        projectile = ProjectileSpec(Z_nucleus=26.0, N_P=n_p)
        for energy in ENERGIES_MEV_U:
            system = CollisionSystem(
                geometry=geometry,
                projectile=projectile,
                params=velocity_from_energy(energy),
                table=table,
            )
            scan = delta_scan(system, thetas, rel_tol=args.tolerance)
            perp = ", ".join(
                f"m={m + 1}: {s:.4e}" for m, s in enumerate(scan.sigma_perp)
            )
            print(f"\n# {label}  E = {energy:g} MeV/u  sigma_perp (a.u.): {perp}")
            header = "theta_rad " + " ".join(
                f"{f'delta_m{m + 1}':>10}" for m in range(n_p)
            )
            print(header)
            for th, row in zip(thetas, scan.delta):
                print(f"{th:9.4f} " + " ".join(f"{d:10.4f}" for d in row))


if __name__ == "__main__":
    main()
