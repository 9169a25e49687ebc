"""Shared fixtures: atoms, geometries, the W_ion table, collision systems."""

import pytest

from molstrip.atomic_data import HfsAtom, MoleculeGeometry, builtin_hfs_table
from molstrip.cross_section import CollisionSystem
from molstrip.form_factor import ProjectileSpec, default_ionization_table
from molstrip.kinematics import velocity_from_energy

N2_BOND_LENGTH = 2.07


@pytest.fixture(scope="session")
def hfs_table():
    return builtin_hfs_table()


@pytest.fixture(scope="session")
def nitrogen(hfs_table):
    return hfs_table[7]


@pytest.fixture(scope="session")
def synthetic_atom():
    """Fixture atom with easy-to-check coefficients (not a physical species)."""
    return HfsAtom(Z=5.0, A=(0.5, 0.3, 0.2), alpha=(10.0, 4.0, 1.0))


@pytest.fixture(scope="session")
def n2_geometry(nitrogen):
    return MoleculeGeometry.diatomic(nitrogen, nitrogen, N2_BOND_LENGTH)


@pytest.fixture(scope="session")
def ionization_table():
    return default_ionization_table()


@pytest.fixture(scope="session")
def make_system(n2_geometry, ionization_table):
    """Factory for projectile/energy combinations on the N2 target."""

    def factory(n_electrons: int = 1, energy_mev_u: float = 10.0,
                geometry: MoleculeGeometry = None) -> CollisionSystem:
        proj = ProjectileSpec(Z_nucleus=26.0, N_P=n_electrons)
        params = velocity_from_energy(energy_mev_u)
        return CollisionSystem(
            geometry=geometry if geometry is not None else n2_geometry,
            projectile=proj,
            params=params,
            table=ionization_table,
        )

    return factory
