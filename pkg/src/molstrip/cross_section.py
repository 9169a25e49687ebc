"""Orientation-dependent electron-loss cross sections.

At each impact parameter b the projectile electrons all receive the same
total kick Q(b), so with the per-electron ionization probability
p = W_ion(|Q|/Z_eff) the loss channels are binomial,

    P_m(b) = C(N_P, m) p^m (1 - p)^(N_P - m),

and sigma^{m+}(theta, phi) = integral P_m(b) d^2b.  The azimuthal average is
taken by symmetry (the full b-plane integral is invariant under rotations
about the beam), which is asserted numerically once per system.  delta(theta)
compares each orientation against the perpendicular one, and the chaotic
average integrates sigma(theta) with the isotropic weight, i.e. by
Gauss-Legendre in cos(theta) over [0, 1] using the theta -> pi - theta
symmetry.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .atomic_data import MoleculeGeometry, Orientation, transverse_positions
from .form_factor import IonizationTable, ProjectileSpec
from .kinematics import CollisionParams
from .quadrature import QuadratureError, integrate_b_plane
from .transfer import total_kick_magnitude

__all__ = [
    "AU_TO_CM2",
    "ChannelProbabilities",
    "CrossSectionResult",
    "OrientationScan",
    "CollisionSystem",
    "loss_probabilities",
    "cross_section_fixed",
    "cross_section_theta",
    "delta_scan",
    "orientation_average",
]

AU_TO_CM2 = 2.8002852e-17      # a_0^2 in cm^2

# Outer cutoff: drop the domain where p falls below this fraction of its peak.
CUTOFF_FRACTION = 1e-8


@dataclass(frozen=True)
class ChannelProbabilities:
    """Binomial loss-channel probabilities at one impact parameter."""

    p_ion: float
    channel: tuple[float, ...]    # P_m for m = 0..N_P


@dataclass(frozen=True)
class CrossSectionResult:
    """One loss channel: multiplicity m, cross section, quadrature error."""

    m: int
    sigma_au: float
    quad_error: float

    @property
    def sigma_cm2(self) -> float:
        return self.sigma_au * AU_TO_CM2


@dataclass(frozen=True)
class OrientationScan:
    """sigma and delta versus orientation angle, channels m = 1..N_P."""

    theta_grid: np.ndarray
    sigma_au: np.ndarray          # (n_theta, N_P)
    quad_error: np.ndarray        # (n_theta, N_P)
    delta: np.ndarray             # (n_theta, N_P)
    sigma_perp: np.ndarray        # (N_P,)
    sigma_perp_error: np.ndarray  # (N_P,)
    sigma_avg: np.ndarray | None = None
    sigma_avg_error: np.ndarray | None = None


@dataclass
class CollisionSystem:
    """A projectile-molecule-energy combination plus the W_ion table."""

    geometry: MoleculeGeometry
    projectile: ProjectileSpec
    params: CollisionParams
    table: IonizationTable
    _phi_checked: bool = field(default=False, repr=False)

    @property
    def velocity(self) -> float:
        return self.params.velocity_au


def _binomial_channels(p: np.ndarray, n: int) -> np.ndarray:
    """Columns P_m for m = 1..n plus the per-electron p as the last column."""
    cols = [math.comb(n, m) * p**m * (1.0 - p) ** (n - m) for m in range(1, n + 1)]
    cols.append(p)
    return np.stack(cols, axis=1)


def loss_probabilities(
    b, projections, atoms, proj: ProjectileSpec, v: float, table: IonizationTable
) -> ChannelProbabilities:
    """Channel probabilities at a single impact parameter."""
    q = total_kick_magnitude(projections, atoms, v, np.asarray(b, dtype=float)[None, :])[0]
    p = float(table(q / proj.Z_eff))
    n = proj.N_P
    channel = tuple(
        math.comb(n, m) * p**m * (1.0 - p) ** (n - m) for m in range(n + 1)
    )
    return ChannelProbabilities(p_ion=p, channel=channel)


def _channel_field(projections, atoms, proj, v, table):
    z_eff = proj.Z_eff
    n = proj.N_P

    def integrand(points):
        q = total_kick_magnitude(projections, atoms, v, points)
        p = table(q / z_eff)
        return _binomial_channels(p, n)

    return integrand


def _single_electron_p(projections, atoms, proj, v, table, points):
    q = total_kick_magnitude(projections, atoms, v, points)
    return table(q / proj.Z_eff)


def _outer_cutoff(projections, atoms, proj, v, table) -> float:
    """Radius beyond which the integrand is below CUTOFF_FRACTION of its peak."""
    projections = np.asarray(projections, dtype=float)
    outer = float(np.max(np.hypot(projections[:, 0], projections[:, 1])))
    direction = projections[np.argmax(np.hypot(projections[:, 0], projections[:, 1]))]
    norm = np.hypot(*direction)
    u = direction / norm if norm > 0 else np.array([1.0, 0.0])

    t = np.concatenate([np.geomspace(1e-4, 1.0, 40), np.linspace(1.1, 150.0, 600)])
    pts = u[None, :] * (outer + t)[:, None]
    p = _single_electron_p(projections, atoms, proj, v, table, pts)
    peak = float(p.max())
    if peak <= 0.0:
        return outer + 1.0
    above = np.nonzero(p > CUTOFF_FRACTION * peak)[0]
    t_cut = t[above[-1]] if len(above) else 1.0
    return outer + float(t_cut) + 1.0


def _canonical_frame(geometry: MoleculeGeometry, projections: np.ndarray):
    """For a homonuclear diatomic, rotate projections onto the x axis.

    Returns (projections, symmetry) where symmetry is 'quadrant' when the
    integrand is mirror-symmetric in both axes.
    """
    if not geometry.is_homonuclear_diatomic:
        return projections, None
    u = projections[0]
    d = float(np.hypot(*u))
    if d == 0.0:
        return np.zeros_like(projections), "quadrant"
    canonical = np.array([[d, 0.0], [-d, 0.0]])
    return canonical, "quadrant"


def integrate_channels(
    system: CollisionSystem,
    theta: float,
    phi: float = 0.0,
    rel_tol: float = 1e-3,
    use_symmetry: bool = True,
):
    """Integrate all loss channels plus the expected-loss integral.

    Returns (results, expected_loss, expected_loss_error) where results is a
    list of CrossSectionResult for m = 1..N_P and expected_loss is
    integral p(b) d^2b (the sum rule gives sum_m m sigma^{m+} = N_P * that).
    """
    geom, proj = system.geometry, system.projectile
    projections = transverse_positions(geom, Orientation(theta, phi))
    symmetry = None
    if use_symmetry:
        projections, symmetry = _canonical_frame(geom, projections)
    field_fn = _channel_field(projections, geom.atoms, proj, system.velocity, system.table)
    b_max = _outer_cutoff(projections, geom.atoms, proj, system.velocity, system.table)
    values, errors = integrate_b_plane(
        field_fn,
        half_width=b_max,
        rel_tol=rel_tol,
        symmetry=symmetry,
        x_splits=np.asarray(projections)[:, 0],
        y_splits=np.asarray(projections)[:, 1],
    )
    results = [
        CrossSectionResult(m=m, sigma_au=float(values[m - 1]), quad_error=float(errors[m - 1]))
        for m in range(1, proj.N_P + 1)
    ]
    return results, float(values[-1]), float(errors[-1])


def cross_section_fixed(
    system: CollisionSystem,
    theta: float,
    phi: float = 0.0,
    rel_tol: float = 1e-3,
    use_symmetry: bool = True,
) -> list[CrossSectionResult]:
    """sigma^{m+}(theta, phi) for every channel m = 1..N_P."""
    results, _, _ = integrate_channels(system, theta, phi, rel_tol, use_symmetry)
    return results


def _assert_phi_invariance(system: CollisionSystem, theta: float, rel_tol: float) -> None:
    tol = max(rel_tol, 1e-3)
    a = cross_section_fixed(system, theta, 0.7, rel_tol=tol, use_symmetry=False)
    b = cross_section_fixed(system, theta, 2.3, rel_tol=tol, use_symmetry=False)
    for ra, rb in zip(a, b):
        allowance = 3.0 * (ra.quad_error + rb.quad_error) + 1e-12 * abs(ra.sigma_au)
        if abs(ra.sigma_au - rb.sigma_au) > allowance:
            raise AssertionError(
                f"azimuthal invariance violated for channel {ra.m}: "
                f"{ra.sigma_au:.6g} vs {rb.sigma_au:.6g}"
            )


def cross_section_theta(
    system: CollisionSystem,
    theta: float,
    rel_tol: float = 1e-3,
    check_phi: bool = True,
) -> list[CrossSectionResult]:
    """phi-averaged sigma(theta); evaluated at phi = 0 by rotational symmetry.

    The first call on a system verifies the symmetry numerically (two
    azimuths integrated without the symmetric fast path) before relying on it.
    """
    if check_phi and not system._phi_checked:
        check_theta = theta if math.sin(theta) > 0.1 else 0.6
        _assert_phi_invariance(system, check_theta, rel_tol)
        system._phi_checked = True
    return cross_section_fixed(system, theta, 0.0, rel_tol)


def _scan_thetas(system, thetas, rel_tol, check_phi, threads):
    if check_phi and not system._phi_checked:
        # trigger the one-time check serially before parallel work
        cross_section_theta(system, float(thetas[0]), rel_tol, check_phi=True)

    def work(th):
        return cross_section_theta(system, float(th), rel_tol, check_phi=False)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(work, thetas))
    return [work(th) for th in thetas]


def delta_scan(
    system: CollisionSystem,
    theta_grid,
    rel_tol: float = 1e-3,
    check_phi: bool = True,
    threads: int = 1,
    include_average: bool = False,
) -> OrientationScan:
    """sigma(theta) and delta(theta) over a grid in [0, pi/2].

    delta is measured against sigma at theta = pi/2, which is computed once;
    a grid point at pi/2 reuses it, so delta(pi/2) is exactly zero.
    """
    theta_grid = np.asarray(theta_grid, dtype=float)
    if theta_grid.size == 0:
        raise ValueError("theta grid must be nonempty")
    if np.any(theta_grid < 0) or np.any(theta_grid > math.pi / 2 + 1e-12):
        raise ValueError("theta grid must lie within [0, pi/2]")

    perp = cross_section_theta(system, math.pi / 2, rel_tol, check_phi=check_phi)
    sigma_perp = np.array([r.sigma_au for r in perp])
    sigma_perp_err = np.array([r.quad_error for r in perp])
    if np.any(sigma_perp <= 0):
        raise ValueError("perpendicular cross section vanishes; degenerate system")

    at_perp = np.isclose(theta_grid, math.pi / 2)
    todo = theta_grid[~at_perp]
    computed = _scan_thetas(system, todo, rel_tol, check_phi, threads)

    n_p = system.projectile.N_P
    sigma = np.empty((theta_grid.size, n_p))
    err = np.empty_like(sigma)
    it = iter(computed)
    for i, is_perp in enumerate(at_perp):
        results = perp if is_perp else next(it)
        sigma[i] = [r.sigma_au for r in results]
        err[i] = [r.quad_error for r in results]
    delta = sigma / sigma_perp[None, :] - 1.0
    delta[at_perp] = 0.0

    scan = OrientationScan(
        theta_grid=theta_grid,
        sigma_au=sigma,
        quad_error=err,
        delta=delta,
        sigma_perp=sigma_perp,
        sigma_perp_error=sigma_perp_err,
    )
    if include_average:
        avg = orientation_average(system, rel_tol=rel_tol, check_phi=False, threads=threads)
        scan = OrientationScan(
            **{**scan.__dict__,
               "sigma_avg": np.array([r.sigma_au for r in avg]),
               "sigma_avg_error": np.array([r.quad_error for r in avg])},
        )
    return scan


def orientation_average(
    system: CollisionSystem,
    rel_tol: float = 1e-4,
    n_nodes: int = 20,
    check_phi: bool = True,
    threads: int = 1,
) -> list[CrossSectionResult]:
    """Chaotic-orientation average: integral of sigma(theta) (1/2) sin(theta).

    Substituting c = cos(theta) and folding theta -> pi - theta reduces this
    to the plain mean of sigma over c in [0, 1], done by Gauss-Legendre.
    The reported error is the isotropic-weight sum of the per-node
    quadrature errors (the Gauss-Legendre truncation is spectrally small:
    sigma is analytic in c through its dependence on L^2 (1 - c^2)).
    """
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    c = 0.5 * (x + 1.0)
    w = 0.5 * w
    thetas = np.arccos(c)
    results = _scan_thetas(system, thetas, rel_tol, check_phi, threads)
    sigma = np.array([[r.sigma_au for r in res] for res in results])
    err = np.array([[r.quad_error for r in res] for res in results])
    avg = w @ sigma
    avg_err = w @ err
    return [
        CrossSectionResult(m=m + 1, sigma_au=float(avg[m]), quad_error=float(avg_err[m]))
        for m in range(system.projectile.N_P)
    ]
