"""Independent numerical oracles for cross-checking the main pipeline.

Three deliberately different routes back the production code:

* ``mc_cross_section`` — importance-sampled Monte-Carlo estimate of the
  impact-parameter integral, checking the adaptive quadrature.
* ``continuum_ionization_oracle`` — W_ion(s) by direct integration of the
  squared 1s -> continuum matrix elements over all ejected-electron momenta
  (partial-wave Coulomb waves propagated by Numerov), checking the
  bound-state-complement route in ``form_factor``.
* ``bessel_reference`` — McDonald functions from the defining integral
  representation in arbitrary precision, checking ``special_functions``.

These favor transparency over speed and are meant for tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np
from scipy import special as sp
from scipy.integrate import simpson

from .atomic_data import Orientation, transverse_positions
from .cross_section import CollisionSystem, _binomial_channels, _canonical_frame
from .form_factor import bound_survival_probability
from .transfer import total_kick_magnitude

__all__ = [
    "McEstimate",
    "mc_cross_section",
    "continuum_ionization_oracle",
    "bessel_reference",
    "bessel_reference_i",
]


@dataclass(frozen=True)
class McEstimate:
    """Monte-Carlo integral estimate with one-sigma statistical error."""

    value: float
    std_error: float
    n_samples: int
    seed: int


_MC_BLOCK = 1 << 16


def mc_cross_section(
    system: CollisionSystem,
    theta: float,
    phi: float = 0.0,
    n_samples: int = 10**6,
    seed: int = 0,
) -> list[McEstimate]:
    """Monte-Carlo sigma^{m+}(theta, phi), one estimate per channel.

    Proposal: pick an atom uniformly, then an exponential radial step around
    its projection with rate equal to the atom's softest screening exponent
    (heavier-tailed than the integrand, whose kick falls off at least twice
    as fast).  Sampling proceeds in fixed-size blocks with seeds spawned from
    the master seed, summed in block order: bit-reproducible for a given seed
    and extensible (the first blocks of a longer run coincide).
    """
    if n_samples < 10**4:
        raise ValueError(f"n_samples must be >= 1e4, got {n_samples}")
    geom, proj = system.geometry, system.projectile
    projections = transverse_positions(geom, Orientation(theta, phi))
    projections, _ = _canonical_frame(geom, projections)
    projections = np.asarray(projections, dtype=float)
    atoms = geom.atoms
    v = system.velocity
    n_atoms = len(atoms)
    n_p = proj.N_P

    lam = min(
        min(al for al, a in zip(atom.alpha, atom.A) if a != 0.0) for atom in atoms
    )

    n_blocks = math.ceil(n_samples / _MC_BLOCK)
    child_seeds = np.random.SeedSequence(seed).spawn(n_blocks)
    total = np.zeros(n_p)
    total_sq = np.zeros(n_p)
    n_done = 0
    for blk in range(n_blocks):
        size = min(_MC_BLOCK, n_samples - n_done)
        rng = np.random.default_rng(child_seeds[blk])
        idx = rng.integers(0, n_atoms, size)
        r = rng.exponential(1.0 / lam, size)
        ang = rng.uniform(0.0, 2.0 * math.pi, size)
        pts = projections[idx] + np.column_stack([r * np.cos(ang), r * np.sin(ang)])

        density = np.zeros(size)
        for s_m in projections:
            d = np.maximum(np.hypot(pts[:, 0] - s_m[0], pts[:, 1] - s_m[1]), 1e-12)
            density += lam * np.exp(-lam * d) / (2.0 * math.pi * d)
        density /= n_atoms

        q = total_kick_magnitude(projections, atoms, v, pts)
        p = system.table(q / proj.Z_eff)
        weights = _binomial_channels(p, n_p)[:, :n_p] / density[:, None]
        total += weights.sum(axis=0)
        total_sq += (weights * weights).sum(axis=0)
        n_done += size

    mean = total / n_samples
    var = np.maximum(total_sq / n_samples - mean * mean, 0.0)
    std_err = np.sqrt(var / n_samples)
    return [
        McEstimate(value=float(mean[m]), std_error=float(std_err[m]),
                   n_samples=n_samples, seed=seed)
        for m in range(n_p)
    ]


# ---------------------------------------------------------------------------
# Continuum-wave ionization oracle
# ---------------------------------------------------------------------------


def _coulomb_amplitude_log(l: int, eta: float) -> float:
    """log C_l(eta): regular Coulomb wave F_l ~ C_l rho^{l+1} at the origin."""
    lg = sp.loggamma(complex(l + 1, eta))
    return l * math.log(2.0) - 0.5 * math.pi * eta + lg.real - sp.gammaln(2 * l + 2)


def _coulomb_series_start(ls: np.ndarray, eta: float, rho: float, n_terms: int = 60):
    """F_l(eta, rho) from the regular power series, per l.

    The series converges for all rho; callers size n_terms to the evaluation
    point (roughly 1.5 rho + 20 terms) and keep rho below ~l so the partial
    sums stay cancellation-free.
    """
    coeffs = np.zeros((len(ls), n_terms))
    coeffs[:, 0] = 1.0
    coeffs[:, 1] = eta / (ls + 1.0)
    for n in range(2, n_terms):
        coeffs[:, n] = (2.0 * eta * coeffs[:, n - 1] - coeffs[:, n - 2]) / (
            n * (n + 2.0 * ls + 1.0)
        )
    powers = rho ** np.arange(n_terms)
    series = coeffs @ powers
    logc = np.array([_coulomb_amplitude_log(int(l), eta) for l in ls])
    log_pref = logc + (ls + 1.0) * math.log(rho)
    # Deep under the centrifugal barrier the prefactor underflows; those
    # start values are zeroed (callers pick start radii where this cannot
    # discard representable waves).
    out = np.where(log_pref > -290.0, np.exp(np.maximum(log_pref, -290.0)) * series, 0.0)
    return out


def _coulomb_waves(k: float, l_max: int, r: np.ndarray) -> np.ndarray:
    """F_l(-1/k, k r) for l = 0..l_max on a uniform r grid (Numerov).

    The radial equation in r is u'' = [l(l+1)/r^2 - 2/r - k^2] u, the
    attractive hydrogen continuum problem; outward propagation of the
    regular solution is stable.
    """
    h = r[1] - r[0]
    ls = np.arange(l_max + 1, dtype=float)
    eta = -1.0 / k
    g = ls[:, None] * (ls[:, None] + 1.0) / r[None, :] ** 2 - 2.0 / r[None, :] - k * k
    t = (h * h / 12.0) * g
    u = np.zeros_like(g)
    # Numerov for u'' = g u:  (1 - t_{n+1}) u_{n+1} = 2 (1 + 5 t_n) u_n
    #                         - (1 - t_{n-1}) u_{n-1},  t = h^2 g / 12
    one_p = 1.0 - t
    coef_m = 2.0 * (1.0 + 5.0 * t)
    # Numerov needs h^2 g << 1; the centrifugal term forces a start radius
    # proportional to l, where the series (exact) seeds the two start nodes.
    # Three constraints pick the start index per l:
    #  * at least 2l grid steps in, so h^2 g / 12 stays < ~1/48;
    #  * where the prefactor C_l rho^{l+1} is representable (log > -250) --
    #    it can underflow at small rho for large l while the wave is O(1)
    #    within the physical range;
    #  * for l >= 20, at ~0.4 of the classical turning point l/k: stepping
    #    through the deep barrier accumulates a relative amplitude error
    #    ~3e-5 per unit l, while the skipped inner tail is suppressed by
    #    exp(-0.65 l) and contributes nothing.
    start = np.maximum(1, (2 * np.arange(l_max + 1)).astype(int))
    for li in range(l_max + 1):
        logc = _coulomb_amplitude_log(li, eta)
        rho_min = math.exp((-250.0 - logc) / (li + 1.0))
        j_pref = int(math.ceil(rho_min / (k * h)))
        j_turn = int(0.4 * li / (k * h)) if li >= 20 else 0
        start[li] = min(max(start[li], j_pref, j_turn), len(r) - 2)
    for li, j0 in enumerate(start):
        lv = np.array([float(li)])
        rho0 = k * r[j0]
        n_terms = max(60, int(1.5 * rho0) + 20)
        u[li, j0 - 1] = _coulomb_series_start(lv, eta, k * r[j0 - 1], n_terms)[0]
        u[li, j0] = _coulomb_series_start(lv, eta, k * r[j0], n_terms)[0]
    for i in range(1, len(r) - 1):
        nxt = (coef_m[:, i] * u[:, i] - one_p[:, i - 1] * u[:, i - 1]) / one_p[:, i + 1]
        active = start <= i
        u[active, i + 1] = nxt[active]
    return u


def _k_nodes(s: float, nodes_per_panel: int = 10):
    """Gauss-Legendre panels covering the ejected-electron momentum range.

    Fine panels near k = 0 (soft electrons) and around k = s (the
    quasi-free-recoil peak), with panels of width <= 2 bridging any gap in
    between so the full range [0, s + 8] is covered contiguously.
    """
    peak_lo = max(3.0, s - 6.0)
    mid = (
        np.linspace(3.0, peak_lo, max(2, int(math.ceil((peak_lo - 3.0) / 2.0)) + 1))
        if peak_lo > 3.0
        else np.empty(0)
    )
    edges = np.concatenate([
        np.linspace(0.0, 3.0, 7),
        mid,
        np.linspace(peak_lo, s + 8.0, 12),
    ])
    edges = np.unique(edges[edges >= 0.0])
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    ks, ws = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        ks.append(0.5 * (b - a) * x + 0.5 * (a + b))
        ws.append(0.5 * (b - a) * w)
    return np.concatenate(ks), np.concatenate(ws)


def continuum_ionization_oracle(s: float, r_max: float = 30.0) -> float:
    """W_ion(s) from the direct continuum route.

    W = sum_l (2l+1) integral dk |I_l(k)|^2 with
    I_l(k) = sqrt(2/pi) integral F_l(-1/k, kr) j_l(s r) R_10(r) r dr,
    the Coulomb waves normalized on the momentum scale.  Accuracy ~1e-4.
    """
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    k_nodes, k_weights = _k_nodes(s)
    k_max = float(k_nodes.max())
    l_max = int(12 + 6.0 * s)

    h = min(0.04 / max(k_max, 1.0), 0.008)
    n_r = int(r_max / h) + 1
    r = h * np.arange(1, n_r + 1)

    jl = sp.spherical_jn(np.arange(l_max + 1)[:, None], s * r[None, :])
    weight = jl * (2.0 * np.exp(-r) * r)[None, :]   # j_l(sr) R_10(r) r

    w_total = 0.0
    amp_sq = np.zeros(l_max + 1)
    for k, wk in zip(k_nodes, k_weights):
        f = _coulomb_waves(k, l_max, r)
        integrals = simpson(f * weight, x=r, axis=1)
        amp_sq += wk * integrals * integrals
    w_total = float(np.sum((2.0 * np.arange(l_max + 1) + 1.0) * amp_sq) * (2.0 / math.pi))
    if not np.isfinite(w_total):
        raise RuntimeError(f"continuum oracle failed to converge at s={s}")
    return w_total


def closure_defect(s: float, n_max: int = 20) -> float:
    """1 - (bound sum + continuum integral); tests unitarity/normalization."""
    return 1.0 - bound_survival_probability(s, n_max) - continuum_ionization_oracle(s)


# ---------------------------------------------------------------------------
# High-precision Bessel reference
# ---------------------------------------------------------------------------


def _check_bessel_args(x: float, order: int) -> float:
    x = float(x)
    if math.isnan(x) or math.isinf(x) or x <= 0.0:
        raise ValueError(f"reference Bessel requires positive finite x, got {x!r}")
    if order not in (0, 1):
        raise ValueError(f"order must be 0 or 1, got {order}")
    return x


def bessel_reference(x: float, order: int) -> float:
    """K_order(x) from K_nu(x) = integral_0^inf exp(-x cosh t) cosh(nu t) dt.

    Evaluated by tanh-sinh quadrature at 40 significant digits; relative
    accuracy far beyond 1e-14.  Slow; test use only.
    """
    x = _check_bessel_args(x, order)
    with mp.workdps(40):
        xm = mp.mpf(x)
        # Factor out exp(-x) so the integrand is O(1) at t = 0 regardless of
        # x (otherwise the quadrature's absolute tolerance swamps large x).
        t_end = mp.acosh(1 + mp.mpf(130) * mp.ln(10) / xm)
        raw = [mp.mpf(p) for p in (0.125, 0.25, 0.5, 1, 2, 4, 8, 12, 16, 20, 25, 30)]
        points = [mp.mpf(0)] + [p for p in raw if p < t_end] + [t_end]
        val = mp.quad(
            lambda t: mp.e ** (-xm * (mp.cosh(t) - 1)) * mp.cosh(order * t), points
        )
        return float(val * mp.e ** (-xm))


def bessel_reference_i(x: float, order: int) -> float:
    """I_order(x) from its ascending series in arbitrary precision."""
    x = _check_bessel_args(x, order)
    with mp.workdps(40):
        xm = mp.mpf(x) / 2
        total = mp.mpf(0)
        term_k = 0
        while True:
            term = xm ** (2 * term_k + order) / (
                mp.factorial(term_k) * mp.factorial(term_k + order)
            )
            total += term
            if term < mp.mpf(10) ** -50 * max(total, mp.mpf(1)):
                break
            term_k += 1
            if term_k > 10_000:
                raise RuntimeError("I-series failed to converge")
        return float(total)
