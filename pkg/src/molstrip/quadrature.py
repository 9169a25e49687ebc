"""Adaptive two-dimensional quadrature over the impact-parameter plane.

Cells are rectangles evaluated with nested tensor Gauss-Legendre rules (4x4
against 8x8); the difference serves as the local error estimate and the worst
cells are split until every component of the (possibly vector-valued)
integrand meets the requested relative tolerance.  Evaluation is batched, so
the integrand receives whole point arrays, and cell creation order is fixed,
which makes the final reduction deterministic regardless of scheduling.

A quadrant fast path integrates [0, W]^2 and multiplies by 4 for integrands
with mirror symmetry in both axes (homonuclear diatomic with the bond
projection on the x axis).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["integrate_b_plane", "QuadratureError"]

_LOW_ORDER = 4
_HIGH_ORDER = 8
_BATCH = 256          # cells refined per sweep
_INITIAL_DIVISIONS = 8


class QuadratureError(RuntimeError):
    """Adaptive refinement failed to converge; carries the best estimate."""

    def __init__(self, message, values, errors, n_cells):
        super().__init__(message)
        self.values = values
        self.errors = errors
        self.n_cells = n_cells


def _tensor_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x = 0.5 * (x + 1.0)          # map to [0, 1]
    w = 0.5 * w
    px, py = np.meshgrid(x, x, indexing="ij")
    wts = np.outer(w, w).ravel()
    pts = np.column_stack([px.ravel(), py.ravel()])
    return pts, wts


_PTS_LO, _WTS_LO = _tensor_rule(_LOW_ORDER)
_PTS_HI, _WTS_HI = _tensor_rule(_HIGH_ORDER)
_PTS_ALL = np.vstack([_PTS_LO, _PTS_HI])
_N_LO = len(_WTS_LO)


def _eval_cells(integrand, rects: np.ndarray):
    """Evaluate low and high rules on a (k, 4) array of [x0, y0, dx, dy] cells.

    Returns (high, err) with shape (k, m).
    """
    k = len(rects)
    origin = rects[:, None, 0:2]
    size = rects[:, None, 2:4]
    pts = (origin + size * _PTS_ALL[None, :, :]).reshape(-1, 2)
    vals = np.asarray(integrand(pts), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    m = vals.shape[1]
    vals = vals.reshape(k, len(_PTS_ALL), m)
    area = (rects[:, 2] * rects[:, 3])[:, None]
    low = np.einsum("kpm,p->km", vals[:, :_N_LO], _WTS_LO) * area
    high = np.einsum("kpm,p->km", vals[:, _N_LO:], _WTS_HI) * area
    return high, np.abs(high - low)


def _initial_edges(lo: float, hi: float, splits) -> np.ndarray:
    edges = np.linspace(lo, hi, _INITIAL_DIVISIONS + 1)
    interior = [s for s in splits if lo < s < hi]
    edges = np.unique(np.concatenate([edges, np.asarray(interior, dtype=float)]))
    return edges


def integrate_b_plane(
    integrand,
    *,
    half_width: float,
    rel_tol: float = 1e-3,
    symmetry: str | None = None,
    x_splits=(),
    y_splits=(),
    max_cells: int = 400_000,
    min_cell_size: float = 1e-6,
    abs_tol: float = 1e-30,
):
    """Integrate a vector-valued integrand over the b-plane square.

    The domain is [-W, W]^2, or [0, W]^2 times 4 when ``symmetry='quadrant'``.
    ``x_splits``/``y_splits`` seed initial cell edges (atom projections land
    on cell corners, keeping singular points off quadrature nodes).  Returns
    (values, errors); scalars if the integrand returns a 1-D array.
    """
    if half_width <= 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    if symmetry not in (None, "quadrant"):
        raise ValueError(f"unknown symmetry {symmetry!r}")

    if symmetry == "quadrant":
        lo, multiplier = 0.0, 4.0
    else:
        lo, multiplier = -half_width, 1.0
    xe = _initial_edges(lo, half_width, x_splits)
    ye = _initial_edges(lo, half_width, y_splits)

    rects = np.array([
        (x0, y0, x1 - x0, y1 - y0)
        for x0, x1 in zip(xe[:-1], xe[1:])
        for y0, y1 in zip(ye[:-1], ye[1:])
    ])
    high, err = _eval_cells(integrand, rects)
    scalar = np.asarray(integrand(np.zeros((1, 2)) + [[lo + 1e-3, lo + 1e-3]])).ndim == 1

    rect_list = [rects]
    high_list = [high]
    err_list = [err]
    n_cells = len(rects)

    while True:
        rects = np.concatenate(rect_list)
        high = np.concatenate(high_list)
        err = np.concatenate(err_list)
        rect_list, high_list, err_list = [rects], [high], [err]

        totals = high.sum(axis=0)
        tot_err = err.sum(axis=0)
        scale = np.maximum(np.abs(totals) * rel_tol, abs_tol)
        if np.all(tot_err <= scale):
            break

        refinable = np.minimum(rects[:, 2], rects[:, 3]) > min_cell_size
        score = (err / scale[None, :]).max(axis=1)
        score[~refinable] = -1.0
        if n_cells >= max_cells or not np.any(score > 0):
            achieved = float(np.max(tot_err / np.maximum(np.abs(totals), abs_tol)))
            raise QuadratureError(
                f"b-plane quadrature did not reach rel_tol={rel_tol:g} "
                f"(achieved {achieved:.3g} with {n_cells} cells)",
                multiplier * totals, multiplier * tot_err, n_cells,
            )

        n_refine = min(_BATCH, int(np.count_nonzero(score > 0)))
        worst = np.argsort(-score, kind="stable")[:n_refine]
        keep = np.ones(len(rects), dtype=bool)
        keep[worst] = False

        parents = rects[worst]
        hx = 0.5 * parents[:, 2]
        hy = 0.5 * parents[:, 3]
        children = np.empty((len(parents) * 4, 4))
        for ci, (ox, oy) in enumerate([(0, 0), (1, 0), (0, 1), (1, 1)]):
            children[ci::4, 0] = parents[:, 0] + ox * hx
            children[ci::4, 1] = parents[:, 1] + oy * hy
            children[ci::4, 2] = hx
            children[ci::4, 3] = hy
        child_high, child_err = _eval_cells(integrand, children)

        rect_list = [rects[keep], children]
        high_list = [high[keep], child_high]
        err_list = [err[keep], child_err]
        n_cells += 3 * len(parents)

    values = multiplier * totals
    errors = multiplier * tot_err
    if scalar:
        return float(values[0]), float(errors[0])
    return values, errors
