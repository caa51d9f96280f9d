"""Parameter-space geometry of the two-body model: connection, curvature, loops.

In the chart R = (x, y) with x_i = g21/(b + lambda_i) and y = g12/g21, the
branch eigenvectors are phi_i = (1, x_i) and psi_i = (1, x_i y)/beta_i with
beta_i = 1 + x_i^2 y.  Eigenvector rotation is encoded by the vector
potential

    A = (x y / beta, 0)        (gauge partner A' = (0, -x^2 / (2 beta)))

whose curl is the gauge-invariant curvature B_z = -x / beta^2.  The
geometric phase accumulated around a closed parameter loop is the connection
line integral

    gamma_g = - oint A . dR = - integral_S B_z dS,

evaluated by :func:`loop_integral` and, via Stokes' theorem with
winding-number weighting (which handles self-crossing multi-loop contours),
by :func:`surface_integral`.  Orientation is counter-clockwise positive with
dS = e_z dx dy; the minus sign carries the connection convention of the
adiabatic coefficient equation c' = -(psi . phi') c, so both functions
return the same signed phase as the time-domain accumulation.  A loop
traversed counter-clockwise in the first quadrant (where B_z < 0) therefore
yields a positive geometric phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GaugeError, OpenPathError, ParametrizationError
from .spectral import EigenTrajectory

__all__ = [
    "ParamPath",
    "FieldMap",
    "beta_norm",
    "vector_potential",
    "curvature",
    "loop_integral",
    "surface_integral",
    "winding_numbers",
    "field_map",
    "two_body_path",
]

#: Endpoint mismatch below which a path counts as closed.
CLOSED_TOL = 1e-9


@dataclass(frozen=True)
class ParamPath:
    """Polyline trajectory in the (x, y) parameter chart.

    ``times`` may be None for synthetic paths; integrals only use the
    vertex sequence.
    """

    x: np.ndarray
    y: np.ndarray
    times: np.ndarray = None

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        y = np.asarray(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 1:
            raise ValueError("path needs matching non-empty 1-d x and y arrays")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if self.times is not None:
            object.__setattr__(self, "times", np.asarray(self.times, dtype=float))

    @property
    def closed(self) -> bool:
        return bool(
            np.hypot(self.x[-1] - self.x[0], self.y[-1] - self.y[0]) < CLOSED_TOL
        )

    def reversed(self) -> "ParamPath":
        t = None if self.times is None else self.times[::-1].copy()
        return ParamPath(self.x[::-1].copy(), self.y[::-1].copy(), t)


@dataclass(frozen=True)
class FieldMap:
    """Curvature sampled on a rectangular (x, y) grid; ``curvature[j, i]`` at
    ``(x[i], y[j])``."""

    x: np.ndarray
    y: np.ndarray
    curvature: np.ndarray


def beta_norm(x, y):
    """Chart normalization ``beta = 1 + x^2 y`` (biorthogonality weight)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 1.0 + x * x * y


def _checked_beta(x, y, tol=1e-12):
    beta = beta_norm(x, y)
    if np.any(np.abs(beta) < tol):
        raise GaugeError("beta = 1 + x^2 y vanishes; the chart gauge is singular here")
    return beta


def vector_potential(x, y):
    """Connection samples in the (x, y) chart and their gauge partner.

    Returns
    -------
    (A, A_alt) : pair of arrays, shape ``x.shape + (2,)``
        ``A = (x y / beta, 0)`` and ``A_alt = (0, -x^2 / (2 beta))``.  Both
        have the same curl; their loop integrals agree on closed paths.

    Raises
    ------
    GaugeError
        Where ``beta = 1 + x^2 y`` vanishes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    beta = _checked_beta(x, y)
    zeros = np.zeros_like(beta)
    A = np.stack([x * y / beta, zeros], axis=-1)
    A_alt = np.stack([zeros, -0.5 * x * x / beta], axis=-1)
    return A, A_alt


def curvature(x, y):
    """Gauge-invariant curvature ``B_z = -x / (1 + x^2 y)^2`` in the chart."""
    x = np.asarray(x, dtype=float)
    beta = _checked_beta(x, y)
    return -x / (beta * beta)


def loop_integral(path: ParamPath, potential="A") -> float:
    """Geometric phase around a closed path from the connection line integral.

    Computes ``gamma_g = -oint A . dR`` (or with the gauge partner
    ``A_alt``) by the trapezoidal rule along the polyline.  Reversing the
    traversal direction negates the result exactly.

    Parameters
    ----------
    path : ParamPath
        Must be closed (first and last vertex coincide within tolerance).
    potential : {"A", "A_alt"}
        Which gauge representative to integrate; closed-loop values agree.

    Raises
    ------
    OpenPathError
        If the path endpoints do not coincide.
    """
    if not path.closed:
        gap = np.hypot(path.x[-1] - path.x[0], path.y[-1] - path.y[0])
        raise OpenPathError(f"path endpoints differ by {gap:.3e}; close the loop first")
    if path.x.size < 2:
        return 0.0
    A, A_alt = vector_potential(path.x, path.y)
    if potential == "A":
        f = A[:, 0]
        dc = np.diff(path.x)
    elif potential == "A_alt":
        f = A_alt[:, 1]
        dc = np.diff(path.y)
    else:
        raise ValueError(f"unknown potential {potential!r}")
    return float(-np.sum(0.5 * (f[1:] + f[:-1]) * dc))


def winding_numbers(path: ParamPath, x_centers, y_centers) -> np.ndarray:
    """Winding number of the closed path about each grid point.

    Signed crossing counts of a rightward ray, counter-clockwise positive.
    Shape ``(len(y_centers), len(x_centers))``.  Works for self-intersecting
    contours: each sub-loop contributes its own orientation.
    """
    if not path.closed:
        raise OpenPathError("winding numbers are defined for closed paths only")
    xc = np.asarray(x_centers, dtype=float)
    yc = np.asarray(y_centers, dtype=float)
    x1, x2 = path.x[:-1], path.x[1:]
    y1, y2 = path.y[:-1], path.y[1:]
    w = np.zeros((yc.size, xc.size))
    for j, ycj in enumerate(yc):
        up = (y1 <= ycj) & (y2 > ycj)
        down = (y2 <= ycj) & (y1 > ycj)
        hit = up | down
        if not hit.any():
            continue
        frac = (ycj - y1[hit]) / (y2[hit] - y1[hit])
        x_cross = x1[hit] + frac * (x2[hit] - x1[hit])
        sign = np.where(up[hit], 1.0, -1.0)
        order = np.argsort(x_cross)
        x_cross = x_cross[order]
        # suffix sums: winding = sum of signs of crossings to the right
        suffix = np.cumsum(sign[order][::-1])[::-1]
        idx = np.searchsorted(x_cross, xc, side="right")
        inside = idx < x_cross.size
        w[j, inside] = suffix[idx[inside]]
    return w


def surface_integral(path: ParamPath, resolution=512, padding=0.05) -> float:
    """Geometric phase from the curvature flux through the enclosed region.

    Rasterizes the path's bounding box (padded by ``padding``), weights each
    cell's curvature by the winding number of the path about the cell
    center, and sums: ``gamma_g = -sum B_z * winding * cell_area``.  By
    Stokes' theorem this matches :func:`loop_integral` up to discretization;
    self-crossing contours decompose automatically into their clockwise and
    counter-clockwise sub-loops.
    """
    if not path.closed:
        raise OpenPathError("surface integral requires a closed path")
    xmin, xmax = float(path.x.min()), float(path.x.max())
    ymin, ymax = float(path.y.min()), float(path.y.max())
    if xmax - xmin < CLOSED_TOL or ymax - ymin < CLOSED_TOL:
        return 0.0  # degenerate loop encloses no area
    pad_x = padding * (xmax - xmin)
    pad_y = padding * (ymax - ymin)
    xmin, xmax = xmin - pad_x, xmax + pad_x
    ymin, ymax = ymin - pad_y, ymax + pad_y
    dx = (xmax - xmin) / resolution
    dy = (ymax - ymin) / resolution
    xc = xmin + dx * (np.arange(resolution) + 0.5)
    yc = ymin + dy * (np.arange(resolution) + 0.5)
    w = winding_numbers(path, xc, yc)
    B = curvature(xc[None, :], yc[:, None])
    return float(-np.sum(B * w) * dx * dy)


def field_map(x_values, y_values) -> FieldMap:
    """Sample the curvature on a rectangular grid for export or plotting."""
    x = np.asarray(x_values, dtype=float)
    y = np.asarray(y_values, dtype=float)
    return FieldMap(x=x, y=y, curvature=curvature(x[None, :], y[:, None]))


def two_body_path(trajectory: EigenTrajectory, matrices, branch) -> ParamPath:
    """Chart path (x_i(t), y(t)) of one branch of a two-body trajectory.

    ``matrices`` is the (K, 2, 2) conductance-matrix stack the trajectory
    was tracked on; ``x`` is taken from the closed-form relation
    ``x = g21 / (b + lambda)`` with the branch's tracked eigenvalue.
    """
    Ms = np.asarray(matrices, dtype=float)
    if trajectory.n_branches != 2 or Ms.shape[1:] != (2, 2):
        raise ValueError("two-body paths require a 2x2 matrix family")
    lam = trajectory.eigenvalues[:, branch]
    b = -Ms[:, 1, 1]
    g12 = Ms[:, 0, 1]
    g21 = Ms[:, 1, 0]
    denom = b + lam
    if np.any(np.abs(denom) < 1e-12) or np.any(np.abs(g21) < 1e-300):
        raise ParametrizationError("chart coordinates are singular along this trajectory")
    return ParamPath(x=g21 / denom, y=g12 / g21, times=trajectory.times)
