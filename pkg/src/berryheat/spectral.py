"""Biorthogonal eigensystems of small real nonsymmetric matrices.

The conductance matrix of a non-reciprocal network is real but not
symmetric, so right eigenvectors ``phi_i`` and left eigenvectors ``psi_i``
(eigenvectors of the transpose) differ and are paired by the biorthogonality
relations ``psi_i . phi_j = delta_ij``.  :func:`eigendecompose` builds one
such basis; :func:`track_branches` strings bases along a time grid into
smooth per-branch trajectories, which is what the phase accumulation needs.

Eigenvalue branches of a continuous family with a simple real spectrum
cannot cross without colliding, so matching branches by descending
eigenvalue order is the permutation minimizing the step-to-step eigenvalue
displacement; an explicit ambiguity check still guards against grids too
coarse to tell the branches apart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ExceptionalPointError,
    GaugeError,
    GridTooCoarseError,
    ParametrizationError,
)

__all__ = [
    "BiorthogonalBasis",
    "EigenTrajectory",
    "eigendecompose",
    "two_body_eigenvalues",
    "two_body_eigensystem",
    "two_body_parametrization",
    "track_branches",
]

#: Eigenvalue gaps below ``DEGENERACY_TOL * max(1, ||G||)`` count as degenerate.
DEGENERACY_TOL = 1e-9


@dataclass(frozen=True)
class BiorthogonalBasis:
    """Eigenvalues with paired right/left eigenvectors, ``psi_i . phi_j = delta_ij``.

    ``right[:, i]`` is the right eigenvector ``phi_i`` and ``left[:, i]`` the
    left eigenvector ``psi_i``; eigenvalues are sorted in descending order
    (slowest decay first).
    """

    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray

    @property
    def n(self):
        return self.eigenvalues.size

    def reconstruct(self):
        """Spectral resolution ``sum_i lambda_i phi_i psi_i^t`` of the input matrix."""
        return (self.right * self.eigenvalues) @ self.left.T


@dataclass(frozen=True)
class EigenTrajectory:
    """Eigen-branches tracked continuously along a time grid.

    ``eigenvalues[k, i]`` is branch ``i`` at ``times[k]``; ``right[k, :, i]``
    and ``left[k, :, i]`` the matching gauge-fixed eigenvector pair.  The
    ``gauge`` tag records the fixing convention ("norm": unit-norm vectors
    with sign continuity; "chart": first component scaled to exactly 1, the
    natural chart for the two-body parametrization).
    """

    times: np.ndarray
    eigenvalues: np.ndarray
    right: np.ndarray
    left: np.ndarray
    gauge: str = "norm"

    @property
    def n_branches(self):
        return self.eigenvalues.shape[1]

    def basis(self, k) -> BiorthogonalBasis:
        """Biorthogonal basis at grid index ``k``."""
        return BiorthogonalBasis(self.eigenvalues[k], self.right[k], self.left[k])


def _first_significant(v, tol=1e-8):
    idx = np.nonzero(np.abs(v) > tol * np.linalg.norm(v))[0]
    return int(idx[0]) if idx.size else int(np.argmax(np.abs(v)))


def eigendecompose(matrix, degeneracy_tol=DEGENERACY_TOL) -> BiorthogonalBasis:
    """Biorthogonal eigensystem of a real square matrix with simple real spectrum.

    Right eigenvectors come from the matrix, left eigenvectors from its
    transpose, and the left set is rescaled against the right one to enforce
    ``psi_i . phi_j = delta_ij`` (no matrix inversion).  Right vectors are
    unit norm with their first significant component positive.

    Raises
    ------
    ExceptionalPointError
        If eigenvalues are complex or two of them are closer than
        ``degeneracy_tol * max(1, ||matrix||)``.
    """
    M = np.asarray(matrix, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    lam, phi, psi = _eig_stack(M[None], degeneracy_tol)
    phi, psi = phi[0], psi[0]
    for i in range(lam.shape[1]):
        if phi[_first_significant(phi[:, i]), i] < 0:
            phi[:, i] *= -1.0
            psi[:, i] *= -1.0
    return BiorthogonalBasis(lam[0], phi, psi)


def _eig_stack(Ms, degeneracy_tol=DEGENERACY_TOL, times=None):
    """Batched decomposition of a (K, N, N) stack; eigenvalues sorted descending."""
    Ms = np.asarray(Ms, dtype=float)
    n = Ms.shape[1]
    scale = np.maximum(1.0, np.linalg.norm(Ms, axis=(1, 2)))

    w_r, V = np.linalg.eig(Ms)
    w_l, W = np.linalg.eig(np.swapaxes(Ms, 1, 2))
    _require_real(w_r, scale, times, "eigenvalues")
    _require_real(w_l, scale, times, "left eigenvalues")
    w_r, w_l = w_r.real, w_l.real

    # imaginary parts are pure roundoff once the spectrum passed the realness check
    order = np.argsort(-w_r, axis=1)
    lam = np.take_along_axis(w_r, order, axis=1)
    phi = np.take_along_axis(V, order[:, None, :], axis=2).real
    order_l = np.argsort(-w_l, axis=1)
    lam_l = np.take_along_axis(w_l, order_l, axis=1)
    psi = np.take_along_axis(W, order_l[:, None, :], axis=2).real

    if n > 1:
        gaps = -np.diff(lam, axis=1)  # descending order: gaps >= 0
        bad = np.nonzero((gaps < (degeneracy_tol * scale)[:, None]).any(axis=1))[0]
        if bad.size:
            k = int(bad[0])
            raise ExceptionalPointError(
                "degenerate eigenvalues (exceptional point)",
                time=None if times is None else times[k],
            )
    mismatch = np.abs(lam - lam_l).max(initial=0.0)
    if mismatch > 1e-8 * scale.max():
        raise ExceptionalPointError("left/right spectra disagree; near-defective matrix")

    # pair left with right: rescale psi_i so that psi_i . phi_i = 1
    pairing = np.einsum("knj,knj->kj", psi, phi)
    if np.any(np.abs(pairing) < 1e-12):
        k = int(np.argwhere(np.abs(pairing) < 1e-12)[0, 0])
        raise ExceptionalPointError(
            "left/right eigenvectors nearly orthogonal; near-defective matrix",
            time=None if times is None else times[k],
        )
    psi = psi / pairing[:, None, :]
    return lam, phi, psi


def _require_real(w, scale, times, what):
    bad = np.abs(w.imag).max(axis=1) > 1e-9 * scale
    if np.any(bad):
        k = int(np.nonzero(bad)[0][0])
        raise ExceptionalPointError(
            f"complex {what}; the real eigen-expansion does not apply",
            time=None if times is None else times[k],
        )


def two_body_eigenvalues(matrix):
    """Closed-form eigenvalues ``tr/2 +- sqrt(tr^2/4 - det)`` of a 2x2 stack.

    Returns shape ``(..., 2)`` with the slow branch (larger eigenvalue)
    first.  Raises :class:`ExceptionalPointError` when the discriminant is
    not safely positive (complex pair or degeneracy).
    """
    M = np.asarray(matrix, dtype=float)
    tr = M[..., 0, 0] + M[..., 1, 1]
    det = M[..., 0, 0] * M[..., 1, 1] - M[..., 0, 1] * M[..., 1, 0]
    disc = 0.25 * tr * tr - det
    scale = np.maximum(1.0, np.abs(tr)) ** 2
    if np.any(disc <= DEGENERACY_TOL * scale):
        raise ExceptionalPointError("two-body discriminant not positive (exceptional point)")
    s = np.sqrt(disc)
    return np.stack([0.5 * tr + s, 0.5 * tr - s], axis=-1)


def two_body_parametrization(eigenvalues, b, g12, g21):
    """Per-branch chart coordinates ``x_i = g21/(b + lambda_i)``, ``y = g12/g21``.

    ``b`` is minus the second diagonal entry of the (capacity-normalized)
    two-body matrix and ``g12``/``g21`` its off-diagonal entries.  Also
    returns the normalization ``beta_i = 1 + x_i^2 y`` that makes
    ``phi_i = (1, x_i)`` and ``psi_i = (1, x_i y)/beta_i`` biorthonormal.

    Parameters broadcast, so time series can be passed directly.

    Returns
    -------
    (x, y, beta) : tuple of arrays
        ``x`` and ``beta`` have the eigenvalue shape ``(..., 2)``; ``y``
        keeps the input shape.
    """
    lam = getattr(eigenvalues, "eigenvalues", eigenvalues)
    lam = np.asarray(lam, dtype=float)
    b = np.asarray(b, dtype=float)
    g12 = np.asarray(g12, dtype=float)
    g21 = np.asarray(g21, dtype=float)
    if np.any(np.abs(g21) < 1e-300):
        raise ParametrizationError("g21 = 0: the chart ratio y = g12/g21 is undefined")
    denom = b[..., None] + lam
    if np.any(np.abs(denom) < 1e-12 * np.maximum(1.0, np.abs(lam))):
        raise ParametrizationError("b + lambda_i ~ 0: chart coordinate x_i diverges")
    x = g21[..., None] / denom
    y = g12 / g21
    beta = 1.0 + x * x * y[..., None]
    return x, y, beta


def two_body_eigensystem(matrix) -> BiorthogonalBasis:
    """Analytic biorthogonal basis of a 2x2 matrix in the (1, x) chart.

    Independent closed-form route used to cross-check the numeric
    eigensolver: ``phi_i = (1, x_i)`` and ``psi_i = (1, x_i y)/beta_i``.
    """
    M = np.asarray(matrix, dtype=float)
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {M.shape}")
    lam = two_body_eigenvalues(M)
    x, y, beta = two_body_parametrization(lam, -M[1, 1], M[0, 1], M[1, 0])
    phi = np.stack([np.ones(2), x])              # columns are phi_i
    psi = np.stack([np.ones(2), x * y]) / beta
    return BiorthogonalBasis(lam, phi, psi)


def track_branches(times, matrix_fn=None, matrices=None, gauge="norm",
                   degeneracy_tol=DEGENERACY_TOL) -> EigenTrajectory:
    """Decompose a matrix family on a time grid and glue the branches smoothly.

    Parameters
    ----------
    times : 1-d array
        Strictly increasing time grid.
    matrix_fn : callable, optional
        ``t -> (N, N)`` matrix; vectorized callables returning ``(K, N, N)``
        for an array argument are used directly.
    matrices : array, optional
        Precomputed ``(K, N, N)`` stack (alternative to ``matrix_fn``).
    gauge : {"norm", "chart"}
        "norm" keeps unit-norm right eigenvectors and flips signs for
        continuity (overlap with the previous step positive).  "chart"
        rescales each right eigenvector so its first component is exactly 1;
        it fails if a first component passes near zero.  Left vectors are
        rescaled along so that ``psi_i . phi_i = 1`` holds everywhere.

    Raises
    ------
    ExceptionalPointError
        Complex or degenerate eigenvalues anywhere on the grid.
    GridTooCoarseError
        Branch matching between neighbouring grid points is ambiguous
        (an alternative branch lies within a factor two of the matched one).
    GaugeError
        The "chart" gauge is requested but a first component vanishes.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 1:
        raise ValueError("times must be a non-empty 1-d array")
    if t.size > 1 and np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly increasing")
    if matrices is None:
        if matrix_fn is None:
            raise ValueError("provide matrix_fn or matrices")
        matrices = _evaluate_family(matrix_fn, t)
    Ms = np.asarray(matrices, dtype=float)
    if Ms.shape[0] != t.size or Ms.ndim != 3 or Ms.shape[1] != Ms.shape[2]:
        raise ValueError(f"matrix stack shape {Ms.shape} does not match the grid")

    lam, phi, psi = _eig_stack(Ms, degeneracy_tol, times=t)
    _check_matching(t, lam)

    if gauge == "norm":
        phi, psi = _fix_norm_gauge(t, phi, psi)
    elif gauge == "chart":
        phi, psi = _fix_chart_gauge(phi, psi)
    else:
        raise ValueError(f"unknown gauge {gauge!r}")
    return EigenTrajectory(t, lam, phi, psi, gauge=gauge)


def _evaluate_family(matrix_fn, t):
    try:
        Ms = np.asarray(matrix_fn(t), dtype=float)
        if Ms.ndim == 3 and Ms.shape[0] == t.size:
            return Ms
    except Exception:
        pass
    return np.stack([np.asarray(matrix_fn(tk), dtype=float) for tk in t])


def _check_matching(t, lam):
    """Descending-sorted branches must be the unambiguous nearest match."""
    K, n = lam.shape
    if K < 2 or n < 2:
        return
    prev = lam[:-1]                                   # (K-1, n)
    cost = np.abs(lam[1:, None, :] - prev[:, :, None])  # (K-1, from, to)
    chosen = np.abs(lam[1:] - prev)                   # diagonal of cost
    big = np.where(np.eye(n, dtype=bool), np.inf, 0.0)
    alt = (cost + big).min(axis=2)                    # best off-diagonal match
    floor = 1e-12 * np.maximum(1.0, np.abs(prev))
    ambiguous = (alt < 2.0 * chosen) & (chosen > floor)
    if np.any(ambiguous):
        k = int(np.argwhere(ambiguous.any(axis=1))[0, 0])
        raise GridTooCoarseError(
            "two branch matchings within tolerance; refine the time grid",
            time=t[k + 1],
        )


def _fix_norm_gauge(t, phi, psi):
    # first significant component positive at t0, then sign continuity
    phi = phi.copy()
    psi = psi.copy()
    n = phi.shape[2]
    for i in range(n):
        j = _first_significant(phi[0, :, i])
        if phi[0, j, i] < 0:
            phi[0, :, i] *= -1.0
            psi[0, :, i] *= -1.0
    if phi.shape[0] > 1:
        overlaps = np.einsum("knj,knj->kj", phi[1:], phi[:-1])
        tiny = np.abs(overlaps) < 1e-12
        if np.any(tiny):
            k = int(np.argwhere(tiny)[0, 0])
            raise GridTooCoarseError(
                "eigenvector overlap between neighbouring grid points vanished",
                time=t[k + 1],
            )
        flips = np.cumprod(np.where(overlaps < 0, -1.0, 1.0), axis=0)
        phi[1:] *= flips[:, None, :]
        psi[1:] *= flips[:, None, :]
    return phi, psi


def _fix_chart_gauge(phi, psi):
    lead = phi[:, 0, :]
    norms = np.linalg.norm(phi, axis=1)
    if np.any(np.abs(lead) < 1e-8 * norms):
        raise GaugeError(
            "first eigenvector component passes through zero; "
            "the (1, x) chart gauge does not apply"
        )
    return phi / lead[:, None, :], psi * lead[:, None, :]
