"""Dynamical and geometric phase accumulation along an eigen-trajectory.

Per branch, the dynamical phase is the running time integral of the
eigenvalue and always drives decay (eigenvalues of a dissipative network are
non-positive).  The geometric phase

    gamma_g,i(t) = - int_0^t psi_i . d(phi_i)/dt dtau

is generated by eigenvector rotation alone: over a closed driving loop it
depends only on the loop's geometry in parameter space, not on how fast the
loop is traversed.  Mid-loop values do depend on the eigenvector gauge of
the trajectory ("norm" or "chart"); values at loop closure do not.

The slow-driving (adiabatic) solution of the thermal network is assembled by
:func:`adiabatic_state` as

    T(t) = sum_i alpha_i exp(gamma_d,i + gamma_g,i) phi_i(t) + T_b * 1,

with the constants ``alpha_i`` projected out of the initial state once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .errors import GaugeError
from .integrator import Trajectory
from .spectral import BiorthogonalBasis, EigenTrajectory

__all__ = [
    "PhaseTrajectory",
    "dynamical_phase",
    "geometric_phase",
    "two_body_geometric_phase",
    "accumulate_phases",
    "expansion_constants",
    "adiabatic_state",
    "adiabatic_trajectory",
]


@dataclass(frozen=True)
class PhaseTrajectory:
    """Cumulative per-branch phases on a time grid.

    ``dynamical[k, i]`` and ``geometric[k, i]`` are the phases of branch
    ``i`` accumulated from ``times[0]`` to ``times[k]`` (both start at 0).
    ``alpha`` holds the expansion constants when the initial state is known.
    """

    times: np.ndarray
    dynamical: np.ndarray
    geometric: np.ndarray
    alpha: np.ndarray = None


def dynamical_phase(trajectory: EigenTrajectory) -> np.ndarray:
    """Running trapezoidal integral of each eigenvalue branch, shape (K, N)."""
    return cumulative_trapezoid(
        trajectory.eigenvalues, trajectory.times, axis=0, initial=0.0
    )


def geometric_phase(trajectory: EigenTrajectory) -> np.ndarray:
    """Cumulative geometric phase ``-int psi_i . phi_i' dt`` per branch, shape (K, N).

    The eigenvector velocity is taken by central differences on the
    gauge-fixed trajectory (one-sided at the ends), then integrated with the
    trapezoidal rule on the same grid.

    Raises
    ------
    GaugeError
        If the trajectory contains a gauge discontinuity (the overlap of a
        branch's eigenvectors at neighbouring grid points changes sign).
    """
    t, phi, psi = trajectory.times, trajectory.right, trajectory.left
    if t.size < 2:
        return np.zeros_like(trajectory.eigenvalues)
    overlaps = np.einsum("knj,knj->kj", phi[1:], phi[:-1])
    if np.any(overlaps <= 0):
        raise GaugeError("gauge discontinuity: eigenvector overlap flips sign")
    phidot = np.gradient(phi, t, axis=0)
    integrand = np.einsum("knj,knj->kj", psi, phidot)
    return -cumulative_trapezoid(integrand, t, axis=0, initial=0.0)


def two_body_geometric_phase(times, x, y) -> np.ndarray:
    """Closed-form two-body route: ``-int x x' y / (1 + x^2 y) dt`` per branch.

    ``x`` has shape (K, 2) (chart coordinate per branch), ``y`` shape (K,)
    or (K, 2).  Matches :func:`geometric_phase` on a "chart"-gauge trajectory
    pointwise, and on any gauge at loop closure.
    """
    t = np.asarray(times, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if y.ndim == x.ndim - 1:
        y = y[..., None]
    xdot = np.gradient(x, t, axis=0)
    integrand = x * xdot * y / (1.0 + x * x * y)
    return -cumulative_trapezoid(integrand, t, axis=0, initial=0.0)


def accumulate_phases(trajectory: EigenTrajectory, alpha=None) -> PhaseTrajectory:
    """Bundle dynamical and geometric phases of a trajectory."""
    return PhaseTrajectory(
        times=trajectory.times,
        dynamical=dynamical_phase(trajectory),
        geometric=geometric_phase(trajectory),
        alpha=None if alpha is None else np.asarray(alpha, dtype=float),
    )


def expansion_constants(basis, initial_temperatures, bath_temperature) -> np.ndarray:
    """Project the initial state onto the branches: ``alpha_i = psi_i(t0) . (T0 - T_b)``.

    ``basis`` may be a :class:`BiorthogonalBasis` or an
    :class:`EigenTrajectory` (its first grid point is used).  By
    biorthogonality, ``sum_i alpha_i phi_i(t0) + T_b`` reproduces ``T0``.
    """
    if isinstance(basis, EigenTrajectory):
        basis = basis.basis(0)
    if not isinstance(basis, BiorthogonalBasis):
        raise TypeError("expected a BiorthogonalBasis or EigenTrajectory")
    dT = np.asarray(initial_temperatures, dtype=float) - bath_temperature
    return basis.left.T @ dT


def adiabatic_state(trajectory: EigenTrajectory, phases: PhaseTrajectory,
                    alpha, bath_temperature, t) -> np.ndarray:
    """Adiabatic temperatures at grid time ``t``.

    ``t`` must coincide with a point of the trajectory grid (the phases are
    accumulated there); at ``t0`` the initial state is reproduced exactly.
    """
    k = int(np.searchsorted(trajectory.times, t))
    k = min(k, trajectory.times.size - 1)
    if k > 0 and abs(trajectory.times[k] - t) > abs(trajectory.times[k - 1] - t):
        k -= 1
    if abs(trajectory.times[k] - t) > 1e-9 * max(1.0, abs(t)):
        raise ValueError(f"t = {t} is not on the trajectory grid")
    weights = np.asarray(alpha, dtype=float) * np.exp(
        phases.dynamical[k] + phases.geometric[k]
    )
    return trajectory.right[k] @ weights + bath_temperature


def adiabatic_trajectory(trajectory: EigenTrajectory, phases: PhaseTrajectory,
                         alpha, bath_temperature) -> Trajectory:
    """Adiabatic temperatures on the whole grid, as a comparable Trajectory."""
    weights = np.asarray(alpha, dtype=float) * np.exp(phases.dynamical + phases.geometric)
    T = np.einsum("knj,kj->kn", trajectory.right, weights) + bath_temperature
    return Trajectory(times=trajectory.times, temperatures=T, method="adiabatic")
