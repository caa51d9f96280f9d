"""End-to-end helpers wiring scenarios through the simulation stages.

These are thin orchestration functions shared by the command-line front end,
the invariant checks and the test-suite: evaluate the matrix family on the
scenario grid, track eigen-branches, accumulate phases, build the adiabatic
trajectory and integrate the exact reference.
"""

from __future__ import annotations

import numpy as np

from .geometry import ParamPath, two_body_path
from .integrator import Trajectory, integrate_exact
from .network import conductance_matrix
from .phases import (
    PhaseTrajectory,
    accumulate_phases,
    adiabatic_trajectory,
    expansion_constants,
)
from .scenario import Scenario, common_period
from .spectral import EigenTrajectory, track_branches

__all__ = [
    "eigen_trajectory",
    "adiabatic_pipeline",
    "exact_trajectory",
    "branch_paths",
    "relaxation_window",
]


def eigen_trajectory(scenario: Scenario, times=None, gauge="norm"):
    """Track eigen-branches of the scenario's conductance matrix family.

    Returns ``(trajectory, matrices)`` with the (K, N, N) matrix stack the
    branches were tracked on.
    """
    t = scenario.time_grid() if times is None else np.asarray(times, dtype=float)
    matrices = conductance_matrix(scenario.network, t)
    return track_branches(t, matrices=matrices, gauge=gauge), matrices


def adiabatic_pipeline(scenario: Scenario, times=None, gauge="norm"):
    """Full adiabatic solution of a scenario.

    Returns ``(eigen, phases, trajectory)``: the tracked eigen-system, the
    accumulated phases (with expansion constants) and the adiabatic
    temperature trajectory on the scenario grid.
    """
    eigen, _ = eigen_trajectory(scenario, times=times, gauge=gauge)
    alpha = expansion_constants(
        eigen, scenario.initial_temperatures, scenario.network.bath_temperature
    )
    ph = accumulate_phases(eigen, alpha=alpha)
    traj = adiabatic_trajectory(eigen, ph, alpha, scenario.network.bath_temperature)
    return eigen, ph, traj


def exact_trajectory(scenario: Scenario, dt=None) -> Trajectory:
    """Reference RK4 integration of the scenario on its grid."""
    return integrate_exact(
        scenario.network,
        scenario.initial_temperatures,
        scenario.t_start,
        scenario.t_end,
        scenario.timestep if dt is None else dt,
    )


def branch_paths(scenario: Scenario, period=None, points_per_period=None):
    """Closed parameter-space paths of both branches over one common period.

    Only defined for two-body scenarios.  Returns ``(times, [path_branch0,
    path_branch1])``; raises ValueError when the driving has no common
    period (incommensurate laws never close a loop).
    """
    if scenario.network.n_bodies != 2:
        raise ValueError("parameter-space paths are defined for two-body networks")
    T = common_period(scenario.network) if period is None else period
    if T is None:
        raise ValueError("driving laws share no common period; no closed loop exists")
    if points_per_period is None:
        n = max(2, int(round(T / scenario.timestep)))
    else:
        n = int(points_per_period)
    t = scenario.t_start + T * np.arange(n + 1) / n
    eigen, matrices = eigen_trajectory(scenario, times=t)
    return t, [two_body_path(eigen, matrices, branch) for branch in range(2)]


def relaxation_window(scenario: Scenario) -> float:
    """Twenty relaxation times, 20 / min_t |lambda_slowest(t)| over one period."""
    T = common_period(scenario.network)
    horizon = T if T is not None else scenario.t_end - scenario.t_start
    t = scenario.t_start + np.linspace(0.0, horizon, 2001)
    eigen, _ = eigen_trajectory(scenario, times=t)
    slow = np.abs(eigen.eigenvalues[:, 0]).min()
    if slow <= 0:
        raise ValueError("slowest eigenvalue vanishes; no finite relaxation time")
    return 20.0 / slow
