"""Lumped non-reciprocal thermal networks and their periodic driving.

A network couples N bodies with heat capacities ``C_i`` through pairwise
conductances ``G_ij(t)`` (``G_ij`` and ``G_ji`` are independent, which is
what makes the network non-reciprocal) and to a common bath at temperature
``T_b`` through ``G_ib(t)``.  Near equilibrium the energy balance is linear,

    dT/dt = G(t) T + S(t),

where ``G`` is the capacity-normalized conductance matrix assembled by
:func:`conductance_matrix` and ``S`` the bath source assembled by
:func:`source_vector`.  Appending the (constant) bath temperature as an
extra state gives the homogeneous form with the matrix returned by
:func:`augmented_matrix`, whose rows all sum to zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidModelError

__all__ = [
    "DrivingProtocol",
    "TabulatedConductance",
    "TwoBodyDriving",
    "ThermalNetwork",
    "ThermalState",
    "two_body_network",
    "toy_conductances",
    "conductance_matrix",
    "source_vector",
    "augmented_matrix",
]


@dataclass(frozen=True)
class DrivingProtocol:
    """Sinusoidal modulation law ``mean + amplitude * cos(2*pi*t/period + phase)``.

    Parameters
    ----------
    mean : float
        Cycle-averaged conductance (rate units, s^-1 after capacity
        normalization).
    amplitude : float
        Modulation depth.  Must satisfy ``0 <= amplitude <= mean`` so the
        conductance stays non-negative over a full cycle; larger amplitudes
        are rejected rather than clamped.
    period : float
        Modulation period in seconds, strictly positive.
    phase : float
        Phase shift in radians.
    """

    mean: float
    amplitude: float = 0.0
    period: float = 1.0
    phase: float = 0.0

    def __post_init__(self):
        vals = (self.mean, self.amplitude, self.period, self.phase)
        if not all(np.isfinite(v) for v in vals):
            raise InvalidModelError(f"non-finite driving parameters {vals}")
        if self.period <= 0.0:
            raise InvalidModelError(f"period must be positive, got {self.period}")
        if self.amplitude < 0.0 or self.amplitude > self.mean:
            raise InvalidModelError(
                f"amplitude {self.amplitude} must lie in [0, mean={self.mean}] "
                "so the conductance stays non-negative"
            )

    def __call__(self, t):
        return self.mean + self.amplitude * np.cos(
            2.0 * np.pi * np.asarray(t, dtype=float) / self.period + self.phase
        )


@dataclass(frozen=True)
class TabulatedConductance:
    """Conductance given as a sampled time series, linearly interpolated.

    Escape hatch for drivings that are not cosine laws.  Outside the sampled
    window the first/last value is held (``numpy.interp`` semantics).
    """

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise InvalidModelError("tabulated series needs matching 1-d arrays, >= 2 samples")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise InvalidModelError("tabulated series contains non-finite entries")
        if np.any(np.diff(t) <= 0):
            raise InvalidModelError("tabulated times must be strictly increasing")
        if np.any(v < 0):
            raise InvalidModelError("tabulated conductances must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __call__(self, t):
        return np.interp(np.asarray(t, dtype=float), self.times, self.values)


@dataclass(frozen=True)
class TwoBodyDriving:
    """The four modulation laws of the two-body toy network.

    ``forward`` drives the 1<-2 coupling, ``backward`` the 2<-1 coupling,
    ``bath_1``/``bath_2`` the couplings of each body to the bath.
    """

    forward: DrivingProtocol
    backward: DrivingProtocol
    bath_1: DrivingProtocol
    bath_2: DrivingProtocol

    @classmethod
    def cosine_laws(
        cls,
        forward_mean,
        forward_amplitude,
        backward_mean,
        backward_amplitude,
        bath1_mean,
        bath1_amplitude,
        bath2_mean,
        bath2_amplitude,
        pair_period,
        bath_period,
        phase_shift,
    ):
        """Build the standard four-law driving: the pair conductances share
        one period, the bath conductances another, and the second law of each
        pair carries the common phase shift."""
        return cls(
            forward=DrivingProtocol(forward_mean, forward_amplitude, pair_period, 0.0),
            backward=DrivingProtocol(backward_mean, backward_amplitude, pair_period, phase_shift),
            bath_1=DrivingProtocol(bath1_mean, bath1_amplitude, bath_period, 0.0),
            bath_2=DrivingProtocol(bath2_mean, bath2_amplitude, bath_period, phase_shift),
        )


def toy_conductances(driving: TwoBodyDriving, t):
    """Evaluate the four two-body laws at time(s) ``t``.

    Returns
    -------
    tuple
        ``(G_12, G_21, G_1b, G_2b)`` evaluated at ``t`` (scalars or arrays).
    """
    return (
        driving.forward(t),
        driving.backward(t),
        driving.bath_1(t),
        driving.bath_2(t),
    )


@dataclass(frozen=True)
class ThermalState:
    """Snapshot of the network: time and per-body temperatures (kelvin)."""

    time: float
    temperatures: np.ndarray

    def __post_init__(self):
        T = np.atleast_1d(np.asarray(self.temperatures, dtype=float))
        if not np.all(np.isfinite(T)) or not np.isfinite(self.time):
            raise InvalidModelError("thermal state contains non-finite entries")
        object.__setattr__(self, "temperatures", T)


@dataclass(frozen=True)
class ThermalNetwork:
    """N bodies with capacities, pairwise and bath conductances, and a bath.

    Parameters
    ----------
    n_bodies : int
        Number of bodies, >= 1.
    bath_temperature : float
        Bath temperature in kelvin.
    pair : dict
        ``{(i, j): source}`` with 0-based body indices; ``source`` is any
        callable ``t -> G_ij(t)`` (e.g. :class:`DrivingProtocol` or
        :class:`TabulatedConductance`).  ``G_ij`` is the conductance for the
        power body ``i`` receives from body ``j``; missing pairs are zero.
    bath : dict
        ``{i: source}`` for the bath couplings; missing bodies are uncoupled.
    heat_capacity : array_like, optional
        Per-body capacities, strictly positive.  Defaults to 1 (normalized
        units, conductances are then plain rates).
    """

    n_bodies: int
    bath_temperature: float
    pair: dict = field(default_factory=dict)
    bath: dict = field(default_factory=dict)
    heat_capacity: np.ndarray = None

    def __post_init__(self):
        if self.n_bodies < 1:
            raise InvalidModelError(f"need at least one body, got {self.n_bodies}")
        if not np.isfinite(self.bath_temperature):
            raise InvalidModelError("bath temperature must be finite")
        cap = self.heat_capacity
        cap = np.ones(self.n_bodies) if cap is None else np.asarray(cap, dtype=float)
        if cap.shape != (self.n_bodies,):
            raise InvalidModelError(
                f"expected {self.n_bodies} capacities, got shape {cap.shape}"
            )
        if not np.all(np.isfinite(cap)) or np.any(cap <= 0):
            raise InvalidModelError("heat capacities must be finite and strictly positive")
        object.__setattr__(self, "heat_capacity", cap)
        for (i, j) in self.pair:
            if not (0 <= i < self.n_bodies and 0 <= j < self.n_bodies) or i == j:
                raise InvalidModelError(f"pair index ({i}, {j}) out of range")
        for i in self.bath:
            if not 0 <= i < self.n_bodies:
                raise InvalidModelError(f"bath index {i} out of range")

    def pair_conductance(self, i, j, t):
        """``G_ij(t)``: conductance for power received by ``i`` from ``j``."""
        src = self.pair.get((i, j))
        if src is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        return _sample(src, t, f"G[{i},{j}]")

    def bath_conductance(self, i, t):
        """``G_ib(t)``: conductance between body ``i`` and the bath."""
        src = self.bath.get(i)
        if src is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        return _sample(src, t, f"G[{i},bath]")

    def driving_periods(self):
        """Periods of all actively modulated cosine laws (empty if static)."""
        periods = []
        for src in list(self.pair.values()) + list(self.bath.values()):
            if isinstance(src, DrivingProtocol) and src.amplitude > 0:
                periods.append(src.period)
        return periods


def two_body_network(driving: TwoBodyDriving, bath_temperature,
                     heat_capacity=(1.0, 1.0)) -> ThermalNetwork:
    """Assemble the two-body toy network from its four driving laws."""
    return ThermalNetwork(
        n_bodies=2,
        bath_temperature=bath_temperature,
        pair={(0, 1): driving.forward, (1, 0): driving.backward},
        bath={0: driving.bath_1, 1: driving.bath_2},
        heat_capacity=np.asarray(heat_capacity, dtype=float),
    )


def _sample(src, t, label):
    """Evaluate a conductance source, enforcing finite non-negative samples."""
    t = np.asarray(t, dtype=float)
    g = np.asarray(src(t), dtype=float)
    if g.shape != t.shape:
        # source does not broadcast; fall back to pointwise evaluation
        g = np.array([src(tk) for tk in np.atleast_1d(t)], dtype=float).reshape(t.shape)
    if not np.all(np.isfinite(g)):
        raise InvalidModelError(f"conductance sample {label} is non-finite")
    if np.any(g < 0):
        raise InvalidModelError(f"conductance sample {label} is negative")
    return g


def conductance_matrix(network: ThermalNetwork, t) -> np.ndarray:
    """Capacity-normalized conductance matrix at time(s) ``t``.

    Off-diagonal entries are ``G_ij(t)/C_i`` and each diagonal entry is
    ``-(sum_j G_ij(t) + G_ib(t))/C_i``, so applying the matrix to the
    all-ones vector gives ``-G_ib/C_i``.

    Parameters
    ----------
    network : ThermalNetwork
    t : float or 1-d array

    Returns
    -------
    numpy.ndarray
        Shape ``(N, N)`` for scalar ``t``, ``(K, N, N)`` for an array.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    tk = np.atleast_1d(t_arr)
    n = network.n_bodies
    M = np.zeros(tk.shape + (n, n))
    for (i, j), src in network.pair.items():
        g = _sample(src, tk, f"G[{i},{j}]")
        M[..., i, j] += g
        M[..., i, i] -= g
    for i, src in network.bath.items():
        M[..., i, i] -= _sample(src, tk, f"G[{i},bath]")
    M /= network.heat_capacity[:, None]
    return M[0] if scalar else M


def source_vector(network: ThermalNetwork, t) -> np.ndarray:
    """Bath source term ``S_i(t) = G_ib(t) T_b / C_i``.

    Shape ``(N,)`` for scalar ``t``, ``(K, N)`` for an array.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    tk = np.atleast_1d(t_arr)
    S = np.zeros(tk.shape + (network.n_bodies,))
    for i, src in network.bath.items():
        S[..., i] = _sample(src, tk, f"G[{i},bath]") * network.bath_temperature
    S /= network.heat_capacity
    return S[0] if scalar else S


def augmented_matrix(network: ThermalNetwork, t) -> np.ndarray:
    """Homogeneous-form matrix with the bath appended as a frozen state.

    The upper-left ``N x N`` block is :func:`conductance_matrix`, the last
    column holds ``G_ib(t)/C_i``, and the last row is zero, so every row sums
    to zero and the all-ones vector is a right eigenvector with eigenvalue 0.

    Shape ``(N+1, N+1)`` for scalar ``t``, ``(K, N+1, N+1)`` for an array.
    """
    t_arr = np.asarray(t, dtype=float)
    scalar = t_arr.ndim == 0
    tk = np.atleast_1d(t_arr)
    n = network.n_bodies
    M = np.zeros(tk.shape + (n + 1, n + 1))
    M[..., :n, :n] = conductance_matrix(network, tk)
    for i, src in network.bath.items():
        M[..., i, n] = _sample(src, tk, f"G[{i},bath]") / network.heat_capacity[i]
    return M[0] if scalar else M
