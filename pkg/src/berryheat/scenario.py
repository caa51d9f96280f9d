"""Simulation scenarios: configuration files and bundled presets.

A scenario bundles a validated network with initial temperatures, a time
window and a grid step.  Scenarios come either from a key-value
configuration file (grammar below) or from the bundled presets ``fig1``,
``fig2a``, ``fig2b``, ``fig3`` and ``reciprocal``.

Configuration grammar (one statement per line, ``#`` starts a comment)::

    n_bodies = 2
    bath_temperature = 300.0
    initial_temperatures = 400.0, 300.0
    capacities = 1.0, 1.0          # optional, defaults to 1
    t_start = 0.0                  # optional
    t_end = 10.0
    dt = 0.0005                    # optional, defaults to min period / 2000

    pair 1 2 { mean = 1.0, amplitude = 0.5, period = 10.0, phase = 0.0 }
    pair 2 1 { mean = 0.8, amplitude = 0.4, period = 10.0, phase = 1.5707963267948966 }
    bath 1 { mean = 0.5, amplitude = 0.1, period = 1.0 }
    bath 2 { mean = 0.3, amplitude = 0.1, period = 1.0, phase = 1.5707963267948966 }

Body indices in ``pair i j`` / ``bath i`` blocks are 1-based;
``pair i j`` drives the conductance for power body ``i`` receives from
body ``j``.  Blocks may also span multiple lines.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, InvalidModelError
from .network import DrivingProtocol, ThermalNetwork, TwoBodyDriving, two_body_network

__all__ = [
    "Scenario",
    "parse_config",
    "load_config",
    "preset",
    "preset_names",
    "default_timestep",
    "common_period",
]

GRID_POINTS_PER_PERIOD = 2000


@dataclass(frozen=True)
class Scenario:
    """A runnable simulation setup.

    ``dt = None`` means "use :func:`default_timestep`"; ``out_dir`` and
    ``mode`` are filled in by the command-line front end.
    """

    name: str
    network: ThermalNetwork
    initial_temperatures: np.ndarray
    t_start: float = 0.0
    t_end: float = 10.0
    dt: float = None
    out_dir: str = None
    mode: str = "simulate"

    def __post_init__(self):
        T0 = np.asarray(self.initial_temperatures, dtype=float)
        if T0.shape != (self.network.n_bodies,):
            raise InvalidModelError(
                f"expected {self.network.n_bodies} initial temperatures, got {T0.shape}"
            )
        if not np.all(np.isfinite(T0)):
            raise InvalidModelError("initial temperatures must be finite")
        if not self.t_end > self.t_start:
            raise InvalidModelError("time window must have positive length")
        if self.dt is not None and self.dt <= 0:
            raise InvalidModelError("dt must be positive")
        object.__setattr__(self, "initial_temperatures", T0)

    @property
    def timestep(self) -> float:
        return self.dt if self.dt is not None else default_timestep(self)

    def time_grid(self) -> np.ndarray:
        dt = self.timestep
        n = max(1, int(round((self.t_end - self.t_start) / dt)))
        return self.t_start + dt * np.arange(n + 1)

    def with_dt(self, dt) -> "Scenario":
        return replace(self, dt=dt)


def default_timestep(scenario: Scenario) -> float:
    """Fastest active driving period / 2000; window / 2000 for static networks."""
    periods = scenario.network.driving_periods()
    base = min(periods) if periods else (scenario.t_end - scenario.t_start)
    return base / GRID_POINTS_PER_PERIOD


def common_period(network: ThermalNetwork, max_multiple=1000) -> float:
    """Smallest common period of all active drivings (None if static or
    incommensurate within ``max_multiple`` multiples of the slowest law)."""
    periods = network.driving_periods()
    if not periods:
        return None
    base = max(periods)
    for m in range(1, max_multiple + 1):
        T = m * base
        if all(abs(T / p - round(T / p)) < 1e-9 for p in periods):
            return T
    return None


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

_TWO_BODY_RATES = dict(
    forward_mean=1.0, forward_amplitude=0.5,
    backward_mean=0.8, backward_amplitude=0.4,
    bath1_mean=0.5, bath1_amplitude=0.1,
    bath2_mean=0.3, bath2_amplitude=0.1,
)


def _two_body_scenario(name, pair_period, *, rates=None, bath_period=1.0,
                       phase_shift=0.5 * np.pi, t_end=10.0, reciprocal=False):
    rates = dict(_TWO_BODY_RATES if rates is None else rates)
    driving = TwoBodyDriving.cosine_laws(
        pair_period=pair_period, bath_period=bath_period,
        phase_shift=phase_shift, **rates,
    )
    if reciprocal:
        driving = TwoBodyDriving(
            forward=driving.forward, backward=driving.forward,
            bath_1=driving.bath_1, bath_2=driving.bath_2,
        )
    return Scenario(
        name=name,
        network=two_body_network(driving, bath_temperature=300.0),
        initial_temperatures=np.array([400.0, 300.0]),
        t_start=0.0,
        t_end=t_end,
    )


_FIG3_RATES = dict(
    forward_mean=0.01, forward_amplitude=0.005,
    backward_mean=0.1, backward_amplitude=0.05,
    bath1_mean=0.01, bath1_amplitude=0.001,
    bath2_mean=0.01, bath2_amplitude=0.001,
)


def preset(name):
    """Bundled scenarios reproducing the reference figures.

    ``fig2a``/``fig2b`` are the slow (pair period 10 s) and fast (1 s)
    drivings of the relaxation comparison; ``fig1`` yields both of them
    (parameter-space loops and cumulative phases for the two periods);
    ``fig3`` is the weak-coupling regime where the geometric phase
    transiently dominates; ``reciprocal`` is ``fig2a`` with the backward
    conductance slaved to the forward one (no geometric phase).

    Returns a list of :class:`Scenario` (most presets hold exactly one).
    """
    if name == "fig2a":
        return [_two_body_scenario("fig2a", pair_period=10.0)]
    if name == "fig2b":
        return [_two_body_scenario("fig2b", pair_period=1.0)]
    if name == "fig1":
        return [
            _two_body_scenario("fig1-pair1tau", pair_period=1.0),
            _two_body_scenario("fig1-pair10tau", pair_period=10.0),
        ]
    if name == "fig3":
        return [_two_body_scenario("fig3", pair_period=10.0, rates=_FIG3_RATES)]
    if name == "reciprocal":
        return [_two_body_scenario("reciprocal", pair_period=10.0, reciprocal=True)]
    raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(preset_names())}")


def preset_names():
    return ["fig1", "fig2a", "fig2b", "fig3", "reciprocal"]


# ---------------------------------------------------------------------------
# configuration parser
# ---------------------------------------------------------------------------

_SCALAR_KEYS = {"n_bodies", "bath_temperature", "t_start", "t_end", "dt"}
_LIST_KEYS = {"initial_temperatures", "capacities"}
_BLOCK_KEYS = {"mean", "amplitude", "period", "phase"}


def load_config(path) -> Scenario:
    """Parse a scenario configuration file (see module docstring)."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read(), name=str(path))


def parse_config(text, name="config") -> Scenario:
    """Parse configuration text into a validated :class:`Scenario`.

    Raises :class:`ConfigError` with the offending line number for unknown
    keys, malformed values, duplicate blocks and model-invariant violations.
    """
    scalars, lists, blocks = _scan(text)

    def need(key):
        if key not in scalars:
            raise ConfigError(f"missing required key '{key}'")
        return scalars[key][0]

    n = need("n_bodies")
    if n != int(n) or int(n) < 1:
        raise ConfigError(f"n_bodies must be a positive integer, got {n}",
                          line=scalars["n_bodies"][1])
    n = int(n)
    bath_T = need("bath_temperature")
    if "initial_temperatures" not in lists:
        raise ConfigError("missing required key 'initial_temperatures'")
    T0, line_T0 = lists["initial_temperatures"]
    if len(T0) != n:
        raise ConfigError(f"initial_temperatures needs {n} entries, got {len(T0)}",
                          line=line_T0)
    caps = lists.get("capacities", ([1.0] * n, None))[0]
    if len(caps) != n:
        raise ConfigError(f"capacities needs {n} entries, got {len(caps)}",
                          line=lists["capacities"][1])

    pair, bath = {}, {}
    for (kind, idx), (params, line) in blocks.items():
        try:
            proto = DrivingProtocol(
                mean=params.get("mean", 0.0),
                amplitude=params.get("amplitude", 0.0),
                period=params.get("period", 1.0),
                phase=params.get("phase", 0.0),
            )
        except InvalidModelError as exc:
            raise ConfigError(str(exc), line=line) from exc
        if kind == "pair":
            i, j = idx
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise ConfigError(f"pair {i} {j} out of range for {n} bodies", line=line)
            pair[(i - 1, j - 1)] = proto
        else:
            (i,) = idx
            if not 1 <= i <= n:
                raise ConfigError(f"bath {i} out of range for {n} bodies", line=line)
            bath[i - 1] = proto

    try:
        network = ThermalNetwork(
            n_bodies=n, bath_temperature=bath_T,
            pair=pair, bath=bath, heat_capacity=np.asarray(caps),
        )
        return Scenario(
            name=name,
            network=network,
            initial_temperatures=np.asarray(T0),
            t_start=scalars.get("t_start", (0.0, None))[0],
            t_end=need("t_end"),
            dt=scalars.get("dt", (None, None))[0],
        )
    except InvalidModelError as exc:
        raise ConfigError(str(exc)) from exc


_BLOCK_RE = re.compile(r"^(pair|bath)\s+(\d+)(?:\s+(\d+))?\s*\{(.*)$")
_ASSIGN_RE = re.compile(r"^(\w+)\s*=\s*(.+)$")


def _scan(text):
    scalars, lists, blocks = {}, {}, {}
    pending = None  # (key tuple, params dict, opening line) of an open block
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if pending is not None:
            body, closed = _strip_closing(line)
            _parse_block_body(body, pending[1], lineno)
            if closed:
                _store_block(blocks, *pending)
                pending = None
            continue
        m = _BLOCK_RE.match(line)
        if m:
            kind, i, j, rest = m.groups()
            if kind == "pair" and j is None:
                raise ConfigError("pair blocks need two body indices", line=lineno)
            if kind == "bath" and j is not None:
                raise ConfigError("bath blocks take a single body index", line=lineno)
            idx = (int(i),) if j is None else (int(i), int(j))
            params = {}
            body, closed = _strip_closing(rest)
            _parse_block_body(body, params, lineno)
            if closed:
                _store_block(blocks, (kind, idx), params, lineno)
            else:
                pending = ((kind, idx), params, lineno)
            continue
        m = _ASSIGN_RE.match(line)
        if not m:
            raise ConfigError(f"cannot parse statement {line!r}", line=lineno)
        key, value = m.group(1), m.group(2).strip()
        if key in _SCALAR_KEYS:
            if key in scalars:
                raise ConfigError(f"duplicate key '{key}'", line=lineno)
            scalars[key] = (_number(value, key, lineno), lineno)
        elif key in _LIST_KEYS:
            if key in lists:
                raise ConfigError(f"duplicate key '{key}'", line=lineno)
            items = [v for v in (s.strip() for s in value.split(",")) if v]
            lists[key] = ([_number(v, key, lineno) for v in items], lineno)
        else:
            raise ConfigError(f"unknown key '{key}'", line=lineno)
    if pending is not None:
        raise ConfigError("unterminated block (missing '}')", line=pending[2])
    return scalars, lists, blocks


def _strip_closing(fragment):
    fragment = fragment.strip()
    if fragment.endswith("}"):
        return fragment[:-1].strip(), True
    return fragment, False


def _parse_block_body(body, params, lineno):
    for item in (s.strip() for s in body.split(",")):
        if not item:
            continue
        m = _ASSIGN_RE.match(item)
        if not m:
            raise ConfigError(f"cannot parse block entry {item!r}", line=lineno)
        key, value = m.group(1), m.group(2).strip()
        if key not in _BLOCK_KEYS:
            raise ConfigError(f"unknown block key '{key}'", line=lineno)
        if key in params:
            raise ConfigError(f"duplicate block key '{key}'", line=lineno)
        params[key] = _number(value, key, lineno)


def _store_block(blocks, key, params, lineno):
    if key in blocks:
        label = " ".join(str(v) for v in (key[0],) + key[1])
        raise ConfigError(f"duplicate block '{label}'", line=lineno)
    blocks[key] = (params, lineno)


def _number(token, key, lineno):
    try:
        value = float(token)
    except ValueError:
        raise ConfigError(f"expected a number for '{key}', got {token!r}", line=lineno)
    if not math.isfinite(value):
        raise ConfigError(f"value for '{key}' must be finite", line=lineno)
    return value
