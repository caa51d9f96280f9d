import numpy as np
import pytest

import berryheat as bh
from berryheat.errors import ConfigError, InvalidModelError
from berryheat.scenario import default_timestep, preset_names

GOOD_CONFIG = """
# two driven bodies against a 300 K bath
n_bodies = 2
bath_temperature = 300.0
initial_temperatures = 400.0, 300.0
capacities = 1.0, 1.0
t_end = 10.0

pair 1 2 { mean = 1.0, amplitude = 0.5, period = 10.0, phase = 0.0 }
pair 2 1 { mean = 0.8, amplitude = 0.4, period = 10.0, phase = 1.5707963267948966 }
bath 1 { mean = 0.5, amplitude = 0.1, period = 1.0 }
bath 2 { mean = 0.3, amplitude = 0.1, period = 1.0, phase = 1.5707963267948966 }
"""


def test_parse_good_config():
    scn = bh.parse_config(GOOD_CONFIG)
    assert scn.network.n_bodies == 2
    assert scn.network.bath_temperature == 300.0
    np.testing.assert_array_equal(scn.initial_temperatures, [400.0, 300.0])
    assert scn.t_start == 0.0 and scn.t_end == 10.0
    # matches the fig2a preset matrix
    np.testing.assert_allclose(
        bh.conductance_matrix(scn.network, 0.0), [[-2.1, 1.5], [0.8, -1.1]], atol=1e-14
    )


def test_parse_multiline_block():
    text = GOOD_CONFIG.replace(
        "pair 1 2 { mean = 1.0, amplitude = 0.5, period = 10.0, phase = 0.0 }",
        "pair 1 2 {\n  mean = 1.0\n  amplitude = 0.5\n  period = 10.0\n  phase = 0.0\n}",
    )
    scn = bh.parse_config(text)
    np.testing.assert_allclose(
        bh.conductance_matrix(scn.network, 0.0), [[-2.1, 1.5], [0.8, -1.1]], atol=1e-14
    )


def test_load_config_roundtrip(tmp_path):
    path = tmp_path / "scenario.cfg"
    path.write_text(GOOD_CONFIG)
    scn = bh.load_config(path)
    assert scn.network.n_bodies == 2


@pytest.mark.parametrize(
    "mutation, fragment",
    [
        ("period = 10.0", "period = -10.0"),          # negative period
        ("amplitude = 0.5", "amplitude = 5.0"),       # amplitude > mean
        ("n_bodies = 2", "n_bodies = 0"),
        ("t_end = 10.0", "t_end = abc"),
        ("initial_temperatures = 400.0, 300.0", "initial_temperatures = 400.0"),
    ],
)
def test_parse_rejects_bad_values(mutation, fragment):
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG.replace(mutation, fragment))


def test_parse_error_carries_line_number():
    with pytest.raises(ConfigError) as err:
        bh.parse_config("n_bodies = 2\nbogus_key = 1\n")
    assert err.value.line == 2
    assert "bogus_key" in str(err.value)


def test_parse_rejects_structure_errors():
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG + "\npair 1 2 { mean = 1.0 }")  # duplicate block
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG + "\nbath 1 2 { mean = 1.0 }")  # two bath indices
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG + "\npair 1 { mean = 1.0 }")    # missing index
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG + "\npair 1 3 { mean = 1.0 }")  # out of range
    with pytest.raises(ConfigError):
        bh.parse_config("n_bodies = 2\nbath 1 { mean = 0.5\n")      # unterminated
    with pytest.raises(ConfigError):
        bh.parse_config(GOOD_CONFIG + "\nt_end = 5.0")              # duplicate key
    with pytest.raises(ConfigError):
        bh.parse_config("bath_temperature = 300.0\nt_end = 1.0\n"
                        "initial_temperatures = 1.0")               # n_bodies missing


def test_presets_match_caption_parameters():
    fig2a = bh.preset("fig2a")[0]
    assert fig2a.network.pair[(0, 1)] == bh.DrivingProtocol(1.0, 0.5, 10.0, 0.0)
    assert fig2a.network.pair[(1, 0)] == bh.DrivingProtocol(0.8, 0.4, 10.0, np.pi / 2)
    assert fig2a.network.bath[0] == bh.DrivingProtocol(0.5, 0.1, 1.0, 0.0)
    assert fig2a.network.bath[1] == bh.DrivingProtocol(0.3, 0.1, 1.0, np.pi / 2)
    np.testing.assert_array_equal(fig2a.initial_temperatures, [400.0, 300.0])
    assert fig2a.network.bath_temperature == 300.0

    fig2b = bh.preset("fig2b")[0]
    assert fig2b.network.pair[(0, 1)].period == 1.0

    fig3 = bh.preset("fig3")[0]
    assert fig3.network.pair[(0, 1)] == bh.DrivingProtocol(0.01, 0.005, 10.0, 0.0)
    assert fig3.network.pair[(1, 0)] == bh.DrivingProtocol(0.1, 0.05, 10.0, np.pi / 2)
    assert fig3.network.bath[0] == bh.DrivingProtocol(0.01, 0.001, 1.0, 0.0)
    assert fig3.network.bath[1] == bh.DrivingProtocol(0.01, 0.001, 1.0, np.pi / 2)


def test_fig1_preset_covers_both_periods():
    scenarios = bh.preset("fig1")
    assert [s.network.pair[(0, 1)].period for s in scenarios] == [1.0, 10.0]


def test_reciprocal_preset():
    scn = bh.preset("reciprocal")[0]
    assert scn.network.pair[(0, 1)] == scn.network.pair[(1, 0)]


def test_unknown_preset():
    with pytest.raises(ConfigError):
        bh.preset("fig99")
    assert set(preset_names()) == {"fig1", "fig2a", "fig2b", "fig3", "reciprocal"}


def test_default_timestep():
    fig2a = bh.preset("fig2a")[0]
    assert fig2a.timestep == pytest.approx(1.0 / 2000)
    static = bh.Scenario(
        name="s",
        network=bh.ThermalNetwork(n_bodies=1, bath_temperature=300.0,
                                  bath={0: bh.DrivingProtocol(0.5)}),
        initial_temperatures=[400.0],
        t_end=4.0,
    )
    assert default_timestep(static) == pytest.approx(4.0 / 2000)


def test_common_period():
    fig2a = bh.preset("fig2a")[0]
    assert bh.common_period(fig2a.network) == pytest.approx(10.0)
    incommensurate = bh.ThermalNetwork(
        n_bodies=2, bath_temperature=300.0,
        pair={(0, 1): bh.DrivingProtocol(1.0, 0.5, 1.0),
              (1, 0): bh.DrivingProtocol(1.0, 0.5, np.sqrt(2.0))},
    )
    assert bh.common_period(incommensurate) is None
    static = bh.ThermalNetwork(n_bodies=1, bath_temperature=300.0)
    assert bh.common_period(static) is None


def test_scenario_validation(fig2a):
    with pytest.raises(InvalidModelError):
        bh.Scenario(name="bad", network=fig2a.network,
                    initial_temperatures=[400.0], t_end=10.0)
    with pytest.raises(InvalidModelError):
        bh.Scenario(name="bad", network=fig2a.network,
                    initial_temperatures=[400.0, 300.0], t_end=0.0)
    with pytest.raises(InvalidModelError):
        bh.Scenario(name="bad", network=fig2a.network,
                    initial_temperatures=[400.0, 300.0], t_end=1.0, dt=-1e-3)


def test_time_grid_spacing(fig2b):
    grid = fig2b.time_grid()
    assert grid[0] == 0.0 and grid[-1] == pytest.approx(10.0)
    assert np.allclose(np.diff(grid), fig2b.timestep)
