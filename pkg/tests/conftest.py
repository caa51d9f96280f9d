import numpy as np
import pytest

import berryheat as bh


@pytest.fixture(scope="session")
def fig2a():
    return bh.preset("fig2a")[0]


@pytest.fixture(scope="session")
def fig2b():
    return bh.preset("fig2b")[0]


@pytest.fixture(scope="session")
def fig3():
    return bh.preset("fig3")[0]


@pytest.fixture(scope="session")
def fig2a_matrix0(fig2a):
    """Two-body conductance matrix of the fig2a driving at t = 0."""
    return bh.conductance_matrix(fig2a.network, 0.0)


def constant_two_body(g12, g21, g1b, g2b, bath_temperature=300.0):
    """Static two-body network with the given conductance values."""
    driving = bh.TwoBodyDriving(
        forward=bh.DrivingProtocol(g12),
        backward=bh.DrivingProtocol(g21),
        bath_1=bh.DrivingProtocol(g1b),
        bath_2=bh.DrivingProtocol(g2b),
    )
    return bh.two_body_network(driving, bath_temperature)


def random_two_body_matrix(rng):
    """Random non-degenerate physical 2x2 conductance matrix.

    Positive off-diagonal couplings guarantee a real spectrum with gap
    >= 2 sqrt(g12 g21), so sampling cannot hit an exceptional point.
    """
    g12, g21, g1b, g2b = np.exp(rng.uniform(np.log(0.05), np.log(5.0), size=4))
    return np.array([[-(g12 + g1b), g12], [g21, -(g21 + g2b)]]), (g12, g21, g1b, g2b)
