import numpy as np
import pytest

import berryheat as bh
from berryheat.errors import GaugeError, OpenPathError
from berryheat.phases import accumulate_phases


def circle_path(x0, y0, radius, n=4000, clockwise=False):
    theta = 2.0 * np.pi * np.arange(n + 1) / n
    if clockwise:
        theta = -theta
    return bh.ParamPath(x=x0 + radius * np.cos(theta), y=y0 + radius * np.sin(theta))


def test_vector_potential_values():
    A, A_alt = bh.vector_potential(1.0, 1.0)
    np.testing.assert_allclose(A, [0.5, 0.0], atol=1e-15)
    np.testing.assert_allclose(A_alt, [0.0, -0.25], atol=1e-15)
    A, A_alt = bh.vector_potential(0.0, 3.7)
    np.testing.assert_allclose(A, [0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(A_alt, [0.0, 0.0], atol=1e-15)
    A, A_alt = bh.vector_potential(2.0, 0.0)  # beta = 1
    np.testing.assert_allclose(A, [0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(A_alt, [0.0, -2.0], atol=1e-15)


def test_curvature_values():
    assert bh.curvature(1.0, 1.0) == pytest.approx(-0.25, abs=1e-15)
    assert bh.curvature(0.0, 2.0) == pytest.approx(0.0, abs=1e-15)
    x = np.linspace(-2.0, 2.0, 21)
    np.testing.assert_allclose(bh.curvature(x, 1.0), -x / (1.0 + x * x) ** 2, atol=1e-14)


def test_singular_gauge_rejected():
    with pytest.raises(GaugeError):
        bh.curvature(1.0, -1.0)  # beta = 0
    with pytest.raises(GaugeError):
        bh.vector_potential(1.0, -1.0)


def test_loop_integral_degenerate_loop():
    point = bh.ParamPath(x=np.full(5, 1.3), y=np.full(5, 0.7))
    assert bh.loop_integral(point) == 0.0
    assert bh.surface_integral(point) == 0.0


def test_loop_integral_requires_closed_path():
    open_path = bh.ParamPath(x=np.array([0.5, 1.0]), y=np.array([1.0, 1.0]))
    with pytest.raises(OpenPathError):
        bh.loop_integral(open_path)
    with pytest.raises(OpenPathError):
        bh.surface_integral(open_path)


def test_loop_orientation_sign():
    ccw = circle_path(1.0, 1.0, 0.3)
    cw = circle_path(1.0, 1.0, 0.3, clockwise=True)
    gamma_ccw = bh.loop_integral(ccw)
    # B_z < 0 in the first quadrant, so a counter-clockwise loop accumulates
    # a positive geometric phase (it slows the relaxation)
    assert gamma_ccw > 0.0
    assert bh.loop_integral(cw) == pytest.approx(-gamma_ccw, abs=1e-15)


def test_loop_reversal_negates_exactly():
    path = circle_path(0.8, 1.4, 0.25, n=997)
    assert bh.loop_integral(path.reversed()) == pytest.approx(
        -bh.loop_integral(path), abs=1e-16
    )


def test_gauge_invariance_on_closed_loop(fig2b):
    _, paths = bh.branch_paths(fig2b, points_per_period=20000)
    for path in paths:
        loop_a = bh.loop_integral(path, potential="A")
        loop_b = bh.loop_integral(path, potential="A_alt")
        assert abs(loop_a - loop_b) / abs(loop_a) < 1e-6


def test_loop_matches_time_domain_phase(fig2b):
    t, paths = bh.branch_paths(fig2b, points_per_period=20000)
    eigen, _ = bh.eigen_trajectory(fig2b, times=t)
    gg = accumulate_phases(eigen).geometric[-1]
    for branch, path in enumerate(paths):
        loop = bh.loop_integral(path)
        assert abs(loop - gg[branch]) / abs(loop) < 1e-5


def test_stokes_theorem_on_fig2b_loop(fig2b):
    _, paths = bh.branch_paths(fig2b)
    for path in paths:
        loop = bh.loop_integral(path)
        surf = bh.surface_integral(path, resolution=2048)
        assert abs(loop - surf) / abs(loop) < 1e-4


def test_stokes_on_synthetic_circle():
    path = circle_path(1.0, 1.5, 0.4)
    loop = bh.loop_integral(path)
    surf = bh.surface_integral(path, resolution=1024)
    assert abs(loop - surf) / abs(loop) < 1e-3


def test_numerical_curl_matches_curvature():
    # curl of both gauge representatives by central differences at step 1e-3
    h = 1e-3
    x = np.arange(0.7, 1.301, h)
    y = np.arange(0.8, 1.201, h)
    X, Y = np.meshgrid(x, y)
    A, A_alt = bh.vector_potential(X, Y)
    B = bh.curvature(X, Y)
    for field in (A, A_alt):
        dAy_dx = (field[1:-1, 2:, 1] - field[1:-1, :-2, 1]) / (2 * h)
        dAx_dy = (field[2:, 1:-1, 0] - field[:-2, 1:-1, 0]) / (2 * h)
        curl = dAy_dx - dAx_dy
        assert np.abs(curl - B[1:-1, 1:-1]).max() < 1e-4


def test_reciprocal_line_loop_is_null():
    # out-and-back path confined to y = 1 (the reciprocal line)
    k = np.arange(2001)
    x = 1.0 + 0.3 * np.cos(2.0 * np.pi * k / 2000)
    path = bh.ParamPath(x=x, y=np.ones_like(x))
    assert abs(bh.loop_integral(path, potential="A")) < 1e-10
    assert bh.loop_integral(path, potential="A_alt") == pytest.approx(0.0, abs=1e-16)
    assert bh.surface_integral(path) == 0.0


def test_winding_numbers_square():
    square = bh.ParamPath(
        x=np.array([0.0, 1.0, 1.0, 0.0, 0.0]),
        y=np.array([0.0, 0.0, 1.0, 1.0, 0.0]),
    )
    w = bh.winding_numbers(square, [0.5, 1.5], [0.5, -0.3])
    np.testing.assert_array_equal(w, [[1.0, 0.0], [0.0, 0.0]])
    w_cw = bh.winding_numbers(square.reversed(), [0.5], [0.5])
    np.testing.assert_array_equal(w_cw, [[-1.0]])


def test_winding_numbers_figure_eight():
    # (sin 2t, sin t): upper lobe counter-clockwise, lower lobe clockwise
    theta = 2.0 * np.pi * np.arange(401) / 400
    eight = bh.ParamPath(x=np.sin(2.0 * theta), y=np.sin(theta))
    w = bh.winding_numbers(eight, [0.0], [0.5, -0.5])
    assert w.ravel().tolist() == [1.0, -1.0]
    outside = bh.winding_numbers(eight, [0.9], [0.35])
    assert outside[0, 0] == 0.0


def test_field_map_values():
    fm = bh.field_map(np.array([-1.0, 0.0, 1.0]), np.array([0.5, 1.0]))
    assert fm.curvature.shape == (2, 3)
    np.testing.assert_allclose(fm.curvature[:, 1], 0.0, atol=1e-15)  # x = 0 column
    assert fm.curvature[1, 2] == pytest.approx(-0.25, abs=1e-15)     # (1, 1)
    # where beta > 0 the curvature sign is opposite to the sign of x
    assert np.all(np.sign(fm.curvature[:, [0, 2]]) == [[1.0, -1.0], [1.0, -1.0]])


def test_two_body_path_closes_on_period(fig2b):
    _, paths = bh.branch_paths(fig2b)
    for path in paths:
        assert path.closed


def test_surface_integral_multiloop_contour(fig2a):
    # pair period 10 x bath period 1 gives a self-crossing contour; the
    # winding-weighted raster must still reproduce the loop integral
    _, paths = bh.branch_paths(fig2a)
    for path in paths:
        loop = bh.loop_integral(path)
        surf = bh.surface_integral(path, resolution=2048)
        assert abs(loop - surf) / max(abs(loop), 1e-9) < 1e-3
