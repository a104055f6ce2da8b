import math

import numpy as np
import pytest
from scipy.special import j1

from bodies import IntermediateBodySpec, make_C, make_disc, make_regular_polygon, make_square
from core import AngleInterval, ConfigError
from experiments import fit_loglog
from fourier import (Profile, RayAverages, bound_sample, build_weight_table, dilation_avg_sq,
                     dilation_threshold, ft_body, ft_polygon, ft_profile, load_weight_table,
                     refined_angles, rotation_dilation_avg_sq, rotation_dilation_curve,
                     save_weight_table, spherical_avg_sq, trace_boundaries, validate_weight_table,
                     weight_at)


def _disc_ft(rho):
    return j1(2 * math.pi * rho) / rho


@pytest.mark.parametrize("xi, expected", [
    ((0.0, 0.0), 1.0),
    ((1.0, 0.0), 0.0),
    ((0.5, 0.0), 2 / math.pi),
    ((0.5, 0.5), 4 / math.pi ** 2),
])
def test_ft_polygon_square(centered_square, xi, expected):
    assert ft_polygon(centered_square, xi) == pytest.approx(expected, abs=1e-12)


def test_ft_polygon_vectorized(centered_square):
    xi = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.0]])
    values = ft_polygon(centered_square, xi)
    assert values.shape == (3,)
    assert values[2] == pytest.approx(2 / math.pi)


def test_ft_profile_matches_polygon():
    body = make_regular_polygon(6, 0.4, 0.1, center=(0.2, -0.1))
    rng = np.random.default_rng(5)
    for theta, rho in zip(rng.uniform(0, 2 * math.pi, 20), rng.uniform(0.1, 20.0, 20)):
        xi = rho * np.array([math.cos(theta), math.sin(theta)])
        assert ft_profile(body, theta, rho) == pytest.approx(complex(ft_polygon(body, xi)),
                                                             abs=1e-8)


def test_ft_disc(disc):
    assert ft_body(disc, (0.0, 0.0)) == pytest.approx(math.pi, abs=1e-10)
    assert ft_profile(disc, 0.7, 1.5) == pytest.approx(_disc_ft(1.5), abs=1e-5)


def test_ft_is_conjugate_symmetric_in_modulus():
    body = make_regular_polygon(5, 0.3, 0.2, center=(0.5, 0.4))
    for xi in ([3.0, 1.0], [-7.5, 2.25], [0.1, 11.0]):
        xi = np.array(xi)
        assert abs(ft_body(body, xi)) == pytest.approx(abs(ft_body(body, -xi)), rel=1e-10)


def test_profile_is_concave(hexagon):
    profile = Profile(hexagon, 0.4)
    t = np.linspace(0.0, profile.width, 41)
    g = profile.g(t)
    assert np.all(g >= 0.0)
    assert np.all(g[1:-1] >= 0.5 * (g[:-2] + g[2:]) - 1e-12)


def test_ray_averages_match_direct(centered_square):
    ray = RayAverages(centered_square, 0.3, 64.0)
    for rho in (4.0, 20.0, 64.0):
        assert ray.at([rho])[0] == pytest.approx(dilation_avg_sq(centered_square, 0.3, rho),
                                                 rel=1e-2)
    assert ray.at([0.0])[0] == pytest.approx(1.0 / 5.0)


@pytest.mark.parametrize("theta, slope, tolerance", [(0.0, -2.0, 0.1), (math.pi / 4, -4.0, 0.15)])
def test_square_dilation_decay(centered_square, theta, slope, tolerance):
    rhos = np.geomspace(8.0, 256.0, 16)
    values = RayAverages(centered_square, theta, 256.0).at(rhos)
    assert fit_loglog(rhos, values).slope == pytest.approx(slope, abs=tolerance)


def test_empty_interval_averages(disc):
    empty = AngleInterval(0.5, 0.0)
    assert rotation_dilation_avg_sq(disc, empty, 10.0) == 0.0
    assert spherical_avg_sq(disc, empty, 10.0) == 0.0


def test_spherical_average_disc(disc):
    rho = 8.3
    value = spherical_avg_sq(disc, AngleInterval(0.0, 0.5), rho)
    assert value == pytest.approx(0.5 * _disc_ft(rho) ** 2, rel=1e-3)


def test_spherical_average_square_is_bounded(centered_square):
    scaled = [rho ** 3 * spherical_avg_sq(centered_square, AngleInterval.full(), rho)
              for rho in (8.0, 32.0, 128.0)]
    assert all(0.0 < v < 10.0 for v in scaled)


def test_weight_is_rotation_of_interval(centered_square):
    interval = AngleInterval(0.2, 0.6)
    direct = rotation_dilation_avg_sq(centered_square, AngleInterval(1.0 - 0.8, 0.6), 12.0)
    assert weight_at(centered_square, interval, 12.0, 1.0) == pytest.approx(direct, rel=1e-12)


@pytest.mark.slow
def test_disc_rotation_decay(disc):
    rhos = np.geomspace(8.0, 256.0, 16)
    values = rotation_dilation_curve(disc, AngleInterval.full(), rhos)
    assert fit_loglog(rhos, values).slope == pytest.approx(-3.0, abs=0.1)


@pytest.mark.slow
def test_C_corner_ray_decay():
    body = make_C(IntermediateBodySpec(math.pi / 2, 2.0))
    rhos = np.geomspace(8.0, 256.0, 16)
    values = RayAverages(body, 0.0, 256.0).at(rhos)
    upper = fit_loglog(rhos[8:], values[8:])
    assert upper.slope == pytest.approx(-3.5, abs=0.15)


# --- pointwise bounds

@pytest.mark.parametrize("body", [make_disc(), make_square(), make_regular_polygon(6)])
def test_bounds_hold(body):
    L, S = body.diameters()
    rng = np.random.default_rng(7)
    for theta, scale in zip(rng.uniform(0, 2 * math.pi, 8), rng.uniform(0.0, 4.0, 8)):
        sample = bound_sample(body, theta, (2.0 / S) * 2.0 ** scale)
        assert sample.transform_ok
        assert sample.chord_ok
        assert sample.dilation_ok


def test_dilation_bound_past_threshold(disc):
    rho = dilation_threshold(disc) * 1.5
    sample = bound_sample(disc, 0.4, rho)
    assert sample.dilation_ratio is not None
    assert 0.0 < sample.dilation_ratio <= 2.0


def test_bound_sample_below_range(disc):
    with pytest.raises(ValueError):
        bound_sample(disc, 0.0, 0.5)


# --- weight tables

@pytest.fixture
def square_table(centered_square):
    return build_weight_table(centered_square, AngleInterval.full(), 8.0, radii_per_octave=8,
                              n_angles=64)


def test_weight_table_full_interval(square_table):
    assert square_table.rho_min == pytest.approx(1.0)
    assert square_table.rho_max == pytest.approx(8.0)
    assert np.all(square_table.values >= 0.0)
    spread = np.ptp(square_table.values, axis=1) / square_table.values.max(axis=1)
    assert np.all(spread <= 0.02)


def test_weight_table_range(square_table):
    with pytest.raises(ValueError):
        square_table(20.0, 0.0)
    assert float(square_table(3.0, 1.0)) > 0.0


def test_weight_table_file(tmp_path, square_table, centered_square, disc):
    path = str(tmp_path / "weights.csv")
    save_weight_table(square_table, path)
    loaded = load_weight_table(path, centered_square, AngleInterval.full())
    assert loaded.body_hash == square_table.body_hash
    np.testing.assert_allclose(loaded.values, square_table.values, rtol=0, atol=0)
    np.testing.assert_allclose(loaded.rhos, square_table.rhos, rtol=0, atol=0)
    assert loaded.radii_per_octave == 8
    with pytest.raises(ConfigError):
        load_weight_table(path, disc)
    with pytest.raises(ConfigError):
        load_weight_table(path, centered_square, AngleInterval(0.0, 1.0))


def test_trace_boundaries(centered_square, disc):
    np.testing.assert_allclose(trace_boundaries(centered_square),
                               [0.0, math.pi / 2, math.pi, 3 * math.pi / 2], atol=1e-12)
    assert len(trace_boundaries(disc)) == 0


def test_refined_angles():
    step = 2 * math.pi / 8
    nodes = refined_angles(8, [1.0])
    assert nodes[0] == 0.0
    assert np.all(np.diff(nodes) > 0.0) and nodes[-1] < 2 * math.pi
    assert np.all(np.isin(np.round(step * np.arange(8), 12), np.round(nodes, 12)))
    fine = 1.0 + (step / 4) * np.arange(-4, 5)
    assert np.all(np.min(np.abs(nodes[:, None] - fine[None, :]), axis=0) < 1e-12)
    assert len(nodes) == 8 + 9
    np.testing.assert_allclose(refined_angles(8, [1.0], refinement=1), step * np.arange(8))
    # boundaries at 0 and 2 pi wrap onto one refined patch
    assert len(refined_angles(8, [0.0, 2 * math.pi])) == 8 + 6


def test_weight_table_refines_at_trace_boundaries(centered_square):
    interval = AngleInterval(0.0, math.pi / 4)
    fine = build_weight_table(centered_square, interval, 8.0, radii_per_octave=8, n_angles=64)
    coarse = build_weight_table(centered_square, interval, 8.0, radii_per_octave=8, n_angles=64,
                                refinement=1)
    assert len(coarse.omegas) == 64
    assert len(fine.omegas) > 64
    # the upper end of omega - I sits just past the edge normal pi/2
    omega = math.pi / 2 + 0.6 * (2 * math.pi / 64)
    direct = weight_at(centered_square, interval, 8.0, omega)
    fine_error = abs(float(fine(8.0, omega)) - direct) / direct
    coarse_error = abs(float(coarse(8.0, omega)) - direct) / direct
    assert fine_error < coarse_error
    assert fine_error <= 0.02
    with pytest.raises(ConfigError):
        build_weight_table(centered_square, interval, 8.0, refinement=0)


def test_missing_weight_table(tmp_path):
    with pytest.raises(ConfigError):
        load_weight_table(str(tmp_path / "missing.csv"))


@pytest.mark.slow
def test_weight_table_spot_checks(centered_square):
    table = build_weight_table(centered_square, AngleInterval(0.0, math.pi / 2), 8.0)
    _, _, worst = validate_weight_table(table, centered_square, spot_checks=10)
    assert worst <= 0.01
