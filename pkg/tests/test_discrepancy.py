import math

import numpy as np
import pytest

from bodies import make_disc, make_rectangle, make_square
from core import AngleInterval, ConfigError, TableCoverageError
from discrepancy import (AffineTransform, DiscrepancyCounter, annulus_order,
                         cassels_montgomery_check, d2_montecarlo, d2_parseval, discrepancy,
                         exp_sum, frequency_disc, normalize_for_torus, support_frequencies,
                         tail_constant)
from fourier import build_weight_table
from pointsets import (PointSet, RotatedLatticeSpec, compose_general_N, rotated_lattice,
                       square_lattice)


def _random_points(n, seed=0):
    return PointSet(np.random.default_rng(seed).random((n, 2)))


@pytest.fixture(scope="module")
def torus_square():
    return normalize_for_torus(make_square())


@pytest.fixture(scope="module")
def square_table(torus_square):
    return build_weight_table(torus_square, AngleInterval.full(), 16.0, radii_per_octave=8,
                              n_angles=64)


# --- affine copies

def test_affine_transform_checks_delta():
    with pytest.raises(ConfigError):
        AffineTransform((0.0, 0.0), 1.5, 0.0)
    assert AffineTransform((1.25, -0.5), 0.5).tau == (0.25, 0.5)


def test_affine_transform_inverse():
    t = AffineTransform((0.3, 0.6), 0.4, 1.1)
    pts = np.array([[0.1, 0.2], [-0.3, 0.5]])
    np.testing.assert_allclose(t.to_body(t.from_body(pts)), pts, atol=1e-12)


def test_normalize_for_torus():
    body = normalize_for_torus(make_disc())
    assert body.longest_diameter == pytest.approx(0.8, rel=1e-9)
    assert body.centroid == pytest.approx((0.5, 0.5), abs=1e-9)
    small = normalize_for_torus(make_disc(0.1))
    assert small.longest_diameter == pytest.approx(0.2, rel=1e-9)


# --- counting discrepancy

def test_single_point_discrepancy():
    body = make_disc(0.1)
    P = PointSet([[0.5, 0.5]])
    assert discrepancy(P, body, AffineTransform((0.0, 0.0))) == pytest.approx(-math.pi / 100,
                                                                            abs=1e-10)
    assert discrepancy(P, body, AffineTransform((0.5, 0.5))) == pytest.approx(1 - math.pi / 100,
                                                                            abs=1e-10)


def test_counts_wrap_around_the_torus():
    body = make_rectangle(0.2, 0.2)
    P = PointSet([[0.95, 0.02], [0.5, 0.5]])
    counter = DiscrepancyCounter(body)
    assert counter.count(P.points, AffineTransform((0.0, 0.0))) == 1
    assert counter.count(P.points, AffineTransform((0.0, 0.0), 0.0)) == 0


@pytest.mark.parametrize("delta", [1.0, 0.5])
@pytest.mark.parametrize("theta", [0.0, math.pi / 2])
def test_discrepancy_has_mean_zero(delta, theta):
    # sides on the tau grid make the grid average exact
    body = make_rectangle(0.25, 0.25)
    P = _random_points(20, seed=4)
    counter = DiscrepancyCounter(body)
    grid = np.arange(64) / 64.0
    values = [counter.discrepancy(P.points, AffineTransform((x, y), delta, theta))
              for x in grid for y in grid]
    assert np.mean(values) == pytest.approx(0.0, abs=1e-9)


# --- exponential sums

def test_exp_sum_examples():
    P = square_lattice(8)
    assert exp_sum(P, (8, 0)) == pytest.approx(64.0)
    assert exp_sum(P, (1, 0)) == pytest.approx(0.0, abs=1e-12)
    origin = PointSet([[0.0, 0.0]])
    assert exp_sum(origin, (3, -7)) == pytest.approx(1.0)


def test_exp_sum_scalar_and_array():
    P = _random_points(5)
    assert isinstance(exp_sum(P, (1, 2)), complex)
    assert exp_sum(P, [[1, 2], [0, 1]]).shape == (2,)


def test_frequency_disc():
    m = frequency_disc(2.0)
    assert len(m) == 12
    assert not np.any(np.all(m == 0, axis=1))
    norms = m[:, 0] ** 2 + m[:, 1] ** 2
    assert np.all(np.diff(norms) >= 0)
    np.testing.assert_array_equal(annulus_order(m[::-1]), m)


@pytest.mark.parametrize("P", [square_lattice(8), rotated_lattice(RotatedLatticeSpec(300, 1, 2))],
                         ids=["product", "sublattice"])
def test_support_frequencies_cover_the_sum(P):
    R = 48.0
    support, covolume = support_frequencies(P, R)
    assert covolume == P.distinct_count
    everything = frequency_disc(R)
    values = np.abs(exp_sum(P, everything))
    on = {tuple(m) for m in support.tolist()}
    for m, v in zip(everything.tolist(), values):
        if tuple(m) not in on:
            assert v < 1e-9


def test_support_frequencies_generic():
    support, covolume = support_frequencies(_random_points(3), 5.0)
    assert covolume == 1.0
    assert len(support) == len(frequency_disc(5.0))


# --- Parseval route

def test_d2_single_point(torus_square, square_table):
    P = PointSet([[0.2, 0.7]])
    R = 12.0
    result = d2_parseval(P, torus_square, AngleInterval.full(), R, square_table)
    m = frequency_disc(R)
    expected = math.fsum(square_table(np.hypot(m[:, 0], m[:, 1]),
                                      np.arctan2(m[:, 1], m[:, 0])).tolist())
    assert result.value == pytest.approx(expected, rel=1e-9)
    assert result.method == "parseval"
    assert result.tail > 0.0
    assert result.to_json()["N"] == 1


@pytest.mark.parametrize("P", [square_lattice(4), rotated_lattice(RotatedLatticeSpec(300, 1, 2))],
                         ids=["product", "sublattice"])
def test_d2_structured_matches_generic(torus_square, square_table, P):
    generic = PointSet(P.points)
    fast = d2_parseval(P, torus_square, AngleInterval.full(), 16.0, square_table)
    slow = d2_parseval(generic, torus_square, AngleInterval.full(), 16.0, square_table)
    assert fast.value == pytest.approx(slow.value, rel=1e-9)
    assert fast.frequencies < slow.frequencies


def test_d2_translation_invariance(torus_square, square_table):
    P = _random_points(30, seed=1)
    a = d2_parseval(P, torus_square, AngleInterval.full(), 16.0, square_table)
    b = d2_parseval(P.translated((0.37, 0.81)), torus_square, AngleInterval.full(), 16.0,
                    square_table)
    assert a.value == pytest.approx(b.value, rel=1e-9)


def test_d2_radius_doubling(torus_square, square_table):
    P = compose_general_N(50)
    half = d2_parseval(P, torus_square, AngleInterval.full(), 8.0, square_table)
    full = d2_parseval(P, torus_square, AngleInterval.full(), 16.0, square_table)
    assert 0.0 <= half.value <= full.value
    assert full.value - half.value <= half.tail


def test_d2_table_checks(torus_square, square_table):
    P = _random_points(4)
    with pytest.raises(TableCoverageError):
        d2_parseval(P, torus_square, AngleInterval.full(), 32.0, square_table)
    with pytest.raises(ConfigError):
        d2_parseval(P, normalize_for_torus(make_disc()), AngleInterval.full(), 8.0, square_table)
    with pytest.raises(ConfigError):
        d2_parseval(P, torus_square, AngleInterval(0.0, 1.0), 8.0, square_table)


def test_tail_constant(square_table):
    c = tail_constant(square_table, 16.0)
    rows = square_table.rhos >= 8.0
    expected = square_table.values[rows] * square_table.rhos[rows, None] ** 3
    assert c == pytest.approx(np.max(expected))


# --- Monte Carlo route

def test_montecarlo_is_reproducible(torus_square):
    P = _random_points(8, seed=2)
    a = d2_montecarlo(P, torus_square, AngleInterval.full(), 1000, seed=5)
    b = d2_montecarlo(P, torus_square, AngleInterval.full(), 1000, seed=5)
    assert a.value == b.value
    assert a.stderr == b.stderr
    assert a.value >= 0.0 and a.stderr > 0.0
    assert a.seed == 5 and a.method == "montecarlo"


def test_montecarlo_needs_samples(torus_square):
    with pytest.raises(ConfigError):
        d2_montecarlo(_random_points(2), torus_square, AngleInterval.full(), 999)


@pytest.mark.slow
def test_montecarlo_ignores_worker_count(torus_square):
    P = _random_points(8, seed=2)
    a = d2_montecarlo(P, torus_square, AngleInterval.full(), 3000, seed=9, workers=1)
    b = d2_montecarlo(P, torus_square, AngleInterval.full(), 3000, seed=9, workers=3)
    assert a.value == b.value


@pytest.mark.slow
@pytest.mark.parametrize("P", [PointSet([[0.1, 0.3]]), square_lattice(3), _random_points(6, 3),
                               rotated_lattice(RotatedLatticeSpec(40, 1, 2)), compose_general_N(20)],
                         ids=["single", "square-9", "random-6", "rotated-40", "compose-20"])
def test_parseval_agrees_with_montecarlo(P):
    body = normalize_for_torus(make_square())
    table = build_weight_table(body, AngleInterval.full(), 64.0)
    parseval = d2_parseval(P, body, AngleInterval.full(), 64.0, table)
    mc = d2_montecarlo(P, body, AngleInterval.full(), 100_000, seed=1)
    assert abs(parseval.value - mc.value) <= 2 * (mc.stderr + parseval.tail)


# --- Cassels-Montgomery

@pytest.mark.parametrize("M", [4, 10, 25])
def test_cassels_montgomery_single_point(M):
    report = cassels_montgomery_check(PointSet([[0.0, 0.0]]), (M, M), (1, 1))
    assert report.c_U == 1
    assert report.lhs == pytest.approx((2 * M + 1) ** 2 - 1)
    assert report.rhs == pytest.approx(M * M - 1)
    assert report.passed


def test_cassels_montgomery_random_points():
    report = cassels_montgomery_check(_random_points(100, seed=8), (40, 40), (1, 1))
    assert report.passed
    assert report.to_json()["passed"] is True


@pytest.mark.parametrize("M", [16, 32, 64])
def test_cassels_montgomery_structured(M):
    for P in (square_lattice(8), rotated_lattice(RotatedLatticeSpec(300)), compose_general_N(200)):
        assert cassels_montgomery_check(P, (M, M), (1, 1)).passed


def test_cassels_montgomery_many_random_sets():
    rng = np.random.default_rng(12)
    for _ in range(50):
        n = int(rng.integers(1, 40))
        P = PointSet(rng.random((n, 2)))
        assert cassels_montgomery_check(P, (6, 9), (1.5, 1)).passed


@pytest.mark.slow
def test_cassels_montgomery_thousand_random_sets():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        n = int(rng.integers(1, 200))
        M = tuple(int(m) for m in rng.integers(1, 33, 2))
        U = tuple(float(u) for u in rng.uniform(0.5, 2.0, 2))
        P = PointSet(rng.random((n, 2)))
        assert cassels_montgomery_check(P, M, U).passed


def test_cassels_montgomery_rejects_empty_rectangles():
    with pytest.raises(ConfigError):
        cassels_montgomery_check(PointSet([[0.0, 0.0]]), (0, 3), (1, 1))
