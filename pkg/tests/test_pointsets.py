import math
from fractions import Fraction

import numpy as np
import pytest

from core import ConfigError
from discrepancy import exp_sum, frequency_disc
from pointsets import (ROTATION_EXPONENTS, AnisotropicLatticeSpec, Composite, Generic, PointSet,
                       Product, RotatedLatticeSpec, Sublattice, anisotropic_exponents,
                       anisotropic_lattice, compose_general_N, composition_for_alpha, floor_power,
                       format_points_csv, plan_composition, read_points_csv, remainder_violations,
                       rotated_lattice, square_lattice, write_points_csv)


def test_points_are_reduced_mod_one():
    P = PointSet([[1.25, -0.25], [0.5, 1.0]])
    np.testing.assert_allclose(P.points, [[0.25, 0.75], [0.5, 0.0]])
    assert isinstance(P.structure, Generic)
    assert P.N == 2


@pytest.mark.parametrize("points", [np.zeros((0, 2)), [[0.1, math.nan]], [[0.1, 0.2, 0.3]]])
def test_bad_points(points):
    with pytest.raises(ConfigError):
        PointSet(points)


def test_translated_drops_structure():
    P = square_lattice(4).translated((0.3, 0.9))
    assert isinstance(P.structure, Generic)
    assert P.N == 16
    assert np.all((P.points >= 0.0) & (P.points < 1.0))


@pytest.mark.parametrize("n, exponent, expected", [
    (32, Fraction(3, 5), 8), (31, Fraction(3, 5), 7), (32, Fraction(2, 5), 4),
    (10 ** 10, Fraction(1, 2), 10 ** 5), (10 ** 10 - 1, 0.5, 10 ** 5 - 1),
    (512, Fraction(5, 9), 32), (0, Fraction(1, 3), 0), (7, 0, 1),
])
def test_floor_power(n, exponent, expected):
    assert floor_power(n, exponent) == expected


def test_square_lattice():
    assert square_lattice(1).points.tolist() == [[0.0, 0.0]]
    P = square_lattice(2)
    assert sorted(map(tuple, P.points.tolist())) == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.0),
                                                     (0.5, 0.5)]
    assert P.structure == Product(2, 2)


def test_rotated_lattice_small_case():
    spec = RotatedLatticeSpec(32, 1, 2)
    assert (spec.G, spec.L) == (8, 4)
    assert spec.omega == pytest.approx(math.atan(0.5))
    P = rotated_lattice(spec)
    assert len(P) == 32
    assert P.structure == Sublattice(1, 2, 4, 8)
    assert P.points[0].tolist() == [0.0, 0.0]
    assert P.points[1 * spec.G + 1].tolist() == [0.375, 0.5]


def test_rotated_lattice_is_turned_grid():
    spec = RotatedLatticeSpec(3000, 2, 3)
    P = rotated_lattice(spec)
    rng = np.random.default_rng(0)
    scale = math.hypot(spec.q1, spec.q2)
    c, s = math.cos(spec.omega), math.sin(spec.omega)
    for _ in range(100):
        l, g = int(rng.integers(spec.L)), int(rng.integers(spec.G))
        x, y = l / spec.L, g / spec.G
        # rotate by omega and dilate: (q2 x - q1 y, q1 x + q2 y)
        expected = np.mod(scale * np.array([c * x - s * y, s * x + c * y]), 1.0)
        diff = np.abs(P.points[l * spec.G + g] - expected)
        assert np.all(np.minimum(diff, 1.0 - diff) < 1e-9)


def test_rotated_spec_needs_coprime_pair():
    with pytest.raises(ConfigError):
        RotatedLatticeSpec(100, 2, 4)


def test_anisotropic_lattice():
    assert anisotropic_exponents(2.0) == (Fraction(5, 9), Fraction(4, 9))
    spec = AnisotropicLatticeSpec(512, 2.0)
    assert (spec.G, spec.L, spec.size) == (32, 16, 512)
    P = anisotropic_lattice(spec)
    assert P.structure == Product(16, 32)
    assert len(anisotropic_lattice(AnisotropicLatticeSpec(1, 2.0))) == 1
    with pytest.raises(ConfigError):
        AnisotropicLatticeSpec(10, 1.0)


def test_square_lattice_sum_support():
    P = square_lattice(8)
    m = frequency_disc(40.0)
    values = exp_sum(P, m)
    on = (m[:, 0] % 8 == 0) & (m[:, 1] % 8 == 0)
    np.testing.assert_allclose(values[on], 64.0)
    np.testing.assert_allclose(values[~on], 0.0)


def test_anisotropic_sum_support():
    P = anisotropic_lattice(AnisotropicLatticeSpec(512, 2.0))
    m = frequency_disc(40.0)
    on = (m[:, 0] % 16 == 0) & (m[:, 1] % 32 == 0)
    np.testing.assert_allclose(exp_sum(P, m)[on], 512.0)
    np.testing.assert_allclose(exp_sum(P, m)[~on], 0.0)


@pytest.mark.parametrize("P", [
    square_lattice(8),
    rotated_lattice(RotatedLatticeSpec(32, 1, 2)),
    rotated_lattice(RotatedLatticeSpec(300, 3, 1)),
    anisotropic_lattice(AnisotropicLatticeSpec(512, 2.0)),
    compose_general_N(100),
], ids=["square", "rotated-32", "rotated-300", "aniso-512", "compose-100"])
def test_fast_sums_match_direct_sums(P):
    m = frequency_disc(64.0)
    fast = exp_sum(P, m)
    direct = exp_sum(P, m, generic=True)
    np.testing.assert_allclose(fast, direct, rtol=0, atol=1e-9 * len(P))


# --- composition

def test_composition_exact_block():
    plan = plan_composition(96)
    assert plan.sizes == (96,)
    assert plan.ns == (112,)
    assert plan.leftover == 0


def test_composition_two_blocks():
    plan = plan_composition(100)
    assert plan.ns == (112, 6)
    assert plan.sizes == (96, 4)
    assert plan.remainders == (4, 0)


@pytest.mark.parametrize("N", [1, 2, 17, 96, 100, 1000, 4097])
def test_compose_general_N_size(N):
    P = compose_general_N(N)
    assert len(P) == N
    assert isinstance(P.structure, Composite)
    assert sum(len(b) for b in P.structure.blocks) + P.structure.leftover == N
    if P.structure.leftover:
        assert np.all(P.points[-P.structure.leftover:] == 0.0)


def test_composition_for_alpha():
    P = composition_for_alpha(600, 2.0)
    assert len(P) == 600
    assert all(isinstance(b.structure, Product) for b in P.structure.blocks)


def test_composition_rejects_bad_exponents():
    with pytest.raises(ConfigError):
        plan_composition(10, (Fraction(1, 2), Fraction(1, 2)))
    with pytest.raises(ConfigError):
        plan_composition(10, (0.7, 0.2))
    with pytest.raises(ConfigError):
        compose_general_N(50, (Fraction(2, 3), Fraction(1, 3)))
    with pytest.raises(ConfigError):
        plan_composition(0)


def test_remainder_bound():
    assert remainder_violations(2000) == []


@pytest.mark.slow
def test_remainder_bound_large():
    assert remainder_violations(10 ** 4) == []


def test_remainder_bound_per_stage():
    plan = plan_composition(9999, ROTATION_EXPONENTS)
    for j, r in enumerate(plan.remainders, start=1):
        assert r <= 4 ** j * 9999 ** (0.6 ** j)


# --- CSV

@pytest.mark.parametrize("P", [square_lattice(3), rotated_lattice(RotatedLatticeSpec(40)),
                               compose_general_N(30), PointSet([[0.1, 0.7], [0.3, 0.3]])])
def test_points_csv(tmp_path, P):
    path = str(tmp_path / "points.csv")
    write_points_csv(P, path)
    loaded = read_points_csv(path)
    np.testing.assert_array_equal(loaded.points, P.points)
    assert loaded.structure.to_json() == P.structure.to_json()


def test_points_csv_header():
    text = format_points_csv(square_lattice(2))
    lines = text.splitlines()
    assert lines[0] == '# structure={"tag": "product", "L": 2, "G": 2}'
    assert lines[1] == "x,y"
    assert len(lines) == 6


def test_unreadable_points(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0.1,abc\n")
    with pytest.raises(ConfigError):
        read_points_csv(str(path))
    with pytest.raises(ConfigError):
        read_points_csv(str(tmp_path / "missing.csv"))
