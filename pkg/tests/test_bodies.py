import csv
import math

import numpy as np
import pytest

from bodies import (F_alpha_chord_oracle, G_alpha_chord_oracle, IntermediateBodySpec, OracleRow,
                    body_kinds, dump_oracle_rows, f_alpha_level, make_C, make_G_body, make_H,
                    parse_angle, parse_body_spec, register_body_kind, solve_f_alpha)
from core import ConfigError, InvalidBodyError, canonical


@pytest.mark.parametrize("text, expected", [
    ("pi/2", math.pi / 2), ("3*pi/4", 0.75 * math.pi), ("0.5pi", 0.5 * math.pi), ("2", 2.0),
    ("pi", math.pi),
])
def test_parse_angle(text, expected):
    assert parse_angle(text) == pytest.approx(expected)


def test_parse_angle_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_angle("north")


@pytest.mark.parametrize("spec, psi", [
    ("disc", 0.0), ("square", math.pi / 2), ("hexagon", math.pi / 3), ("polygon:8", math.pi / 4),
    ("rect:1x3", math.pi / 2),
])
def test_body_specs(spec, psi):
    assert parse_body_spec(spec).psi == pytest.approx(psi, abs=1e-9)


def test_unknown_body_kind():
    with pytest.raises(ConfigError, match="unknown body kind"):
        parse_body_spec("blob")


def test_bad_body_parameters():
    with pytest.raises(ConfigError):
        parse_body_spec("rect:wide")
    with pytest.raises(ConfigError):
        parse_body_spec("disc:radius=1,colour=red")


def test_registered_body_kind(unit_square):
    register_body_kind("unit-square", lambda: unit_square)
    assert "unit-square" in body_kinds()
    assert parse_body_spec("unit-square") is unit_square


def test_spec_rejects_bad_parameters():
    with pytest.raises(InvalidBodyError):
        IntermediateBodySpec(math.pi, 2.0)
    with pytest.raises(InvalidBodyError):
        IntermediateBodySpec(math.pi / 2, 1.0)
    with pytest.raises(InvalidBodyError):
        IntermediateBodySpec(math.pi / 2, 2.0, eps=-0.1)


def test_H_corner():
    body = make_H(IntermediateBodySpec(math.pi / 2, 2.0))
    assert body.psi == pytest.approx(math.pi / 2, rel=1e-6)
    corner = body.normal_interval(0.0)
    assert corner.start == pytest.approx(0.0, abs=1e-9)
    assert corner.length == pytest.approx(math.pi / 2, rel=1e-9)
    assert len(body.angular_points()) == 2


def test_H_is_centrally_symmetric():
    body = make_H(IntermediateBodySpec(math.pi / 2, 2.0))
    cx, cy = body.centroid
    centered = body.translated((-cx, -cy))
    for theta in np.linspace(0.0, math.pi, 9):
        assert centered.support(theta) == pytest.approx(centered.support(theta + math.pi),
                                                        abs=1e-9)


def test_H_rejects_long_power_arc():
    with pytest.raises(InvalidBodyError):
        make_H(IntermediateBodySpec(math.pi / 2, 2.0, eps=2.0))


def test_C_corner_and_symmetry():
    body = make_C(IntermediateBodySpec(math.pi / 2, 2.0))
    assert body.psi == pytest.approx(math.pi / 2, rel=1e-6)
    assert body.longest_diameter == pytest.approx(0.8, rel=1e-6)
    corner = body.normal_interval(0.0)
    assert canonical(corner.start) == pytest.approx(7 * math.pi / 4, abs=1e-9)
    assert corner.length == pytest.approx(math.pi / 2, rel=1e-9)
    for theta in np.linspace(0.1, 3.0, 7):
        assert body.support(theta) == pytest.approx(body.support(-theta), abs=1e-9)


def test_C_from_spec_string():
    body = parse_body_spec("C:phi=pi/2,alpha=2")
    assert body.name.startswith("C:")
    assert body.psi == pytest.approx(math.pi / 2, rel=1e-6)


# --- oracles

@pytest.mark.parametrize("alpha, rho", [(2.0, 1e4), (3.0, 1e3), (1.5, 1e6)])
def test_F_oracle_vertical(alpha, rho):
    assert F_alpha_chord_oracle(alpha, math.pi / 2, rho) == pytest.approx(rho ** (-1 / alpha),
                                                                          rel=1e-10)


def test_F_oracle_tilted_regime():
    # past the regime boundary the chord behaves like 1 / (rho (pi/2 - theta))
    gap = 0.3
    values = [F_alpha_chord_oracle(2.0, math.pi / 2 - gap, rho) * gap * rho
              for rho in (1e5, 1e6, 1e7)]
    assert values[-1] == pytest.approx(values[-2], rel=0.05)
    assert 0.5 < values[-1] < 2.0


def test_F_inversion_round_trip():
    for depth in (1e-6, 1e-3, 0.1):
        x = solve_f_alpha(2.5, 1.2, depth)
        assert f_alpha_level(2.5, 1.2, x) == pytest.approx(depth, rel=1e-10)


def test_G_oracle_vertical():
    total, left, right = G_alpha_chord_oracle(2.0, math.pi / 2, 1e4)
    assert total == pytest.approx(2e-2, rel=1e-10)
    assert left == pytest.approx(right, rel=1e-10)


@pytest.mark.parametrize("offset", [0.01, 0.1, 0.3])
@pytest.mark.parametrize("rho", [10.0, 1e3, 1e5])
def test_G_oracle_semi_chord_balance(offset, rho):
    total, left, right = G_alpha_chord_oracle(2.0, math.pi / 2 + offset, rho)
    assert left + right == pytest.approx(total, rel=1e-12)
    assert left <= 2 ** 2 * right


def test_G_oracle_second_regime_exponent():
    t1, _, _ = G_alpha_chord_oracle(2.0, math.pi / 2 + 0.1, 1e4)
    t2, _, _ = G_alpha_chord_oracle(2.0, math.pi / 2 + 0.1, 4e4)
    assert t1 / t2 == pytest.approx(2.0, rel=1e-6)


@pytest.mark.parametrize("offset", [0.0, 0.05, 0.2])
def test_G_body_chords_match_oracle(offset):
    body = make_G_body(2.0)
    theta = math.pi / 2 + offset
    lam = 1e-3
    record = body.semi_chords(theta, lam)
    total, left, right = G_alpha_chord_oracle(2.0, theta, 1.0 / lam)
    assert record.base.length == pytest.approx(total, rel=1e-6)
    assert sorted([record.left_len, record.right_len]) == pytest.approx(sorted([left, right]),
                                                                        rel=1e-5)


def test_dump_oracle_rows(tmp_path):
    path = tmp_path / "oracle.csv"
    total, left, right = G_alpha_chord_oracle(2.0, math.pi / 2, 100.0)
    dump_oracle_rows(str(path), [OracleRow(2.0, math.pi / 2, 100.0, total, left, right),
                                 OracleRow(2.0, 1.0, 100.0, 0.5)])
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert [r["alpha"] for r in rows] == ["2.0", "2.0"]
    assert float(rows[0]["total"]) == total
    assert rows[1]["left"] == ""
