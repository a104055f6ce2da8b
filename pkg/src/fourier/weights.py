"""
Spectral weight tables

    W(rho, omega) = int_I int_0^1 |FT_{[delta, theta] C}(rho u(omega))|^2 d delta d theta

on a polar grid: log-spaced radii, and uniform angles refined near the angular trace boundaries.
Since W(rho, omega) is the integral of the dilation average D(phi, rho) over phi in omega - I,
the table is built from D on a phi grid and one periodic cumulative integral per radius.
"""
import csv
import math
from dataclasses import dataclass, field
from logging import info, warning
from typing import Optional, Tuple

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from core import AngleInterval, ConfigError, ConvexBody, WeightTableError
from core.constants import (ANGLE_REFINEMENT, MAX_ANGLES, MIN_ANGLES, RADII_PER_OCTAVE,
                            SPOT_CHECK_RTOL, TWO_PI)

from .averages import ray_table, weight_at

CURVED_MAX_ANGLES = 4096


@dataclass
class SpectralWeightTable:
    """W[k, j] = W(rhos[k], omegas[j]); interpolation is bilinear in (log rho, omega) on rho^3 W."""
    body_hash: str
    interval: AngleInterval
    rhos: np.ndarray
    omegas: np.ndarray
    values: np.ndarray
    radii_per_octave: int = RADII_PER_OCTAVE
    _interpolator: Optional[RegularGridInterpolator] = field(default=None, repr=False)

    @property
    def rho_max(self) -> float:
        return float(self.rhos[-1])

    @property
    def rho_min(self) -> float:
        return float(self.rhos[0])

    def _build_interpolator(self) -> RegularGridInterpolator:
        scaled = self.values * self.rhos[:, None] ** 3
        # periodic padding in omega
        omegas = np.concatenate([self.omegas[-1:] - TWO_PI, self.omegas, self.omegas[:1] + TWO_PI])
        padded = np.concatenate([scaled[:, -1:], scaled, scaled[:, :1]], axis=1)
        return RegularGridInterpolator((np.log(self.rhos), omegas), padded, method="linear")

    def __call__(self, rho, omega) -> np.ndarray:
        rho = np.asarray(rho, dtype=float)
        omega = np.mod(np.asarray(omega, dtype=float), TWO_PI)
        if self._interpolator is None:
            self._interpolator = self._build_interpolator()
        inside = (rho >= self.rho_min * (1 - 1e-12)) & (rho <= self.rho_max * (1 + 1e-12))
        if not np.all(inside):
            raise ValueError(f"rho outside the table range [{self.rho_min}, {self.rho_max}]")
        r = np.clip(rho, self.rho_min, self.rho_max)
        points = np.stack([np.log(r), omega], axis=-1)
        return self._interpolator(points) / r ** 3


def radius_grid(rho_min: float, rho_max: float, radii_per_octave: int) -> np.ndarray:
    octaves = max(math.log2(rho_max / rho_min), 1.0 / radii_per_octave)
    count = max(int(math.ceil(octaves * radii_per_octave)), 1)
    return rho_min * 2.0 ** (np.arange(count + 1) * (octaves / count))


def angle_count(body: ConvexBody, rho_max: float) -> int:
    if body.is_polygon:
        return int(np.clip(8.0 * math.pi * rho_max, MIN_ANGLES, MAX_ANGLES))
    return int(np.clip(16.0 * math.pi * math.sqrt(rho_max), MIN_ANGLES, CURVED_MAX_ANGLES))


def _distinct_angles(angles, tol: float) -> np.ndarray:
    """Sorted angles in [0, 2 pi), with neighbours closer than tol merged."""
    nodes = np.mod(np.asarray(angles, dtype=float), TWO_PI)
    nodes = np.sort(np.where(TWO_PI - nodes <= tol, 0.0, nodes))
    if nodes.size:
        nodes = nodes[np.concatenate([[True], np.diff(nodes) > tol])]
    return nodes


def trace_boundaries(body: ConvexBody) -> np.ndarray:
    """Endpoints of the angular trace components and their antipodes, in [0, 2 pi)."""
    ends = np.array([a for c in body.angular_trace().components for a in (c.start, c.end)])
    return _distinct_angles(np.concatenate([ends, ends + math.pi]), 1e-12)


def refined_angles(n: int, boundaries, refinement: int = ANGLE_REFINEMENT) -> np.ndarray:
    """
    n uniform angles starting at 0, with `refinement` times that density within one step of
    every boundary.
    """
    step = TWO_PI / n
    nodes = [step * np.arange(n)]
    if refinement > 1:
        offsets = (step / refinement) * np.arange(-refinement, refinement + 1)
        nodes.extend(b + offsets for b in np.atleast_1d(boundaries))
    return _distinct_angles(np.concatenate(nodes), 1e-9 * step)


def _window_integrals(phis: np.ndarray, values: np.ndarray, omegas: np.ndarray,
                      interval: AngleInterval) -> np.ndarray:
    """
    For periodic samples values[i] = D(phis[i]) with phis[0] = 0, the integrals of D over
    omega - I at every omega (trapezoid rule, linear between nodes).
    """
    grid = np.append(phis, TWO_PI)
    closed = np.append(values, values[:1])
    cumulative = np.concatenate([[0.0], np.cumsum(0.5 * np.diff(grid) * (closed[:-1] + closed[1:]))])
    total = cumulative[-1]

    def primitive(x):
        turns = np.floor(x / TWO_PI)
        return turns * total + np.interp(x - turns * TWO_PI, grid, cumulative)

    hi = omegas - interval.start
    return primitive(hi) - primitive(hi - interval.length)


def build_weight_table(body: ConvexBody, interval: AngleInterval, rho_max: float,
                       radii_per_octave: int = RADII_PER_OCTAVE, n_angles: Optional[int] = None,
                       workers: int = 1, refinement: int = ANGLE_REFINEMENT) -> SpectralWeightTable:
    """
    Tabulate W(rho, omega) for 1 <= rho <= rho_max.

    D is sampled on n_angles uniform directions, refined near the angular trace boundaries where
    it peaks. The omega grid is refined where an end of omega - I meets such a boundary, which is
    where W bends sharply. refinement=1 keeps both grids uniform.
    """
    if rho_max < 1.0:
        raise ConfigError("weight tables need rho_max >= 1")
    if refinement < 1:
        raise ConfigError("angle refinement must be at least 1")
    rhos = radius_grid(1.0, rho_max, radii_per_octave)
    n = n_angles or angle_count(body, rho_max)
    boundaries = trace_boundaries(body)
    phis = refined_angles(n, boundaries, refinement)
    if interval.is_full:
        omegas = phis
    else:
        images = np.concatenate([boundaries + interval.start, boundaries + interval.end])
        omegas = refined_angles(n, images, refinement)
    info("weight table: %d radii x %d angles (%d uniform) up to rho=%.6g", len(rhos), len(phis), n,
         rho_max)
    d = ray_table(body, phis, rhos, workers)          # (len(phis), K)
    if interval.is_full:
        grid = np.append(phis, TWO_PI)
        closed = np.vstack([d, d[:1]])
        totals = (0.5 * np.diff(grid)) @ (closed[:-1] + closed[1:])
        values = np.repeat(totals[:, None], len(omegas), axis=1)
    else:
        values = np.stack([_window_integrals(phis, d[:, k], omegas, interval)
                           for k in range(len(rhos))])
    values = np.maximum(values, 0.0)
    return SpectralWeightTable(body.fingerprint, interval, rhos, omegas, values, radii_per_octave)


def validate_weight_table(table: SpectralWeightTable, body: ConvexBody, spot_checks: int = 50,
                          seed: int = 0, rtol: float = SPOT_CHECK_RTOL) -> Tuple[float, float, float]:
    """
    Compare the table with direct quadrature at random (rho, omega). Returns the worst spot check as
    (rho, omega, relative error); raises WeightTableError when it exceeds rtol.
    """
    rng = np.random.default_rng(seed)
    log_r = rng.uniform(math.log(table.rho_min), math.log(table.rho_max), spot_checks)
    omegas = rng.uniform(0.0, TWO_PI, spot_checks)
    worst = (0.0, 0.0, -1.0, 0.0, 0.0)
    for lr, om in zip(log_r, omegas):
        rho = math.exp(lr)
        tabled = float(table(rho, om))
        direct = weight_at(body, table.interval, rho, om)
        rel = abs(tabled - direct) / max(abs(direct), 1e-300)
        if rel > worst[2]:
            worst = (rho, om, rel, tabled, direct)
    rho, om, rel, tabled, direct = worst
    if rel > rtol:
        raise WeightTableError(rho, om, tabled, direct)
    info("weight table validated: worst spot-check rel. error %.3g at rho=%.6g", rel, rho)
    return rho, om, rel


def save_weight_table(table: SpectralWeightTable, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(f"# body_hash={table.body_hash}\n")
        f.write(f"# interval={table.interval.start!r},{table.interval.length!r}\n")
        f.write(f"# grid=radii_per_octave={table.radii_per_octave},n_angles={len(table.omegas)},"
                f"rho_min={table.rho_min!r},rho_max={table.rho_max!r}\n")
        writer = csv.writer(f)
        writer.writerow(["k", "j", "rho", "omega", "W"])
        for k, rho in enumerate(table.rhos):
            for j, om in enumerate(table.omegas):
                writer.writerow([k, j, repr(float(rho)), repr(float(om)),
                                 repr(float(table.values[k, j]))])


def load_weight_table(path: str, body: Optional[ConvexBody] = None,
                      interval: Optional[AngleInterval] = None) -> SpectralWeightTable:
    """Read a table; when body or interval is given, it must match the stored header."""
    header = {}
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = (line for line in f if not (line.startswith("#") and _header(line, header)))
            reader = csv.DictReader(lines)
            for row in reader:
                rows.append((int(row["k"]), int(row["j"]), float(row["rho"]),
                             float(row["omega"]), float(row["W"])))
    except (OSError, KeyError, ValueError) as e:
        raise ConfigError(f"cannot read weight table {path}: {e}") from e
    if not rows or "body_hash" not in header or "interval" not in header:
        raise ConfigError(f"weight table {path} is incomplete")

    start, length = (float(v) for v in header["interval"].split(","))
    stored = AngleInterval(start, length)
    if body is not None and body.fingerprint != header["body_hash"]:
        raise ConfigError(f"weight table {path} was built for another body")
    if interval is not None and (abs(interval.start - stored.start) > 1e-12
                                 or abs(interval.length - stored.length) > 1e-12):
        raise ConfigError(f"weight table {path} was built for another interval")

    n_k = max(r[0] for r in rows) + 1
    n_j = max(r[1] for r in rows) + 1
    rhos = np.zeros(n_k)
    omegas = np.zeros(n_j)
    values = np.zeros((n_k, n_j))
    for k, j, rho, om, w in rows:
        rhos[k], omegas[j], values[k, j] = rho, om, w
    grid = dict(item.split("=") for item in header.get("grid", "").split(",") if "=" in item)
    per_octave = int(grid.get("radii_per_octave", RADII_PER_OCTAVE))
    return SpectralWeightTable(header["body_hash"], stored, rhos, omegas, values, per_octave)


def _header(line: str, header: dict) -> bool:
    key, sep, value = line[1:].strip().partition("=")
    if sep:
        header[key.strip()] = value.strip()
    else:
        warning("ignoring weight table comment %r", line.strip())
    return True
