"""
Affine quadratic discrepancy

    D2(P, C, I) = int_I int_0^1 int_T2 |D(P, [tau, delta, theta] C)|^2 d tau d delta d theta

by Parseval, as sum_{m != 0} |S(m)|^2 W(m) with the spectral weight W of (C, I), and by Monte
Carlo over uniform (tau, delta, theta).
"""
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from logging import debug, info
from typing import Optional

import numpy as np

from core import AngleInterval, ConfigError, ConvexBody, TableCoverageError
from core.constants import RESULT_SCHEMA_VERSION
from fourier import SpectralWeightTable
from pointsets import PointSet

from .counting import DiscrepancyCounter
from .expsum import exp_sum, support_frequencies
from .transform import AffineTransform

MIN_MONTECARLO_SAMPLES = 1000
MONTECARLO_CHUNK = 1000


@dataclass
class D2Result:
    value: float
    R: Optional[float]
    tail: float
    method: str
    N: int
    stderr: Optional[float] = None
    seed: Optional[int] = None
    body: str = ""
    interval: AngleInterval = field(default_factory=AngleInterval.full)
    frequencies: int = 0

    def to_json(self) -> dict:
        return {"schema_version": RESULT_SCHEMA_VERSION, "N": self.N, "body": self.body,
                "I": [self.interval.start, self.interval.length], "method": self.method,
                "value": self.value, "R": self.R, "tail": self.tail, "stderr": self.stderr,
                "seed": self.seed}


def _check_table(table: SpectralWeightTable, body: ConvexBody, interval: AngleInterval, R: float):
    if table.body_hash != body.fingerprint:
        raise ConfigError("weight table was built for another body")
    if (abs(table.interval.start - interval.start) > 1e-12
            or abs(table.interval.length - interval.length) > 1e-12):
        raise ConfigError("weight table was built for another interval")
    if R > table.rho_max * (1.0 + 1e-12):
        raise TableCoverageError(R, table.rho_max)


def tail_constant(table: SpectralWeightTable, R: float) -> float:
    """max of rho^3 W over the tabulated radii in [R/2, R]."""
    rows = (table.rhos >= 0.5 * R * (1 - 1e-12)) & (table.rhos <= R * (1 + 1e-12))
    if not np.any(rows):
        rows = np.zeros(len(table.rhos), dtype=bool)
        rows[int(np.argmin(np.abs(table.rhos - R)))] = True
    return float(np.max(table.values[rows] * table.rhos[rows, None] ** 3))


def d2_parseval(P: PointSet, body: ConvexBody, interval: AngleInterval, R: float,
                table: SpectralWeightTable) -> D2Result:
    """
    sum over 0 < |m| <= R of |S(m)|^2 W(m), accumulated annulus by annulus. The tail bound is
    c N^2 2 pi / (R covolume), c the largest rho^3 W on [R/2, R] and covolume that of the
    frequency lattice carrying S.
    """
    _check_table(table, body, interval, R)
    freqs, covolume = support_frequencies(P, R)
    freqs = freqs[np.hypot(freqs[:, 0], freqs[:, 1]) >= table.rho_min * (1 - 1e-12)]
    if len(freqs):
        power = np.abs(exp_sum(P, freqs)) ** 2
        radius = np.hypot(freqs[:, 0], freqs[:, 1])
        weights = table(radius, np.arctan2(freqs[:, 1], freqs[:, 0]))
        terms = power * weights
        # one partial sum per unit annulus, in increasing radius
        annuli = np.bincount(np.floor(radius).astype(np.int64), weights=terms)
        value = math.fsum(annuli.tolist())
    else:
        value = 0.0
    tail = tail_constant(table, R) * len(P) ** 2 * 2.0 * math.pi / (R * covolume)
    debug("d2 parseval N=%d R=%.6g: %d frequencies, value %.6g, tail %.3g",
          len(P), R, len(freqs), value, tail)
    return D2Result(value, float(R), tail, "parseval", len(P), body=body.name,
                    interval=interval, frequencies=len(freqs))


def _montecarlo_chunk(args):
    points, body, interval, count, seed_seq = args
    rng = np.random.Generator(np.random.Philox(seed_seq))
    taus = rng.random((count, 2))
    deltas = 1.0 - rng.random(count)
    thetas = interval.start + interval.length * rng.random(count)
    counter = DiscrepancyCounter(body)
    return np.array([counter.discrepancy(points, AffineTransform(tuple(tau), delta, theta)) ** 2
                     for tau, delta, theta in zip(taus, deltas, thetas)])


def d2_montecarlo(P: PointSet, body: ConvexBody, interval: AngleInterval, samples: int,
                  seed: int = 0, workers: int = 1) -> D2Result:
    """
    |I| times the mean of D^2 over uniform (tau, delta, theta); stderr from the sample variance.
    Samples are drawn in fixed chunks with seeds spawned from `seed`, so the estimate does not
    depend on `workers`.
    """
    if samples < MIN_MONTECARLO_SAMPLES:
        raise ConfigError(f"Monte Carlo needs at least {MIN_MONTECARLO_SAMPLES} samples")
    counts = [MONTECARLO_CHUNK] * (samples // MONTECARLO_CHUNK)
    if samples % MONTECARLO_CHUNK:
        counts.append(samples % MONTECARLO_CHUNK)
    seeds = np.random.SeedSequence(seed).spawn(len(counts))
    jobs = [(P.points, body, interval, c, s) for c, s in zip(counts, seeds)]
    info("d2 monte carlo N=%d: %d samples in %d chunks", len(P), samples, len(jobs))
    if workers <= 1:
        parts = [_montecarlo_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_montecarlo_chunk, jobs))
    squares = np.concatenate(parts)
    value = interval.length * math.fsum(squares.tolist()) / len(squares)
    stderr = interval.length * float(np.std(squares, ddof=1)) / math.sqrt(len(squares))
    return D2Result(value, None, 0.0, "montecarlo", len(P), stderr=stderr, seed=seed,
                    body=body.name, interval=interval)
