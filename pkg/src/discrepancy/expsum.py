"""
Exponential sums S(m) = sum_p exp(2 pi i p . m) over a point set, and the frequency sets they are
summed over.

Lattice-structured point sets have closed forms: S vanishes off a dual sublattice and equals N on
it. Everything else is summed directly in chunks of frequencies.
"""
import math
from logging import debug
from typing import Tuple

import numpy as np

from core import BudgetExceededError
from core.constants import EXPSUM_CHUNK, GENERIC_EXPSUM_BUDGET
from pointsets import Composite, PointSet, Product, Sublattice


def annulus_order(m: np.ndarray) -> np.ndarray:
    """Frequencies sorted by |m|^2, then by angle."""
    norm2 = m[:, 0] ** 2 + m[:, 1] ** 2
    angle = np.mod(np.arctan2(m[:, 1], m[:, 0]), 2.0 * math.pi)
    return m[np.lexsort((angle, norm2))]


def frequency_disc(R: float) -> np.ndarray:
    """All m in Z^2 with 0 < |m| <= R, as an (n, 2) integer array in annulus order."""
    k = int(math.floor(R))
    r = np.arange(-k, k + 1, dtype=np.int64)
    m = np.stack(np.meshgrid(r, r, indexing="ij"), axis=-1).reshape(-1, 2)
    norm2 = m[:, 0] ** 2 + m[:, 1] ** 2
    return annulus_order(m[(norm2 > 0) & (norm2 <= R * R)])


def _product_support(L: int, G: int, R: float) -> np.ndarray:
    i = np.arange(-int(R // L), int(R // L) + 1, dtype=np.int64) * L
    j = np.arange(-int(R // G), int(R // G) + 1, dtype=np.int64) * G
    m = np.stack(np.meshgrid(i, j, indexing="ij"), axis=-1).reshape(-1, 2)
    norm2 = m[:, 0] ** 2 + m[:, 1] ** 2
    return annulus_order(m[(norm2 > 0) & (norm2 <= R * R)])


def _sublattice_support(s: Sublattice, R: float) -> np.ndarray:
    # m = T^-1 (L n1, G n2) with T m = (q2 m1 + q1 m2, q2 m2 - q1 m1), |T m| = sqrt(q1^2 + q2^2) |m|
    q1, q2, L, G = s.q1, s.q2, s.L, s.G
    norm = q1 * q1 + q2 * q2
    reach = math.sqrt(norm) * R
    a = np.arange(-int(reach // L), int(reach // L) + 1, dtype=np.int64) * L
    b = np.arange(-int(reach // G), int(reach // G) + 1, dtype=np.int64) * G
    a, b = (v.ravel() for v in np.meshgrid(a, b, indexing="ij"))
    x = q2 * a - q1 * b
    y = q1 * a + q2 * b
    integral = (x % norm == 0) & (y % norm == 0)
    m = np.stack([x[integral] // norm, y[integral] // norm], axis=1)
    norm2 = m[:, 0] ** 2 + m[:, 1] ** 2
    return annulus_order(m[(norm2 > 0) & (norm2 <= R * R)])


def support_frequencies(P: PointSet, R: float) -> Tuple[np.ndarray, float]:
    """
    Frequencies 0 < |m| <= R outside of which S vanishes, with the covolume of the lattice they
    form (1 when no structure is known).
    """
    s = P.structure
    if isinstance(s, Product):
        return _product_support(s.L, s.G, R), float(P.distinct_count)
    if isinstance(s, Sublattice):
        return _sublattice_support(s, R), float(P.distinct_count)
    return frequency_disc(R), 1.0


def _generic(points: np.ndarray, m: np.ndarray) -> np.ndarray:
    out = np.empty(len(m), dtype=complex)
    for start in range(0, len(m), EXPSUM_CHUNK):
        chunk = m[start:start + EXPSUM_CHUNK].astype(float)
        # reduce the phase mod 1 before exponentiating
        phase = np.mod(points @ chunk.T, 1.0)
        out[start:start + EXPSUM_CHUNK] = np.exp(2j * math.pi * phase).sum(axis=0)
    return out


def _structured(P: PointSet, m: np.ndarray) -> np.ndarray:
    s = P.structure
    if isinstance(s, Product):
        hit = (m[:, 0] % s.L == 0) & (m[:, 1] % s.G == 0)
        return np.where(hit, float(s.L * s.G), 0.0).astype(complex)
    if isinstance(s, Sublattice):
        hit = (((s.q2 * m[:, 0] + s.q1 * m[:, 1]) % s.L == 0)
               & ((s.q2 * m[:, 1] - s.q1 * m[:, 0]) % s.G == 0))
        return np.where(hit, float(s.L * s.G), 0.0).astype(complex)
    if isinstance(s, Composite):
        total = np.full(len(m), float(s.leftover), dtype=complex)
        for block in s.blocks:
            total += _structured(block, m)
        return total
    return _generic(P.points, m)


def exp_sum(P: PointSet, m, generic: bool = False):
    """
    S(m) for one integer frequency (returns a complex) or an (n, 2) array (returns an array).
    `generic=True` forces the direct sum even for structured sets.
    """
    m = np.asarray(m, dtype=np.int64)
    scalar = m.ndim == 1
    m = np.atleast_2d(m)
    direct = generic or not isinstance(P.structure, (Product, Sublattice, Composite))
    if direct:
        work = float(len(P)) * len(m)
        if work > GENERIC_EXPSUM_BUDGET:
            raise BudgetExceededError(
                f"direct exponential sums over {len(P)} points and {len(m)} frequencies "
                f"exceed the budget of {GENERIC_EXPSUM_BUDGET:.3g}")
        debug("direct exponential sums: %d points x %d frequencies", len(P), len(m))
        values = _generic(P.points, m)
    else:
        values = _structured(P, m)
    return complex(values[0]) if scalar else values
