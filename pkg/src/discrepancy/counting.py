"""
Counting discrepancy of a point set against affine copies of a body:

    D(P, [tau, delta, theta] C) = sum_p sum_n 1_{[tau, delta, theta] C}(p + n) - N delta^2 |C|.
"""
import math

import numpy as np

from core import ConvexBody
from pointsets import PointSet

from .transform import AffineTransform, circumscribed_disc


class DiscrepancyCounter:
    """Counts lattice translates of the points inside affine copies of one body."""

    def __init__(self, body: ConvexBody):
        self.body = body
        self.area = body.area
        self.center, self.radius = circumscribed_disc(body)

    def count(self, points: np.ndarray, t: AffineTransform) -> int:
        if t.delta == 0.0:
            return 0
        c = t.from_body(self.center)[0]
        r = t.delta * self.radius
        nx = np.arange(math.floor(c[0] - r) - 1, math.ceil(c[0] + r) + 1)
        ny = np.arange(math.floor(c[1] - r) - 1, math.ceil(c[1] + r) + 1)
        shifts = np.stack(np.meshgrid(nx, ny, indexing="ij"), axis=-1).reshape(-1, 2)
        candidates = (points[:, None, :] + shifts[None, :, :]).reshape(-1, 2)
        near = candidates[np.sum((candidates - c) ** 2, axis=1) <= r * r]
        if len(near) == 0:
            return 0
        return int(np.count_nonzero(self.body.contains(t.to_body(near))))

    def discrepancy(self, points: np.ndarray, t: AffineTransform) -> float:
        return self.count(points, t) - len(points) * t.delta ** 2 * self.area


def discrepancy(P: PointSet, body: ConvexBody, t: AffineTransform) -> float:
    """Number of translates p + n inside tau + delta sigma_theta C, minus N delta^2 |C|."""
    return DiscrepancyCounter(body).discrepancy(P.points, t)
