"""
Affine copies [tau, delta, theta] C = tau + delta sigma_theta C of a body on the torus.
"""
import math
from dataclasses import dataclass
from logging import debug
from typing import Tuple

import numpy as np

from core import ConfigError, ConvexBody, rotation_matrix
from core.constants import TORUS_CENTER, TORUS_DIAMETER


@dataclass(frozen=True)
class AffineTransform:
    tau: Tuple[float, float] = (0.0, 0.0)
    delta: float = 1.0
    theta: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigError(f"delta must lie in [0, 1], got {self.delta}")
        object.__setattr__(self, "tau", (float(self.tau[0]) % 1.0, float(self.tau[1]) % 1.0))

    def to_body(self, points) -> np.ndarray:
        """sigma_-theta (x - tau) / delta: the preimage in body coordinates."""
        pts = np.atleast_2d(np.asarray(points, dtype=float)) - np.asarray(self.tau)
        return (pts @ rotation_matrix(self.theta)) / self.delta

    def from_body(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.asarray(self.tau) + self.delta * (pts @ rotation_matrix(self.theta).T)


def circumscribed_disc(body: ConvexBody) -> Tuple[np.ndarray, float]:
    """A disc around the centroid containing the body."""
    center = np.asarray(body.centroid)
    radius = float(np.max(np.linalg.norm(body.sample_boundary() - center, axis=1)))
    # arcs between boundary samples can bulge past the sampled radius
    return center, radius * (1.0 + 1e-6) + 1e-12 + body.perimeter / 4096.0


def normalize_for_torus(body: ConvexBody) -> ConvexBody:
    """Scale down to longest diameter <= 0.8 (never up) and move the centroid to (1/2, 1/2)."""
    diameter = body.longest_diameter
    if diameter > TORUS_DIAMETER:
        body = body.scaled(TORUS_DIAMETER / diameter)
    cx, cy = body.centroid
    shift = (TORUS_CENTER[0] - cx, TORUS_CENTER[1] - cy)
    if math.hypot(*shift) > 0.0:
        body = body.translated(shift)
    debug("normalized %s: diameter %.6g, centroid %s", body.name, body.longest_diameter,
          body.centroid)
    return body
