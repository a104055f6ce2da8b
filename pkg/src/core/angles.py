"""
Angles on the circle of length 2*pi, the ordered distance eta and closed angle intervals.
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .constants import TWO_PI
from .errors import ConfigError


def canonical(theta: float) -> float:
    """Representative of theta in [0, 2*pi)."""
    value = math.fmod(theta, TWO_PI)
    if value < 0.0:
        value += TWO_PI
    if value >= TWO_PI:
        value = 0.0
    return value


def eta(p: float, x1: float, x2: float) -> float:
    """
    Ordered distance from x1 to x2 on the circle of length p.

    Returns the y in [0, p) with x1 + y = x2 (mod p).
    """
    if not (math.isfinite(p) and math.isfinite(x1) and math.isfinite(x2)):
        raise ValueError("eta needs finite arguments")
    if p <= 0.0:
        raise ValueError("eta needs a positive period")
    y = math.fmod(x2 - x1, p)
    if y < 0.0:
        y += p
    if y >= p:
        y = 0.0
    return y


def unit(theta):
    """u(theta) = (cos theta, sin theta); vectorized over theta."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([np.cos(theta), np.sin(theta)], axis=-1)


def unit_perp(theta):
    """u'(theta) = (-sin theta, cos theta); vectorized over theta."""
    theta = np.asarray(theta, dtype=float)
    return np.stack([-np.sin(theta), np.cos(theta)], axis=-1)


def rotation_matrix(angle: float) -> np.ndarray:
    """Counterclockwise rotation sigma_angle."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class AngleInterval:
    """Closed arc [start, start + length] on the circle of angles, wraparound allowed."""
    start: float
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.start) and math.isfinite(self.length)):
            raise ConfigError("angle interval needs finite start and length")
        if self.length < 0.0 or self.length > TWO_PI * (1.0 + 1e-12):
            raise ConfigError(f"angle interval length {self.length} outside [0, 2*pi]")
        object.__setattr__(self, "start", canonical(self.start))
        object.__setattr__(self, "length", min(float(self.length), TWO_PI))

    @classmethod
    def full(cls) -> "AngleInterval":
        return cls(0.0, TWO_PI)

    @classmethod
    def between(cls, a: float, b: float) -> "AngleInterval":
        """The arc from a counterclockwise to b."""
        return cls(a, eta(TWO_PI, a, b))

    @classmethod
    def centered(cls, center: float, length: float) -> "AngleInterval":
        return cls(center - 0.5 * length, length)

    @property
    def end(self) -> float:
        return self.start + self.length

    @property
    def is_full(self) -> bool:
        return self.length >= TWO_PI

    def contains(self, theta: float, tol: float = 0.0) -> bool:
        """Closed membership, with an optional angular slack on both ends."""
        if self.is_full:
            return True
        return eta(TWO_PI, self.start - tol, theta) <= self.length + 2.0 * tol

    def reflected_from(self, omega: float) -> "AngleInterval":
        """The set omega - I."""
        return AngleInterval(omega - self.start - self.length, self.length)

    def breakpoints_inside(self, angles) -> List[float]:
        """Offsets from start of the given angles that fall strictly inside the interval."""
        out = []
        for a in angles:
            d = eta(TWO_PI, self.start, a)
            if 0.0 < d < self.length:
                out.append(d)
        return sorted(out)


def arc_intersections(a_start: float, a_len: float,
                      b_start: float, b_len: float) -> List[Tuple[float, float]]:
    """
    Intersection of two closed arcs as a list of (start, length) arcs.

    Each input arc has length in [0, 2*pi]. Zero-length pieces are kept; callers that work
    with open arcs discard them.
    """
    if a_len >= TWO_PI:
        return [(canonical(b_start), b_len)]
    if b_len >= TWO_PI:
        return [(canonical(a_start), a_len)]
    out = []
    d = eta(TWO_PI, a_start, b_start)
    # b occupies [d, d + b_len] and [d - 2pi, d - 2pi + b_len] in a's frame
    for lo in (d, d - TWO_PI):
        hi = lo + b_len
        s = max(lo, 0.0)
        e = min(hi, a_len)
        if e >= s:
            out.append((canonical(a_start + s), e - s))
    return out


def open_arc_intersections(a_start: float, a_len: float,
                           b_start: float, b_len: float) -> List[Tuple[float, float]]:
    """Intersection of two open arcs; only pieces of positive length survive."""
    return [(s, l) for s, l in arc_intersections(a_start, a_len, b_start, b_len) if l > 0.0]
