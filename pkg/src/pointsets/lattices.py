"""
Lattice families: square lattices, rational rotations of anisotropic grids and the product grids
(l/L, g/G) matched to a boundary exponent alpha.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from logging import debug
from typing import Tuple, Union

import numpy as np

from core import ConfigError

from .pointset import PointSet, Product, Sublattice

Exponent = Union[Fraction, float, int]

ROTATION_EXPONENTS = (Fraction(3, 5), Fraction(2, 5))


def as_fraction(exponent: Exponent) -> Fraction:
    if isinstance(exponent, Fraction):
        return exponent
    return Fraction(exponent).limit_denominator(1000)


@lru_cache(maxsize=1 << 16)
def _floor_power(n: int, p: int, q: int) -> int:
    estimate = n ** (p / q)
    guess = math.floor(estimate)
    slack = 1e-9 * max(estimate, 1.0)
    # away from an integer the float floor is already exact
    if estimate - guess > slack and guess + 1 - estimate > slack:
        return guess
    target = n ** p
    while guess > 0 and guess ** q > target:
        guess -= 1
    while (guess + 1) ** q <= target:
        guess += 1
    return guess


def floor_power(n: int, exponent: Exponent) -> int:
    """Exact floor of n**exponent for an integer n >= 0 and a rational exponent >= 0."""
    if n < 0:
        raise ValueError("floor_power needs n >= 0")
    e = as_fraction(exponent)
    if e < 0:
        raise ValueError("floor_power needs a nonnegative exponent")
    if n in (0, 1) or e == 0:
        return 1 if e == 0 else n
    return _floor_power(int(n), e.numerator, e.denominator)


def square_lattice(k: int) -> PointSet:
    """The k x k grid {(h/k, j/k)}, N = k^2."""
    if k < 1:
        raise ConfigError("square lattices need k >= 1")
    h, j = np.meshgrid(np.arange(k), np.arange(k), indexing="ij")
    points = np.stack([h.ravel() / k, j.ravel() / k], axis=1)
    return PointSet(points, Product(k, k), name=f"square:{k}")


@dataclass(frozen=True)
class RotatedLatticeSpec:
    n: int
    q1: int = 1
    q2: int = 2
    G: int = field(init=False)
    L: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("rotated lattices need n >= 1")
        if (self.q1, self.q2) == (0, 0) or math.gcd(self.q1, self.q2) != 1:
            raise ConfigError(f"q1={self.q1} and q2={self.q2} must be coprime")
        big, small = ROTATION_EXPONENTS
        object.__setattr__(self, "G", floor_power(self.n, big))
        object.__setattr__(self, "L", floor_power(self.n, small))

    @property
    def omega(self) -> float:
        """The rotation angle arctan(q1 / q2)."""
        return math.atan2(self.q1, self.q2)

    @property
    def size(self) -> int:
        return self.G * self.L


def rotated_lattice(spec: RotatedLatticeSpec) -> PointSet:
    """
    Points (q2 l/L - q1 g/G, q1 l/L + q2 g/G) mod 1 for 0 <= l < L, 0 <= g < G: the grid
    (l/L, g/G) turned by arctan(q1/q2) and stretched by sqrt(q1^2 + q2^2).
    """
    L, G, q1, q2 = spec.L, spec.G, spec.q1, spec.q2
    l, g = np.meshgrid(np.arange(L), np.arange(G), indexing="ij")
    l, g = l.ravel(), g.ravel()
    # exact rationals over the common denominator L*G
    x = np.mod(q2 * l * G - q1 * g * L, L * G) / (L * G)
    y = np.mod(q1 * l * G + q2 * g * L, L * G) / (L * G)
    debug("rotated lattice n=%d: G=%d L=%d q=(%d,%d)", spec.n, G, L, q1, q2)
    return PointSet(np.stack([x, y], axis=1), Sublattice(q1, q2, L, G),
                    name=f"rotated:{spec.n}:{q1},{q2}")


def anisotropic_exponents(alpha: float) -> Tuple[Fraction, Fraction]:
    """((1+2a)/(1+4a), 2a/(1+4a)) for a boundary exponent a."""
    a = as_fraction(alpha)
    return (1 + 2 * a) / (1 + 4 * a), (2 * a) / (1 + 4 * a)


@dataclass(frozen=True)
class AnisotropicLatticeSpec:
    n: int
    alpha: float
    G: int = field(init=False)
    L: int = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError("anisotropic lattices need n >= 1")
        if not self.alpha > 1.0:
            raise ConfigError(f"alpha must exceed 1, got {self.alpha}")
        big, small = anisotropic_exponents(self.alpha)
        object.__setattr__(self, "G", floor_power(self.n, big))
        object.__setattr__(self, "L", floor_power(self.n, small))

    @property
    def size(self) -> int:
        return self.G * self.L


def anisotropic_lattice(spec: AnisotropicLatticeSpec) -> PointSet:
    """The grid {(l/L, g/G)}: coarse along x, fine along y."""
    l, g = np.meshgrid(np.arange(spec.L), np.arange(spec.G), indexing="ij")
    points = np.stack([l.ravel() / spec.L, g.ravel() / spec.G], axis=1)
    return PointSet(points, Product(spec.L, spec.G), name=f"aniso:{spec.n}:{spec.alpha:g}")
