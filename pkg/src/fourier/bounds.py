"""
Pointwise checks of the chord bounds on |FT_C| and on its dilation average:

    |FT_C(rho u(theta))| <= gamma(theta, 1/rho) / rho             for rho >= 2/S
    gamma(theta, 1/rho) >= (S/L) / rho                             for rho >= 2/S
    dilation average <= 2 gamma(theta, 1/rho)^2 / rho^2            for rho >= 10 L^6 / S^7

with L and S the longest and shortest directional diameters.
"""
from dataclasses import dataclass
from typing import Optional

from core import ConvexBody, unit

from .averages import dilation_avg_sq
from .transform import ft_body

BOUND_RTOL = 1e-6
DILATION_THRESHOLD_FACTOR = 10.0


def dilation_threshold(body: ConvexBody) -> float:
    L, S = body.diameters()
    return DILATION_THRESHOLD_FACTOR * L ** 6 / S ** 7


@dataclass(frozen=True)
class BoundSample:
    body: str
    theta: float
    rho: float
    ft_abs: float
    gamma: float
    diameter_ratio: float
    dilation_ratio: Optional[float] = None

    @property
    def transform_ok(self) -> bool:
        return self.ft_abs <= (1.0 + BOUND_RTOL) * self.gamma / self.rho

    @property
    def chord_ok(self) -> bool:
        return self.gamma >= (1.0 - BOUND_RTOL) * self.diameter_ratio / self.rho

    @property
    def dilation_ok(self) -> bool:
        return self.dilation_ratio is None or self.dilation_ratio <= 2.0 * (1.0 + BOUND_RTOL)


def bound_sample(body: ConvexBody, theta: float, rho: float) -> BoundSample:
    """Evaluate every bound at (theta, rho); the dilation ratio only past its threshold."""
    L, S = body.diameters()
    if rho < 2.0 / S:
        raise ValueError(f"rho={rho:.6g} is below 2/S={2.0 / S:.6g}")
    ft_abs = abs(ft_body(body, rho * unit(theta)))
    gamma = body.gamma(theta, 1.0 / rho)
    ratio = None
    if rho >= dilation_threshold(body):
        ratio = dilation_avg_sq(body, theta, rho) * rho ** 2 / gamma ** 2
    return BoundSample(body.name, theta, rho, ft_abs, gamma, S / L, ratio)
