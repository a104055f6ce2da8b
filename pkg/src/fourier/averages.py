"""
Averages of |FT|^2 over dilations and rotations.

The dilation average along a ray is

    D(theta, rho) = int_0^1 delta^4 |FT_C(delta rho u(theta))|^2 d delta
                  = rho^-5 int_0^rho r^4 |FT_C(r u(theta))|^2 dr,

so one cumulative integral in r answers every rho on the ray.
"""
import math
from concurrent.futures import ProcessPoolExecutor
from logging import debug
from typing import Sequence

import numpy as np
from scipy.integrate import cumulative_simpson

from core import AngleInterval, ConvexBody, QuadratureError
from core.constants import RAY_CHUNK, RAY_SAMPLES_PER_PERIOD
from core.quadrature import angular_rule

from .transform import Profile, ft_polygon


class RayAverages:
    """Dilation averages D(theta, rho) for all rho <= rho_max on one ray."""

    def __init__(self, body: ConvexBody, theta: float, rho_max: float):
        self.theta = theta
        self.rho_max = float(rho_max)
        profile = Profile(body, theta, max(rho_max, 1.0))
        count = max(int(math.ceil(RAY_SAMPLES_PER_PERIOD * self.rho_max * profile.width)), 64)
        self.r = np.linspace(0.0, self.rho_max, count + 1)
        power = np.empty_like(self.r)
        for start in range(0, len(self.r), RAY_CHUNK):
            chunk = self.r[start:start + RAY_CHUNK]
            power[start:start + RAY_CHUNK] = np.abs(profile.transform(chunk)) ** 2
        if not np.all(np.isfinite(power)):
            raise QuadratureError(f"non-finite transform on the ray theta={theta:.6g}")
        self.power = power
        self.cumulative = cumulative_simpson(self.r ** 4 * power, x=self.r, initial=0.0)
        self.area = body.area

    def at(self, rhos) -> np.ndarray:
        rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
        if np.any(rhos > self.rho_max * (1.0 + 1e-12)):
            raise ValueError("rho beyond the range of this ray")
        out = np.empty_like(rhos)
        zero = rhos <= 0.0
        out[zero] = self.area ** 2 / 5.0
        r = rhos[~zero]
        out[~zero] = np.interp(r, self.r, self.cumulative) / r ** 5
        return out


def dilation_avg_sq(body: ConvexBody, theta: float, rho: float) -> float:
    """int_0^1 delta^4 |FT_C(delta rho u(theta))|^2 d delta."""
    if rho < 0.0:
        raise ValueError("rho must be nonnegative")
    return float(RayAverages(body, theta, max(rho, 1e-12)).at([rho])[0])


def _ray_batch(args):
    body, thetas, rho_max, rhos = args
    return np.array([RayAverages(body, t, rho_max).at(rhos) for t in thetas])


def ray_table(body: ConvexBody, thetas: Sequence[float], rhos: Sequence[float],
              workers: int = 1) -> np.ndarray:
    """D(theta_i, rho_k) as an array of shape (len(thetas), len(rhos))."""
    thetas = np.asarray(thetas, dtype=float)
    rhos = np.asarray(rhos, dtype=float)
    rho_max = float(np.max(rhos)) if rhos.size else 1.0
    if workers <= 1 or len(thetas) < 2 * workers:
        return _ray_batch((body, thetas, rho_max, rhos))
    batches = np.array_split(thetas, workers * 4)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_ray_batch, [(body, b, rho_max, rhos) for b in batches]))
    return np.concatenate(parts, axis=0)


def _rotation_rule(body: ConvexBody, interval: AngleInterval, rho_max: float):
    return angular_rule(interval, body.normal_breakpoints(), 1.0 / (8.0 * rho_max),
                        min(interval.length / 8.0, 0.1))


def rotation_dilation_curve(body: ConvexBody, interval: AngleInterval, rhos: Sequence[float],
                            workers: int = 1) -> np.ndarray:
    """int_I D(theta, rho) d theta for every rho of the schedule."""
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    if interval.length <= 0.0:
        return np.zeros_like(rhos)
    nodes, weights = _rotation_rule(body, interval, float(rhos.max()))
    debug("rotation average over %s: %d rays", interval, len(nodes))
    return weights @ ray_table(body, nodes, rhos, workers)


def rotation_dilation_avg_sq(body: ConvexBody, interval: AngleInterval, rho: float) -> float:
    """int_I int_0^1 |FT_{delta C}(rho u(theta))|^2 d delta d theta."""
    return float(rotation_dilation_curve(body, interval, [rho])[0])


def weight_at(body: ConvexBody, interval: AngleInterval, rho: float, omega: float) -> float:
    """
    W(rho, omega) = int_I int_0^1 |FT_{[delta, theta] C}(rho u(omega))|^2 d delta d theta,
    which is the rotation average of D over omega - I.
    """
    return rotation_dilation_avg_sq(body, interval.reflected_from(omega), rho)


def spherical_avg_sq(body: ConvexBody, interval: AngleInterval, rho: float) -> float:
    """int_I |FT_C(rho u(theta))|^2 d theta."""
    if interval.length <= 0.0:
        return 0.0
    coarsest = min(interval.length / 8.0, 0.5 / max(rho, 1e-12))
    nodes, weights = angular_rule(interval, body.normal_breakpoints(),
                                  1.0 / (8.0 * max(rho, 1.0)), coarsest)
    if body.is_polygon:
        xi = rho * np.stack([np.cos(nodes), np.sin(nodes)], axis=1)
        values = np.abs(ft_polygon(body, xi)) ** 2
    else:
        values = np.array([abs(Profile(body, t, max(rho, 1.0)).transform([rho])[0]) ** 2
                           for t in nodes])
    if not np.all(np.isfinite(values)):
        raise QuadratureError(f"non-finite transform in spherical average at rho={rho:.6g}")
    return float(weights @ values)
