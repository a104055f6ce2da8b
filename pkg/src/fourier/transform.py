"""
Fourier transform of convex indicator functions,

    FT_C(xi) = int_C exp(-2 pi i x . xi) dx.

Polygons have the closed-form edge sum. For any body, FT_C(rho u(theta)) is the one-dimensional
transform of the profile g(t) = |K(theta, t - t_min)|, evaluated with Filon panels.
"""
import math
from logging import debug

import numpy as np

from core import ConvexBody, QuadratureError
from core.constants import MAX_PANELS, MIN_PANELS, SMALL_XI, TWO_PI
from core.quadrature import graded_edges

from .filon import filon_sum, panel_count, panel_nodes

PROFILE_GROWTH = 1.25     # geometric grading of panels towards profile breakpoints
PROFILE_FINEST = 1e-7     # relative size of the panels next to a breakpoint


def _polygon_moments(v: np.ndarray):
    """Area, first and second moments of a counterclockwise polygon."""
    x0, y0 = v[:, 0], v[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    cross = x0 * y1 - x1 * y0
    area = cross.sum() / 2.0
    sx = ((x0 + x1) * cross).sum() / 6.0
    sy = ((y0 + y1) * cross).sum() / 6.0
    sxx = ((x0 * x0 + x0 * x1 + x1 * x1) * cross).sum() / 12.0
    syy = ((y0 * y0 + y0 * y1 + y1 * y1) * cross).sum() / 12.0
    sxy = ((x0 * y1 + 2 * x0 * y0 + 2 * x1 * y1 + x1 * y0) * cross).sum() / 24.0
    return area, sx, sy, sxx, sxy, syy


def ft_polygon(body, xi) -> np.ndarray:
    """
    Closed-form transform of a polygon (a ConvexBody polygon or a vertex array) at one
    frequency xi = (x, y) or at an (n, 2) array of frequencies.
    """
    v = body.vertices if isinstance(body, ConvexBody) else np.asarray(body, dtype=float)
    if v is None:
        raise ValueError("ft_polygon needs a polygon")
    xi = np.asarray(xi, dtype=float)
    scalar = xi.ndim == 1
    xi = np.atleast_2d(xi)

    e = np.roll(v, -1, axis=0) - v
    mid = v + 0.5 * e
    norm2 = np.sum(xi * xi, axis=1)
    flux = xi[:, 0:1] * e[None, :, 1] - xi[:, 1:2] * e[None, :, 0]
    phase = np.exp(-2j * math.pi * (xi @ mid.T))
    edge_sum = np.sum(flux * phase * np.sinc(xi @ e.T), axis=1)
    safe = np.where(norm2 > 0.0, norm2, 1.0)
    out = 1j * edge_sum / (TWO_PI * safe)

    diam = 2.0 * float(np.max(np.linalg.norm(v, axis=1)))
    small = np.sqrt(norm2) * max(diam, 1e-300) < SMALL_XI
    if np.any(small):
        area, sx, sy, sxx, sxy, syy = _polygon_moments(v)
        a, b = xi[small, 0], xi[small, 1]
        out[small] = (area - 2j * math.pi * (a * sx + b * sy)
                      - 2.0 * math.pi ** 2 * (a * a * sxx + 2.0 * a * b * sxy + b * b * syy))
    return out[0] if scalar else out


class Profile:
    """
    The profile of a body in direction theta, with Filon panels good up to rho_max.

    Panels break at every depth where a chord endpoint changes boundary piece. On polygons the
    profile is linear between those depths; elsewhere panels are graded geometrically towards the
    breaks and are at most width / panel_count(width, rho_max) wide.
    """
    def __init__(self, body: ConvexBody, theta: float, rho_max: float = 1.0, refine: int = 1):
        self.body = body
        self.slice = body.slice(theta)
        self.theta = self.slice.theta
        self.low = self.slice.low
        self.width = self.slice.width
        depths = self.slice.node_depths()
        if body.is_polygon:
            self.edges = depths
        else:
            n = panel_count(self.width, rho_max, MIN_PANELS, MAX_PANELS) * refine
            self.edges = graded_edges(self.width, depths, PROFILE_FINEST * self.width,
                                      self.width / n, PROFILE_GROWTH)
        self.nodes = panel_nodes(self.edges)
        self.values = self.slice.chord_lengths(self.nodes)

    def g(self, t):
        """Chord length at height t above the lower supporting line."""
        return self.slice.chord_lengths(t)

    def transform(self, rhos) -> np.ndarray:
        """FT_C(rho u(theta)) for every rho."""
        rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
        values = filon_sum(self.edges, self.values, TWO_PI * rhos)
        return values * np.exp(-2j * math.pi * rhos * self.low)


def ft_profile(body: ConvexBody, theta: float, rho: float, rtol: float = 1e-4) -> complex:
    """
    FT_C(rho u(theta)) from the profile. The value is checked against a run with twice as many
    panels; a disagreement above rtol * area raises QuadratureError.
    """
    if rho < 0.0:
        raise ValueError("rho must be nonnegative")
    value = complex(Profile(body, theta, max(rho, 1.0)).transform([rho])[0])
    if body.is_polygon:
        return value
    check = complex(Profile(body, theta, max(rho, 1.0), refine=2).transform([rho])[0])
    achieved = abs(check - value)
    if achieved > rtol * body.area:
        raise QuadratureError(f"profile transform at theta={theta:.6g}, rho={rho:.6g}", achieved)
    debug("ft_profile theta=%.6g rho=%.6g: %s (panel check %.3g)", theta, rho, check, achieved)
    return check


def ft_body(body: ConvexBody, xi) -> complex:
    """FT_C(xi) at a single frequency, by the cheapest exact route."""
    xi = np.asarray(xi, dtype=float)
    if body.is_polygon:
        return complex(ft_polygon(body, xi))
    rho = float(np.hypot(xi[0], xi[1]))
    if rho == 0.0:
        return complex(body.area)
    return ft_profile(body, math.atan2(xi[1], xi[0]), rho)
