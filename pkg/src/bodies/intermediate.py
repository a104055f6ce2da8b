"""
Bodies with a power-curve corner: H(phi, alpha), its rotation C(phi, alpha), and the truncated
power region G(alpha).

H(phi, alpha) has a corner at the origin whose set of normals is [pi/2 - phi, pi/2]. Next to the
corner the boundary is the power arc {(x, x^alpha) : 0 <= x <= eps}; the body is symmetric with
respect to the line l through the origin at angle pi/2 - phi/2, and centrally symmetric about a
point c on l.
"""
import math
from dataclasses import dataclass
from logging import debug
from typing import Optional

import numpy as np

from core import (ConvexBody, InvalidBodyError, LinePiece, PowerPiece, Similarity,
                  split_circle)
from core.constants import DEFAULT_EPS, TORUS_DIAMETER


@dataclass(frozen=True)
class IntermediateBodySpec:
    phi: float
    alpha: float
    eps: float = DEFAULT_EPS
    closure: str = "circular"

    def __post_init__(self):
        if not 0.0 < self.phi < math.pi:
            raise InvalidBodyError(f"phi={self.phi} must lie in (0, pi)")
        if not self.alpha > 1.0:
            raise InvalidBodyError(f"alpha={self.alpha} must exceed 1")
        if not self.eps > 0.0:
            raise InvalidBodyError(f"eps={self.eps} must be positive")
        if self.closure != "circular":
            raise InvalidBodyError(f"unknown closure recipe {self.closure!r}")

    @property
    def axis_angle(self) -> float:
        """Angle of the symmetry line l."""
        return 0.5 * math.pi - 0.5 * self.phi


def make_H(spec: IntermediateBodySpec) -> ConvexBody:
    """
    The power arc from the origin to E = (eps, eps^alpha) is continued by a circular arc with the
    same tangent at E, centred at the point c of l; reflecting across the perpendicular of l
    through c and then across c closes the boundary.
    """
    beta = spec.axis_angle
    eps, alpha = spec.eps, spec.alpha
    tau = math.atan(alpha * eps ** (alpha - 1.0))
    if tau >= beta:
        raise InvalidBodyError(
            f"power arc turns by {tau:.6g} before reaching the symmetry line at {beta:.6g}; "
            "use a smaller eps")
    end = np.array([eps, eps ** alpha])
    radius = (eps * math.sin(beta) - eps ** alpha * math.cos(beta)) / math.cos(beta - tau)
    if radius <= 0.0:
        raise InvalidBodyError("power arc end lies on the wrong side of the symmetry line")
    center = end + radius * np.array([-math.sin(tau), math.cos(tau)])
    debug("H(phi=%.6g, alpha=%.6g): closure radius %.6g, center (%.6g, %.6g)",
          spec.phi, alpha, radius, center[0], center[1])

    corner_arc = PowerPiece(alpha, 1.0, 0.0, eps)
    start = tau - 0.5 * math.pi
    arcs = split_circle(center, radius, start, start + 2.0 * (beta - tau))
    far_arc = corner_arc.mapped(Similarity.mirror(beta + 0.5 * math.pi, center))
    half = [corner_arc, *arcs, far_arc]
    turn = Similarity.point_reflection(center)
    body = ConvexBody(half + [p.mapped(turn) for p in half],
                      name=f"H:phi={spec.phi:.6g},alpha={alpha:.6g},eps={eps:.6g}")
    return body


def make_C(spec: IntermediateBodySpec,
           target_diameter: Optional[float] = TORUS_DIAMETER) -> ConvexBody:
    """
    H rotated by phi/2 - pi/2, so that the corner sits at the origin with normals
    [-phi/2, phi/2] and the body is symmetric about the x-axis; then scaled about the corner to
    the target diameter (None keeps the scale of H).
    """
    body = make_H(spec).rotated(0.5 * spec.phi - 0.5 * math.pi)
    if target_diameter is not None:
        body = body.scaled(target_diameter / body.longest_diameter)
    body.name = f"C:phi={spec.phi:.6g},alpha={spec.alpha:.6g},eps={spec.eps:.6g}"
    return body


def make_G_body(alpha: float, height: float = 1.0) -> ConvexBody:
    """The region {|x|^alpha <= y <= height}."""
    if not alpha > 1.0 or not height > 0.0:
        raise InvalidBodyError("G body needs alpha > 1 and a positive height")
    a = height ** (1.0 / alpha)
    bottom = PowerPiece(alpha, 1.0, -a, a)
    top = LinePiece((a, height), (-a, height))
    return ConvexBody([bottom, top], name=f"G:alpha={alpha:.6g},height={height:.6g}")
