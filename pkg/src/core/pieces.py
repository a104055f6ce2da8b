"""
Boundary pieces of a convex body.

Every piece is a convex arc traversed counterclockwise (interior on the left) and parameterized
by t in [0, 1]. Pieces turn by less than pi, so along a piece the tangent angle is monotone and
x(t) . u has at most one critical point for any direction u.
"""
import math
from dataclasses import dataclass, field
from typing import ClassVar, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .constants import (ARC_LENGTH_RTOL, ARC_LENGTH_TABLE_SIZE, BISECTION_STEPS, HALF_PI,
                        ROOT_XTOL, TWO_PI)
from .errors import InvalidBodyError, RootFindingError


def wrap_pi(angle):
    """Wrap into (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), TWO_PI)


@dataclass(frozen=True)
class Similarity:
    """x -> offset + scale * R(angle) * F x, where F mirrors the y-axis when reflect is set."""
    scale: float = 1.0
    angle: float = 0.0
    reflect: bool = False
    offset: Tuple[float, float] = (0.0, 0.0)

    @property
    def matrix(self) -> np.ndarray:
        c, s = math.cos(self.angle), math.sin(self.angle)
        m = self.scale * np.array([[c, -s], [s, c]])
        if self.reflect:
            m = m @ np.diag([1.0, -1.0])
        return m

    def apply(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return points @ self.matrix.T + np.asarray(self.offset)

    def map_angle(self, phi):
        """Image of a direction angle."""
        return self.angle + (-phi if self.reflect else phi)

    def then(self, other: "Similarity") -> "Similarity":
        """The composition: first self, then other."""
        m = other.matrix @ self.matrix
        offset = other.apply(np.asarray(self.offset))
        det = np.linalg.det(m)
        reflect = det < 0.0
        scale = math.sqrt(abs(det))
        first_col = m[:, 0] / scale
        return Similarity(scale, math.atan2(first_col[1], first_col[0]), reflect,
                          (float(offset[0]), float(offset[1])))

    @classmethod
    def mirror(cls, axis_angle: float, through=(0.0, 0.0)) -> "Similarity":
        """Reflection across the line through `through` with direction axis_angle."""
        p = np.asarray(through, dtype=float)
        base = cls(1.0, 2.0 * axis_angle, True, (0.0, 0.0))
        shift = p - base.apply(p)
        return cls(1.0, 2.0 * axis_angle, True, (float(shift[0]), float(shift[1])))

    @classmethod
    def point_reflection(cls, center) -> "Similarity":
        c = np.asarray(center, dtype=float)
        return cls(1.0, math.pi, False, (float(2 * c[0]), float(2 * c[1])))


class PieceMetaclass(type):
    """
    Metaclass for boundary pieces. Concrete pieces declare a `type_tag` and are collected
    into a registry used by the JSON reader.
    """
    registry: ClassVar[Dict[str, type]] = {}

    def __new__(mcs, name, bases, attrs):
        cls = super().__new__(mcs, name, bases, attrs)
        tag = attrs.get("type_tag")
        if tag:
            mcs.registry[tag] = cls
        return cls


class Piece(metaclass=PieceMetaclass):
    """Base class for boundary pieces."""
    type_tag: ClassVar[str] = ""

    # --- geometry every piece provides
    def point(self, t) -> np.ndarray:
        raise NotImplementedError

    def velocity(self, t) -> np.ndarray:
        raise NotImplementedError

    def mapped(self, sim: Similarity) -> "Piece":
        """Image under sim, still traversed with the interior on the left."""
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_json(cls, data: dict) -> "Piece":
        raise NotImplementedError

    # --- generic implementations
    @property
    def is_flat(self) -> bool:
        return False

    def tangent_angle(self, t: float) -> float:
        v = self.velocity(np.array([t]))[0]
        return math.atan2(v[1], v[0])

    @property
    def start_tangent(self) -> float:
        return self.tangent_angle(0.0)

    @property
    def end_tangent(self) -> float:
        return self.tangent_angle(1.0)

    @property
    def turn(self) -> float:
        """Total counterclockwise turning of the tangent along the piece."""
        return float(wrap_pi(self.end_tangent - self.start_tangent))

    @property
    def start(self) -> np.ndarray:
        return self.point(np.array([0.0]))[0]

    @property
    def end(self) -> np.ndarray:
        return self.point(np.array([1.0]))[0]

    def speed(self, t: float) -> float:
        v = self.velocity(np.array([t]))[0]
        return math.hypot(v[0], v[1])

    def length_between(self, t0: float, t1: float) -> float:
        if t1 <= t0:
            return 0.0
        value, _ = quad(self.speed, t0, t1, epsabs=0.0, epsrel=ARC_LENGTH_RTOL, limit=200)
        return value

    @property
    def length(self) -> float:
        return self.length_at(1.0)

    def length_at(self, t: float) -> float:
        """Arc length from the start of the piece to parameter t."""
        return self.length_between(0.0, t)

    def param_at_length(self, ds: float) -> float:
        total = self.length
        if ds <= 0.0:
            return 0.0
        if ds >= total:
            return 1.0
        return brentq(lambda t: self.length_at(t) - ds, 0.0, 1.0, xtol=ROOT_XTOL)

    def level(self, u: np.ndarray, t) -> np.ndarray:
        return self.point(t) @ u

    def critical_param(self, u: np.ndarray) -> Optional[float]:
        """Interior parameter where velocity . u changes sign, if any."""
        def slope(t):
            return float(self.velocity(np.array([t]))[0] @ u)
        a, b = slope(0.0), slope(1.0)
        if a * b >= 0.0:
            return None
        return brentq(slope, 0.0, 1.0, xtol=ROOT_XTOL)

    def solve_level(self, u: np.ndarray, h, t_lo: float, t_hi: float) -> np.ndarray:
        """
        Parameters in [t_lo, t_hi] where x(t) . u = h, for x . u monotone on the bracket.
        Vectorized bisection over h.
        """
        h = np.atleast_1d(np.asarray(h, dtype=float))
        f_lo = float(self.level(u, np.array([t_lo]))[0])
        f_hi = float(self.level(u, np.array([t_hi]))[0])
        increasing = f_hi >= f_lo
        lo = np.full(h.shape, t_lo)
        hi = np.full(h.shape, t_hi)
        for _ in range(BISECTION_STEPS):
            mid = 0.5 * (lo + hi)
            above = self.level(u, mid) > h
            if increasing:
                hi = np.where(above, mid, hi)
                lo = np.where(above, lo, mid)
            else:
                lo = np.where(above, mid, lo)
                hi = np.where(above, hi, mid)
            if np.all(hi - lo <= ROOT_XTOL):
                break
        return 0.5 * (lo + hi)

    def normal_param(self, nu: float) -> float:
        """Parameter where the inward normal angle (tangent + pi/2) equals nu."""
        start = self.start_tangent + HALF_PI

        def offset(t):
            return float(wrap_pi(self.tangent_angle(t) + HALF_PI - start))
        target = float(wrap_pi(nu - start))
        if target <= 0.0:
            return 0.0
        if target >= offset(1.0):
            return 1.0
        try:
            return brentq(lambda t: offset(t) - target, 0.0, 1.0, xtol=ROOT_XTOL)
        except ValueError as e:
            raise RootFindingError(f"normal inversion failed on {self.type_tag} piece: {e}") from e

    def max_level(self, u: np.ndarray) -> float:
        ts = [0.0, 1.0]
        tc = self.critical_param(u)
        if tc is not None:
            ts.append(tc)
        return float(np.max(self.level(u, np.array(ts))))

    def green_moments(self) -> Tuple[float, float, float]:
        """(area, x-moment, y-moment) contributions by Green's theorem."""
        def fa(t):
            p, v = self.point(np.array([t]))[0], self.velocity(np.array([t]))[0]
            return 0.5 * (p[0] * v[1] - p[1] * v[0])

        def fx(t):
            p, v = self.point(np.array([t]))[0], self.velocity(np.array([t]))[0]
            return 0.5 * p[0] * p[0] * v[1]

        def fy(t):
            p, v = self.point(np.array([t]))[0], self.velocity(np.array([t]))[0]
            return -0.5 * p[1] * p[1] * v[0]
        return tuple(quad(f, 0.0, 1.0, epsabs=1e-14, limit=200)[0] for f in (fa, fx, fy))


@dataclass(frozen=True)
class LinePiece(Piece):
    """Straight segment from p to q."""
    type_tag: ClassVar[str] = "line"
    p: Tuple[float, float]
    q: Tuple[float, float]

    def point(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        p, q = np.asarray(self.p), np.asarray(self.q)
        return p + t[:, None] * (q - p)

    def velocity(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        d = np.asarray(self.q) - np.asarray(self.p)
        return np.tile(d, (t.size, 1))

    @property
    def is_flat(self) -> bool:
        return True

    @property
    def turn(self) -> float:
        return 0.0

    def length_between(self, t0, t1):
        return max(t1 - t0, 0.0) * math.dist(self.p, self.q)

    def param_at_length(self, ds):
        total = math.dist(self.p, self.q)
        return min(max(ds / total, 0.0), 1.0)

    def critical_param(self, u):
        return None

    def solve_level(self, u, h, t_lo, t_hi):
        h = np.atleast_1d(np.asarray(h, dtype=float))
        p, q = np.asarray(self.p), np.asarray(self.q)
        denom = float((q - p) @ u)
        if denom == 0.0:
            return np.full(h.shape, t_lo)
        return np.clip((h - float(p @ u)) / denom, t_lo, t_hi)

    def normal_param(self, nu):
        return 0.0

    def green_moments(self):
        (x0, y0), (x1, y1) = self.p, self.q
        cross = x0 * y1 - x1 * y0
        return (0.5 * cross, cross * (x0 + x1) / 6.0, cross * (y0 + y1) / 6.0)

    def mapped(self, sim):
        p, q = sim.apply(np.array([self.p, self.q]))
        if sim.reflect:
            p, q = q, p
        return LinePiece(tuple(map(float, p)), tuple(map(float, q)))

    def to_json(self):
        return {"type": self.type_tag, "start": list(self.p), "end": list(self.q)}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(map(float, data["start"])), tuple(map(float, data["end"])))


@dataclass(frozen=True)
class CircularPiece(Piece):
    """Arc of the circle center + radius * u(phi) for phi from phi0 up to phi1."""
    type_tag: ClassVar[str] = "circular"
    center: Tuple[float, float]
    radius: float
    phi0: float
    phi1: float

    def __post_init__(self):
        if self.radius <= 0.0 or self.phi1 <= self.phi0:
            raise InvalidBodyError("circular piece needs a positive radius and phi1 > phi0")

    def _phi(self, t):
        return self.phi0 + np.atleast_1d(np.asarray(t, dtype=float)) * (self.phi1 - self.phi0)

    def point(self, t):
        phi = self._phi(t)
        return np.asarray(self.center) + self.radius * np.stack([np.cos(phi), np.sin(phi)], axis=-1)

    def velocity(self, t):
        phi = self._phi(t)
        k = self.radius * (self.phi1 - self.phi0)
        return k * np.stack([-np.sin(phi), np.cos(phi)], axis=-1)

    @property
    def turn(self):
        return self.phi1 - self.phi0

    def length_between(self, t0, t1):
        return max(t1 - t0, 0.0) * self.radius * (self.phi1 - self.phi0)

    def param_at_length(self, ds):
        return min(max(ds / self.length, 0.0), 1.0)

    def critical_param(self, u):
        # velocity . u is proportional to sin(theta - phi); an arc shorter than pi holds at most one zero
        theta = math.atan2(u[1], u[0])
        span = self.phi1 - self.phi0
        for target in (theta, theta + math.pi):
            d = (target - self.phi0) % TWO_PI
            if 0.0 < d < span:
                return d / span
        return None

    def solve_level(self, u, h, t_lo, t_hi):
        h = np.atleast_1d(np.asarray(h, dtype=float))
        theta = math.atan2(u[1], u[0])
        c = np.asarray(self.center)
        arg = np.clip((h - float(c @ u)) / self.radius, -1.0, 1.0)
        a = np.arccos(arg)
        span = self.phi1 - self.phi0
        lo_phi = self.phi0 + t_lo * span
        hi_phi = self.phi0 + t_hi * span
        best = None
        for cand in (theta + a, theta - a):
            phi = lo_phi + np.mod(cand - lo_phi, TWO_PI)
            # a candidate just below lo_phi wraps to ~2pi; pull it back
            phi = np.where(phi - lo_phi > TWO_PI - 1e-9, lo_phi, phi)
            miss = np.maximum(phi - hi_phi, 0.0)
            best = (phi, miss) if best is None else (
                np.where(miss < best[1], phi, best[0]), np.minimum(miss, best[1]))
        phi = np.clip(best[0], lo_phi, hi_phi)
        return (phi - self.phi0) / span

    def normal_param(self, nu):
        start = self.phi0 + math.pi  # inward normal at phi0
        d = float(wrap_pi(nu - start))
        return min(max(d / (self.phi1 - self.phi0), 0.0), 1.0)

    def green_moments(self):
        cx, cy = self.center
        r = self.radius
        s0, s1 = math.sin(self.phi0), math.sin(self.phi1)
        c0, c1 = math.cos(self.phi0), math.cos(self.phi1)
        area = 0.5 * (r * r * (self.phi1 - self.phi0) + r * (cx * (s1 - s0) - cy * (c1 - c0)))
        return (area,) + Piece.green_moments(self)[1:]

    def mapped(self, sim):
        c = sim.apply(np.asarray(self.center))
        a0, a1 = sim.map_angle(self.phi0), sim.map_angle(self.phi1)
        if sim.reflect:
            a0, a1 = a1, a0
        return CircularPiece((float(c[0]), float(c[1])), self.radius * sim.scale, a0, a1)

    def to_json(self):
        return {"type": self.type_tag, "center": list(self.center), "radius": self.radius,
                "start_angle": self.phi0, "end_angle": self.phi1}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(map(float, data["center"])), float(data["radius"]),
                   float(data["start_angle"]), float(data["end_angle"]))


@dataclass(frozen=True)
class PowerPiece(Piece):
    """
    The curve (x, coef * |x|^alpha) for x from x_start to x_end, placed by a similarity frame.
    """
    type_tag: ClassVar[str] = "power"
    alpha: float
    coef: float
    x_start: float
    x_end: float
    frame: Similarity = field(default_factory=Similarity)

    def __post_init__(self):
        if self.alpha <= 1.0 or self.coef <= 0.0 or self.x_start == self.x_end:
            raise InvalidBodyError("power piece needs alpha > 1, coef > 0 and a nonempty x-range")
        object.__setattr__(self, "_table", self._length_table())

    def _x(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return self.x_start + t * (self.x_end - self.x_start)

    def point(self, t):
        x = self._x(t)
        local = np.stack([x, self.coef * np.abs(x) ** self.alpha], axis=-1)
        return self.frame.apply(local)

    def velocity(self, t):
        x = self._x(t)
        dx = self.x_end - self.x_start
        slope = self.coef * self.alpha * np.abs(x) ** (self.alpha - 1.0) * np.sign(x)
        local = dx * np.stack([np.ones_like(x), slope], axis=-1)
        return local @ self.frame.matrix.T

    def _length_table(self) -> np.ndarray:
        ts = np.linspace(0.0, 1.0, ARC_LENGTH_TABLE_SIZE)
        steps = [Piece.length_between(self, a, b) for a, b in zip(ts[:-1], ts[1:])]
        return np.concatenate([[0.0], np.cumsum(steps)])

    def length_at(self, t):
        t = min(max(t, 0.0), 1.0)
        k = min(int(t * (ARC_LENGTH_TABLE_SIZE - 1)), ARC_LENGTH_TABLE_SIZE - 2)
        t_k = k / (ARC_LENGTH_TABLE_SIZE - 1)
        return float(self._table[k]) + Piece.length_between(self, t_k, t)

    @property
    def length(self):
        return float(self._table[-1])

    def length_between(self, t0, t1):
        return max(self.length_at(t1) - self.length_at(t0), 0.0)

    def mapped(self, sim):
        frame = self.frame.then(sim)
        if sim.reflect:
            return PowerPiece(self.alpha, self.coef, self.x_end, self.x_start, frame)
        return PowerPiece(self.alpha, self.coef, self.x_start, self.x_end, frame)

    def to_json(self):
        f = self.frame
        return {"type": self.type_tag, "alpha": self.alpha, "coef": self.coef,
                "x_start": self.x_start, "x_end": self.x_end,
                "frame": {"scale": f.scale, "angle": f.angle, "reflect": f.reflect,
                          "offset": list(f.offset)}}

    @classmethod
    def from_json(cls, data):
        f = data.get("frame", {})
        frame = Similarity(float(f.get("scale", 1.0)), float(f.get("angle", 0.0)),
                           bool(f.get("reflect", False)),
                           tuple(map(float, f.get("offset", (0.0, 0.0)))))
        return cls(float(data["alpha"]), float(data.get("coef", 1.0)),
                   float(data["x_start"]), float(data["x_end"]), frame)


def split_circle(center, radius: float, phi0: float, phi1: float, max_turn: float = HALF_PI):
    """Circular arc from phi0 to phi1 as pieces turning by at most max_turn each."""
    count = max(1, int(math.ceil((phi1 - phi0) / max_turn - 1e-12)))
    edges = np.linspace(phi0, phi1, count + 1)
    return [CircularPiece(tuple(map(float, center)), float(radius), float(a), float(b))
            for a, b in zip(edges[:-1], edges[1:])]
