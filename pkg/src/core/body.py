"""
Planar convex bodies bounded by a counterclockwise chain of boundary pieces.
"""
import hashlib
import json
import math
from logging import debug
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.spatial.distance import pdist

from .angles import (AngleInterval, arc_intersections, canonical, open_arc_intersections,
                     unit)
from .constants import (ANGULAR_JOINT_TOL, DIAMETER_GRID, ENVELOPE_SAMPLES, HALF_PI,
                        MAX_PIECE_TURN, TWO_PI)
from .errors import InvalidBodyError, QuadratureError
from .pieces import LinePiece, Piece, Similarity, wrap_pi
from .quadrature import angular_rule
from .records import AngularPoint, AngularTrace, ChordRecord, SemiChordRecord
from .report import Reportable, report_field
from .slicing import DirectionalSlice


class ConvexBody(Reportable):
    """
    A convex body given by its boundary pieces in counterclockwise order.

    Polygons are bodies whose pieces are all line pieces; they keep their vertex list and take the
    closed-form paths wherever one exists.
    """

    def __init__(self, pieces: Sequence[Piece], name: str = "", vertices=None):
        if len(pieces) < 2:
            raise InvalidBodyError("a body needs at least two boundary pieces")
        self.pieces: List[Piece] = list(pieces)
        self.name = name
        self.vertices: Optional[np.ndarray] = (None if vertices is None
                                               else np.asarray(vertices, dtype=float))
        self._cache = {}
        self._validate()
        lengths = [p.length for p in self.pieces]
        self._offsets = np.concatenate([[0.0], np.cumsum(lengths)])
        debug("body %s: %d pieces, perimeter %.6g", name or "?", len(self.pieces),
              self._offsets[-1])

    @classmethod
    def polygon(cls, vertices, name: str = "") -> "ConvexBody":
        """Polygon from counterclockwise vertices; repeated consecutive vertices are dropped."""
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or not np.all(np.isfinite(v)):
            raise InvalidBodyError("polygon vertices must be finite (x, y) pairs")
        keep = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) > 1e-14 * (1.0 + np.abs(v).max())
        v = v[keep]
        if len(v) < 3:
            raise InvalidBodyError("a polygon needs at least three distinct vertices")
        pieces = [LinePiece(tuple(a), tuple(b)) for a, b in zip(v, np.roll(v, -1, axis=0))]
        return cls(pieces, name, vertices=v)

    def _validate(self):
        scale = max(float(np.max(np.abs(p.start))) for p in self.pieces) + 1.0
        total = 0.0
        for i, piece in enumerate(self.pieces):
            nxt = self.pieces[(i + 1) % len(self.pieces)]
            if np.linalg.norm(piece.end - nxt.start) > 1e-9 * scale:
                raise InvalidBodyError(f"boundary not closed between pieces {i} and {i + 1}")
            if piece.turn < -ANGULAR_JOINT_TOL or piece.turn > MAX_PIECE_TURN:
                raise InvalidBodyError(f"piece {i} turns by {piece.turn:.6g}")
            joint = self.joint_turn(i + 1)
            if joint < -1e-7:
                raise InvalidBodyError(f"boundary turns clockwise at joint {i + 1}")
            total += piece.turn + max(joint, 0.0)
        if abs(total - TWO_PI) > 1e-6:
            raise InvalidBodyError(f"total turning {total:.9g} differs from 2*pi")
        if self.area <= 0.0:
            raise InvalidBodyError("body has empty interior")

    # --- boundary parameterization
    @property
    def is_polygon(self) -> bool:
        return self.vertices is not None

    @property
    def kind(self) -> str:
        return "polygon" if self.is_polygon else "arcs"

    def joint_turn(self, k: int) -> float:
        """Exterior turning at the start of piece k (joint between piece k-1 and piece k)."""
        n = len(self.pieces)
        before, after = self.pieces[(k - 1) % n], self.pieces[k % n]
        return float(wrap_pi(after.start_tangent - before.end_tangent))

    def arc_position(self, piece: int, t: float) -> float:
        """Arc-length parameter s of the point at parameter t of the given piece."""
        s = self._offsets[piece] + self.pieces[piece].length_at(t)
        return float(math.fmod(s, self.perimeter))

    def locate(self, s: float) -> Tuple[int, float]:
        """(piece index, local parameter) of arc-length position s."""
        s = math.fmod(s, self.perimeter)
        if s < 0.0:
            s += self.perimeter
        i = int(np.searchsorted(self._offsets, s, side="right") - 1)
        i = min(max(i, 0), len(self.pieces) - 1)
        return i, self.pieces[i].param_at_length(s - self._offsets[i])

    def boundary_point(self, s: float) -> np.ndarray:
        """Gamma_C(s)."""
        i, t = self.locate(s)
        return self.pieces[i].point(np.array([t]))[0]

    def sample_boundary(self, per_piece: int = 64) -> np.ndarray:
        """Boundary points, counterclockwise, with the closing point omitted."""
        t = np.linspace(0.0, 1.0, per_piece, endpoint=False)
        return np.concatenate([p.point(np.array([0.0]) if p.is_flat else t)
                               for p in self.pieces])

    # --- reported quantities
    @report_field(display_name="Perimeter", digits=12)
    def perimeter(self) -> float:
        return float(self._offsets[-1])

    @report_field(display_name="Area", digits=12)
    def area(self) -> float:
        if "moments" not in self._cache:
            self._cache["moments"] = np.sum([p.green_moments() for p in self.pieces], axis=0)
        return float(self._cache["moments"][0])

    @report_field(display_name="Centroid", digits=12)
    def centroid(self) -> Tuple[float, float]:
        a = self.area
        _, mx, my = self._cache["moments"]
        return (float(mx) / a, float(my) / a)

    @report_field(display_name="Longest directional diameter", digits=12)
    def longest_diameter(self) -> float:
        if "longest" not in self._cache:
            self._cache["longest"] = self._longest()
        return self._cache["longest"]

    @report_field(display_name="Shortest directional diameter", digits=12)
    def shortest_diameter(self) -> float:
        if "shortest" not in self._cache:
            self._cache["shortest"] = self._shortest()
        return self._cache["shortest"]

    @report_field(display_name="Angular points")
    def angular_point_report(self) -> List[dict]:
        return [{"s": a.s, "point": list(a.point),
                 "normals": [a.normals.start, a.normals.length]} for a in self.angular_points()]

    @report_field(display_name="Angular trace")
    def trace_components(self) -> List[List[float]]:
        return [[c.start, c.length] for c in self.angular_trace().components]

    @report_field(display_name="Symmetric angular threshold", digits=12)
    def psi(self) -> float:
        return self.angular_trace().psi

    # --- support and chords
    def support(self, theta: float) -> float:
        """max over the body of x . u(theta)."""
        u = unit(theta)
        if self.is_polygon:
            return float(np.max(self.vertices @ u))
        return max(p.max_level(u) for p in self.pieces)

    def width(self, theta: float) -> float:
        return self.support(theta) + self.support(theta + math.pi)

    def slice(self, theta: float) -> DirectionalSlice:
        return DirectionalSlice(self, theta)

    def chord(self, theta: float, lam: float) -> ChordRecord:
        """The chord K(theta, lam) at depth lam above the minimal supporting line."""
        return self.slice(theta).chord(lam)

    def gamma(self, theta: float, lam: float) -> float:
        """max(|K(theta, lam)|, |K(theta + pi, lam)|)."""
        return max(self.chord(theta, lam).length, self.chord(theta + math.pi, lam).length)

    def semi_chords(self, theta: float, lam: float) -> SemiChordRecord:
        return self.slice(theta).semi_chords(lam)

    def diameters(self) -> Tuple[float, float]:
        """(L, S): the longest and shortest directional diameters."""
        return self.longest_diameter, self.shortest_diameter

    def _longest(self) -> float:
        if self.is_polygon:
            return float(np.max(pdist(self.vertices)))
        grid = np.linspace(0.0, math.pi, DIAMETER_GRID, endpoint=False)
        widths = np.array([self.width(t) for t in grid])
        best = int(np.argmax(widths))
        step = grid[1] - grid[0]
        res = minimize_scalar(lambda t: -self.width(t), method="bounded",
                              bounds=(grid[best] - step, grid[best] + step),
                              options={"xatol": 1e-12})
        return max(float(widths[best]), -float(res.fun))

    def _shortest(self) -> float:
        grid = np.linspace(0.0, math.pi, DIAMETER_GRID, endpoint=False)
        if self.is_polygon:
            # the optimum sits at an edge direction or on the grid
            edges = np.diff(np.vstack([self.vertices, self.vertices[:1]]), axis=0)
            normals = np.mod(np.arctan2(edges[:, 1], edges[:, 0]) + HALF_PI, math.pi)
            grid = np.concatenate([grid, normals])
        values = np.array([self.slice(t).max_chord() for t in grid])
        best = int(np.argmin(values))
        step = math.pi / DIAMETER_GRID
        res = minimize_scalar(lambda t: self.slice(t).max_chord(), method="bounded",
                              bounds=(grid[best] - step, grid[best] + step),
                              options={"xatol": 1e-12})
        return min(float(values[best]), float(res.fun))

    # --- normals
    def _joint_interval(self, k: int) -> AngleInterval:
        n = len(self.pieces)
        before = self.pieces[(k - 1) % n]
        return AngleInterval(before.end_tangent + HALF_PI, max(self.joint_turn(k), 0.0))

    def normal_interval(self, s: float) -> AngleInterval:
        """The closed set of normals at Gamma(s); degenerate at smooth points."""
        s = math.fmod(s, self.perimeter)
        if s < 0.0:
            s += self.perimeter
        tol = 1e-12 * self.perimeter
        for k, offset in enumerate(self._offsets):
            if abs(s - offset) <= tol:
                return self._joint_interval(k)
        i, t = self.locate(s)
        return AngleInterval(self.pieces[i].tangent_angle(t) + HALF_PI, 0.0)

    def angular_points(self) -> List[AngularPoint]:
        out = []
        for k in range(len(self.pieces)):
            interval = self._joint_interval(k)
            if interval.length > ANGULAR_JOINT_TOL:
                point = self.pieces[k].start
                out.append(AngularPoint(float(self._offsets[k]),
                                        (float(point[0]), float(point[1])), interval))
        return out

    def angular_trace(self) -> AngularTrace:
        """
        Union of the open normal intervals at angular points, and the threshold psi.

        psi is the length of the longest component of T intersected with T + pi. A regular 2n-gon
        gives pi/n and a triangle pi/3. Bodies without angular points give 0.
        """
        if "trace" not in self._cache:
            components = [a.normals for a in self.angular_points()]
            psi = 0.0
            for a in components:
                for b in components:
                    for _, length in open_arc_intersections(a.start, a.length,
                                                            b.start + math.pi, b.length):
                        psi = max(psi, length)
            self._cache["trace"] = AngularTrace(components, psi)
        return self._cache["trace"]

    def portion_of_perimeter(self, interval: AngleInterval) -> float:
        """Arc-length measure of the boundary points whose set of normals meets the interval."""
        if interval.is_full:
            return self.perimeter
        total = 0.0
        for piece in self.pieces:
            nu0 = piece.start_tangent + HALF_PI
            if piece.is_flat:
                if interval.contains(nu0):
                    total += piece.length
                continue
            for start, length in arc_intersections(nu0, piece.turn, interval.start,
                                                   interval.length):
                if length <= 0.0:
                    continue
                t0 = piece.normal_param(start)
                t1 = piece.normal_param(start + length)
                total += piece.length_between(t0, t1)
        return total

    def semichord_average(self, interval: AngleInterval, lam: float,
                          rtol: float = 1e-2) -> float:
        """(1/2 lam) times the integral over the interval of the squared right semi-chord."""
        if interval.length <= 0.0:
            return 0.0

        def estimate(nodes_per_cell):
            nodes, weights = angular_rule(interval, self.normal_breakpoints(), lam / 8.0,
                                          interval.length / 32.0, nodes_per_cell)
            right = np.array([self.semi_chords(t, lam).right_len for t in nodes])
            return float(weights @ right ** 2) / (2.0 * lam)

        coarse, fine = estimate(4), estimate(8)
        achieved = abs(fine - coarse) / max(abs(fine), 1e-300)
        if achieved > rtol:
            raise QuadratureError("semi-chord average did not converge", achieved)
        return fine

    def gamma_average(self, interval: AngleInterval, rho: float) -> float:
        """rho times the integral over the interval of gamma(theta, 1/rho)^2."""
        if interval.length <= 0.0:
            return 0.0
        nodes, weights = angular_rule(interval, self.normal_breakpoints(), 1.0 / (8.0 * rho),
                                      interval.length / 32.0)
        values = np.array([self.gamma(t, 1.0 / rho) for t in nodes])
        return rho * float(weights @ values ** 2)

    def normal_breakpoints(self) -> List[float]:
        """Normal directions where chord geometry changes character, with their antipodes."""
        out = []
        for k in range(len(self.pieces)):
            interval = self._joint_interval(k)
            for a in (interval.start, interval.end):
                out.extend([canonical(a), canonical(a + math.pi)])
        return out

    def rotation_sector(self, interval: AngleInterval) -> List[AngleInterval]:
        """
        Directions omega for which omega - I lies inside a component of the angular trace,
        together with their antipodes.
        """
        out = []
        for c in self.angular_trace().components:
            slack = c.length - interval.length
            if slack <= 0.0:
                continue
            start = c.start + interval.start + interval.length
            out.append(AngleInterval(start, slack))
            out.append(AngleInterval(start + math.pi, slack))
        return out

    # --- membership
    def contains(self, points) -> np.ndarray:
        """Vectorized closed membership test."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_polygon:
            v = self.vertices
            e = np.roll(v, -1, axis=0) - v
            rel = pts[:, None, :] - v[None, :, :]
            cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
            tol = 1e-12 * (1.0 + np.abs(v).max())
            return np.all(cross >= -tol * np.linalg.norm(e, axis=1)[None, :], axis=1)
        xs, lower, upper = self._envelopes()
        x, y = pts[:, 0], pts[:, 1]
        inside_x = (x >= xs[0]) & (x <= xs[-1])
        lo = np.interp(x, xs, lower)
        hi = np.interp(x, xs, upper)
        return inside_x & (y >= lo - 1e-12) & (y <= hi + 1e-12)

    def _envelopes(self):
        if "envelopes" not in self._cache:
            pts = self.sample_boundary(ENVELOPE_SAMPLES)
            left, right = int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))
            n = len(pts)
            lower = pts[[(left + i) % n for i in range((right - left) % n + 1)]]
            upper = pts[[(right + i) % n for i in range((left - right) % n + 1)]][::-1]
            xs = np.unique(np.concatenate([lower[:, 0], upper[:, 0]]))
            lo = np.interp(xs, *_increasing(lower))
            hi = np.interp(xs, *_increasing(upper, keep="max"))
            self._cache["envelopes"] = (xs, lo, hi)
        return self._cache["envelopes"]

    # --- transforms
    def mapped(self, sim: Similarity, name: Optional[str] = None) -> "ConvexBody":
        pieces = [p.mapped(sim) for p in self.pieces]
        vertices = None if self.vertices is None else sim.apply(self.vertices)
        if sim.reflect:
            pieces = pieces[::-1]
            if vertices is not None:
                vertices = vertices[::-1]
        return ConvexBody(pieces, self.name if name is None else name, vertices)

    def rotated(self, angle: float) -> "ConvexBody":
        """sigma_angle C, rotation about the origin."""
        return self.mapped(Similarity(angle=angle))

    def scaled(self, factor: float) -> "ConvexBody":
        if factor <= 0.0:
            raise InvalidBodyError("scale factor must be positive")
        return self.mapped(Similarity(scale=factor))

    def translated(self, offset) -> "ConvexBody":
        return self.mapped(Similarity(offset=(float(offset[0]), float(offset[1]))))

    # --- serialization
    def to_json(self) -> dict:
        if self.is_polygon:
            return {"kind": "polygon", "name": self.name, "vertices": self.vertices.tolist()}
        return {"kind": "arcs", "name": self.name, "arcs": [p.to_json() for p in self.pieces]}

    @property
    def fingerprint(self) -> str:
        """sha256 of the canonical JSON boundary description."""
        data = self.to_json()
        data.pop("name", None)
        text = json.dumps(data, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()

    def __repr__(self) -> str:
        return f"ConvexBody({self.name or self.kind}, pieces={len(self.pieces)})"


def _increasing(chain: np.ndarray, keep: str = "min"):
    """x and y of a chain sorted by x; duplicate x keep the extreme y."""
    order = np.lexsort((chain[:, 1], chain[:, 0]))
    x, y = chain[order, 0], chain[order, 1]
    xs, first = np.unique(x, return_index=True)
    if keep == "max":
        last = np.concatenate([first[1:], [len(x)]]) - 1
        return xs, y[last]
    return xs, y[first]