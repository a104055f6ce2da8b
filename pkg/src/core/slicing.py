"""
Directional slices of a convex body: chords, semi-chords and the profile g along u(theta).

The boundary is cut into segments on which f(x) = x . u(theta) is monotone. The chain running
counterclockwise from the bottom supporting set to the top one carries the s_plus endpoints, the
other chain carries the s_minus endpoints, so that Gamma(s_minus) - Gamma(s_plus) = |K| u'(theta).
"""
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .angles import AngleInterval, canonical, eta, unit, unit_perp
from .constants import LEVEL_TOL, TWO_PI
from .errors import EmptyChordError
from .records import ChordRecord, SemiChordRecord


@dataclass(frozen=True)
class Segment:
    piece: int
    t_a: float
    t_b: float
    f_a: float
    f_b: float


def _run_around(mask: np.ndarray, seed: int) -> Tuple[int, int]:
    """First and last index of the cyclic run of True values containing `seed`."""
    n = len(mask)
    first = seed
    for _ in range(n - 1):
        prev = (first - 1) % n
        if not mask[prev]:
            break
        first = prev
    last = seed
    for _ in range(n - 1):
        nxt = (last + 1) % n
        if not mask[nxt]:
            break
        last = nxt
    return first, last


class DirectionalSlice:
    """All chords of a body orthogonal to u(theta)."""

    def __init__(self, body, theta: float):
        self.body = body
        self.theta = canonical(theta)
        self.u = unit(self.theta)
        self.u_perp = unit_perp(self.theta)

        segments: List[Segment] = []
        for i, piece in enumerate(body.pieces):
            ts = [0.0, 1.0]
            tc = piece.critical_param(self.u)
            if tc is not None:
                ts.insert(1, tc)
            levels = piece.level(self.u, np.array(ts))
            for a, b, fa, fb in zip(ts[:-1], ts[1:], levels[:-1], levels[1:]):
                segments.append(Segment(i, a, b, float(fa), float(fb)))
        self.segments = segments

        starts = np.array([s.f_a for s in segments])
        self.low = float(starts.min())
        self.high = float(starts.max())
        tol = LEVEL_TOL * (1.0 + float(np.max(np.abs(starts))))
        n = len(segments)
        k1, k2 = _run_around(starts <= self.low + tol, int(np.argmin(starts)))
        j1, j2 = _run_around(starts >= self.high - tol, int(np.argmax(starts)))
        self._bottom = (k1, k2)

        self.chain_plus = [segments[(k2 + i) % n] for i in range((j1 - k2) % n)]
        self.chain_minus = [segments[(j2 + i) % n] for i in range((k1 - j2) % n)][::-1]
        self._plus_bounds = np.array([s.f_b for s in self.chain_plus])
        self._minus_bounds = np.array([s.f_a for s in self.chain_minus])

    @property
    def width(self) -> float:
        return self.high - self.low

    def node_depths(self) -> np.ndarray:
        """Depths of all segment endpoints, sorted; the profile is smooth between them."""
        depths = np.array([s.f_a for s in self.segments]) - self.low
        return np.unique(np.clip(depths, 0.0, self.width))

    def _check(self, lams: np.ndarray) -> np.ndarray:
        w = self.width
        slack = LEVEL_TOL * (1.0 + w)
        bad = (lams < -slack) | (lams > w + slack)
        if np.any(bad):
            raise EmptyChordError(self.theta, float(lams[bad][0]), w)
        return np.clip(lams, 0.0, w)

    def _solve_chain(self, chain, bounds, h, plus: bool):
        idx = np.minimum(np.searchsorted(bounds, h, side="left"), len(chain) - 1)
        pieces = np.empty(h.shape, dtype=int)
        ts = np.empty(h.shape)
        points = np.empty(h.shape + (2,))
        for k in np.unique(idx):
            sel = idx == k
            seg = chain[k]
            piece = self.body.pieces[seg.piece]
            if seg.f_a == seg.f_b:
                t = np.full(int(sel.sum()), seg.t_a if plus else seg.t_b)
            else:
                t = piece.solve_level(self.u, h[sel], seg.t_a, seg.t_b)
            pieces[sel] = seg.piece
            ts[sel] = t
            points[sel] = piece.point(t)
        return pieces, ts, points

    def solve(self, lams):
        """
        Chord endpoints at the given depths: (pieces_plus, t_plus, points_plus, pieces_minus,
        t_minus, points_minus).
        """
        lams = self._check(np.atleast_1d(np.asarray(lams, dtype=float)))
        h = self.low + lams
        plus = self._solve_chain(self.chain_plus, self._plus_bounds, h, True)
        minus = self._solve_chain(self.chain_minus, self._minus_bounds, h, False)
        return plus + minus

    def chord_lengths(self, lams) -> np.ndarray:
        """|K(theta, lam)| for an array of depths; this is the profile g."""
        sol = self.solve(lams)
        return np.maximum((sol[5] - sol[2]) @ self.u_perp, 0.0)

    def chord(self, lam: float) -> ChordRecord:
        sol = self.solve([lam])
        p_plus, p_minus = sol[2][0], sol[5][0]
        length = max(float((p_minus - p_plus) @ self.u_perp), 0.0)
        return ChordRecord(self.theta, float(lam), length,
                           (tuple(map(float, p_minus)), tuple(map(float, p_plus))))

    def bottom_positions(self) -> Tuple[float, float]:
        """Arc-length positions (s_o_minus, s_o_plus) of the ends of the bottom supporting set."""
        k1, k2 = self._bottom
        a, b = self.segments[k1], self.segments[k2]
        return (self.body.arc_position(a.piece, a.t_a), self.body.arc_position(b.piece, b.t_a))

    def semi_chords(self, lam: float) -> SemiChordRecord:
        sol = self.solve([lam])
        s_plus = self.body.arc_position(int(sol[0][0]), float(sol[1][0]))
        s_minus = self.body.arc_position(int(sol[3][0]), float(sol[4][0]))
        w_plus = float(sol[2][0] @ self.u_perp)
        w_minus = float(sol[5][0] @ self.u_perp)
        length = max(w_minus - w_plus, 0.0)
        base = ChordRecord(self.theta, float(lam), length,
                           (tuple(map(float, sol[5][0])), tuple(map(float, sol[2][0]))))

        s_o_minus, s_o_plus = self.bottom_positions()
        perimeter = self.body.perimeter
        s_o = math.fmod(s_o_minus + 0.5 * eta(perimeter, s_o_minus, s_o_plus), perimeter)
        w_o = float(self.body.boundary_point(s_o) @ self.u_perp)
        right = min(max(w_o, w_plus), w_plus + length) - w_plus
        return SemiChordRecord(base, s_minus, s_plus, s_o, s_o_minus, s_o_plus,
                               length - right, right)

    def max_chord(self) -> float:
        """max over lam of |K(theta, lam)|."""
        depths = self.node_depths()
        grid = np.unique(np.concatenate([depths, np.linspace(0.0, self.width, 65)]))
        values = self.chord_lengths(grid)
        best = int(np.argmax(values))
        if self.body.is_polygon:
            return float(values[best])
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, len(grid) - 1)]
        res = minimize_scalar(lambda x: -float(self.chord_lengths([x])[0]), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12 * (1.0 + self.width)})
        return max(float(values[best]), -float(res.fun))


def corner_chord_limit(normals: AngleInterval, theta: float) -> float:
    """
    lim |K(theta, lam)| / lam at an angular point with the given set of normals, for theta strictly
    inside it: cot(eta(alpha1, theta)) + cot(eta(theta, beta1)).
    """
    a = eta(TWO_PI, normals.start, theta)
    b = eta(TWO_PI, theta, normals.end)
    return 1.0 / math.tan(a) + 1.0 / math.tan(b)
