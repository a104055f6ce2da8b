"""
Composite Gauss-Legendre rules on angle intervals, graded towards breakpoints.
"""
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np

from .angles import AngleInterval
from .constants import ANGULAR_NODES


@lru_cache(maxsize=16)
def _legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def graded_edges(length: float, breakpoints: Iterable[float], finest: float,
                 coarsest: float, growth: float = 2.0) -> np.ndarray:
    """
    Sub-interval edges on [0, length]. Every breakpoint (an offset in [0, length]) is an edge, and
    cells grow geometrically by `growth` from `finest` next to each breakpoint up to `coarsest`.
    """
    marks = sorted({0.0, float(length), *[float(b) for b in breakpoints if 0.0 <= b <= length]})
    finest = max(min(finest, coarsest), 1e-15)
    edges = [0.0]
    for a, b in zip(marks[:-1], marks[1:]):
        span = b - a
        if span <= 0.0:
            continue
        # grow from both ends towards the middle
        left, right = [a], [b]
        step = finest
        while left[-1] + step < right[-1] - step and step < coarsest:
            left.append(left[-1] + step)
            right.append(right[-1] - step)
            step *= growth
        lo, hi = left[-1], right[-1]
        count = max(1, int(np.ceil((hi - lo) / coarsest)))
        middle = np.linspace(lo, hi, count + 1)
        edges.extend(left[1:])
        edges.extend(middle[1:-1])
        edges.extend(reversed(right[:-1]))
        edges.append(b)
    return np.unique(np.asarray(edges))


def composite_rule(edges: np.ndarray, nodes_per_cell: int = ANGULAR_NODES
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss-Legendre rule on every cell of `edges`."""
    x, w = _legendre(nodes_per_cell)
    a, b = edges[:-1, None], edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


def angular_rule(interval: AngleInterval, breakpoints: Iterable[float], finest: float,
                 coarsest: float, nodes_per_cell: int = ANGULAR_NODES
                 ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Quadrature nodes (absolute angles) and weights on the interval, graded towards the given
    angles that fall inside it.
    """
    if interval.length <= 0.0:
        return np.zeros(0), np.zeros(0)
    offsets = interval.breakpoints_inside(breakpoints)
    edges = graded_edges(interval.length, offsets, finest, coarsest)
    nodes, weights = composite_rule(edges, nodes_per_cell)
    return interval.start + nodes, weights
