"""
Closed-form chord oracles for the power regions F(alpha) = {x >= 0, y >= x^alpha} and
G(alpha) = {y >= |x|^alpha}, used as golden values for the general chord machinery.
"""
import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from scipy.optimize import brentq

from core import RootFindingError

FIELDS = ["alpha", "theta", "rho", "total", "left", "right"]


@dataclass(frozen=True)
class OracleRow:
    alpha: float
    theta: float
    rho: float
    total: float
    left: Optional[float] = None
    right: Optional[float] = None


def f_alpha_level(alpha: float, theta: float, x: float) -> float:
    """x (x^(alpha-1) sin(theta) + cos(theta)), the depth of the power-arc point at abscissa x."""
    return x * (x ** (alpha - 1.0) * math.sin(theta) + math.cos(theta))


def solve_f_alpha(alpha: float, theta: float, depth: float) -> float:
    """The abscissa x >= 0 with f_alpha_level(x) = depth."""
    s = math.sin(theta)
    if s <= 0.0 or math.cos(theta) < -1e-15 or depth <= 0.0:
        raise RootFindingError(f"no F chord at theta={theta:.6g}, depth={depth:.6g}")
    top = (depth / s) ** (1.0 / alpha)
    try:
        return brentq(lambda x: f_alpha_level(alpha, theta, x) - depth, 0.0, top,
                      xtol=1e-300, maxiter=500)
    except ValueError as e:
        raise RootFindingError(f"F oracle failed at theta={theta:.6g}: {e}") from e


def F_alpha_chord_oracle(alpha: float, theta: float, rho: float) -> float:
    """Length of the chord of F(alpha) at depth 1/rho in direction theta in (0, pi/2]."""
    x = solve_f_alpha(alpha, theta, 1.0 / rho)
    return x / math.sin(theta)


def _expand(f, x0: float, step: float, sign: float) -> Tuple[float, float]:
    """Bracket a sign change of f starting from x0 with f(x0) < 0."""
    lo = x0
    for _ in range(200):
        hi = x0 + sign * step
        if f(hi) > 0.0:
            return (lo, hi) if sign > 0 else (hi, lo)
        lo = hi
        step *= 2.0
    raise RootFindingError("no bracket for G chord endpoint")


def G_alpha_chord_oracle(alpha: float, theta: float, rho: float) -> Tuple[float, float, float]:
    """
    (total, left, right) for the chord of G(alpha) at depth 1/rho in direction theta in
    [pi/2, pi). The chord is split at the point where u(theta) is the inner normal; the right
    part is the one towards increasing x.
    """
    if not 0.5 * math.pi <= theta < math.pi:
        raise RootFindingError(f"G oracle needs theta in [pi/2, pi), got {theta:.6g}")
    s, c = math.sin(theta), math.cos(theta)
    slope = math.tan(theta - 0.5 * math.pi)
    x_o = (slope / alpha) ** (1.0 / (alpha - 1.0)) if slope > 0.0 else 0.0
    y_o = x_o ** alpha
    d = 1.0 / (rho * s)

    def gap(x):
        return abs(x) ** alpha - (y_o + slope * (x - x_o) + d)

    step = d ** (1.0 / alpha)
    try:
        x_r = brentq(gap, *_expand(gap, x_o, step, 1.0), xtol=1e-300, maxiter=500)
        x_l = brentq(gap, *_expand(gap, x_o, step, -1.0), xtol=1e-300, maxiter=500)
    except ValueError as e:
        raise RootFindingError(f"G oracle failed at theta={theta:.6g}: {e}") from e
    total = (x_r - x_l) / s
    right = (x_r - x_o) / s - d * c
    return total, total - right, right


def dump_oracle_rows(path: str, rows: Iterable[OracleRow]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(FIELDS)
        for r in rows:
            writer.writerow([repr(r.alpha), repr(r.theta), repr(r.rho), repr(r.total),
                             "" if r.left is None else repr(r.left),
                             "" if r.right is None else repr(r.right)])
