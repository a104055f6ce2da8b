"""
Log-log slope fits and the slopes expected from the secondary decay exponent h.
"""
import math
from dataclasses import dataclass
from logging import info
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import linregress

from core import AcceptanceError, NumericalError

MIN_FIT_POINTS = 3


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    stderr: float
    intercept: float
    rvalue: float
    points: int
    x_min: float
    x_max: float

    def to_json(self) -> dict:
        return {"slope": self.slope, "stderr": self.stderr, "intercept": self.intercept,
                "rvalue": self.rvalue, "points": self.points, "x_min": self.x_min,
                "x_max": self.x_max}

    def describe(self) -> str:
        return (f"slope={self.slope!r} stderr={self.stderr!r} points={self.points} "
                f"range=[{self.x_min!r}, {self.x_max!r}]")


def fit_loglog(x: Sequence[float], y: Sequence[float]) -> SlopeFit:
    """Least-squares slope of log y against log x over the positive finite pairs."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = np.isfinite(x) & np.isfinite(y) & (x > 0.0) & (y > 0.0)
    x, y = x[keep], y[keep]
    if len(x) < MIN_FIT_POINTS or np.ptp(x) == 0.0:
        raise NumericalError(f"a log-log fit needs {MIN_FIT_POINTS} distinct positive points, "
                             f"got {len(x)}")
    res = linregress(np.log(x), np.log(y))
    return SlopeFit(float(res.slope), float(res.stderr), float(res.intercept), float(res.rvalue),
                    len(x), float(x.min()), float(x.max()))


def fit_schedule(x: Sequence[float], y: Sequence[float]) -> Tuple[SlopeFit, SlopeFit]:
    """(fit over the upper half of the schedule, fit over all of it)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    order = np.argsort(x)
    x, y = x[order], y[order]
    full = fit_loglog(x, y)
    start = min(len(x) // 2, max(len(x) - MIN_FIT_POINTS, 0))
    upper = fit_loglog(x[start:], y[start:])
    return upper, full


def expected_decay_slope(quantity: str, h: float) -> float:
    """-(2 + 2h) along a single ray, -(3 + h) once rotations are averaged in."""
    if quantity == "dilation":
        return -(2.0 + 2.0 * h)
    return -(3.0 + h)


def expected_discrepancy_exponent(h: float) -> float:
    return 2.0 / (4.0 + h)


def resolve_expected(expect: Optional[float], h: Optional[float], derive) -> Optional[float]:
    if expect is not None:
        return expect
    if h is not None:
        return derive(h)
    return None


def check_gate(label: str, fit: SlopeFit, expected: Optional[float], tolerance: float) -> None:
    """Raise AcceptanceError when the slope misses the expected one by more than tolerance."""
    if expected is None:
        raise AcceptanceError(f"{label}: no expected value; set expect= or h=")
    miss = abs(fit.slope - expected)
    if not miss <= tolerance or not math.isfinite(fit.slope):
        raise AcceptanceError(f"{label}: slope {fit.slope:.4f} misses {expected:.4f} "
                              f"by {miss:.4f} > {tolerance}")
    info("%s: slope %.4f within %.4f of %.4f", label, fit.slope, tolerance, expected)
