"""
The Cassels-Montgomery lower bound

    sum_{m in (Omega \\ U) cap Z^2} |S(m)|^2 >= |Omega| N / 4 - c_U N^2,   c_U = #(U cap Z^2),

for a centered closed rectangle Omega and an open centered rectangle U.
"""
import math
from dataclasses import dataclass

import numpy as np

from core import ConfigError
from pointsets import PointSet

from .expsum import exp_sum


@dataclass(frozen=True)
class CasselsMontgomeryReport:
    lhs: float
    rhs: float
    c_U: int
    frequencies: int

    @property
    def passed(self) -> bool:
        return self.lhs >= self.rhs - 1e-9 * max(abs(self.rhs), 1.0)

    def to_json(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "c_U": self.c_U,
                "frequencies": self.frequencies, "passed": self.passed}


def cassels_montgomery_check(P: PointSet, omega_halfwidths,
                             U_halfwidths) -> CasselsMontgomeryReport:
    M1, M2 = (float(v) for v in omega_halfwidths)
    U1, U2 = (float(v) for v in U_halfwidths)
    if min(M1, M2) <= 0.0 or min(U1, U2) <= 0.0:
        raise ConfigError("rectangle half-widths must be positive")
    r1 = np.arange(-math.floor(M1), math.floor(M1) + 1, dtype=np.int64)
    r2 = np.arange(-math.floor(M2), math.floor(M2) + 1, dtype=np.int64)
    m = np.stack(np.meshgrid(r1, r2, indexing="ij"), axis=-1).reshape(-1, 2)
    in_U = (np.abs(m[:, 0]) < U1) & (np.abs(m[:, 1]) < U2)
    c_U = (2 * math.ceil(U1) - 1) * (2 * math.ceil(U2) - 1)
    outside = m[~in_U]
    lhs = math.fsum((np.abs(exp_sum(P, outside)) ** 2).tolist()) if len(outside) else 0.0
    N = len(P)
    rhs = M1 * M2 * N - c_U * N * N
    return CasselsMontgomeryReport(lhs, rhs, c_U, len(outside))
