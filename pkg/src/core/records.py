"""Result records for chord and normal queries."""
from dataclasses import dataclass, field
from typing import List, Tuple

from .angles import AngleInterval

Vec2 = Tuple[float, float]


@dataclass(frozen=True)
class ChordRecord:
    """The chord K(theta, lambda) at depth lambda above the minimal supporting line."""
    theta: float
    lam: float
    length: float
    endpoints: Tuple[Vec2, Vec2]   # (Gamma(s_minus), Gamma(s_plus))


@dataclass(frozen=True)
class SemiChordRecord:
    """A chord split at s_o into its left (minus) and right (plus) semi-chords."""
    base: ChordRecord
    s_minus: float
    s_plus: float
    s_o: float
    s_o_minus: float
    s_o_plus: float
    left_len: float
    right_len: float


@dataclass(frozen=True)
class AngularPoint:
    """A boundary point whose set of normals is a nondegenerate interval."""
    s: float
    point: Vec2
    normals: AngleInterval


@dataclass
class AngularTrace:
    """Union of the interiors of all normal sets, and the symmetric angular threshold psi."""
    components: List[AngleInterval] = field(default_factory=list)
    psi: float = 0.0
