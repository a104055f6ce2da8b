"""
Point sets on the unit torus and the structure tags that give their exponential sums in closed
form.
"""
import csv
import io
import json
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from core import ConfigError


@dataclass(frozen=True)
class Generic:
    """No exploitable structure."""
    tag = "generic"

    def to_json(self) -> dict:
        return {"tag": self.tag}


@dataclass(frozen=True)
class Product:
    """The grid {(l/L, g/G)}."""
    L: int
    G: int
    tag = "product"

    def to_json(self) -> dict:
        return {"tag": self.tag, "L": self.L, "G": self.G}


@dataclass(frozen=True)
class Sublattice:
    """The points (q2 l/L - q1 g/G, q1 l/L + q2 g/G) mod 1."""
    q1: int
    q2: int
    L: int
    G: int
    tag = "sublattice"

    def to_json(self) -> dict:
        return {"tag": self.tag, "q1": self.q1, "q2": self.q2, "L": self.L, "G": self.G}


@dataclass(frozen=True)
class Composite:
    """Union of blocks, followed by `leftover` points at the origin."""
    blocks: tuple
    leftover: int = 0
    tag = "composite"

    def to_json(self) -> dict:
        return {"tag": self.tag, "leftover": self.leftover,
                "blocks": [{"n": len(b), "structure": b.structure.to_json()} for b in self.blocks]}


Structure = Union[Generic, Product, Sublattice, Composite]


@dataclass
class PointSet:
    """N points of [0, 1)^2, repetitions allowed."""
    points: np.ndarray
    structure: Structure = field(default_factory=Generic)
    name: str = ""

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 1:
            raise ConfigError("a point set needs at least one (x, y) point")
        if not np.all(np.isfinite(pts)):
            raise ConfigError("point coordinates must be finite")
        pts = np.mod(pts, 1.0)
        pts[pts >= 1.0] = 0.0
        self.points = pts

    def __len__(self) -> int:
        return len(self.points)

    @property
    def N(self) -> int:
        return len(self.points)

    @property
    def distinct_count(self) -> int:
        """Number of distinct points, with coordinates compared on a 1e-9 grid."""
        keys = np.round(self.points * 1e9).astype(np.int64) % 1_000_000_000
        return len(np.unique(keys, axis=0))

    def translated(self, offset) -> "PointSet":
        """The same set moved by `offset` mod 1; the structure tag is dropped."""
        return PointSet(self.points + np.asarray(offset, dtype=float), Generic(),
                        f"{self.name}+shift")


def structure_from_json(data: dict, points: Optional[np.ndarray] = None) -> Structure:
    tag = data.get("tag", "generic")
    if tag == "generic":
        return Generic()
    if tag == "product":
        return Product(int(data["L"]), int(data["G"]))
    if tag == "sublattice":
        return Sublattice(int(data["q1"]), int(data["q2"]), int(data["L"]), int(data["G"]))
    if tag == "composite":
        if points is None:
            raise ConfigError("composite structure needs the points")
        blocks = []
        start = 0
        for block in data.get("blocks", []):
            n = int(block["n"])
            blocks.append(PointSet(points[start:start + n],
                                   structure_from_json(block["structure"])))
            start += n
        return Composite(tuple(blocks), int(data.get("leftover", 0)))
    raise ConfigError(f"unknown point-set structure {tag!r}")


def format_points_csv(pointset: PointSet) -> str:
    """x,y rows after a `# structure=` header line."""
    buffer = io.StringIO()
    buffer.write(f"# structure={json.dumps(pointset.structure.to_json())}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in pointset.points:
        writer.writerow([repr(float(x)), repr(float(y))])
    return buffer.getvalue()


def write_points_csv(pointset: PointSet, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        f.write(format_points_csv(pointset))


def read_points_csv(path: str) -> PointSet:
    structure = {"tag": "generic"}
    rows: List[List[float]] = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
        for line in lines:
            if line.startswith("# structure="):
                structure = json.loads(line[len("# structure="):])
        reader = csv.DictReader(line for line in lines if not line.startswith("#"))
        rows = [[float(r["x"]), float(r["y"])] for r in reader]
    except (OSError, KeyError, ValueError) as e:
        raise ConfigError(f"cannot read point set {path}: {e}") from e
    points = np.array(rows)
    return PointSet(points, structure_from_json(structure, points), name=path)
