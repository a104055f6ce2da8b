"""
JSON documents for bodies.

  {"kind": "polygon", "vertices": [[x, y], ...]}
  {"kind": "arcs", "arcs": [{"type": "line" | "circular" | "power" | "sampled", ...}, ...]}

A "sampled" arc is a polyline {"points": [[x, y], ...]} and is read as consecutive line pieces.
"""
import json
from pathlib import Path
from typing import List, Union

from .body import ConvexBody
from .errors import InvalidBodyError
from .pieces import LinePiece, Piece, PieceMetaclass


def pieces_from_json(arcs: List[dict]) -> List[Piece]:
    pieces: List[Piece] = []
    for i, arc in enumerate(arcs):
        tag = arc.get("type")
        if tag == "sampled":
            points = arc.get("points", [])
            if len(points) < 2:
                raise InvalidBodyError(f"sampled arc {i} needs at least two points")
            pieces.extend(LinePiece(tuple(map(float, a)), tuple(map(float, b)))
                          for a, b in zip(points[:-1], points[1:]))
            continue
        cls = PieceMetaclass.registry.get(tag)
        if cls is None:
            raise InvalidBodyError(f"unknown arc type {tag!r} at position {i}")
        try:
            pieces.append(cls.from_json(arc))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidBodyError(f"bad {tag} arc at position {i}: {e}") from e
    return pieces


def body_from_json(data: dict) -> ConvexBody:
    kind = data.get("kind")
    name = data.get("name", "")
    if kind == "polygon":
        return ConvexBody.polygon(data.get("vertices", []), name=name)
    if kind == "arcs":
        return ConvexBody(pieces_from_json(data.get("arcs", [])), name=name)
    raise InvalidBodyError(f"unknown body kind {kind!r}")


def load_body(path: Union[str, Path]) -> ConvexBody:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidBodyError(f"cannot read body file {path}: {e}") from e
    return body_from_json(data)


def save_body(body: ConvexBody, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(body.to_json(), f, indent=2)
        f.write("\n")
