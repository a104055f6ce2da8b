"""
Named bodies and the body-spec parser.

A body spec is either a path to a JSON body file or `kind[:key=value,...]`, for example
`disc`, `polygon:6`, `rect:1x3`, `C:phi=pi/2,alpha=2`.
"""
import math
import re
from logging import debug
from pathlib import Path
from typing import Callable, Dict

import numpy as np

from core import ConfigError, ConvexBody, InvalidBodyError, load_body, split_circle

from .intermediate import IntermediateBodySpec, make_C, make_G_body, make_H

BodyFactory = Callable[..., ConvexBody]
_factories: Dict[str, BodyFactory] = {}


def body_kind(*names: str):
    """
    Decorator to register a body factory under one or more spec names.
    The factory receives the spec parameters as strings.
    """
    def decorator(func):
        for name in names:
            register_body_kind(name, func)
        return func
    return decorator


def register_body_kind(name: str, factory: BodyFactory) -> None:
    if name in _factories:
        debug("body kind %s redefined", name)
    _factories[name] = factory


def body_kinds():
    return sorted(_factories)


def make_disc(radius: float = 1.0, center=(0.0, 0.0)) -> ConvexBody:
    if radius <= 0.0:
        raise InvalidBodyError("disc radius must be positive")
    return ConvexBody(split_circle(center, radius, 0.0, 2.0 * math.pi), name="disc")


def make_rectangle(width: float, height: float, center=(0.0, 0.0)) -> ConvexBody:
    if width <= 0.0 or height <= 0.0:
        raise InvalidBodyError("rectangle sides must be positive")
    cx, cy = center
    w, h = 0.5 * width, 0.5 * height
    return ConvexBody.polygon([(cx - w, cy - h), (cx + w, cy - h), (cx + w, cy + h),
                               (cx - w, cy + h)], name=f"rect:{width:g}x{height:g}")


def make_square(side: float = 1.0, center=(0.5, 0.5)) -> ConvexBody:
    """Axis-parallel square; the default is [0, 1]^2."""
    body = make_rectangle(side, side, center)
    body.name = "square"
    return body


def make_regular_polygon(n_sides: int, circumradius: float = 1.0, phase: float = 0.0,
                         center=(0.0, 0.0)) -> ConvexBody:
    """Regular polygon with vertices at angles phase + 2 pi k / n_sides."""
    if n_sides < 3:
        raise InvalidBodyError("a regular polygon needs at least three sides")
    if circumradius <= 0.0:
        raise InvalidBodyError("circumradius must be positive")
    angles = phase + 2.0 * math.pi * np.arange(n_sides) / n_sides
    vertices = np.asarray(center) + circumradius * np.stack([np.cos(angles), np.sin(angles)], 1)
    return ConvexBody.polygon(vertices, name=f"polygon:{n_sides}")


_ANGLE = re.compile(r"^\s*(?:([-+]?[0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text: str) -> float:
    """A float, or a multiple of pi such as `pi/2`, `3*pi/4`, `0.5pi`."""
    m = _ANGLE.match(text)
    try:
        if m:
            factor = float(m.group(1)) if m.group(1) else 1.0
            divisor = float(m.group(2)) if m.group(2) else 1.0
            return factor * math.pi / divisor
        return float(text)
    except ValueError as e:
        raise ConfigError(f"not an angle: {text!r}") from e


@body_kind("disc")
def _disc(radius: str = "1"):
    return make_disc(parse_angle(radius))


@body_kind("square")
def _square(side: str = "1"):
    return make_square(parse_angle(side))


@body_kind("hexagon")
def _hexagon(circumradius: str = "1"):
    body = make_regular_polygon(6, parse_angle(circumradius))
    body.name = "hexagon"
    return body


@body_kind("polygon")
def _polygon(n: str = "6", circumradius: str = "1", phase: str = "0"):
    try:
        sides = int(n)
    except ValueError as e:
        raise ConfigError(f"polygon side count must be an integer, got {n!r}") from e
    return make_regular_polygon(sides, parse_angle(circumradius), parse_angle(phase))


@body_kind("rect")
def _rect(size: str = "1x3"):
    try:
        w, h = (float(v) for v in size.lower().split("x"))
    except ValueError as e:
        raise ConfigError(f"rectangle size must look like WxH, got {size!r}") from e
    return make_rectangle(w, h)


@body_kind("H", "C")
def _intermediate(kind: str = "C", phi: str = "pi/2", alpha: str = "2", eps: str = "0.1",
                  diameter: str = "0.8"):
    spec = IntermediateBodySpec(parse_angle(phi), parse_angle(alpha), parse_angle(eps))
    if kind == "H":
        return make_H(spec)
    target = None if diameter.lower() == "none" else parse_angle(diameter)
    return make_C(spec, target_diameter=target)


@body_kind("G")
def _g(alpha: str = "2", height: str = "1"):
    return make_G_body(parse_angle(alpha), parse_angle(height))


_POSITIONAL = {"disc": "radius", "square": "side", "hexagon": "circumradius", "polygon": "n",
               "rect": "size"}


def parse_body_spec(text: str) -> ConvexBody:
    """Build the body named by a spec string or stored in a JSON file."""
    text = text.strip()
    if text.endswith(".json") or Path(text).is_file():
        return load_body(text)
    kind, _, rest = text.partition(":")
    factory = _factories.get(kind)
    if factory is None:
        raise ConfigError(f"unknown body kind {kind!r}; known kinds: {', '.join(body_kinds())}")
    params: Dict[str, str] = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            if kind not in _POSITIONAL:
                raise ConfigError(f"body parameter {item!r} needs a name")
            key, value = _POSITIONAL[kind], item
        params[key.strip()] = value.strip()
    if kind in ("H", "C"):
        params["kind"] = kind
    try:
        body = factory(**params)
    except TypeError as e:
        raise ConfigError(f"bad parameters for body kind {kind!r}: {e}") from e
    debug("parsed body spec %s -> %r", text, body)
    return body
