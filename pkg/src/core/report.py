"""
Report fields: properties of a body that are emitted in the body-info JSON report.
"""
import math
from typing import Any, Callable, ClassVar, Dict, Optional

import numpy as np


class ReportField(property):
    """
    A read-only property that is also collected into the JSON report of its owner.
    """
    def __init__(self, fget=None, fset=None, fdel=None, doc=None):
        super().__init__(fget, fset, fdel, doc)
        self._name: str = ""
        self.display_name: Optional[str] = None
        self.digits: Optional[int] = None

    @property
    def name(self) -> str:
        return self._name

    def __set_name__(self, owner, name: str) -> None:
        self._name = name

    def serialize(self, value) -> Any:
        """Convert the value into something json.dumps accepts."""
        return to_jsonable(value, self.digits)


def to_jsonable(value, digits: Optional[int] = None):
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v, digits) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: to_jsonable(v, digits) for k, v in value.items()}
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if not math.isfinite(value):
            return None
        return round(value, digits) if digits is not None else value
    if isinstance(value, np.integer):
        return int(value)
    return value


def report_field(display_name: str = "", digits: Optional[int] = None
                 ) -> Callable[[Callable], ReportField]:
    """
    Decorator to define a reported property.
    """
    def decorator(func):
        prop = ReportField(func)
        prop.display_name = display_name
        prop.digits = digits
        return prop
    return decorator


class ReportMetaclass(type):
    """
    Collects every ReportField of a class and its bases into `report_fields`, in definition order.
    """
    def __new__(mcs, name, bases, attrs):
        fields = {}
        for b in bases:
            fields.update(getattr(b, "report_fields", {}))

        for key, value in attrs.items():
            if isinstance(value, ReportField):
                fields[key] = value

        attrs["report_fields"] = fields
        return super().__new__(mcs, name, bases, attrs)


class Reportable(metaclass=ReportMetaclass):
    """Base class for objects with a JSON report."""
    report_fields: ClassVar[Dict[str, ReportField]]

    def report(self) -> Dict[str, Any]:
        """Evaluate every report field."""
        return {name: f.serialize(f.fget(self)) for name, f in self.report_fields.items()}

    def report_labels(self) -> Dict[str, str]:
        return {name: f.display_name or name for name, f in self.report_fields.items()}
