"""
Registry of experiment subcommands.
"""
from dataclasses import dataclass
from logging import debug
from typing import Callable, Dict, Tuple

from .config import ExperimentConfig

Command = Callable[[ExperimentConfig, bool], int]


@dataclass(frozen=True)
class Experiment:
    name: str
    run: Command
    help: str
    columns: Tuple[str, ...] = ()


_experiments: Dict[str, Experiment] = {}


def experiment(name: str, help: str, columns: Tuple[str, ...] = ()):
    """Decorator registering `func(config, gate) -> exit code` as a subcommand."""
    def decorator(func: Command) -> Command:
        if name in _experiments:
            debug("experiment %s redefined", name)
        _experiments[name] = Experiment(name, func, help, tuple(columns))
        return func
    return decorator


def experiments() -> Dict[str, Experiment]:
    return dict(_experiments)
