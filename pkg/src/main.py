"""Command-line entry point for the convex-body Fourier and discrepancy experiments."""

import argparse
import importlib
import logging
import sys
from logging import info, warning
from os import environ as env
from typing import List, Optional

from dotenv import load_dotenv

from bodies import register_body_kind
from core import ConfigError, ConvexError
from experiments import experiments, load_config
from experiments.config import field_defaults


def load_body_modules(module_names: List[str]) -> int:
    """Import modules with a create_bodies() hook and register the body kinds they return."""
    loaded = 0
    for module_name in module_names:
        try:
            body_module = importlib.import_module(module_name)
        except ImportError as e:
            raise ConfigError(f"Error importing module '{module_name}': {e}") from e

        if hasattr(body_module, "create_bodies"):
            for kind, factory in body_module.create_bodies().items():
                register_body_kind(kind, factory)
            loaded += 1
            info("Loaded module: %s", module_name)
        else:
            warning("Module '%s' does not have 'create_bodies' function.", module_name)
    return loaded


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convex-discrepancy",
        description="Fourier decay, semi-chord and discrepancy experiments for planar convex "
                    "bodies.",
        epilog="Exit codes: 0 success, 2 configuration error, 3 numerical failure, "
               "4 acceptance gate failure (with --assert).")
    parser.add_argument("--log-level", default=None,
                        help="logging level (default: LOG_LEVEL or WARNING)")
    subparsers = parser.add_subparsers(dest="command", required=True)
    defaults = field_defaults()
    for name, exp in sorted(experiments().items()):
        epilog = f"CSV columns: {', '.join(exp.columns)}, status" if exp.columns else None
        sub = subparsers.add_parser(name, help=exp.help, description=exp.help, epilog=epilog)
        sub.add_argument("--config", default=None, help="key=value config file")
        sub.add_argument("--assert", dest="gate", action="store_true",
                         help="fail with exit code 4 when the acceptance gate is missed")
        for key, default in defaults.items():
            if key == "kind":
                continue
            sub.add_argument(f"--{key.replace('_', '-')}", dest=key, default=None,
                             metavar=key.upper(), help=f"(default: {default!r})")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = (args.log_level or env.get("LOG_LEVEL", "WARNING")).upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        load_body_modules(env.get("BODY_MODULES", "").split())
        overrides = {key: value for key, value in vars(args).items()
                     if key not in ("command", "config", "gate", "log_level")}
        overrides["kind"] = args.command
        config = load_config(args.config, overrides)
        return experiments()[args.command].run(config, args.gate)
    except ConvexError as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    load_dotenv()
    sys.exit(main())
