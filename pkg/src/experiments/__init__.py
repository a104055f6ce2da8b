"""
Experiments: layered configuration, subcommands, result rows and slope fits.
"""
from . import commands  # registers the subcommands
from .config import ExperimentConfig, config_keys, load_config, parse_interval
from .fitting import (SlopeFit, check_gate, expected_decay_slope, expected_discrepancy_exponent,
                      fit_loglog, fit_schedule)
from .registry import Experiment, experiment, experiments
from .results import ResultRow, rows_to_csv, run_rows
