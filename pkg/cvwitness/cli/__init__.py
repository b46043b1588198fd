"""
cvwitness CLI Package

Provides the ``cvwitness`` command: witness evaluation, sweeps, threshold searches and the
sampling/estimation pipeline, all writing CSV.
"""

from .config import ExperimentConfig, parse_grid, parse_pair, read_config_file, resolve_config
from .main import build_parser, main, run

__all__ = [
    "ExperimentConfig",
    "build_parser",
    "main",
    "parse_grid",
    "parse_pair",
    "read_config_file",
    "resolve_config",
    "run",
]
