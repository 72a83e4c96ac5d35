"""Readers for run configurations and exported tables."""

from .config import RunConfig, parse_config_text, parse_grid, parse_override, read_config
from .tables import read_spectrum_csv

__all__ = [
    "RunConfig",
    "parse_config_text",
    "parse_grid",
    "parse_override",
    "read_config",
    "read_spectrum_csv",
]
