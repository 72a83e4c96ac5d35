"""Named parameter points, sweeps and window metrics."""

from .catalog import CATALOG, GridSpec, Preset, SweepSpec, catalog_listing, line_gamma2, preset
from .metrics import WindowMetrics, delay_extremum, figure_checks, window_metrics
from .sweeps import default_workers, sweep_1d, sweep_phase

__all__ = [
    "CATALOG",
    "GridSpec",
    "Preset",
    "SweepSpec",
    "WindowMetrics",
    "catalog_listing",
    "default_workers",
    "delay_extremum",
    "figure_checks",
    "line_gamma2",
    "preset",
    "sweep_1d",
    "sweep_phase",
    "window_metrics",
]
