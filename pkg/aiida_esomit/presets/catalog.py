"""Named parameter points and sweep scenarios.

Presets are stored as raw key-value entries in printed units and built through
`build_system`/`build_drive`, so every preset is validated exactly like a
user configuration. Values are printed in the angular convention.
"""

import dataclasses
import functools
import math
import types
import warnings
from typing import Mapping, Optional, Tuple

import numpy as np
from aiida.common.log import AIIDA_LOGGER

from ..exceptions import InvalidGrid, OutOfFigureRangeWarning, UnknownPreset
from ..physics.model import Drive, SystemParams, build_drive, build_system
from ..units import ANGULAR, parse_quantity, unit_scale

LOGGER = AIIDA_LOGGER.getChild("esomit.presets")

LINE_SLOPE = -0.86
LINE_INTERCEPT_MHZ = 1.86
LINE_RANGE_MHZ = (0.6, 1.5)
DEFAULT_GRID = ("-5 MHz", "5 MHz", 2001)
DEFAULT_PHASES = ("1.3pi", "1.4pi", "1.5pi", "1.6pi", "1.7pi")

BASELINE = {
    "R": "34.5 um",
    "omega0": "193 THz",
    "gamma0": "1 MHz",
    "m": "50 ng",
    "omega_m": "147 MHz",
    "gamma_m": "0.24 MHz",
    "Pc": "1 mW",
    "gamma1": "1 MHz",
    "gamma2": "1 MHz",
    "J": "0 MHz",
    "t0": "1",
    "phi3": "1.5pi",
}

UNSTATED_SETTINGS = (
    "pump detuning delta_a defaults to omega_m",
    "probe grid defaults to -5..5 MHz with 2001 points",
)
FIRST_KIND_SETTINGS = ("t0 = 1 and phi3 = 1.5pi assumed on the J = 0 surface",)


@dataclasses.dataclass(frozen=True)
class GridSpec:
    """Uniform grid on one axis; bounds in SI units."""

    min: float
    max: float
    count: int
    axis: str = "delta_p"

    def __post_init__(self):
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise InvalidGrid(self.axis, f"point count must be a positive integer, got {self.count!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)):
            raise InvalidGrid(self.axis, "grid bounds must be finite")
        if self.count > 1 and not self.min < self.max:
            raise InvalidGrid(self.axis, f"grid minimum {self.min!r} must be below maximum {self.max!r}")

    @classmethod
    def from_text(cls, low, high, count, axis="delta_p", convention=ANGULAR):
        return cls(
            min=parse_quantity(low, convention, axis),
            max=parse_quantity(high, convention, axis),
            count=int(count),
            axis=axis,
        )

    def values(self):
        if self.count == 1:
            return np.array([self.min])
        return np.linspace(self.min, self.max, int(self.count))

    @property
    def step(self):
        return 0.0 if self.count == 1 else (self.max - self.min) / (self.count - 1)


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    """Parameter sweep: `axis` of `SystemParams`, SI `values`, optional `tie` hook."""

    axis: str
    values: Tuple[float, ...]
    tie: Optional[str] = None


@dataclasses.dataclass(frozen=True)
class Preset:
    name: str
    params: SystemParams
    drive: Drive
    grid: GridSpec
    provenance: str
    raw: Mapping
    sweep: Optional[SweepSpec] = None
    assumptions: Tuple[str, ...] = ()
    convention: str = ANGULAR

    @property
    def delta_a(self):
        return self.drive.delta_a(self.params)

    def metadata(self):
        return {
            "preset": self.name,
            "provenance": self.provenance,
            "assumptions": list(self.assumptions),
            "convention": self.convention,
        }


def line_gamma2(gamma1, convention=ANGULAR):
    """``γ2 = −0.86 γ1 + 1.86`` (rates in MHz) along the J = 0 exceptional line.

    Warns with `OutOfFigureRangeWarning` outside ``γ1 ∈ [0.6, 1.5] MHz``.
    """
    scale = unit_scale("MHz", convention)
    gamma1_mhz = gamma1 / scale
    low, high = LINE_RANGE_MHZ
    if not low - 1e-12 <= gamma1_mhz <= high + 1e-12:
        LOGGER.warning("gamma1 = %.6g MHz is outside the plotted line range %s MHz", gamma1_mhz, LINE_RANGE_MHZ)
        warnings.warn(
            f"gamma1 = {gamma1_mhz:g} MHz is outside [{low}, {high}] MHz",
            OutOfFigureRangeWarning,
            stacklevel=2,
        )
    return (LINE_SLOPE * gamma1_mhz + LINE_INTERCEPT_MHZ) * scale


# name -> (changes to BASELINE, provenance, sweep (axis, values, tie) or None, extra assumptions)
_ENTRIES = {
    "baseline": ({}, "device parameters used throughout, J = 0", None, FIRST_KIND_SETTINGS),
    "es1-ep1": (
        {"gamma1": "0.7 MHz", "gamma2": "1.26 MHz"},
        "first EP on the J = 0 exceptional line",
        None,
        FIRST_KIND_SETTINGS,
    ),
    "es1-ep2": (
        {"gamma1": "1 MHz", "gamma2": "1 MHz"},
        "second EP on the J = 0 exceptional line",
        None,
        FIRST_KIND_SETTINGS,
    ),
    "es1-ep3": (
        {"gamma1": "1.38 MHz", "gamma2": "0.68 MHz"},
        "third EP on the J = 0 exceptional line",
        None,
        FIRST_KIND_SETTINGS,
    ),
    "es1-np": (
        {"J": "0.3 MHz"},
        "es1-ep2 moved off the J = 0 surface by J = 0.3 MHz",
        None,
        FIRST_KIND_SETTINGS,
    ),
    "es2-np1": (
        {"J": "1.5 MHz", "gamma1": "0.5 MHz", "gamma2": "0.5 MHz"},
        "NP1 point off the second-kind surface",
        None,
        (),
    ),
    "es2-ep1": (
        {"J": "0.5 MHz", "gamma1": "0.5 MHz", "gamma2": "0.5 MHz"},
        "EP1 on the second-kind surface, t0 = 1",
        None,
        (),
    ),
    "es2-ep2": ({"J": "1 MHz"}, "EP2 on the second-kind surface, t0 = 1", None, ()),
    "es2-ep3": (
        {"J": "1.5 MHz", "gamma1": "1.5 MHz", "gamma2": "1.5 MHz"},
        "EP3 on the second-kind surface, t0 = 1",
        None,
        (),
    ),
    "es2-ep4": ({"J": "0.9 MHz", "t0": "0.9"}, "EP4 on the second-kind surface, t0 = 0.9", None, ()),
    "es2-ep5": (
        {"J": "0.82 MHz", "gamma1": "0.61 MHz", "gamma2": "1.11 MHz"},
        "EP5 on the second-kind surface, t0 = 1",
        None,
        (),
    ),
    "fig2a-black": ({}, "OMIT spectrum on the J = 0 surface", None, FIRST_KIND_SETTINGS),
    "fig2a-red": ({"J": "1 MHz"}, "OMIT spectrum on the second-kind surface", None, ()),
    "fig2d-line": (
        {"gamma1": "0.7 MHz", "gamma2": "1.26 MHz"},
        "spectra along the J = 0 exceptional line, gamma2 tied to gamma1",
        ("gamma1", ("0.7 MHz", "1.38 MHz", 50), "line"),
        FIRST_KIND_SETTINGS,
    ),
    "fig4-surfaces": (
        {"J": "1 MHz"},
        "second-kind surface cross-sections over t0, J tied to t0 sqrt(gamma1 gamma2)",
        ("t0", ("0.9", "1", 11), "es"),
        (),
    ),
    "fig5-phase-sweep": (
        {"J": "1 MHz"},
        "group delay at EP2 while the loop phase leaves 1.5pi",
        ("phi3", DEFAULT_PHASES, None),
        ("NP loop phases are not printed; 1.3pi..1.7pi assumed",),
    ),
}

CATALOG = tuple(_ENTRIES)


def _sweep_values(spec, convention):
    if len(spec) == 3 and isinstance(spec[2], int):
        low, high, count = spec
        return tuple(GridSpec.from_text(low, high, count, "sweep", convention).values().tolist())
    return tuple(parse_quantity(value, convention, "sweep") for value in spec)


@functools.lru_cache(maxsize=None)
def preset(name, convention=ANGULAR):
    """Return the named `Preset`, built and validated under `convention`."""
    try:
        changes, provenance, sweep, assumptions = _ENTRIES[name]
    except KeyError:
        raise UnknownPreset(name, CATALOG) from None
    raw = {**BASELINE, **changes}
    params = build_system(raw, convention)
    drive = build_drive(raw, params, convention)
    grid = GridSpec.from_text(*DEFAULT_GRID, convention=convention)
    sweep_spec = None
    if sweep is not None:
        axis, values, tie = sweep
        sweep_spec = SweepSpec(axis=axis, values=_sweep_values(values, convention), tie=tie)
    return Preset(
        name=name,
        params=params,
        drive=drive,
        grid=grid,
        provenance=provenance,
        raw=types.MappingProxyType(raw),
        sweep=sweep_spec,
        assumptions=UNSTATED_SETTINGS + tuple(assumptions),
        convention=convention,
    )


def catalog_listing(convention=ANGULAR):
    """Machine-readable summary of every preset, one dict per entry."""
    listing = []
    mhz = unit_scale("MHz", convention)
    for name in CATALOG:
        entry = preset(name, convention)
        params = entry.params
        item = {
            "name": name,
            "provenance": entry.provenance,
            "J": f"{params.J / mhz:g} MHz",
            "gamma1": f"{params.gamma1 / mhz:g} MHz",
            "gamma2": f"{params.gamma2 / mhz:g} MHz",
            "t0": f"{params.t0:g}",
            "phi3": f"{params.phi3 / math.pi:g}pi",
            "grid_points": int(entry.grid.count),
        }
        if entry.sweep is not None:
            item["sweep_axis"] = entry.sweep.axis
            item["sweep_points"] = len(entry.sweep.values)
            item["sweep_tie"] = entry.sweep.tie or "none"
        listing.append(item)
    return listing
