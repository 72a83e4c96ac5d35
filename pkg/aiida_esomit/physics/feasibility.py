"""Mapping between microscopic device quantities and the model's coupling rates."""

import dataclasses
import math
from typing import NamedTuple

from aiida.common.log import AIIDA_LOGGER
from scipy.constants import c as SPEED_OF_LIGHT

from ..exceptions import ParameterError, ZeroModeVolume
from ..units import ANGULAR, unit_scale

LOGGER = AIIDA_LOGGER.getChild("esomit.feasibility")

J_SINGLE_VALUE_TOLERANCE = 0.005  # MHz, the printed precision of single-valued rows


@dataclasses.dataclass(frozen=True)
class NanoparticleSpec:
    """Scatterer near the resonator: polarizability [m³], f(r) and mode volume [m³]."""

    alpha_pol: float
    f_at_r: float
    V_m: float

    def __post_init__(self):
        if not self.V_m > 0:
            raise ZeroModeVolume(self.V_m)
        if not 0.0 <= self.f_at_r <= 1.0:
            raise ParameterError("f_at_r", f"field distribution {self.f_at_r!r} is outside [0, 1]")
        if not math.isfinite(self.alpha_pol):
            raise ParameterError("alpha_pol", f"{self.alpha_pol!r} is not finite")


@dataclasses.dataclass(frozen=True)
class FiberCouplingSpec:
    """Tapered-fiber coupler: overlap factor, refractive index and radius [m]."""

    eta: float
    n: float
    R: float

    def __post_init__(self):
        if not self.eta >= 0:
            raise ParameterError("eta", f"overlap factor must be non-negative, got {self.eta!r}")
        if not self.n >= 1:
            raise ParameterError("n", f"refractive index must be at least 1, got {self.n!r}")
        if not self.R > 0:
            raise ParameterError("R", f"radius must be positive, got {self.R!r}")

    @property
    def round_trip_time(self):
        """``τc = 2nπR / c`` [s]."""
        return 2.0 * self.n * math.pi * self.R / SPEED_OF_LIGHT


class NanoparticleCoupling(NamedTuple):
    J: float
    sign: int


def coupling_from_nanoparticle(spec, omega0):
    """Backscattering coupling from ``2J = −α f²(r) ω0 / V_m``.

    :return: `NanoparticleCoupling` with the magnitude ``J`` [rad/s] and the
        sign of the frequency shift (``-1``, ``0`` or ``+1``).
    """
    signed = -spec.alpha_pol * spec.f_at_r**2 * omega0 / (2.0 * spec.V_m)
    sign = (signed > 0) - (signed < 0)
    return NanoparticleCoupling(J=abs(signed), sign=sign)


def polarizability_for_coupling(J, f_at_r, V_m, omega0):
    """Positive polarizability producing a coupling of magnitude `J`."""
    if not V_m > 0:
        raise ZeroModeVolume(V_m)
    if not 0.0 < f_at_r <= 1.0:
        raise ParameterError("f_at_r", f"cannot invert with field distribution {f_at_r!r}")
    return 2.0 * J * V_m / (f_at_r**2 * omega0)


def fiber_coupling_rate(spec):
    """External coupling rate ``γ = η / (2τc) = ηc / (4nπR)`` [rad/s]."""
    return spec.eta * SPEED_OF_LIGHT / (4.0 * spec.n * math.pi * spec.R)


def eta_for_rate(gamma, n, R):
    """Overlap factor giving the coupling rate `gamma` for a resonator of index `n`, radius `R`."""
    spec = FiberCouplingSpec(eta=0.0, n=n, R=R)
    return gamma * 4.0 * spec.n * math.pi * spec.R / SPEED_OF_LIGHT


@dataclasses.dataclass(frozen=True)
class RangeRow:
    """One experimentally reported range; bounds in MHz, ``None`` when not reported."""

    row_id: str
    description: str
    gamma: tuple = None
    J: tuple = None

    @property
    def covers_both(self):
        return self.gamma is not None and self.J is not None


RANGE_ROWS = (
    RangeRow("wgm-eit", "EIT in a WGM resonator with a nanotip scatterer", gamma=(5.57, 11.98), J=(0.22, 7.11)),
    RangeRow("loss-induced", "loss-induced suppression and revival of lasing", J=(0.0, 200.0)),
    RangeRow("es-sensing", "exceptional-surface sensing with a fiber loop", gamma=(0.1, 3.0), J=(0.87, 0.87)),
    RangeRow("chiral-wgm", "chiral WGM coupling with two scatterers", gamma=(0.87, 5.84)),
)

# overall verdict bounds in MHz; the rows above keep the reported endpoints
GAMMA_RANGE = (0.1, 12.0)
J_RANGE = (0.0, 200.0)


def _within(value, bounds, slack=0.0):
    return bounds[0] - slack <= value <= bounds[1] + slack


def check_ranges(params, convention=ANGULAR):
    """Check ``γ1``, ``γ2`` and ``J`` against the experimentally reported ranges.

    The overall verdict uses the union of all rows, rounded to 0.1-12 MHz for
    the rates; coverage by each row is listed alongside. Parameters are never modified.
    """
    scale = unit_scale("MHz", convention)
    values = {"gamma1": params.gamma1 / scale, "gamma2": params.gamma2 / scale, "J": params.J / scale}
    gamma_union, J_union = GAMMA_RANGE, J_RANGE

    rows = []
    for row in RANGE_ROWS:
        entry = {
            "id": row.row_id,
            "description": row.description,
            "gamma": list(row.gamma) if row.gamma else None,
            "J": list(row.J) if row.J else None,
            "covers_both": row.covers_both,
        }
        if row.gamma is not None:
            entry["gamma_ok"] = all(_within(values[name], row.gamma) for name in ("gamma1", "gamma2"))
        if row.J is not None:
            slack = J_SINGLE_VALUE_TOLERANCE if row.J[0] == row.J[1] else 0.0
            entry["J_ok"] = _within(values["J"], row.J, slack)
        entry["in_range"] = all(entry.get(key, True) for key in ("gamma_ok", "J_ok"))
        rows.append(entry)

    warnings = []
    for name in ("gamma1", "gamma2"):
        value = values[name]
        if value < gamma_union[0]:
            low = min((row for row in RANGE_ROWS if row.gamma), key=lambda row: row.gamma[0])
            warnings.append(f"{name} = {value:.6g} MHz is below the {low.gamma[0]:g}-{low.gamma[1]:g} MHz range ({low.row_id})")
        elif value > gamma_union[1]:
            high = max((row for row in RANGE_ROWS if row.gamma), key=lambda row: row.gamma[1])
            warnings.append(f"{name} = {value:.6g} MHz is above the {high.gamma[0]:g}-{high.gamma[1]:g} MHz range ({high.row_id})")
    if values["J"] > J_union[1]:
        high = max((row for row in RANGE_ROWS if row.J), key=lambda row: row.J[1])
        warnings.append(f"J = {values['J']:.6g} MHz is above the {high.J[0]:g}-{high.J[1]:g} MHz range ({high.row_id})")
    for message in warnings:
        LOGGER.warning(message)

    return {
        "convention": convention,
        "values_MHz": values,
        "gamma_range_MHz": list(gamma_union),
        "J_range_MHz": list(J_union),
        "in_range": not warnings,
        "rows": rows,
        "warnings": warnings,
    }
