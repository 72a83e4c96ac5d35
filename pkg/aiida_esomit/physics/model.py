"""Parameter model of the CW/CCW/mechanical system.

All quantities are SI; rates and frequencies are angular (rad/s). The types are
frozen dataclasses, validated on construction, so every derived copy made with
`SystemParams.replace` is validated again.
"""

import dataclasses
import math
from typing import Mapping, Optional

import numpy as np
from aiida.common.log import AIIDA_LOGGER
from scipy.constants import hbar

from ..exceptions import (
    InvalidQuantity,
    MissingField,
    NegativeRate,
    NonPositiveFrequency,
    ParameterError,
    T0OutOfRange,
)
from ..units import ANGULAR, parse_quantity

LOGGER = AIIDA_LOGGER.getChild("esomit.model")

DEFAULT_PROBE_RATIO = 1.0e-4
ES_PHASE = 1.5 * math.pi

REQUIRED_FIELDS = (
    "omega0",
    "gamma0",
    "gamma1",
    "gamma2",
    "J",
    "t0",
    "phi3",
    "R",
    "m",
    "omega_m",
    "gamma_m",
)
OPTIONAL_FIELDS = ("phi1", "phi2", "g", "one-way-coupling")
DRIVE_FIELDS = ("Pc", "Pp", "delta_a")

_SWITCH_VALUES = {"on": True, "true": True, "1": True, "off": False, "false": False, "0": False}


def quarter_turn_trig(phi):
    """Return ``(cos(phi), sin(phi))``, exact when `phi` is a multiple of π/2."""
    quarters = phi / (0.5 * math.pi)
    k = round(quarters)
    if abs(quarters - k) <= 4.0 * np.finfo(float).eps * max(1.0, abs(k)):
        return ((1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0))[k % 4]
    return math.cos(phi), math.sin(phi)


def phasor(phi):
    """Return ``exp(i phi)`` with exact quarter turns."""
    cos_phi, sin_phi = quarter_turn_trig(phi)
    return complex(cos_phi, sin_phi)


@dataclasses.dataclass(frozen=True)
class SystemParams:
    """Static parameters of the coupled CW/CCW/mechanical system.

    ``g`` follows ``omega0 / R`` unless ``g_override`` is set. ``one_way``
    switches the engineered fiber loop; without it ``t3 = 0``.
    """

    omega0: float
    gamma0: float
    gamma1: float
    gamma2: float
    J: float
    t0: float
    phi3: float
    R: float
    m: float
    omega_m: float
    gamma_m: float
    phi1: Optional[float] = None
    phi2: Optional[float] = None
    g: Optional[float] = None
    g_override: bool = False
    one_way: bool = True

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if isinstance(value, float) and not math.isfinite(value):
                raise InvalidQuantity(field.name, f"{value!r} is not finite")
        if self.omega0 <= 0:
            raise NonPositiveFrequency("omega0", f"must be positive, got {self.omega0!r}")
        if self.omega_m <= 0:
            raise NonPositiveFrequency("omega_m", f"must be positive, got {self.omega_m!r}")
        for name in ("gamma0", "gamma1", "gamma2", "gamma_m"):
            if getattr(self, name) <= 0:
                raise NegativeRate(name, f"rate must be positive, got {getattr(self, name)!r}")
        if self.J < 0:
            raise NegativeRate("J", f"coupling must be non-negative, got {self.J!r}")
        if not 0.0 <= self.t0 <= 1.0:
            raise T0OutOfRange(self.t0)
        for name in ("R", "m"):
            if getattr(self, name) <= 0:
                raise ParameterError(name, f"must be positive, got {getattr(self, name)!r}")

        if self.phi1 is None:
            object.__setattr__(self, "phi1", self.phi3)
        if self.phi2 is None:
            object.__setattr__(self, "phi2", self.phi3)
        if not self.g_override:
            object.__setattr__(self, "g", self.omega0 / self.R)
        elif self.g is None or not math.isfinite(self.g) or self.g < 0:
            raise ParameterError("g", f"override must be a non-negative number, got {self.g!r}")

    @property
    def gamma_half(self):
        """Total half-linewidth ``(gamma0 + gamma1 + gamma2) / 2``."""
        return 0.5 * (self.gamma0 + self.gamma1 + self.gamma2)

    def replace(self, **changes):
        """Return a validated copy with `changes` applied.

        Changing ``g`` sets the override flag.
        """
        if "g" in changes and "g_override" not in changes:
            changes["g_override"] = True
        return dataclasses.replace(self, **changes)

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class Drive:
    """Pump and probe fields: powers [W] and angular frequencies [rad/s]."""

    Pc: float
    Pp: float
    omega_c: float
    omega_p: float

    def __post_init__(self):
        if not self.Pc > 0:
            raise ParameterError("Pc", f"pump power must be positive, got {self.Pc!r}")
        if not self.Pp >= 0:
            raise ParameterError("Pp", f"probe power must be non-negative, got {self.Pp!r}")

    @classmethod
    def for_detuning(cls, params, delta_a, Pc, Pp=None, delta_p=0.0):
        """Drive with pump detuning ``delta_a = omega0 - omega_c``."""
        if Pp is None:
            Pp = DEFAULT_PROBE_RATIO * Pc
        return cls(
            Pc=Pc,
            Pp=Pp,
            omega_c=params.omega0 - delta_a,
            omega_p=params.omega0 + delta_p,
        )

    @property
    def xi(self):
        """Probe-pump beat ``omega_p - omega_c``."""
        return self.omega_p - self.omega_c

    def delta_a(self, params):
        return params.omega0 - self.omega_c

    def delta(self, params):
        """Effective detuning ``Delta = Delta_a + J``."""
        return self.delta_a(params) + params.J

    def delta_p(self, params):
        return self.omega_p - params.omega0

    def at_probe_detuning(self, params, delta_p):
        """Copy with the probe at ``omega0 + delta_p``."""
        return dataclasses.replace(self, omega_p=params.omega0 + delta_p)

    def as_dict(self):
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class DerivedRates:
    gamma_half: float
    s: float
    t1: complex
    t2: complex
    t3: complex
    lambda_: complex


def derived_rates(params):
    """Compute γ, the one-way coupling magnitude and the fiber coefficients."""
    sqrt_g1g2 = math.sqrt(params.gamma1 * params.gamma2)
    t1 = params.t0 * phasor(params.phi1)
    t2 = params.t0 * phasor(params.phi2)
    t3 = params.t0 * phasor(params.phi3) if params.one_way else 0j
    return DerivedRates(
        gamma_half=params.gamma_half,
        s=params.t0 * sqrt_g1g2,
        t1=t1,
        t2=t2,
        t3=t3,
        lambda_=1j * sqrt_g1g2 * t3,
    )


def drive_amplitudes(drive):
    """Return ``(Ec, Ep)`` in sqrt(photons/s)."""
    for name in ("omega_c", "omega_p"):
        if not getattr(drive, name) > 0:
            raise NonPositiveFrequency(name, f"must be positive, got {getattr(drive, name)!r}")
    Ec = math.sqrt(drive.Pc / (hbar * drive.omega_c))
    Ep = math.sqrt(drive.Pp / (hbar * drive.omega_p))
    return Ec, Ep


def _switch(value, field):
    if isinstance(value, bool):
        return value
    try:
        return _SWITCH_VALUES[str(value).strip().lower()]
    except KeyError:
        raise InvalidQuantity(field, f"expected on/off, got {value!r}") from None


def build_system(raw: Mapping, convention=ANGULAR):
    """Build validated `SystemParams` from raw key-value pairs.

    Values may be numbers (SI) or strings with unit suffixes. A ``g`` entry
    overrides the ``omega0 / R`` default. Drive keys are ignored here.
    """
    for name in REQUIRED_FIELDS:
        if name not in raw or raw[name] is None or str(raw[name]).strip() == "":
            raise MissingField(name)
    values = {name: parse_quantity(raw[name], convention, name) for name in REQUIRED_FIELDS}
    for name in ("phi1", "phi2"):
        if raw.get(name) is not None:
            values[name] = parse_quantity(raw[name], convention, name)
    if raw.get("g") is not None:
        values["g"] = parse_quantity(raw["g"], convention, "g")
        values["g_override"] = True
    for key in ("one-way-coupling", "one_way"):
        if raw.get(key) is not None:
            values["one_way"] = _switch(raw[key], key)
    params = SystemParams(**values)
    LOGGER.debug("built system parameters %s", params)
    return params


def build_drive(raw: Mapping, params, convention=ANGULAR):
    """Build the `Drive` from ``Pc``, optional ``Pp`` and ``delta_a``.

    ``Pp`` defaults to ``1e-4 * Pc`` and ``delta_a`` to ``omega_m``.
    """
    if raw.get("Pc") is None:
        raise MissingField("Pc")
    Pc = parse_quantity(raw["Pc"], convention, "Pc")
    Pp = parse_quantity(raw["Pp"], convention, "Pp") if raw.get("Pp") is not None else None
    if raw.get("delta_a") is not None:
        delta_a = parse_quantity(raw["delta_a"], convention, "delta_a")
    else:
        delta_a = params.omega_m
    return Drive.for_detuning(params, delta_a, Pc, Pp)
