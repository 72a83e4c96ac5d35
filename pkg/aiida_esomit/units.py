"""Unit suffixes and the frequency convention used for ingesting quantities.

Quantities are stored in SI (rad/s for every rate and frequency). Printed
values such as ``"147 MHz"`` are angular frequencies by default; in the
``cyclic`` convention the Hz-family suffixes are multiplied by 2π.
"""

import math
import re

from .exceptions import InvalidQuantity

ANGULAR = "angular"
CYCLIC = "cyclic"
CONVENTIONS = (ANGULAR, CYCLIC)

# suffix -> (factor to SI, is a Hz-family frequency)
UNITS = {
    "Hz": (1.0, True),
    "kHz": (1.0e3, True),
    "MHz": (1.0e6, True),
    "GHz": (1.0e9, True),
    "THz": (1.0e12, True),
    "rad/s": (1.0, False),
    "s": (1.0, False),
    "ns": (1.0e-9, False),
    "ps": (1.0e-12, False),
    "m": (1.0, False),
    "mm": (1.0e-3, False),
    "um": (1.0e-6, False),
    "µm": (1.0e-6, False),
    "μm": (1.0e-6, False),
    "nm": (1.0e-9, False),
    "m3": (1.0, False),
    "um3": (1.0e-18, False),
    "µm3": (1.0e-18, False),
    "kg": (1.0, False),
    "g": (1.0e-3, False),
    "mg": (1.0e-6, False),
    "ug": (1.0e-9, False),
    "µg": (1.0e-9, False),
    "ng": (1.0e-12, False),
    "pg": (1.0e-15, False),
    "W": (1.0, False),
    "mW": (1.0e-3, False),
    "uW": (1.0e-6, False),
    "µW": (1.0e-6, False),
    "nW": (1.0e-9, False),
    "rad": (1.0, False),
}

_QUANTITY_RE = re.compile(
    r"""^\s*
    (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?
    \s*\*?\s*
    (?P<pi>pi|π)?
    \s*
    (?P<unit>[A-Za-zµμ/0-9]+)?
    \s*$""",
    re.VERBOSE,
)


def check_convention(convention):
    """Return `convention` if it is known, raise `InvalidQuantity` otherwise."""
    if convention not in CONVENTIONS:
        raise InvalidQuantity(
            "frequency-convention",
            f"{convention!r} is not one of {', '.join(CONVENTIONS)}",
        )
    return convention


def unit_scale(unit, convention=ANGULAR):
    """Factor converting a value printed in `unit` to SI under `convention`."""
    check_convention(convention)
    try:
        factor, is_frequency = UNITS[unit]
    except KeyError:
        raise InvalidQuantity(unit, "unknown unit suffix") from None
    if is_frequency and convention == CYCLIC:
        factor *= 2.0 * math.pi
    return factor


def parse_quantity(text, convention=ANGULAR, field="value"):
    """Parse ``"147 MHz"``, ``"1.5pi"``, ``"34.5 µm"`` or a bare SI number.

    :param text: the printed quantity, or an int/float taken as SI.
    :param convention: ``angular`` or ``cyclic``.
    :param field: name reported in errors.
    :return: the value in SI units.
    """
    if isinstance(text, bool):
        raise InvalidQuantity(field, f"{text!r} is not a number")
    if isinstance(text, (int, float)):
        value = float(text)
    else:
        match = _QUANTITY_RE.match(str(text))
        if match is None or not (match["number"] or match["pi"]):
            raise InvalidQuantity(field, f"cannot parse {text!r}")
        value = float(match["number"]) if match["number"] else 1.0
        if match["pi"]:
            if match["unit"] not in (None, "rad"):
                raise InvalidQuantity(field, f"pi-units take no suffix: {text!r}")
            value *= math.pi
        elif match["unit"]:
            try:
                value *= unit_scale(match["unit"], convention)
            except InvalidQuantity:
                raise InvalidQuantity(
                    field, f"unknown unit suffix {match['unit']!r} in {text!r}"
                ) from None
    if not math.isfinite(value):
        raise InvalidQuantity(field, f"{text!r} is not finite")
    return value


def format_quantity(value, unit, convention=ANGULAR):
    """Format an SI `value` in `unit`, reversible by `parse_quantity`."""
    return f"{value / unit_scale(unit, convention):.17g} {unit}"
