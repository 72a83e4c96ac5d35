"""Plain-text ``key = value`` run configuration."""

import dataclasses
import pathlib
import re
import types
from typing import Optional, Tuple

from aiida.common.log import AIIDA_LOGGER

from ..exceptions import FileAccessError, InvalidGrid, ParameterError
from ..physics.model import DRIVE_FIELDS, OPTIONAL_FIELDS, REQUIRED_FIELDS, build_drive, build_system
from ..presets.catalog import DEFAULT_GRID, GridSpec, Preset, preset
from ..units import ANGULAR, check_convention

LOGGER = AIIDA_LOGGER.getChild("esomit.config")

CONVENTION_KEY = "frequency-convention"
KNOWN_KEYS = REQUIRED_FIELDS + OPTIONAL_FIELDS + DRIVE_FIELDS + (CONVENTION_KEY,)
FORMATS = ("csv", "json")

_LINE_RE = re.compile(r"^\s*(?P<key>[A-Za-z_][A-Za-z0-9_\-]*)\s*=\s*(?P<value>.*?)\s*$")
_GRID_RE = re.compile(r"^\s*(?P<low>[^:]+?)\s*:\s*(?P<high>[^:]+?)\s*:\s*(?P<count>[+-]?\d+)\s*$")


def parse_config_text(text, source="<config>"):
    """Parse configuration text into an ordered ``{key: value}`` dict of strings.

    ``#`` starts a comment; blank lines are skipped. Unknown and duplicate
    keys are rejected with the line number.
    """
    values = {}
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        if not content.strip():
            continue
        match = _LINE_RE.match(content)
        if match is None:
            raise ParameterError(f"{source}:{number}", f"expected 'key = value', got {line.strip()!r}")
        key, value = match["key"], match["value"]
        if key not in KNOWN_KEYS:
            raise ParameterError(f"{source}:{number}", f"unknown key {key!r}")
        if key in values:
            raise ParameterError(f"{source}:{number}", f"duplicate key {key!r}")
        if value == "":
            raise ParameterError(f"{source}:{number}", f"key {key!r} has no value")
        values[key] = value
    return values


def read_config(path):
    """Read and parse a configuration file."""
    path = pathlib.Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exception:
        raise FileAccessError(path, exception.strerror or str(exception)) from None
    LOGGER.debug("read configuration %s", path)
    return parse_config_text(text, source=str(path))


def parse_override(text):
    """Split one ``key=value`` override."""
    key, separator, value = text.partition("=")
    key, value = key.strip(), value.strip()
    if not separator or not key or not value:
        raise ParameterError("--set", f"expected key=value, got {text!r}")
    if key not in KNOWN_KEYS:
        raise ParameterError("--set", f"unknown key {key!r}")
    return key, value


def parse_grid(text, convention=ANGULAR, axis="delta_p"):
    """Parse ``min:max:count``; bounds take unit suffixes, bare numbers are SI."""
    match = _GRID_RE.match(text)
    if match is None:
        raise InvalidGrid(axis, f"expected min:max:count, got {text!r}")
    count = int(match["count"])
    if count < 1:
        raise InvalidGrid(axis, f"grid {text!r} is empty")
    return GridSpec.from_text(match["low"], match["high"], count, axis, convention)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Resolved command-line request.

    Exactly one of `preset_name` and `config_path` is set; `overrides` are
    applied on top of it in order.
    """

    subcommand: str
    preset_name: Optional[str] = None
    config_path: Optional[str] = None
    overrides: Tuple[Tuple[str, str], ...] = ()
    grid: Optional[str] = None
    out: Optional[str] = None
    fmt: str = "csv"
    convention: Optional[str] = None
    threads: Optional[int] = None
    timestamp: bool = False

    def __post_init__(self):
        if (self.preset_name is None) == (self.config_path is None):
            raise ParameterError("--preset/--config", "give exactly one of --preset and --config")
        if self.fmt not in FORMATS:
            raise ParameterError("--format", f"{self.fmt!r} is not one of {', '.join(FORMATS)}")
        if self.convention is not None:
            check_convention(self.convention)

    def raw(self):
        """Key-value entries after applying overrides, plus the convention in force."""
        if self.preset_name is not None:
            base = dict(preset(self.preset_name).raw)
        else:
            base = read_config(self.config_path)
        base.update(dict(self.overrides))
        convention = self.convention or base.get(CONVENTION_KEY, ANGULAR)
        base.pop(CONVENTION_KEY, None)
        return base, check_convention(convention)

    def build(self):
        """Resolve the request into a validated `Preset`.

        A configuration file becomes an unnamed entry with the default probe
        grid; ``--grid`` replaces the grid in either case.
        """
        raw, convention = self.raw()
        params = build_system(raw, convention)
        drive = build_drive(raw, params, convention)
        if self.preset_name is not None:
            base = preset(self.preset_name, convention)
            name, provenance, grid = base.name, base.provenance, base.grid
            sweep, assumptions = base.sweep, base.assumptions
        else:
            name = pathlib.Path(self.config_path).stem
            provenance = f"configuration file {self.config_path}"
            grid = GridSpec.from_text(*DEFAULT_GRID, convention=convention)
            sweep, assumptions = None, ()
        if self.overrides:
            provenance += "; overrides " + ", ".join(f"{key}={value}" for key, value in self.overrides)
        if self.grid is not None:
            grid = parse_grid(self.grid, convention)
        LOGGER.debug("resolved %s run of %s", self.subcommand, name)
        return Preset(
            name=name,
            params=params,
            drive=drive,
            grid=grid,
            provenance=provenance,
            raw=types.MappingProxyType(raw),
            sweep=sweep,
            assumptions=assumptions,
            convention=convention,
        )

    def metadata(self, entry):
        """Metadata block of an output file produced from `entry`."""
        return {
            **entry.metadata(),
            "subcommand": self.subcommand,
            "source": "preset" if self.preset_name is not None else "config",
            "parameters": dict(entry.raw),
        }
