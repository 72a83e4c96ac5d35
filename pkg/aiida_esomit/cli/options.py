"""Options shared by the ``esomit`` subcommands."""

import click

from ..parsers.config import FORMATS
from ..presets.sweeps import THREADS_ENV
from ..units import CONVENTIONS

PRESET = click.option("--preset", "preset_name", metavar="NAME", help="Start from a named preset (see `esomit presets`).")
CONFIG = click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    help="Start from a key = value configuration file.",
)
SET = click.option(
    "--set",
    "overrides",
    metavar="KEY=VALUE",
    multiple=True,
    help="Override one parameter; may be repeated.",
)
GRID = click.option("--grid", metavar="MIN:MAX:COUNT", help="Probe-detuning grid, e.g. '-5MHz:5MHz:2001'.")
FORMAT = click.option(
    "--format",
    "fmt",
    type=click.Choice(FORMATS),
    default="csv",
    show_default=True,
    help="Output format.",
)
OUT = click.option("--out", type=click.Path(allow_dash=True), help="Output file; stdout by default.")
CONVENTION = click.option(
    "--convention",
    type=click.Choice(CONVENTIONS),
    help="Frequency convention for printed values [default: angular, or the config entry].",
)
THREADS = click.option(
    "--threads",
    type=click.IntRange(min=1),
    envvar=THREADS_ENV,
    help=f"Worker threads for sweeps [env: {THREADS_ENV}; default: CPU count].",
)
TIMESTAMP = click.option(
    "--timestamp/--no-timestamp",
    default=False,
    show_default=True,
    help="Record the run time in the JSON metadata block.",
)


def run_options(command):
    """Parameter source, grid and output options."""
    for option in reversed((PRESET, CONFIG, SET, GRID, FORMAT, OUT, CONVENTION, TIMESTAMP)):
        command = option(command)
    return command


def report_options(command):
    """Parameter source and output options of JSON report commands."""
    for option in reversed((PRESET, CONFIG, SET, OUT, CONVENTION, TIMESTAMP)):
        command = option(command)
    return command
