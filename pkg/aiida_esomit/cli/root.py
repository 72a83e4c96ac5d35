"""Root command group of the ``esomit`` command line."""

import functools
import logging

import click
from aiida.common.log import AIIDA_LOGGER

from ..exceptions import EsomitError
from ..version import __version__

LOGGER = AIIDA_LOGGER.getChild("esomit")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


class ClickHandler(logging.Handler):
    """Log handler writing through `click.echo` to the current stderr."""

    def emit(self, record):
        try:
            click.echo(self.format(record), err=True)
        except Exception:  # noqa: BLE001
            self.handleError(record)


def configure_logging(level):
    """Set the package logger level and attach one stderr handler."""
    LOGGER.setLevel(level)
    if not any(isinstance(handler, ClickHandler) for handler in LOGGER.handlers):
        handler = ClickHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
        LOGGER.addHandler(handler)


def handle_errors(command):
    """Report an `EsomitError` on stderr and exit with its status."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except EsomitError as exception:
            click.echo(f"Error: {exception}", err=True)
            click.get_current_context().exit(exception.exit_status)

    return wrapper


@click.group("esomit", context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="esomit")
@click.option(
    "-v",
    "--verbosity",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default="WARNING",
    show_default=True,
    help="Log level of the esomit loggers (messages go to stderr).",
)
def cmd_root(verbosity):
    """Eigenvalues, OMIT spectra and group delays of a WGM optomechanical system."""
    configure_logging(verbosity.upper())
