"""Command line interface ``esomit``."""

from . import commands  # noqa: F401  registers the subcommands
from .root import cmd_root

__all__ = ["cmd_root"]
