#!/usr/bin/env python
"""This module contains project version information."""

__version__ = "1.0.0"
