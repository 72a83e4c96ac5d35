# pylint: disable=redefined-outer-name
"""Module with test fixtures."""
import dataclasses

import pytest
from aiida.orm import Dict

from aiida_esomit.physics.model import Drive, build_drive, build_system
from aiida_esomit.presets.catalog import BASELINE, preset

pytest_plugins = ["aiida.tools.pytest_fixtures"]


@pytest.fixture
def baseline_raw():
    """Raw key-value entries of the baseline preset."""
    return dict(BASELINE)


@pytest.fixture
def baseline_params(baseline_raw):
    """Validated `SystemParams` of the baseline preset."""
    return build_system(baseline_raw)


@pytest.fixture
def drive(baseline_raw, baseline_params):
    """Pump and probe of the baseline preset."""
    return build_drive(baseline_raw, baseline_params)


@pytest.fixture
def preset_factory():
    """Return a factory building a named preset, optionally with parameter changes."""

    def factory(name, **changes):
        entry = preset(name)
        if not changes:
            return entry
        params = entry.params.replace(**changes)
        drive = Drive.for_detuning(params, entry.delta_a, entry.drive.Pc, entry.drive.Pp)
        return dataclasses.replace(entry, params=params, drive=drive)

    return factory


@pytest.fixture
def decoupled_raw(baseline_raw):
    """Baseline entries with the mechanics, backscattering and loop switched off."""
    return {**baseline_raw, "g": "0", "J": "0 MHz", "one-way-coupling": "off"}


@pytest.fixture
def generate_parameters():
    """Return a factory for `Dict` parameter nodes built from the baseline."""

    def factory(**changes):
        return Dict({**BASELINE, **changes})

    return factory


@pytest.fixture
def generate_grid():
    """Return a factory for probe-detuning grid nodes."""

    def factory(low="-2 MHz", high="2 MHz", count=41, **extra):
        return Dict({"min": low, "max": high, "count": count, **extra})

    return factory
