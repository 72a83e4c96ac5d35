import math

import numpy as np
import pytest

from aiida_esomit.exceptions import InvalidGrid, OutOfFigureRangeWarning, UnknownPreset
from aiida_esomit.physics.eigenspace import PhaseKind, classify_point
from aiida_esomit.presets.catalog import CATALOG, GridSpec, catalog_listing, line_gamma2, preset
from aiida_esomit.units import CYCLIC


def test_catalog_listing(data_regression):
    listing = catalog_listing()
    assert [item["name"] for item in listing] == list(CATALOG)
    assert all(item["provenance"] for item in listing)
    data_regression.check(
        {"presets": [{key: value for key, value in item.items() if key != "provenance"} for item in listing]}
    )


def test_unknown_preset():
    with pytest.raises(UnknownPreset, match="baseline") as excinfo:
        preset("fig9-nothing")
    assert excinfo.value.exit_status == 2
    assert excinfo.value.catalog == CATALOG


@pytest.mark.parametrize(
    "name, kind, tol",
    [
        ("baseline", PhaseKind.ES_KIND1, 1e-6),
        ("es1-ep3", PhaseKind.ES_KIND1, 1e-6),
        ("es1-np", PhaseKind.KAPPA_SPLIT, 1e-6),
        ("es2-np1", PhaseKind.OMEGA_SPLIT, 1e-6),
        ("es2-ep1", PhaseKind.ES_KIND2, 1e-6),
        ("es2-ep3", PhaseKind.ES_KIND2, 1e-6),
        ("es2-ep4", PhaseKind.ES_KIND2, 1e-6),
        # printed to two decimals
        ("es2-ep5", PhaseKind.ES_KIND2, 5e-3),
    ],
)
def test_preset_classes(name, kind, tol):
    assert classify_point(preset(name).params, tol).kind == kind


def test_preset_is_cached_per_convention():
    assert preset("es2-ep2") is preset("es2-ep2")
    cyclic = preset("es2-ep2", CYCLIC)
    assert cyclic.params.J == pytest.approx(2.0 * math.pi * preset("es2-ep2").params.J)
    assert cyclic.convention == CYCLIC
    assert cyclic.metadata()["convention"] == CYCLIC


def test_preset_defaults():
    entry = preset("fig2d-line")
    assert entry.delta_a == pytest.approx(entry.params.omega_m, rel=1e-9)
    assert entry.grid.count == 2001
    assert entry.grid.values()[0] == pytest.approx(-5e6)
    assert entry.sweep.values[0] == pytest.approx(0.7e6)
    assert entry.sweep.values[-1] == pytest.approx(1.38e6)
    assert any("delta_a" in text for text in entry.assumptions)
    assert preset("fig5-phase-sweep").sweep.tie is None


def test_line_gamma2():
    assert line_gamma2(1e6) == pytest.approx(1e6)
    assert line_gamma2(0.7e6) == pytest.approx(1.258e6)
    with pytest.warns(OutOfFigureRangeWarning):
        line_gamma2(2e6)


def test_grid_spec():
    grid = GridSpec.from_text("-1 MHz", "1 MHz", 5)
    np.testing.assert_allclose(grid.values(), [-1e6, -0.5e6, 0.0, 0.5e6, 1e6])
    assert grid.step == pytest.approx(0.5e6)
    single = GridSpec(2.0, 2.0, 1)
    assert single.values().tolist() == [2.0]
    assert single.step == 0.0


@pytest.mark.parametrize("args", [(0.0, 1.0, 0), (1.0, 0.0, 3), (0.0, math.inf, 3), (0.0, 1.0, 2.5)])
def test_grid_spec_rejects(args):
    with pytest.raises(InvalidGrid):
        GridSpec(*args)
