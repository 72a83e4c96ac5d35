import numpy as np
import pytest

from aiida_esomit.exceptions import ZeroB
from aiida_esomit.physics.appendix import appendix_coefficients, appendix_response, crosscheck_appendix
from aiida_esomit.physics.model import build_drive, build_system
from aiida_esomit.physics.steady_state import solve_steady


def test_no_optomechanics_removes_radiation_terms(baseline_raw):
    params = build_system({**baseline_raw, "g": "0", "J": "0.5 MHz"})
    drive = build_drive(baseline_raw, params)
    steady = solve_steady(params, drive)
    coefficients = appendix_coefficients(params, steady, drive, drive.delta_a(params))
    for name in ("h1", "h2", "h3", "h4"):
        assert getattr(coefficients, name) == 0


def test_no_backscattering(baseline_params, drive):
    steady = solve_steady(baseline_params, drive)
    xi = drive.delta_a(baseline_params) + np.array([-1e6, 0.0, 1e6])
    coefficients = appendix_coefficients(baseline_params, steady, drive, xi)
    f1 = baseline_params.gamma_half - 1j * xi + 1j * (drive.delta(baseline_params) - steady.u)
    np.testing.assert_allclose(coefficients.k2, f1**2, rtol=1e-12)


def test_index_order_rule(baseline_params, drive):
    steady = solve_steady(baseline_params, drive)
    coefficients = appendix_coefficients(baseline_params, steady, drive, drive.delta_a(baseline_params))
    assert coefficients.h_nl(1, 2) == coefficients.h1 + coefficients.h2
    assert coefficients.h_nl(4, 3) == coefficients.h4 - coefficients.h3
    with pytest.raises(ValueError):
        coefficients.h_nl(2, 2)


def test_closed_form_is_finite(preset_factory):
    entry = preset_factory("es2-ep1")
    steady = solve_steady(entry.params, entry.drive)
    da_cw, da_ccw = appendix_response(entry.params, steady, entry.drive, entry.delta_a + 0.2e6)
    assert np.isfinite(da_cw) and np.isfinite(da_ccw)


@pytest.mark.parametrize("name", ["es2-ep1", "es2-ep2", "es2-np1"])
def test_crosscheck_report(preset_factory, name):
    entry = preset_factory(name)
    report = crosscheck_appendix(entry.params, entry.drive, np.linspace(-1e6, 1e6, 11))
    assert report["points"] == 11
    assert set(report["components"]) == {"da_cw_m", "da_ccw_m"}
    for summary in report["components"].values():
        assert summary["median"] <= summary["max"]
    assert report["verdict"] in ("PASS", "FAIL")
    if report["zero_b_points"] == 0:
        assert (report["verdict"] == "FAIL") == bool(report["discrepancies"])
    assert len(report["discrepancies"]) <= 20


def test_denominator_factorises_without_mechanics(preset_factory):
    entry = preset_factory("baseline", g=0.0, J=0.3e6)
    steady = solve_steady(entry.params, entry.drive)
    xi = entry.delta_a + np.linspace(-2e6, 2e6, 9)
    coefficients = appendix_coefficients(entry.params, steady, entry.drive, xi)
    surface = entry.params.t0**2 * entry.params.gamma1 * entry.params.gamma2
    expected = (surface - entry.params.J**2) * (surface - coefficients.k2)
    np.testing.assert_allclose(coefficients.B, expected, rtol=1e-9)


@pytest.mark.parametrize("name", ["es2-ep1", "es2-ep2"])
def test_crosscheck_on_second_kind_surface_without_mechanics(preset_factory, name):
    entry = preset_factory(name, g=0.0)
    report = crosscheck_appendix(entry.params, entry.drive, np.linspace(-2e6, 2e6, 41))
    assert report["zero_b_points"] == report["points"] == 41
    assert report["components"] == {
        "da_cw_m": {"max": None, "median": None},
        "da_ccw_m": {"max": None, "median": None},
    }
    assert report["discrepancies"] == []
    assert report["verdict"] == "FAIL"

    steady = solve_steady(entry.params, entry.drive)
    with pytest.raises(ZeroB) as excinfo:
        appendix_response(entry.params, steady, entry.drive, entry.delta_a)
    assert excinfo.value.exit_status == 4


def test_crosscheck_disagrees_on_first_kind_surface_without_mechanics(preset_factory):
    entry = preset_factory("es1-ep2", g=0.0)
    report = crosscheck_appendix(entry.params, entry.drive, np.linspace(-2e6, 2e6, 200))
    assert report["zero_b_points"] == 0
    assert report["verdict"] == "FAIL"
    assert max(summary["max"] for summary in report["components"].values()) > 1.0
    assert report["discrepancies"]
    assert all(entry["deviation"] > report["threshold"] for entry in report["discrepancies"])
