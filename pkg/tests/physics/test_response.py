import dataclasses
import math

import numpy as np
import pytest

from aiida_esomit.exceptions import ConvergenceWarning, InvalidGrid, NonConvergentDerivative, ZeroProbe
from aiida_esomit.physics.model import build_drive, build_system, derived_rates
from aiida_esomit.physics.response import (
    SpectrumTable,
    converged_phase_derivative,
    default_delay_step,
    fluctuation_system,
    group_delay,
    single_mode_transmission,
    solve_response,
    solve_rows,
    transmission,
    transmission_at,
    transmission_spectrum,
    two_mode_transmission,
)
from aiida_esomit.physics.steady_state import solve_steady

GRID = np.linspace(-2e6, 2e6, 201)


def _system(raw, **changes):
    params = build_system({**raw, **changes})
    return params, build_drive({**raw, **changes}, params)


@pytest.mark.parametrize("name", ["baseline", "es1-ep2", "es1-np", "es2-ep1", "es2-ep3", "es2-np1", "es2-ep4"])
def test_assembled_residual(preset_factory, name):
    entry = preset_factory(name)
    steady = solve_steady(entry.params, entry.drive)
    xi = GRID + entry.delta_a
    *_, residual = solve_rows(entry.params, steady, entry.drive, xi)
    assert residual.shape == GRID.shape
    assert residual.max() <= 1e-10


def test_fluctuation_system_shape(baseline_params, drive):
    steady = solve_steady(baseline_params, drive)
    matrix, rhs = fluctuation_system(baseline_params, steady, drive, drive.delta_a(baseline_params))
    assert matrix.shape == (5, 5)
    assert rhs.shape == (5,)
    assert rhs[0] == rhs[3] == rhs[4] == 0


def test_decoupled_symmetric_point(decoupled_raw):
    params, drive = _system(decoupled_raw)
    table = transmission_spectrum(params, drive, [0.0])
    t2 = derived_rates(params).t2
    assert table.t[0] == pytest.approx(t2 / 3.0, abs=1e-10)
    assert table.t[0] == pytest.approx(-1j / 3.0, abs=1e-10)


def test_matches_two_mode_solution(baseline_raw):
    params, drive = _system(baseline_raw, g="0", J="0.5 MHz", phi3="1.3pi")
    table = transmission_spectrum(params, drive, GRID)
    expected = two_mode_transmission(params, drive, GRID)
    np.testing.assert_allclose(table.t, expected, rtol=1e-10, atol=1e-12)


def test_matches_single_mode_reduction(decoupled_raw):
    raw = {key: value for key, value in decoupled_raw.items() if key != "g"}
    params, drive = _system(raw, gamma1="1e-3 Hz")
    steady = solve_steady(params, drive)
    table = transmission_spectrum(params, drive, GRID, steady=steady)
    expected = single_mode_transmission(params, drive, steady, GRID)
    np.testing.assert_allclose(table.t, expected, rtol=1e-6, atol=1e-9)


def test_solve_response_matches_batch(preset_factory):
    entry = preset_factory("es2-ep2")
    steady = solve_steady(entry.params, entry.drive)
    xi = entry.delta_a + 0.5e6
    response = solve_response(entry.params, steady, entry.drive, xi)
    assert response.vector.shape == (5,)
    assert response.residual <= 1e-10
    assert transmission(entry.params, entry.drive, response) == pytest.approx(
        transmission_at(entry.params, steady, entry.drive, xi)[0], rel=1e-12
    )


def _analytic_delay(params, delta_p):
    # single decoupled mode without mechanics: t = t2 (1 - gamma2 / f1), f1 = gamma - i delta_p
    t2 = derived_rates(params).t2
    f1 = params.gamma_half - 1j * delta_p
    t = t2 * (1.0 - params.gamma2 / f1)
    derivative = -1j * t2 * params.gamma2 / f1**2
    return (derivative / t).imag


@pytest.mark.parametrize("delta_p", [-1.2e6, 0.3e6, 2.5e6])
def test_group_delay_matches_analytic(decoupled_raw, delta_p):
    params, drive = _system(decoupled_raw)
    expected = _analytic_delay(params, delta_p)
    assert group_delay(params, drive, delta_p) == pytest.approx(expected, rel=1e-4)
    table = transmission_spectrum(params, drive, [delta_p])
    assert table.tau_g[0] == pytest.approx(expected, rel=1e-4)


def test_grid_delay_agrees_with_central_difference(decoupled_raw):
    params, drive = _system(decoupled_raw)
    table = transmission_spectrum(params, drive, np.linspace(-3e6, 3e6, 3001))
    np.testing.assert_allclose(table.grid_delay[1:-1], table.tau_g[1:-1], rtol=1e-3, atol=1e-10)
    assert np.all(np.abs(np.diff(table.phase)) < np.pi)


def test_table_columns(preset_factory):
    entry = preset_factory("es2-ep2")
    table = transmission_spectrum(entry.params, entry.drive, GRID, metadata={"preset": entry.name})
    assert len(table) == GRID.size
    np.testing.assert_allclose(table.T, np.abs(table.t) ** 2)
    assert table.metadata["preset"] == "es2-ep2"
    assert {"params", "drive", "steady_state", "delay_step"} <= set(table.metadata)
    first = next(table.rows())
    assert first[0] == GRID[0]
    assert isinstance(first[1], complex)


def test_zero_probe(baseline_raw):
    params, drive = _system(baseline_raw, Pp="0 mW")
    steady = solve_steady(params, drive)
    with pytest.raises(ZeroProbe):
        transmission_at(params, steady, drive, drive.delta_a(params))
    response = solve_response(params, steady, drive, drive.delta_a(params))
    with pytest.raises(ZeroProbe) as excinfo:
        transmission(params, drive, response)
    assert excinfo.value.exit_status == 4


@pytest.mark.parametrize("grid", [[], [1.0, 0.0], [0.0, np.nan], [[0.0, 1.0]]])
def test_invalid_grid(baseline_params, drive, grid):
    with pytest.raises(InvalidGrid):
        transmission_spectrum(baseline_params, drive, grid)


def test_table_rejects_ragged_columns():
    with pytest.raises(InvalidGrid):
        SpectrumTable(delta_p=[0.0, 1.0], t=[1.0], tau_g=[0.0, 0.0])


def _with_probe_power(entry, factor):
    return dataclasses.replace(entry.drive, Pp=factor * entry.drive.Pp)


@pytest.mark.parametrize("name", ["baseline", "es1-np", "es2-ep2", "es2-np1"])
def test_probe_power_invariance(preset_factory, name):
    entry = preset_factory(name)
    louder = _with_probe_power(entry, 100.0)
    steady = solve_steady(entry.params, entry.drive)
    assert solve_steady(entry.params, louder) == steady
    quiet = transmission_spectrum(entry.params, entry.drive, GRID, steady=steady)
    loud = transmission_spectrum(entry.params, louder, GRID, steady=steady)
    np.testing.assert_allclose(loud.t, quiet.t, rtol=1e-12, atol=1e-13)
    np.testing.assert_allclose(loud.tau_g, quiet.tau_g, rtol=1e-6, atol=1e-15)


@pytest.mark.parametrize("offset", [-1e6, 0.0, 0.7e6])
def test_response_is_linear_in_probe(preset_factory, offset):
    entry = preset_factory("es2-ep2")
    steady = solve_steady(entry.params, entry.drive)
    xi = entry.delta_a + offset
    quiet = solve_response(entry.params, steady, entry.drive, xi)
    loud = solve_response(entry.params, steady, _with_probe_power(entry, 100.0), xi)
    assert loud.Ep == pytest.approx(10.0 * quiet.Ep, rel=1e-14)
    expected = 10.0 * quiet.vector
    np.testing.assert_allclose(loud.vector, expected, rtol=1e-10, atol=1e-12 * np.max(np.abs(expected)))


def test_phase_derivative_across_branch_cut():
    slope = 3.0

    def line(x):
        return np.exp(1j * slope * x)

    # arg wraps from +pi to -pi at x = pi / slope
    assert converged_phase_derivative(line, math.pi / slope, 0.1) == pytest.approx(slope, rel=1e-12)
    x = np.linspace(0.0, 4.0 * math.pi / slope, 401)
    table = SpectrumTable(delta_p=x, t=line(x), tau_g=np.full_like(x, slope))
    np.testing.assert_allclose(table.grid_delay, slope, rtol=1e-9)
    np.testing.assert_allclose(table.phase, slope * x, rtol=1e-12, atol=1e-12)


def test_phase_derivative_halves_step():
    def cubic(x):
        return np.exp(1j * (x + 0.1 * x**3))

    # estimates 1 + 0.1 h^2 at h = 1, 1/2, 1/4, 1/8 agree within 1 % only at the last pair
    with pytest.warns(ConvergenceWarning):
        value = converged_phase_derivative(cubic, 0.0, 1.0)
    assert value == pytest.approx(1.0 + 0.1 / 64.0, rel=1e-9)


def test_phase_derivative_gives_up():
    def cubic(x):
        return np.exp(1j * x**3)

    with pytest.warns(ConvergenceWarning), pytest.raises(NonConvergentDerivative) as excinfo:
        converged_phase_derivative(cubic, 0.0, 1.0)
    assert excinfo.value.exit_status == 4


def test_phase_derivative_rejects_step():
    with pytest.raises(ValueError):
        converged_phase_derivative(np.exp, 0.0, 0.0)


@pytest.mark.parametrize("name", ["es1-ep2", "es1-np", "es2-ep1", "es2-ep2", "es2-np1"])
def test_delay_converges_on_preset_rows(preset_factory, name):
    entry = preset_factory(name)
    steady = solve_steady(entry.params, entry.drive)
    grid = np.linspace(entry.grid.min, entry.grid.max, 201)
    h = default_delay_step(entry.params)
    coarse = transmission_spectrum(entry.params, entry.drive, grid, steady=steady, delay_step=h)
    fine = transmission_spectrum(entry.params, entry.drive, grid, steady=steady, delay_step=0.5 * h)
    rows = np.abs(fine.tau_g) > 1e-9
    assert rows.any()
    np.testing.assert_allclose(coarse.tau_g[rows], fine.tau_g[rows], rtol=1e-2)
