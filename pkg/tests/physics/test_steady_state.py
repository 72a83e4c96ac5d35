import dataclasses

import numpy as np
import pytest

from aiida_esomit.exceptions import MultistabilityWarning
from aiida_esomit.physics.model import build_drive, build_system
from aiida_esomit.physics.steady_state import (
    fixed_point_residual,
    force_constant,
    intracavity_steady,
    solve_steady,
)


@pytest.mark.parametrize("name", ["baseline", "es1-ep1", "es1-np", "es2-ep1", "es2-ep2", "es2-np1"])
def test_root_residual(preset_factory, name):
    entry = preset_factory(name)
    steady = solve_steady(entry.params, entry.drive)
    assert steady.u == steady.all_roots[0]
    assert list(steady.all_roots) == sorted(steady.all_roots)
    assert abs(steady.residual) <= 1e-12 * max(steady.u, entry.params.gamma_half)
    assert steady.x_bar == pytest.approx(steady.u / entry.params.g)


def test_displacement_magnitude(baseline_params, drive):
    steady = solve_steady(baseline_params, drive)
    assert 1e-17 < steady.x_bar < 1e-13
    intensity = abs(steady.a_cw) ** 2 + abs(steady.a_ccw) ** 2
    assert steady.intensity == pytest.approx(intensity)
    assert steady.u == pytest.approx(force_constant(baseline_params) * intensity, rel=1e-9)


def test_dense_grid_finds_no_extra_roots(baseline_params, drive):
    steady = solve_steady(baseline_params, drive)
    upper = 4.0 * max(drive.delta(baseline_params), max(steady.all_roots))
    grid = np.linspace(0.0, upper, 10**6)
    values = fixed_point_residual(baseline_params, drive, grid)
    changes = int(np.count_nonzero(np.sign(values[:-1]) != np.sign(values[1:])))
    assert changes == len(steady.all_roots) == 3


def test_without_mechanical_coupling(baseline_raw):
    params = build_system({**baseline_raw, "g": "0"})
    drive = build_drive(baseline_raw, params)
    steady = solve_steady(params, drive)
    assert steady.u == 0.0
    assert steady.x_bar == 0.0
    assert steady.all_roots == (0.0,)
    assert not steady.multistable
    assert (steady.a_cw, steady.a_ccw) == intracavity_steady(params, drive, 0.0)


def test_intracavity_is_vectorised(baseline_params, drive):
    u = np.array([0.0, 1e3, 1e5])
    a_cw, a_ccw = intracavity_steady(baseline_params, drive, u)
    assert a_cw.shape == a_ccw.shape == (3,)
    assert a_cw[1] == pytest.approx(intracavity_steady(baseline_params, drive, 1e3)[0])


def test_as_dict(baseline_params, drive):
    data = solve_steady(baseline_params, drive).as_dict()
    assert set(data) == {"a_cw", "a_ccw", "x_bar", "u", "all_roots", "residual"}
    assert len(data["a_cw"]) == 2


def test_baseline_keeps_low_branch(baseline_params, drive):
    with pytest.warns(MultistabilityWarning):
        steady = solve_steady(baseline_params, drive)
    assert steady.multistable
    assert len(steady.all_roots) == 3
    assert steady.u == min(steady.all_roots)
    assert steady.u == pytest.approx(1.39e4, rel=1e-2)
    assert steady.all_roots[1] == pytest.approx(1.4565e8, rel=1e-3)
    assert steady.all_roots[2] == pytest.approx(1.4833e8, rel=1e-3)
    assert steady.x_bar == pytest.approx(2.48e-15, rel=1e-2)


@pytest.mark.parametrize("name", ["baseline", "es2-ep2", "es2-np1"])
def test_shift_grows_with_pump_power(preset_factory, name):
    entry = preset_factory(name)
    powers = np.array([0.05, 0.1, 0.2, 0.4, 0.7, 1.0]) * entry.drive.Pc
    shifts = [solve_steady(entry.params, dataclasses.replace(entry.drive, Pc=float(Pc))).u for Pc in powers]
    assert shifts[0] > 0
    assert np.all(np.diff(shifts) > 0)
