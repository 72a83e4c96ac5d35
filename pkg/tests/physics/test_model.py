import math

import pytest
from scipy.constants import hbar

from aiida_esomit.exceptions import (
    InvalidQuantity,
    MissingField,
    NegativeRate,
    NonPositiveFrequency,
    ParameterError,
    T0OutOfRange,
)
from aiida_esomit.physics.model import (
    DEFAULT_PROBE_RATIO,
    Drive,
    build_drive,
    build_system,
    derived_rates,
    drive_amplitudes,
    phasor,
    quarter_turn_trig,
)
from aiida_esomit.units import CYCLIC


@pytest.mark.parametrize(
    "turns, expected",
    [(0.0, (1.0, 0.0)), (0.5, (0.0, 1.0)), (1.0, (-1.0, 0.0)), (1.5, (0.0, -1.0))],
)
def test_quarter_turns_are_exact(turns, expected):
    assert quarter_turn_trig(turns * math.pi) == expected


def test_phasor_generic_phase():
    assert phasor(1.3 * math.pi) == pytest.approx(complex(math.cos(1.3 * math.pi), math.sin(1.3 * math.pi)))
    assert phasor(1.5 * math.pi) == -1j


def test_baseline(baseline_params):
    params = baseline_params
    assert params.omega0 == pytest.approx(1.93e14)
    assert params.gamma_half == pytest.approx(1.5e6)
    assert params.g == pytest.approx(params.omega0 / params.R)
    assert not params.g_override
    assert params.phi1 == params.phi2 == params.phi3
    assert params.one_way


def test_cyclic_convention(baseline_raw):
    params = build_system(baseline_raw, CYCLIC)
    assert params.gamma1 == pytest.approx(2.0 * math.pi * 1e6)
    assert params.omega_m == pytest.approx(2.0 * math.pi * 1.47e8)
    assert params.R == pytest.approx(34.5e-6)


def test_g_override(baseline_raw, baseline_params):
    params = build_system({**baseline_raw, "g": "1e9"})
    assert params.g_override
    assert params.g == 1e9

    moved = baseline_params.replace(R=2.0 * baseline_params.R)
    assert moved.g == pytest.approx(0.5 * baseline_params.g)
    assert baseline_params.replace(g=0.0).g_override


@pytest.mark.parametrize(
    "changes, error",
    [
        ({"gamma1": "-1 MHz"}, NegativeRate),
        ({"J": "-0.1 MHz"}, NegativeRate),
        ({"t0": "1.5"}, T0OutOfRange),
        ({"omega0": "0 THz"}, NonPositiveFrequency),
        ({"gamma0": "12 furlongs"}, InvalidQuantity),
        ({"one-way-coupling": "maybe"}, InvalidQuantity),
        ({"m": "0 ng"}, ParameterError),
    ],
)
def test_invalid_parameters(baseline_raw, changes, error):
    with pytest.raises(error) as excinfo:
        build_system({**baseline_raw, **changes})
    assert excinfo.value.exit_status == 2


def test_missing_field(baseline_raw):
    del baseline_raw["omega_m"]
    with pytest.raises(MissingField, match="omega_m"):
        build_system(baseline_raw)


def test_fiber_coefficients(baseline_params):
    rates = derived_rates(baseline_params)
    for t in (rates.t1, rates.t2, rates.t3):
        assert abs(t) == pytest.approx(baseline_params.t0)
    assert rates.t3 == -1j
    assert rates.lambda_ == pytest.approx(1j * 1e6 * rates.t3)

    off = derived_rates(baseline_params.replace(one_way=False))
    assert off.t3 == 0
    assert off.lambda_ == 0
    assert off.t2 == rates.t2


def test_drive_defaults(baseline_raw, baseline_params, drive):
    assert drive.Pc == pytest.approx(1e-3)
    assert drive.Pp == pytest.approx(DEFAULT_PROBE_RATIO * drive.Pc)
    assert drive.delta_a(baseline_params) == pytest.approx(baseline_params.omega_m, rel=1e-9)
    assert drive.delta(baseline_params) == pytest.approx(drive.delta_a(baseline_params) + baseline_params.J)

    detuned = build_drive({**baseline_raw, "delta_a": "-2 MHz", "Pp": "0 mW"}, baseline_params)
    assert detuned.delta_a(baseline_params) == pytest.approx(-2e6, rel=1e-6)
    assert detuned.Pp == 0.0


def test_drive_amplitudes(drive):
    Ec, Ep = drive_amplitudes(drive)
    assert Ec == pytest.approx(math.sqrt(drive.Pc / (hbar * drive.omega_c)))
    assert Ep == pytest.approx(math.sqrt(drive.Pp / (hbar * drive.omega_p)))


def test_drive_rejects_powers(baseline_params):
    with pytest.raises(ParameterError, match="Pc"):
        Drive.for_detuning(baseline_params, baseline_params.omega_m, 0.0)
    with pytest.raises(ParameterError, match="Pp"):
        Drive.for_detuning(baseline_params, baseline_params.omega_m, 1e-3, -1.0)
