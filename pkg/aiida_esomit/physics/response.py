"""Linearised probe response, transmission and group delay.

The fluctuation system is assembled from the Langevin equations with the
first-order sideband ansatz. Unknowns are ordered

    (δx, δa⁻_cw, δa⁻_ccw, δa⁺*_cw, δa⁺*_ccw)

and the rows are: mechanics, CW and CCW Stokes sidebands, CW and CCW conjugated
anti-Stokes sidebands. The loop coupling enters every optical row as
``sqrt(γ1γ2)·t3``. The CCW anti-Stokes row couples to δa⁺*_ccw through ``f2``
and to the mechanics through ``ā*_ccw``.

Rows are solved batch-wise with LAPACK ``gesv`` after a two-sided
equilibration of the mechanical row and column, which otherwise differ from
the optical entries by some twenty orders of magnitude in SI units.
"""

import dataclasses
import math
import warnings
from typing import Optional

import numpy as np
from aiida.common.log import AIIDA_LOGGER
from scipy.constants import hbar

from ..exceptions import (
    ConvergenceWarning,
    InvalidGrid,
    NonConvergentDerivative,
    SingularSystem,
    ZeroProbe,
)
from .model import derived_rates
from .steady_state import solve_steady

LOGGER = AIIDA_LOGGER.getChild("esomit.response")

PIVOT_RATIO = 1.0e-14
RESIDUAL_TOLERANCE = 1.0e-10
DELAY_STEP_RATIO = 1.0e-4
DELAY_RTOL = 1.0e-2
DELAY_FLOOR = 1.0e-12
MAX_HALVINGS = 6


@dataclasses.dataclass(frozen=True)
class ResponseSolution:
    delta_x: complex
    da_cw_m: complex
    da_ccw_m: complex
    da_cw_p: complex
    da_ccw_p: complex
    f1: complex
    f2: complex
    chi_inv: complex
    xi: float
    Ep: float
    residual: float

    @property
    def vector(self):
        return np.array([self.delta_x, self.da_cw_m, self.da_ccw_m, self.da_cw_p, self.da_ccw_p])


@dataclasses.dataclass
class SpectrumTable:
    """Sampled probe spectrum: ``delta_p`` [rad/s], complex ``t``, ``tau_g`` [s]."""

    delta_p: np.ndarray
    t: np.ndarray
    tau_g: np.ndarray
    metadata: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        self.delta_p = np.asarray(self.delta_p, dtype=float)
        self.t = np.asarray(self.t, dtype=complex)
        self.tau_g = np.asarray(self.tau_g, dtype=float)
        check_grid(self.delta_p)
        if not self.delta_p.shape == self.t.shape == self.tau_g.shape:
            raise InvalidGrid("delta_p", "table columns differ in length")

    @property
    def T(self):
        return np.abs(self.t) ** 2

    @property
    def phase(self):
        """Transmission phase unwrapped along the grid."""
        return np.unwrap(np.angle(self.t))

    @property
    def grid_delay(self):
        """Group delay estimated from the unwrapped phase on the grid itself."""
        return np.gradient(self.phase, self.delta_p)

    def __len__(self):
        return self.delta_p.size

    def rows(self):
        for delta_p, t, T, tau_g in zip(self.delta_p, self.t, self.T, self.tau_g):
            yield float(delta_p), complex(t), float(T), float(tau_g)


def check_grid(delta_p):
    """Raise `InvalidGrid` unless `delta_p` is a non-empty increasing 1-D grid."""
    delta_p = np.asarray(delta_p, dtype=float)
    if delta_p.ndim != 1 or delta_p.size == 0:
        raise InvalidGrid("delta_p", "grid must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(delta_p)):
        raise InvalidGrid("delta_p", "grid values must be finite")
    if np.any(np.diff(delta_p) <= 0):
        raise InvalidGrid("delta_p", "grid must be strictly increasing")
    return delta_p


def probe_amplitude(drive, xi):
    """``Ep = sqrt(Pp / ħωp)`` with ``ωp = ωc + ξ``; vectorised over `xi`."""
    return np.sqrt(drive.Pp / (hbar * (drive.omega_c + np.asarray(xi, dtype=float))))


def _coefficients(params, steady, drive, xi):
    rates = derived_rates(params)
    delta_eff = drive.delta(params) - steady.u
    f1 = rates.gamma_half - 1j * xi + 1j * delta_eff
    f2 = rates.gamma_half - 1j * xi - 1j * delta_eff
    chi_inv = params.m * (params.omega_m**2 - xi**2 - 1j * xi * params.gamma_m)
    return rates, f1, f2, chi_inv


def _assemble(params, steady, drive, xi):
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    rates, f1, f2, chi_inv = _coefficients(params, steady, drive, xi)
    sqrt_g1g2 = math.sqrt(params.gamma1 * params.gamma2)
    s3 = sqrt_g1g2 * rates.t3
    s3c = sqrt_g1g2 * np.conj(rates.t3)
    J, g = params.J, params.g
    a_cw, a_ccw = steady.a_cw, steady.a_ccw

    matrix = np.zeros((xi.size, 5, 5), dtype=complex)
    matrix[:, 0, 0] = chi_inv
    matrix[:, 0, 1] = -hbar * g * np.conj(a_cw)
    matrix[:, 0, 2] = -hbar * g * np.conj(a_ccw)
    matrix[:, 0, 3] = -hbar * g * a_cw
    matrix[:, 0, 4] = -hbar * g * a_ccw

    matrix[:, 1, 0] = -1j * g * a_cw
    matrix[:, 1, 1] = f1
    matrix[:, 1, 2] = s3 + 1j * J

    matrix[:, 2, 0] = -1j * g * a_ccw
    matrix[:, 2, 1] = 1j * J - s3
    matrix[:, 2, 2] = f1

    matrix[:, 3, 0] = 1j * g * np.conj(a_cw)
    matrix[:, 3, 3] = f2
    matrix[:, 3, 4] = s3c - 1j * J

    matrix[:, 4, 0] = 1j * g * np.conj(a_ccw)
    matrix[:, 4, 3] = -(s3c + 1j * J)
    matrix[:, 4, 4] = f2

    Ep = probe_amplitude(drive, xi)
    rhs = np.zeros((xi.size, 5), dtype=complex)
    rhs[:, 1] = math.sqrt(params.gamma1) * Ep
    rhs[:, 2] = rates.t2 * math.sqrt(params.gamma2) * Ep
    return matrix, rhs, f1, f2, chi_inv, Ep


def fluctuation_system(params, steady, drive, xi):
    """Return the 5×5 complex matrix and right-hand side at beat frequency `xi`."""
    matrix, rhs, *_ = _assemble(params, steady, drive, xi)
    return matrix[0], rhs[0]


def _equilibrate(matrix):
    """Scale the mechanical column and row to the optical magnitude."""
    reference = np.max(np.abs(matrix[:, 1:, 1:]), axis=(1, 2))
    column = np.max(np.abs(matrix[:, :, 0]), axis=1)
    column_scale = np.where(column > 0, reference / np.where(column > 0, column, 1.0), 1.0)
    scaled = matrix.copy()
    scaled[:, :, 0] *= column_scale[:, None]
    row = np.max(np.abs(scaled[:, 0, :]), axis=1)
    row_scale = np.where(row > 0, reference / np.where(row > 0, row, 1.0), 1.0)
    scaled[:, 0, :] *= row_scale[:, None]
    return scaled, row_scale, column_scale


def solve_rows(params, steady, drive, xi):
    """Solve all rows; returns ``(solution (N, 5), f1, f2, chi_inv, Ep, residual)``."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    matrix, rhs, f1, f2, chi_inv, Ep = _assemble(params, steady, drive, xi)
    scaled, row_scale, column_scale = _equilibrate(matrix)

    singular_values = np.linalg.svd(scaled, compute_uv=False)
    singular = singular_values[:, -1] < PIVOT_RATIO * singular_values[:, 0]
    if np.any(singular):
        row = int(np.flatnonzero(singular)[0])
        raise SingularSystem(float(xi[row]), row)

    scaled_rhs = rhs.copy()
    scaled_rhs[:, 0] *= row_scale
    try:
        solution = np.linalg.solve(scaled, scaled_rhs[:, :, None])[:, :, 0]
    except np.linalg.LinAlgError:
        raise SingularSystem(float(xi[0])) from None
    solution[:, 0] *= column_scale

    residual_vector = np.einsum("nij,nj->ni", matrix, solution) - rhs
    rhs_norm = np.linalg.norm(rhs, axis=1)
    residual = np.linalg.norm(residual_vector, axis=1) / np.where(rhs_norm > 0, rhs_norm, 1.0)
    worst = float(residual.max())
    if worst > RESIDUAL_TOLERANCE:
        LOGGER.warning("fluctuation residual %.3e exceeds %.1e", worst, RESIDUAL_TOLERANCE)
    return solution, f1, f2, chi_inv, Ep, residual


def solve_response(params, steady, drive, xi):
    """Solve the fluctuation system at one beat frequency `xi`."""
    solution, f1, f2, chi_inv, Ep, residual = solve_rows(params, steady, drive, xi)
    values = solution[0]
    return ResponseSolution(
        delta_x=complex(values[0]),
        da_cw_m=complex(values[1]),
        da_ccw_m=complex(values[2]),
        da_cw_p=complex(values[3]),
        da_ccw_p=complex(values[4]),
        f1=complex(f1[0]),
        f2=complex(f2[0]),
        chi_inv=complex(chi_inv[0]),
        xi=float(np.atleast_1d(xi)[0]),
        Ep=float(Ep[0]),
        residual=float(residual[0]),
    )


def _output_coefficient(params, da_cw_m, da_ccw_m, Ep):
    rates = derived_rates(params)
    return rates.t2 - (
        rates.t3 * math.sqrt(params.gamma1) * da_cw_m + math.sqrt(params.gamma2) * da_ccw_m
    ) / Ep


def transmission(params, drive, response):
    """Port-2 transmission coefficient ``t = s_out2 / s_in``."""
    if response.Ep == 0:
        raise ZeroProbe("probe amplitude is zero; transmission is undefined")
    return complex(_output_coefficient(params, response.da_cw_m, response.da_ccw_m, response.Ep))


def transmission_at(params, steady, drive, xi):
    """Vectorised transmission at beat frequencies `xi`."""
    if drive.Pp == 0:
        raise ZeroProbe("probe amplitude is zero; transmission is undefined")
    solution, _, _, _, Ep, _ = solve_rows(params, steady, drive, xi)
    return _output_coefficient(params, solution[:, 1], solution[:, 2], Ep)


def default_delay_step(params):
    return DELAY_STEP_RATIO * params.gamma_half


def transmission_spectrum(params, drive, delta_p, steady=None, delay_step=None, metadata=None):
    """Transmission and group delay on a probe-detuning grid.

    The steady state is solved once per parameter set; ``tau_g`` is the
    central phase difference with step `delay_step` (default ``1e-4 γ``).
    """
    delta_p = check_grid(delta_p)
    if steady is None:
        steady = solve_steady(params, drive)
    h = default_delay_step(params) if delay_step is None else delay_step
    xi = delta_p + drive.delta_a(params)

    t = transmission_at(params, steady, drive, xi)
    t_minus = transmission_at(params, steady, drive, xi - h)
    t_plus = transmission_at(params, steady, drive, xi + h)
    tau_g = np.angle(t_plus * np.conj(t_minus)) / (2.0 * h)

    table_metadata = {
        "params": params.as_dict(),
        "drive": drive.as_dict(),
        "steady_state": steady.as_dict(),
        "delay_step": h,
    }
    table_metadata.update(metadata or {})
    LOGGER.info("spectrum of %d rows computed", delta_p.size)
    return SpectrumTable(delta_p=delta_p, t=t, tau_g=tau_g, metadata=table_metadata)


def central_phase_derivative(func, x, h):
    """``(arg f(x+h) − arg f(x−h)) / 2h`` with the difference wrapped to (−π, π]."""
    return float(np.angle(func(x + h) * np.conj(func(x - h)))) / (2.0 * h)


def converged_phase_derivative(func, x, h):
    """Phase derivative refined by step halving until two estimates agree to 1 %."""
    if not h > 0:
        raise ValueError(f"step must be positive, got {h!r}")
    previous = central_phase_derivative(func, x, h)
    for _ in range(MAX_HALVINGS):
        h *= 0.5
        current = central_phase_derivative(func, x, h)
        if abs(current - previous) <= DELAY_RTOL * max(abs(current), DELAY_FLOOR):
            return current
        LOGGER.warning("phase derivative at %.6e not converged; halving step to %.3e", x, h)
        warnings.warn(
            f"phase derivative at {x!r} needed step {h!r}", ConvergenceWarning, stacklevel=2
        )
        previous = current
    raise NonConvergentDerivative(f"phase derivative at {x!r} did not converge after {MAX_HALVINGS} halvings")


def group_delay(params, drive, delta_p, h=None, steady=None):
    """Group delay ``τg = d arg(t) / dδp`` [s] at one probe detuning."""
    if steady is None:
        steady = solve_steady(params, drive)
    if h is None:
        h = default_delay_step(params)
    delta_a = drive.delta_a(params)

    def _t(x):
        return transmission_at(params, steady, drive, x + delta_a)[0]

    return converged_phase_derivative(_t, float(delta_p), h)


def two_mode_transmission(params, drive, delta_p, steady=None):
    """Closed-form transmission of the optical pair alone (mechanics ignored)."""
    u = 0.0 if steady is None else steady.u
    rates = derived_rates(params)
    xi = np.asarray(delta_p, dtype=float) + drive.delta_a(params)
    f1 = rates.gamma_half - 1j * xi + 1j * (drive.delta(params) - u)
    s3 = math.sqrt(params.gamma1 * params.gamma2) * rates.t3
    det = f1 * f1 + params.J**2 + s3 * s3
    sqrt_g1, sqrt_g2 = math.sqrt(params.gamma1), math.sqrt(params.gamma2)
    cw = (f1 * sqrt_g1 - (s3 + 1j * params.J) * rates.t2 * sqrt_g2) / det
    ccw = (f1 * rates.t2 * sqrt_g2 - (1j * params.J - s3) * sqrt_g1) / det
    return rates.t2 - (rates.t3 * sqrt_g1 * cw + sqrt_g2 * ccw)


def single_mode_transmission(params, drive, steady, delta_p):
    """Closed-form OMIT transmission of the CCW mode alone.

    Exact when the CW mode is decoupled (``J = 0``, loop off) and undriven.
    """
    rates = derived_rates(params)
    xi = np.asarray(delta_p, dtype=float) + drive.delta_a(params)
    _, f1, f2, chi_inv = _coefficients(params, steady, drive, xi)
    coupling = hbar * params.g**2 * abs(steady.a_ccw) ** 2
    effective = chi_inv - 1j * coupling * (1.0 / f1 - 1.0 / f2)
    sideband = (1.0 + 1j * coupling / (f1 * effective)) / f1
    return rates.t2 * (1.0 - params.gamma2 * sideband)
