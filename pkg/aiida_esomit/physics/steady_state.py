"""Self-consistent mean-field steady state.

The static displacement enters the cavity amplitudes only through the optical
shift ``u = g x̄``, so the steady state is the root of the scalar function

    F(u) = u − (ħ g² / (m ωm²)) (|ā_cw(u)|² + |ā_ccw(u)|²)

on ``u ≥ 0``. Roots are bracketed on a grid and refined with `brentq`; the
smallest root is the operating branch.
"""

import dataclasses
import warnings
from typing import Tuple

import numpy as np
from aiida.common.log import AIIDA_LOGGER
from scipy.constants import hbar
from scipy.optimize import brentq

from ..exceptions import MultistabilityWarning, NoConvergence, SingularDenominator
from .model import derived_rates, drive_amplitudes

LOGGER = AIIDA_LOGGER.getChild("esomit.steady_state")

DENOMINATOR_EPS = 1.0e-14
ROOT_TOLERANCE = 1.0e-12
MAX_DOUBLINGS = 60
MAX_BRACKET_POINTS = 200_000
MAX_ITERATIONS = 500


@dataclasses.dataclass(frozen=True)
class SteadyState:
    a_cw: complex
    a_ccw: complex
    x_bar: float
    u: float
    all_roots: Tuple[float, ...]
    residual: float

    @property
    def multistable(self):
        return len(self.all_roots) > 1

    @property
    def intensity(self):
        return abs(self.a_cw) ** 2 + abs(self.a_ccw) ** 2

    def as_dict(self):
        return {
            "a_cw": [self.a_cw.real, self.a_cw.imag],
            "a_ccw": [self.a_ccw.real, self.a_ccw.imag],
            "x_bar": self.x_bar,
            "u": self.u,
            "all_roots": list(self.all_roots),
            "residual": self.residual,
        }


def _amplitudes(params, drive, u):
    """Vectorised steady amplitudes; returns ``(a_cw, a_ccw, den, scale)``."""
    rates = derived_rates(params)
    Ec, _ = drive_amplitudes(drive)
    sqrt_g1, sqrt_g2 = np.sqrt(params.gamma1), np.sqrt(params.gamma2)
    s3 = np.sqrt(params.gamma1 * params.gamma2) * rates.t3
    delta = drive.delta(params)

    D = 1j * (delta - np.asarray(u, dtype=float)) + rates.gamma_half
    den = D * D + s3 * s3 + params.J**2
    scale = np.abs(D) ** 2 + params.J**2 + params.gamma1 * params.gamma2 * params.t0**2
    with np.errstate(divide="ignore", invalid="ignore"):
        a_cw = Ec * (sqrt_g1 * D - rates.t1 * sqrt_g2 * (s3 + 1j * params.J)) / den
        a_ccw = Ec * (rates.t1 * sqrt_g2 * D + sqrt_g1 * (s3 - 1j * params.J)) / den
    return a_cw, a_ccw, den, scale


def intracavity_steady(params, drive, u):
    """Mean cavity amplitudes ``(ā_cw, ā_ccw)`` at optical shift `u` [rad/s]."""
    a_cw, a_ccw, den, scale = _amplitudes(params, drive, u)
    singular = np.abs(den) < DENOMINATOR_EPS * scale
    if np.any(singular):
        bad = np.atleast_1d(np.asarray(u, dtype=float))[np.atleast_1d(singular)]
        raise SingularDenominator(f"steady-state denominator vanishes at u={bad[0]!r}")
    if np.ndim(a_cw) == 0:
        return complex(a_cw), complex(a_ccw)
    return a_cw, a_ccw


def force_constant(params):
    """``ħ g² / (m ωm²)`` mapping intracavity photon number to optical shift."""
    return hbar * params.g**2 / (params.m * params.omega_m**2)


def fixed_point_residual(params, drive, u):
    """``F(u)``; vectorised over `u`."""
    a_cw, a_ccw = intracavity_steady(params, drive, u)
    return np.asarray(u, dtype=float) - force_constant(params) * (np.abs(a_cw) ** 2 + np.abs(a_ccw) ** 2)


def _bracket_limit(params, drive, K):
    """Upper end of the search interval, doubled until ``F(u_max) > 0``."""
    gamma = params.gamma_half
    delta = drive.delta(params)
    # the intensity peaks within a few linewidths of the shifted resonance
    width = 4.0 * (gamma + params.J + params.t0 * np.sqrt(params.gamma1 * params.gamma2))
    probe = np.linspace(delta - width, delta + width, 2001)
    probe = np.concatenate(([0.0], probe[probe > 0]))
    a_cw, a_ccw = intracavity_steady(params, drive, probe)
    intensity = np.abs(a_cw) ** 2 + np.abs(a_ccw) ** 2
    u_max = 2.0 * K * max(intensity[0], intensity.max()) + gamma
    for _ in range(MAX_DOUBLINGS):
        if fixed_point_residual(params, drive, u_max) > 0:
            return u_max
        u_max *= 2.0
    raise NoConvergence("no sign change bracketing the steady state", abs(fixed_point_residual(params, drive, u_max)))


def solve_steady(params, drive):
    """Solve the self-consistent steady state and return the low branch.

    All real roots of ``F`` on ``[0, u_max]`` are reported in ``all_roots``.
    """
    K = force_constant(params)
    a_cw0, a_ccw0 = intracavity_steady(params, drive, 0.0)
    if K * (abs(a_cw0) ** 2 + abs(a_ccw0) ** 2) == 0.0:
        LOGGER.debug("no radiation-pressure shift; u = 0")
        return SteadyState(a_cw0, a_ccw0, 0.0, 0.0, (0.0,), 0.0)

    gamma = params.gamma_half
    u_max = _bracket_limit(params, drive, K)
    count = int(min(MAX_BRACKET_POINTS, max(2001, 40.0 * u_max / gamma)))
    grid = np.linspace(0.0, u_max, count)
    values = fixed_point_residual(params, drive, grid)
    changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) <= 0)
    LOGGER.debug("steady state: u_max=%.3e, %d grid points, %d brackets", u_max, count, changes.size)

    roots = []
    best = np.inf
    for index in changes:
        lo, hi = grid[index], grid[index + 1]
        if values[index] == 0.0:
            root = lo
        elif values[index + 1] == 0.0:
            continue
        else:
            target = ROOT_TOLERANCE * max(hi, gamma)
            root, info = brentq(
                lambda u: float(fixed_point_residual(params, drive, u)),
                lo,
                hi,
                xtol=1.0e-3 * target,
                rtol=4.0 * np.finfo(float).eps,
                maxiter=MAX_ITERATIONS,
                full_output=True,
                disp=False,
            )
            residual = abs(float(fixed_point_residual(params, drive, root)))
            best = min(best, residual)
            if not info.converged or residual > ROOT_TOLERANCE * max(root, gamma):
                raise NoConvergence(f"steady-state root in [{lo:.6e}, {hi:.6e}] did not converge", best)
        roots.append(float(root))

    if not roots:
        raise NoConvergence("no steady-state root found", float(np.min(np.abs(values))))
    if len(roots) > 1:
        LOGGER.warning("optical multistability: %d steady-state roots, keeping u=%.6e", len(roots), roots[0])
        warnings.warn(f"{len(roots)} steady-state roots; using the lowest", MultistabilityWarning, stacklevel=2)

    u = roots[0]
    a_cw, a_ccw = intracavity_steady(params, drive, u)
    residual = float(fixed_point_residual(params, drive, u))
    x_bar = u / params.g
    return SteadyState(a_cw, a_ccw, x_bar, u, tuple(roots), residual)
