"""Closed-form sideband amplitudes and their cross-check against the direct solve.

The closed forms are evaluated exactly as printed, including the shorthand

    h_nl = h_n + h_l  (n < l),    h_nl = h_n − h_l  (n > l)

and with starred couplings taken as complex conjugates. They are an
independent oracle; the direct solve in `response` is authoritative and the
cross-check reports, rather than assumes, whether the two agree.
"""

import dataclasses

import numpy as np
from aiida.common.log import AIIDA_LOGGER
from scipy.constants import hbar

from ..exceptions import ZeroB
from .model import derived_rates
from .response import check_grid, probe_amplitude, solve_rows
from .steady_state import solve_steady

LOGGER = AIIDA_LOGGER.getChild("esomit.appendix")

ZERO_B_EPS = 1.0e-14
PASS_THRESHOLD = 1.0e-6
MAX_DISCREPANCIES = 10
COMPONENTS = ("da_cw_m", "da_ccw_m")


@dataclasses.dataclass(frozen=True)
class AppendixCoefficients:
    """Closed-form coefficients; scalars or arrays over the beat frequency."""

    A1: complex
    A2: complex
    A3: complex
    A4: complex
    B: complex
    d1: complex
    d2: complex
    h1: complex
    h2: complex
    h3: complex
    h4: complex
    h5: complex
    h6: complex
    h7: complex
    k1: complex
    k2: complex
    scale: float

    def h_nl(self, n, l):
        """Combined coefficient ``h_nl`` following the index-order rule."""
        if n == l:
            raise ValueError("h_nl needs two distinct indices")
        h_n, h_l = getattr(self, f"h{n}"), getattr(self, f"h{l}")
        return h_n + h_l if n < l else h_n - h_l


def appendix_coefficients(params, steady, drive, xi):
    """Evaluate every closed-form coefficient at beat frequency `xi`."""
    xi = np.asarray(xi, dtype=float)
    rates = derived_rates(params)
    delta_eff = drive.delta(params) - steady.u
    f1 = rates.gamma_half - 1j * xi + 1j * delta_eff
    f2 = rates.gamma_half - 1j * xi - 1j * delta_eff
    chi = 1.0 / (params.m * (params.omega_m**2 - xi**2 - 1j * xi * params.gamma_m))

    G = params.gamma1 * params.gamma2
    sG = np.sqrt(G)
    sg1, sg2 = np.sqrt(params.gamma1), np.sqrt(params.gamma2)
    t0, t2, t3 = params.t0, rates.t2, rates.t3
    t3s = np.conj(t3)
    J = params.J
    Js = np.conj(J)
    a_cw, a_ccw = steady.a_cw, steady.a_ccw

    weight = hbar * params.g**2 * chi
    h1 = weight * a_cw * np.conj(a_cw)
    h2 = weight * a_ccw * np.conj(a_ccw)
    h3 = weight * a_cw * np.conj(a_ccw)
    h4 = weight * a_ccw * np.conj(a_cw)
    h5 = J + 1j * t3 * sG
    h6 = J - 1j * t3 * sG
    h7 = f2**2 + Js**2 + G * t3s**2
    k1 = f1 - 1j * h1
    k2 = J**2 + f1**2

    h12 = h1 + h2
    h34 = h3 + h4
    h43 = h4 - h3
    h53 = h5 - h3

    d1 = (
        -t3 * t3s**2 * G**1.5
        + f2 * h5 * h12
        + sG * (t3 * Js * (h34 - Js) + t3s * J * h43)
        - 1j
        * (
            f2**2 * h53
            + t3s * G * ((J - h3) * t3s + t3 * h43)
            - Js * (J * h34 + Js * h3 - J**2)
        )
    )
    d2 = f1 * (h7 + 1j * (t3s * sG * h4 + f2 * h12) - h3 * np.conj(h5) - h4 * Js)

    A1 = d1 * sg2 * t2.real + sg1 * (d2 - 1j * h2 * h7)
    A2 = d1 * sg2 * t2.imag
    A3 = (
        sg1 * h7 * (k1 * t2.real + 1j * h4)
        - 1j * sg1 * h6 * d2 / f1
        + f1 * sg2 * (1j * f2 * h12 + 1j * h3 * np.conj(h6) - h4 * np.conj(h6)) * t2.real
    )
    A4 = sg2 * (d2 - 1j * h1 * h7) * t2.imag
    B = (
        t0**4 * G**2
        + 1j * sG * h43 * (t3s * k2 + t3 * Js**2)
        + G
        * (
            1j * t0**2 * sG * (t3 + t3s) * h43
            - (J * t3s**2 + Js * t3**2) * h34
            + t3s**2 * k2
            + t3**2 * Js**2
            - 1j * t3s**2 * f1 * h12
        )
        + Js * (k2 * Js - 1j * f1 * Js * h12 - (k2 + J * Js) * h34)
    )

    # B is of fourth degree in the rates
    rate = np.abs(f1) + np.abs(f2) + J + sG + np.abs(h1) + np.abs(h2) + np.abs(h3) + np.abs(h4)
    return AppendixCoefficients(
        A1=A1, A2=A2, A3=A3, A4=A4, B=B, d1=d1, d2=d2,
        h1=h1, h2=h2, h3=h3, h4=h4, h5=h5, h6=h6, h7=h7,
        k1=k1, k2=k2, scale=rate**4,
    )


def _appendix_batch(params, steady, drive, xi):
    """Return ``(da_cw_m, da_ccw_m, zero_b)`` over an array of `xi`."""
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    coefficients = appendix_coefficients(params, steady, drive, xi)
    zero_b = np.abs(coefficients.B) < ZERO_B_EPS * coefficients.scale
    B = np.where(zero_b, 1.0, coefficients.B)
    Ep = probe_amplitude(drive, xi)
    da_cw_m = Ep * (coefficients.A1 + 1j * coefficients.A2) / B
    da_ccw_m = Ep * (coefficients.A3 + 1j * coefficients.A4) / B
    return da_cw_m, da_ccw_m, zero_b


def appendix_response(params, steady, drive, xi):
    """Closed-form ``(δa⁻_cw, δa⁻_ccw)`` at one beat frequency."""
    da_cw_m, da_ccw_m, zero_b = _appendix_batch(params, steady, drive, xi)
    if zero_b[0]:
        raise ZeroB(f"closed-form denominator B vanishes at xi={float(np.atleast_1d(xi)[0])!r}")
    return complex(da_cw_m[0]), complex(da_ccw_m[0])


def _relative_deviation(closed, direct):
    magnitude = np.abs(direct)
    difference = np.abs(closed - direct)
    with np.errstate(divide="ignore", invalid="ignore"):
        deviation = np.where(magnitude > 0, difference / magnitude, difference)
    # both paths vanish together when the probe is off
    return np.where((magnitude == 0) & (difference == 0), 0.0, deviation)


def crosscheck_appendix(params, drive, grid, steady=None, threshold=PASS_THRESHOLD):
    """Compare the closed forms with the direct solve over a probe-detuning grid.

    :return: a JSON-serialisable report with per-component ``max`` and
        ``median`` relative deviations, a ``verdict`` of ``PASS`` or ``FAIL``
        and, on failure, the worst ``discrepancies``.
    """
    delta_p = check_grid(grid)
    if steady is None:
        steady = solve_steady(params, drive)
    xi = delta_p + drive.delta_a(params)

    solution, *_ = solve_rows(params, steady, drive, xi)
    closed_cw, closed_ccw, zero_b = _appendix_batch(params, steady, drive, xi)
    valid = ~zero_b

    report = {
        "points": int(delta_p.size),
        "zero_b_points": int(zero_b.sum()),
        "threshold": threshold,
        "components": {},
        "discrepancies": [],
    }
    worst = 0.0
    for name, direct, closed in zip(COMPONENTS, (solution[:, 1], solution[:, 2]), (closed_cw, closed_ccw)):
        deviation = _relative_deviation(closed, direct)[valid]
        if deviation.size == 0:
            report["components"][name] = {"max": None, "median": None}
            continue
        report["components"][name] = {
            "max": float(np.max(deviation)),
            "median": float(np.median(deviation)),
        }
        worst = max(worst, float(np.max(deviation)))
        indices = np.flatnonzero(valid)
        order = np.argsort(deviation)[::-1][:MAX_DISCREPANCIES]
        for position in order:
            if deviation[position] <= threshold:
                break
            row = int(indices[position])
            report["discrepancies"].append(
                {
                    "component": name,
                    "row": row,
                    "delta_p": float(delta_p[row]),
                    "direct": [float(direct[row].real), float(direct[row].imag)],
                    "closed_form": [float(closed[row].real), float(closed[row].imag)],
                    "deviation": float(deviation[position]),
                }
            )

    passed = worst <= threshold and report["zero_b_points"] == 0
    report["verdict"] = "PASS" if passed else "FAIL"
    if passed:
        LOGGER.info("closed-form cross-check PASS (max deviation %.3e)", worst)
    else:
        LOGGER.warning(
            "closed-form cross-check FAIL: max deviation %.3e over %d points, %d with vanishing B",
            worst,
            report["points"],
            report["zero_b_points"],
        )
    return report
