"""Transparency-window metrics and the qualitative spectrum checks built on them."""

import dataclasses

import numpy as np
from aiida.common.log import AIIDA_LOGGER
from scipy.signal import peak_widths

from ..exceptions import InvalidGrid, NoExtremum
from ..physics.response import transmission_spectrum
from ..units import ANGULAR, unit_scale
from .catalog import GridSpec, preset
from .sweeps import sweep_1d, sweep_phase

LOGGER = AIIDA_LOGGER.getChild("esomit.metrics")

PEAK = "peak"
VALLEY = "valley"
OUTER_FRACTION = 0.2
MIN_POINTS = 5
DELAY_WINDOW_MHZ = (0.5, 1.5)
CENTRAL_WINDOW_MHZ = 1.5
CONTINUITY_LIMIT = 0.1


@dataclasses.dataclass(frozen=True)
class WindowMetrics:
    center: float
    height: float
    width: float
    polarity: str
    baseline: float

    def as_dict(self):
        return dataclasses.asdict(self)


def window_metrics(table, search_range=None):
    """Locate the dominant transparency feature of ``T`` within `search_range`.

    The baseline is the median ``T`` over the outer 20 % of the range; the
    extremum is the largest deviation from it and the width is the full width
    at half of that deviation.
    """
    delta_p, T = table.delta_p, table.T
    if search_range is None:
        low, high = delta_p[0], delta_p[-1]
    else:
        low, high = search_range
        if low < delta_p[0] or high > delta_p[-1] or not low < high:
            raise InvalidGrid("search_range", f"[{low!r}, {high!r}] is not inside the table span")
    mask = (delta_p >= low) & (delta_p <= high)
    x, y = delta_p[mask], T[mask]
    n = x.size
    if n < MIN_POINTS:
        raise InvalidGrid("search_range", f"only {n} grid points in the search range")

    diff = np.diff(y)
    if np.all(diff >= 0) or np.all(diff <= 0):
        raise NoExtremum(f"transmission is monotone over [{low!r}, {high!r}]")

    edge = max(1, int(round(0.5 * OUTER_FRACTION * n)))
    baseline = float(np.median(np.concatenate((y[:edge], y[-edge:]))))
    deviation = y - baseline
    index = int(np.argmax(np.abs(deviation)))
    if index in (0, n - 1) or deviation[index] == 0:
        raise NoExtremum(f"no interior extremum of transmission in [{low!r}, {high!r}]")
    polarity = PEAK if deviation[index] > 0 else VALLEY
    signal = np.ascontiguousarray(deviation if polarity == PEAK else -deviation, dtype=float)

    prominence = signal[index]
    _, _, left, right = peak_widths(
        signal,
        np.array([index]),
        rel_height=0.5,
        prominence_data=(np.array([prominence]), np.array([0]), np.array([n - 1])),
    )
    samples = np.arange(n)
    width = float(np.interp(right[0], samples, x) - np.interp(left[0], samples, x))

    # parabolic refinement of the extremum position
    y0, y1, y2 = signal[index - 1 : index + 2]
    curvature = y0 - 2.0 * y1 + y2
    offset = 0.5 * (y0 - y2) / curvature if curvature != 0 else 0.0
    center = float(x[index] + offset * 0.5 * (x[index + 1] - x[index - 1]))

    return WindowMetrics(center=center, height=float(y[index]), width=width, polarity=polarity, baseline=baseline)


def delay_extremum(table, search_range=None):
    """``(δp, τg)`` at the largest ``|τg|`` within `search_range`."""
    delta_p, tau = table.delta_p, table.tau_g
    if search_range is not None:
        mask = (delta_p >= search_range[0]) & (delta_p <= search_range[1])
        delta_p, tau = delta_p[mask], tau[mask]
    if delta_p.size == 0:
        raise InvalidGrid("search_range", "no grid points in the search range")
    index = int(np.argmax(np.abs(tau)))
    return float(delta_p[index]), float(tau[index])


def _spectrum(name, delta_p, convention):
    entry = preset(name, convention)
    return transmission_spectrum(entry.params, entry.drive, delta_p, metadata=entry.metadata())


def _claim(claim, measured, passed):
    return {"claim": claim, "measured": measured, "verdict": "PASS" if passed else "FAIL"}


def _field(metrics, name, scale=1.0):
    if metrics is None:
        return None
    value = getattr(metrics, name)
    return value / scale if isinstance(value, (int, float)) else value


def figure_checks(count=None, convention=ANGULAR, max_workers=None):
    """Evaluate the qualitative spectrum and delay claims on the presets.

    Each entry carries the measured quantities and a PASS/FAIL verdict; the
    verdicts are results, not assertions. A spectrum without a clear
    extremum fails the claims that depend on it.
    """
    mhz = unit_scale("MHz", convention)
    default = preset("baseline", convention).grid
    grid = GridSpec(default.min, default.max, count or default.count)
    spectra = {}

    def spectrum(name):
        if name not in spectra:
            spectra[name] = _spectrum(name, grid.values(), convention)
        return spectra[name]

    def metrics(name, search_range=None):
        try:
            return window_metrics(spectrum(name), search_range)
        except NoExtremum as exception:
            LOGGER.warning("%s: %s", name, exception)
            return None

    central = (-CENTRAL_WINDOW_MHZ * mhz, CENTRAL_WINDOW_MHZ * mhz)
    blue = (0.0, grid.max)
    claims = []

    es1 = {name: metrics(name, central) for name in ("es1-ep1", "es1-ep2", "es1-ep3")}
    claims.append(
        _claim(
            "J = 0 surface shows a transparency feature near zero probe detuning",
            {name: {"center_MHz": _field(m, "center", mhz), "polarity": _field(m, "polarity")} for name, m in es1.items()},
            all(m is not None and abs(m.center) <= mhz for m in es1.values()),
        )
    )

    ep2 = metrics("es2-ep2", blue)
    claims.append(
        _claim(
            "second-kind EP2 opens a transparency window at blue detuning",
            {"center_MHz": _field(ep2, "center", mhz), "polarity": _field(ep2, "polarity")},
            ep2 is not None and ep2.center > 0 and ep2.polarity == PEAK,
        )
    )

    line = preset("fig2d-line", convention)
    tables = sweep_1d(
        line, line.sweep.axis, line.sweep.values, tie=line.sweep.tie, delta_p=grid.values(), max_workers=max_workers
    )
    jumps = [float(np.max(np.abs(b.T - a.T))) for a, b in zip(tables, tables[1:])]
    max_jump = max(jumps) if jumps else 0.0
    claims.append(
        _claim(
            "spectra vary continuously along the J = 0 exceptional line",
            {"steps": len(tables), "max_adjacent_dT": max_jump},
            max_jump < CONTINUITY_LIMIT,
        )
    )

    ep1, ep3 = metrics("es2-ep1"), metrics("es2-ep3")
    claims.append(
        _claim(
            "higher dissipative coupling broadens the window and shifts it to the right",
            {
                "center_MHz": {"es2-ep1": _field(ep1, "center", mhz), "es2-ep3": _field(ep3, "center", mhz)},
                "width_MHz": {"es2-ep1": _field(ep1, "width", mhz), "es2-ep3": _field(ep3, "width", mhz)},
            },
            ep1 is not None and ep3 is not None and ep3.center > ep1.center and ep3.width > ep1.width,
        )
    )

    ep4 = metrics("es2-ep4", blue)
    both = ep2 is not None and ep4 is not None
    claims.append(
        _claim(
            "changing t0 across surfaces changes the window height but not its position",
            {
                "center_shift_MHz": (ep4.center - ep2.center) / mhz if both else None,
                "grid_step_MHz": grid.step / mhz,
                "height": {"es2-ep2": _field(ep2, "height"), "es2-ep4": _field(ep4, "height")},
            },
            both and abs(ep4.center - ep2.center) <= grid.step and ep2.height != ep4.height,
        )
    )

    np1 = None
    around_ep1 = None
    if ep1 is not None:
        half = max(ep1.width, 4.0 * grid.step)
        around_ep1 = (max(grid.min, ep1.center - half), min(grid.max, ep1.center + half))
        np1 = metrics("es2-np1", around_ep1)
    claims.append(
        _claim(
            "leaving the surface turns the EP1 transparency window into an absorption valley",
            {
                "es2-ep1": _field(ep1, "polarity"),
                "es2-np1": _field(np1, "polarity"),
                "range_MHz": None if around_ep1 is None else [v / mhz for v in around_ep1],
            },
            ep1 is not None and np1 is not None and ep1.polarity == PEAK and np1.polarity == VALLEY,
        )
    )

    delays = {name: delay_extremum(spectrum(name)) for name in ("es1-ep1", "es1-ep2", "es1-ep3", "es1-np")}
    ep_signs = {float(np.sign(delays[name][1])) for name in ("es1-ep1", "es1-ep2", "es1-ep3")}
    np_sign = float(np.sign(delays["es1-np"][1]))
    claims.append(
        _claim(
            "moving off the J = 0 surface reverses the fast/slow light response",
            {name: {"delta_p_MHz": d / mhz, "tau_g_s": tau} for name, (d, tau) in delays.items()},
            len(ep_signs) == 1 and np_sign != 0 and ep_signs == {-np_sign},
        )
    )

    phase = preset("fig5-phase-sweep", convention)
    window = tuple(v * mhz for v in DELAY_WINDOW_MHZ)
    below = [value for value in phase.sweep.values if value <= phase.params.phi3 + 1e-12]
    phase_tables = sweep_phase(phase, below, delta_p=grid.values(), max_workers=max_workers)
    fast = []
    for table in phase_tables:
        mask = (table.delta_p >= window[0]) & (table.delta_p <= window[1])
        fast.append(float(max(0.0, -np.min(table.tau_g[mask]))) if mask.any() else 0.0)
    claims.append(
        _claim(
            "fast light near 1 MHz weakens as phi3 decreases below 1.5pi",
            {"phi3_pi": [v / np.pi for v in below], "fast_light_s": fast},
            bool(np.all(np.diff(fast) > 0)) and fast[-1] > 0,
        )
    )

    passed = sum(entry["verdict"] == "PASS" for entry in claims)
    LOGGER.info("spectrum checks: %d of %d claims PASS", passed, len(claims))
    return {"grid_points": int(grid.count), "convention": convention, "claims": claims}
