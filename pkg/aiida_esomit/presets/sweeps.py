"""Spectrum sweeps over one parameter axis.

Points are evaluated on a thread pool; results are returned in axis order.
"""

import concurrent.futures
import math
import os

import numpy as np
from aiida.common.log import AIIDA_LOGGER

from ..exceptions import InvalidGrid, ParameterError
from ..physics.eigenspace import PhaseKind, classify_point, es_coupling
from ..physics.model import ES_PHASE, OPTIONAL_FIELDS, REQUIRED_FIELDS, Drive
from ..physics.response import transmission_spectrum
from ..units import parse_quantity
from .catalog import DEFAULT_PHASES, line_gamma2

LOGGER = AIIDA_LOGGER.getChild("esomit.sweeps")

THREADS_ENV = "ESOMIT_THREADS"
SWEEP_AXES = tuple(name for name in REQUIRED_FIELDS + OPTIONAL_FIELDS if name != "one-way-coupling")


def tie_line_gamma2(params, convention):
    """Keep ``γ2`` on the J = 0 exceptional line."""
    return params.replace(gamma2=line_gamma2(params.gamma1, convention))


def tie_es_coupling(params, convention):
    """Keep ``J`` on the second-kind exceptional surface."""
    return params.replace(J=es_coupling(params.t0, params.gamma1, params.gamma2))


TIES = {
    "line": tie_line_gamma2,
    "es": tie_es_coupling,
}


def default_workers():
    """Worker count from ``ESOMIT_THREADS``, else the CPU count."""
    value = os.environ.get(THREADS_ENV)
    if value:
        try:
            workers = int(value)
        except ValueError:
            raise ParameterError(THREADS_ENV, f"expected a positive integer, got {value!r}") from None
        if workers < 1:
            raise ParameterError(THREADS_ENV, f"expected a positive integer, got {value!r}")
        return workers
    return os.cpu_count() or 1


def sweep_point(preset, axis, value, tie=None):
    """Parameters and drive at one sweep step; the pump detuning is held fixed."""
    if axis not in SWEEP_AXES:
        raise ParameterError("axis", f"{axis!r} is not a sweepable parameter; choose from {', '.join(SWEEP_AXES)}")
    params = preset.params.replace(**{axis: float(value)})
    if tie:
        try:
            params = TIES[tie](params, preset.convention)
        except KeyError:
            raise ParameterError("tie", f"unknown tie {tie!r}; choose from {', '.join(TIES)}") from None
    drive = Drive.for_detuning(params, preset.delta_a, preset.drive.Pc, preset.drive.Pp)
    return params, drive


def sweep_1d(preset, axis, grid, tie=None, delta_p=None, max_workers=None):
    """One `SpectrumTable` per value of `axis` in `grid`, in grid order.

    :param tie: name of a constraint hook applied after setting the axis
        (``line`` or ``es``).
    :param delta_p: probe-detuning grid; defaults to the preset grid.
    """
    values = np.atleast_1d(np.asarray(grid, dtype=float))
    if values.size == 0:
        raise InvalidGrid(axis, "sweep grid is empty")
    delta_p = preset.grid.values() if delta_p is None else delta_p
    workers = max_workers or default_workers()

    def _compute(step):
        index, value = step
        params, drive = sweep_point(preset, axis, value, tie)
        kind = classify_point(params).kind
        metadata = {
            **preset.metadata(),
            "axis": axis,
            "value": float(value),
            "step": index,
            "tie": tie or "none",
            "kind": str(kind),
            "on_es": kind in (PhaseKind.ES_KIND1, PhaseKind.ES_KIND2),
        }
        table = transmission_spectrum(params, drive, delta_p, metadata=metadata)
        LOGGER.debug("sweep %s step %d (%s = %.6e) done", preset.name, index, axis, value)
        return table

    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        tables = list(executor.map(_compute, enumerate(values)))
    LOGGER.info("sweep of %s over %s: %d spectra on %d workers", preset.name, axis, len(tables), workers)
    return tables


def sweep_phase(preset, phi3_values=None, delta_p=None, max_workers=None):
    """Spectra and delays while the loop phase ``φ3`` is varied.

    Values must lie in ``[0, 2π)``; the row at ``1.5π`` is marked on-ES when
    the remaining parameters sit on the second-kind surface.
    """
    if phi3_values is None:
        if preset.sweep is not None and preset.sweep.axis == "phi3":
            phi3_values = preset.sweep.values
        else:
            phi3_values = [parse_quantity(text, field="phi3") for text in DEFAULT_PHASES]
    values = np.atleast_1d(np.asarray(phi3_values, dtype=float))
    if np.any((values < 0) | (values >= 2.0 * math.pi)):
        raise InvalidGrid("phi3", "loop phases must lie in [0, 2pi)")
    tables = sweep_1d(preset, "phi3", values, delta_p=delta_p, max_workers=max_workers)
    for table in tables:
        table.metadata["on_es"] = table.metadata["kind"] == str(PhaseKind.ES_KIND2) and math.isclose(
            table.metadata["value"], ES_PHASE, rel_tol=0.0, abs_tol=1e-12
        )
    return tables
