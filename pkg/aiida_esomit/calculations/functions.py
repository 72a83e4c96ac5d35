"""Process functions recording spectra, eigenvalue scans and cross-checks in the provenance graph.

Inputs are `Dict` nodes holding the same ``key: value`` entries as a run
configuration (strings with unit suffixes or SI numbers). Any package error is
returned as the matching exit code instead of raised.
"""

from aiida.common.log import AIIDA_LOGGER
from aiida.engine import calcfunction
from aiida.orm import ArrayData, Dict

from ..exceptions import EsomitError, ParameterError
from ..parsers.config import CONVENTION_KEY, KNOWN_KEYS
from ..physics.appendix import crosscheck_appendix
from ..physics.eigenspace import eigen_scan
from ..physics.model import build_drive, build_system
from ..physics.response import transmission_spectrum
from ..presets.catalog import GridSpec
from ..presets.sweeps import SWEEP_AXES, TIES
from ..units import ANGULAR, check_convention

LOGGER = AIIDA_LOGGER.getChild("esomit.calculations")

GRID_KEYS = ("min", "max", "count")


def _system(parameters):
    raw = parameters.get_dict()
    unknown = sorted(set(raw) - set(KNOWN_KEYS))
    if unknown:
        raise ParameterError("parameters", f"unknown keys {', '.join(unknown)}")
    convention = check_convention(raw.pop(CONVENTION_KEY, ANGULAR))
    params = build_system(raw, convention)
    drive = build_drive(raw, params, convention)
    return params, drive, convention


def _grid(grid, convention, axis="delta_p"):
    entries = grid.get_dict()
    missing = [key for key in GRID_KEYS if key not in entries]
    if missing:
        raise ParameterError("grid", f"missing {', '.join(missing)}")
    return GridSpec.from_text(entries["min"], entries["max"], entries["count"], entries.get("axis", axis), convention)


@calcfunction
def compute_spectrum(parameters, grid):
    """Transmission spectrum and group delay over a probe-detuning grid."""
    try:
        params, drive, convention = _system(parameters)
        table = transmission_spectrum(params, drive, _grid(grid, convention).values())
    except EsomitError as exception:
        LOGGER.warning("spectrum failed: %s", exception)
        return exception.as_exit_code()

    spectrum = ArrayData()
    spectrum.set_array("delta_p", table.delta_p)
    spectrum.set_array("t_real", table.t.real.copy())
    spectrum.set_array("t_imag", table.t.imag.copy())
    spectrum.set_array("transmission", table.T)
    spectrum.set_array("tau_g", table.tau_g)
    spectrum.base.attributes.set("delay_step", table.metadata["delay_step"])
    return {"spectrum": spectrum, "steady_state": Dict(table.metadata["steady_state"])}


@calcfunction
def compute_eigenvalues(parameters, scan):
    """Eigenvalues and phase classes along ``scan['axis']`` (default ``J``)."""
    try:
        params, _, convention = _system(parameters)
        axis = scan.get_dict().get("axis", "J")
        result = eigen_scan(params, axis, _grid(scan, convention, axis).values())
    except EsomitError as exception:
        LOGGER.warning("eigenvalue scan failed: %s", exception)
        return exception.as_exit_code()

    eigenvalues = ArrayData()
    for name in ("axis", "omega_plus", "omega_minus", "kappa_plus", "kappa_minus"):
        eigenvalues.set_array(name, result[name])
    eigenvalues.base.attributes.set("axis_name", axis)
    eigenvalues.base.attributes.set("kinds", [str(kind) for kind in result["kind"]])
    return {"eigenvalues": eigenvalues}


@calcfunction
def compute_crosscheck(parameters, grid):
    """Closed-form versus direct fluctuation amplitudes; a FAIL verdict is a result."""
    try:
        params, drive, convention = _system(parameters)
        report = crosscheck_appendix(params, drive, _grid(grid, convention).values())
    except EsomitError as exception:
        LOGGER.warning("cross-check failed: %s", exception)
        return exception.as_exit_code()
    return {"report": Dict(report)}


@calcfunction
def sweep_point_parameters(parameters, axis, value, tie):
    """Parameters of one sweep step.

    The swept value and the fields a tie constrains are written as SI numbers;
    the pump detuning and the fiber phases ``phi1``/``phi2`` keep their
    starting values.
    """
    raw = parameters.get_dict()
    name, tie_name = axis.value, tie.value
    try:
        if name not in SWEEP_AXES:
            raise ParameterError("axis", f"{name!r} is not a sweepable parameter; choose from {', '.join(SWEEP_AXES)}")
        if tie_name != "none" and tie_name not in TIES:
            raise ParameterError("tie", f"unknown tie {tie_name!r}; choose from {', '.join(TIES)}")
        params, drive, convention = _system(parameters)
        point = params.replace(**{name: float(value.value)})
        if tie_name != "none":
            point = TIES[tie_name](point, convention)
    except EsomitError as exception:
        LOGGER.warning("sweep step failed: %s", exception)
        return exception.as_exit_code()

    raw.update(
        {
            name: getattr(point, name),
            "phi1": point.phi1,
            "phi2": point.phi2,
            "gamma2": point.gamma2,
            "J": point.J,
            "delta_a": drive.delta_a(params),
        }
    )
    return Dict(raw)
