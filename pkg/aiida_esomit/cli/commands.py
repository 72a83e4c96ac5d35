"""Subcommands of ``esomit``."""

import math

import click
import numpy as np

from ..exceptions import ParameterError
from ..parsers.config import RunConfig, parse_grid, parse_override
from ..physics.appendix import crosscheck_appendix
from ..physics.eigenspace import eigen_scan, es_coupling
from ..physics.feasibility import (
    FiberCouplingSpec,
    NanoparticleSpec,
    check_ranges,
    coupling_from_nanoparticle,
    fiber_coupling_rate,
)
from ..physics.response import group_delay, transmission_spectrum
from ..physics.steady_state import solve_steady
from ..presets.catalog import catalog_listing
from ..presets.metrics import figure_checks
from ..presets.sweeps import SWEEP_AXES, TIES, sweep_1d, sweep_phase
from ..units import ANGULAR, parse_quantity, unit_scale
from . import options
from .export import (
    EIGEN_COLUMNS,
    eigen_rows,
    render_csv,
    render_json,
    render_table,
    spectrum_rows,
    write_output,
    write_spectrum,
)
from .root import cmd_root, handle_errors

EIGEN_AXES = ("J", "phi3", "t0", "gamma1", "gamma2")
DEFAULT_EIGEN_POINTS = 201
STEP_KEYS = ("step", "axis", "value", "tie", "kind", "on_es", "params", "steady_state")
CATALOG_COLUMNS = (
    "name",
    "provenance",
    "J",
    "gamma1",
    "gamma2",
    "t0",
    "phi3",
    "grid_points",
    "sweep_axis",
    "sweep_points",
    "sweep_tie",
)


def _run_config(subcommand, **kwargs):
    overrides = tuple(parse_override(text) for text in kwargs.pop("overrides", ()))
    return RunConfig(subcommand=subcommand, overrides=overrides, **kwargs)


def _default_eigen_grid(params, axis):
    if axis == "phi3":
        return np.linspace(0.0, 2.0 * math.pi, DEFAULT_EIGEN_POINTS)
    if axis == "t0":
        return np.linspace(0.0, 1.0, DEFAULT_EIGEN_POINTS)
    if axis == "J":
        upper = 2.0 * es_coupling(params.t0, params.gamma1, params.gamma2) or 2.0 * params.gamma_half
        return np.linspace(0.0, upper, DEFAULT_EIGEN_POINTS)
    value = getattr(params, axis)
    return np.linspace(0.5 * value, 1.5 * value, DEFAULT_EIGEN_POINTS)


@cmd_root.command("eigen")
@options.run_options
@click.option("--axis", type=click.Choice(EIGEN_AXES), default="J", show_default=True, help="Parameter to scan.")
@handle_errors
def cmd_eigen(axis, **kwargs):
    """Eigenvalue splittings and phase class along one parameter axis.

    Without --grid, J runs from 0 to twice the second-kind coupling and phi3
    over one full turn.
    """
    grid_text = kwargs.pop("grid")
    config = _run_config("eigen", **kwargs)
    entry = config.build()
    if grid_text is None:
        values = _default_eigen_grid(entry.params, axis)
    else:
        values = parse_grid(grid_text, entry.convention, axis).values()
    scan = eigen_scan(entry.params, axis, values)
    metadata = {**config.metadata(entry), "axis": axis}
    text = render_table((axis,) + EIGEN_COLUMNS, eigen_rows(scan), config.fmt, metadata, config.timestamp)
    write_output(text, config.out)


@cmd_root.command("spectrum")
@options.run_options
@handle_errors
def cmd_spectrum(**kwargs):
    """Probe transmission and group delay over the probe-detuning grid."""
    config = _run_config("spectrum", **kwargs)
    entry = config.build()
    table = transmission_spectrum(entry.params, entry.drive, entry.grid.values(), metadata=config.metadata(entry))
    write_spectrum(table, config.out, config.fmt, config.timestamp)


@cmd_root.command("delay")
@options.run_options
@click.option("--at", "at_text", metavar="DETUNING", help="Single probe detuning, e.g. '1 MHz'.")
@handle_errors
def cmd_delay(at_text, **kwargs):
    """Group delay with step-halving convergence at every grid point."""
    config = _run_config("delay", **kwargs)
    entry = config.build()
    if at_text is not None:
        values = [parse_quantity(at_text, entry.convention, "--at")]
    else:
        values = entry.grid.values()
    steady = solve_steady(entry.params, entry.drive)
    rows = [[float(delta_p), group_delay(entry.params, entry.drive, delta_p, steady=steady)] for delta_p in values]
    text = render_table(("delta_p", "tau_g"), rows, config.fmt, config.metadata(entry), config.timestamp)
    write_output(text, config.out)


def _sweep_output(config, entry, tables, axis, extra=()):
    columns = ("step", axis) + tuple(name for name, _ in extra) + ("delta_p", "re_t", "im_t", "T", "tau_g")
    rows = []
    for table in tables:
        prefix = [table.metadata["step"], table.metadata["value"]]
        prefix += [getter(table) for _, getter in extra]
        rows.extend(prefix + row for row in spectrum_rows(table))
    if config.fmt == "csv":
        return render_csv(columns, rows)
    steps = [{key: table.metadata[key] for key in STEP_KEYS if key in table.metadata} for table in tables]
    return render_json(
        {"columns": list(columns), "rows": rows, "steps": steps}, config.metadata(entry), config.timestamp
    )


@cmd_root.command("sweep")
@options.run_options
@options.THREADS
@click.option("--axis", type=click.Choice(SWEEP_AXES), help="Parameter to sweep [default: the preset's sweep].")
@click.option("--values", "values_text", metavar="MIN:MAX:COUNT", help="Sweep values [default: the preset's sweep].")
@click.option("--tie", type=click.Choice(sorted(TIES)), help="Constraint applied at every step.")
@handle_errors
def cmd_sweep(axis, values_text, tie, threads, **kwargs):
    """Spectra along one parameter axis, computed concurrently."""
    config = _run_config("sweep", threads=threads, **kwargs)
    entry = config.build()
    if axis is None:
        if entry.sweep is None:
            raise ParameterError("--axis", f"{entry.name} defines no sweep; give --axis and --values")
        axis, tie = entry.sweep.axis, tie or entry.sweep.tie
    if values_text is not None:
        values = parse_grid(values_text, entry.convention, axis).values()
    elif entry.sweep is not None and entry.sweep.axis == axis:
        values = entry.sweep.values
    else:
        raise ParameterError("--values", f"no sweep values for axis {axis!r}")
    tables = sweep_1d(entry, axis, values, tie=tie, delta_p=entry.grid.values(), max_workers=config.threads)
    write_output(_sweep_output(config, entry, tables, axis), config.out)


@cmd_root.command("phase-sweep")
@options.run_options
@options.THREADS
@click.option("--phi3", "phases", multiple=True, metavar="PHASE", help="Loop phase, e.g. '1.4pi'; may be repeated.")
@handle_errors
def cmd_phase_sweep(phases, threads, **kwargs):
    """Spectra and delays while the loop phase phi3 is varied."""
    config = _run_config("phase-sweep", threads=threads, **kwargs)
    entry = config.build()
    values = [parse_quantity(text, entry.convention, "phi3") for text in phases] or None
    tables = sweep_phase(entry, values, delta_p=entry.grid.values(), max_workers=config.threads)
    extra = (("on_es", lambda table: int(table.metadata["on_es"])),)
    write_output(_sweep_output(config, entry, tables, "phi3", extra), config.out)


@cmd_root.command("crosscheck")
@options.report_options
@options.GRID
@handle_errors
def cmd_crosscheck(**kwargs):
    """Compare the closed-form fluctuation amplitudes with the direct solve.

    A FAIL verdict is reported in the file; the exit status is still 0.
    """
    config = _run_config("crosscheck", **kwargs)
    entry = config.build()
    report = crosscheck_appendix(entry.params, entry.drive, entry.grid.values())
    write_output(render_json({"report": report}, config.metadata(entry), config.timestamp), config.out)


@cmd_root.command("presets")
@options.FORMAT
@options.OUT
@options.CONVENTION
@handle_errors
def cmd_presets(fmt, out, convention):
    """List the preset catalog."""
    listing = catalog_listing(convention or ANGULAR)
    if fmt == "csv":
        rows = [[str(item.get(column, "")) for column in CATALOG_COLUMNS] for item in listing]
        text = render_csv(CATALOG_COLUMNS, rows)
    else:
        text = render_json({"presets": listing}, {"convention": convention or ANGULAR})
    write_output(text, out)


@cmd_root.command("feasibility")
@options.report_options
@click.option("--alpha", "alpha_text", metavar="VOLUME", help="Nanoparticle polarizability, e.g. '1e-21 m3'.")
@click.option("--f-at-r", type=float, help="Normalized field distribution at the nanoparticle.")
@click.option("--mode-volume", "volume_text", metavar="VOLUME", help="Mode volume, e.g. '300 um3'.")
@click.option("--eta", type=float, help="Fiber overlap factor for the coupling rate.")
@click.option("--index", "n", type=float, default=1.44, show_default=True, help="Resonator refractive index.")
@handle_errors
def cmd_feasibility(alpha_text, f_at_r, volume_text, eta, n, **kwargs):
    """Check the coupling rates against reported experimental ranges.

    With --alpha, --f-at-r and --mode-volume the backscattering coupling of a
    nanoparticle is added; with --eta the fiber coupling rate.
    """
    config = _run_config("feasibility", **kwargs)
    entry = config.build()
    params, convention = entry.params, entry.convention
    mhz = unit_scale("MHz", convention)
    report = {"ranges": check_ranges(params, convention)}

    nanoparticle = (alpha_text, f_at_r, volume_text)
    if any(value is not None for value in nanoparticle):
        if any(value is None for value in nanoparticle):
            raise ParameterError("--alpha/--f-at-r/--mode-volume", "give all three nanoparticle quantities")
        spec = NanoparticleSpec(
            alpha_pol=parse_quantity(alpha_text, convention, "alpha_pol"),
            f_at_r=f_at_r,
            V_m=parse_quantity(volume_text, convention, "V_m"),
        )
        coupling = coupling_from_nanoparticle(spec, params.omega0)
        report["nanoparticle"] = {"J_MHz": coupling.J / mhz, "sign": coupling.sign}
    if eta is not None:
        fiber = FiberCouplingSpec(eta=eta, n=n, R=params.R)
        report["fiber"] = {
            "gamma_MHz": fiber_coupling_rate(fiber) / mhz,
            "round_trip_time_s": fiber.round_trip_time,
        }
    write_output(render_json(report, config.metadata(entry), config.timestamp), config.out)


@cmd_root.command("reproduce")
@click.option("--points", type=click.IntRange(min=5), help="Probe grid points per spectrum [default: 2001].")
@options.OUT
@options.CONVENTION
@options.THREADS
@options.TIMESTAMP
@handle_errors
def cmd_reproduce(points, out, convention, threads, timestamp):
    """Evaluate the qualitative spectrum and delay claims on the presets."""
    report = figure_checks(points, convention or ANGULAR, max_workers=threads)
    write_output(render_json(report, {"subcommand": "reproduce"}, timestamp), out)
