"""Physics core: parameter model, eigenvalues, steady state and probe response."""

from .appendix import appendix_coefficients, appendix_response, crosscheck_appendix
from .eigenspace import (
    PhaseKind,
    alpha_beta,
    classify_point,
    distance_to_es,
    eigen_scan,
    eigen_split,
    es_coupling,
)
from .feasibility import (
    FiberCouplingSpec,
    NanoparticleSpec,
    check_ranges,
    coupling_from_nanoparticle,
    eta_for_rate,
    fiber_coupling_rate,
    polarizability_for_coupling,
)
from .model import Drive, SystemParams, build_drive, build_system, derived_rates, drive_amplitudes
from .response import (
    SpectrumTable,
    fluctuation_system,
    group_delay,
    single_mode_transmission,
    solve_response,
    transmission,
    transmission_spectrum,
    two_mode_transmission,
)
from .steady_state import SteadyState, intracavity_steady, solve_steady

__all__ = [
    "Drive",
    "FiberCouplingSpec",
    "NanoparticleSpec",
    "PhaseKind",
    "SpectrumTable",
    "SteadyState",
    "SystemParams",
    "alpha_beta",
    "appendix_coefficients",
    "appendix_response",
    "build_drive",
    "build_system",
    "check_ranges",
    "classify_point",
    "coupling_from_nanoparticle",
    "crosscheck_appendix",
    "derived_rates",
    "distance_to_es",
    "drive_amplitudes",
    "eigen_scan",
    "eigen_split",
    "es_coupling",
    "eta_for_rate",
    "fiber_coupling_rate",
    "fluctuation_system",
    "group_delay",
    "intracavity_steady",
    "polarizability_for_coupling",
    "single_mode_transmission",
    "solve_response",
    "solve_steady",
    "transmission",
    "transmission_spectrum",
    "two_mode_transmission",
]
