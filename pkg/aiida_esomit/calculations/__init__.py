from .functions import compute_crosscheck, compute_eigenvalues, compute_spectrum, sweep_point_parameters

__all__ = ["compute_crosscheck", "compute_eigenvalues", "compute_spectrum", "sweep_point_parameters"]
