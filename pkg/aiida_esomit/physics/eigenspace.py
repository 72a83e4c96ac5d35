"""Eigenvalue branches of the optical subsystem and exceptional-surface tests.

The eigenvalues are ``E± = ω± − iκ±`` with ``ω± = ±sqrt(α + β)`` and
``κ± = ±sqrt(α − β)``. They are evaluated through the identities

    α = J·h/2,  β = J·p/2,  p = J + s·sin φ3,  q = s·cos φ3,  h = hypot(p, q)

with ``s = t0·sqrt(γ1γ2)``, so that ``α ± β = J(h ± p)/2`` can be formed
without cancellation.
"""

import dataclasses
import enum
import math

import numpy as np
from aiida.common.log import AIIDA_LOGGER

from .model import ES_PHASE, quarter_turn_trig

LOGGER = AIIDA_LOGGER.getChild("esomit.eigenspace")

DEFAULT_TOLERANCE = 1.0e-6


class PhaseKind(str, enum.Enum):
    ES_KIND1 = "ES-Kind1"
    ES_KIND2 = "ES-Kind2"
    KAPPA_SPLIT = "Kappa-Split"
    OMEGA_SPLIT = "Omega-Split"
    GENERIC_NP = "Generic-NP"

    def __str__(self):
        return self.value


@dataclasses.dataclass(frozen=True)
class EigenSplit:
    alpha: float
    beta: float
    omega_plus: float
    omega_minus: float
    kappa_plus: float
    kappa_minus: float

    @property
    def eigenvalues(self):
        """The two complex branches ``(E+, E-)``."""
        return (
            complex(self.omega_plus, -self.kappa_plus),
            complex(self.omega_minus, -self.kappa_minus),
        )

    @property
    def splitting(self):
        return abs(self.omega_plus - self.omega_minus), abs(self.kappa_plus - self.kappa_minus)


@dataclasses.dataclass(frozen=True)
class PhaseClass:
    kind: PhaseKind
    splitting: tuple


def _p_q(J, t0, gamma1, gamma2, phi3):
    s = t0 * math.sqrt(gamma1 * gamma2)
    cos_phi, sin_phi = quarter_turn_trig(phi3)
    return J + s * sin_phi, s * cos_phi


def alpha_beta(J, t0, gamma1, gamma2, phi3):
    """Return ``(α, β)`` for the given coupling and loop parameters."""
    p, q = _p_q(J, t0, gamma1, gamma2, phi3)
    return 0.5 * J * math.hypot(p, q), 0.5 * J * p


def eigen_split(J, t0, gamma1, gamma2, phi3):
    """Return the `EigenSplit` of the optical subsystem."""
    p, q = _p_q(J, t0, gamma1, gamma2, phi3)
    h = math.hypot(p, q)
    alpha, beta = 0.5 * J * h, 0.5 * J * p
    # one of h ± p is formed without cancellation; the other follows from
    # (h + p)(h - p) = q²
    if p >= 0:
        plus = 0.5 * J * (h + p)
        minus = 0.5 * J * q * q / (h + p) if h + p > 0 else 0.0
    else:
        minus = 0.5 * J * (h - p)
        plus = 0.5 * J * q * q / (h - p)
    omega = math.sqrt(plus)
    kappa = math.sqrt(minus)
    return EigenSplit(
        alpha=alpha,
        beta=beta,
        omega_plus=omega,
        omega_minus=-omega,
        kappa_plus=kappa,
        kappa_minus=-kappa,
    )


def es_coupling(t0, gamma1, gamma2):
    """Coupling ``J* = t0 sqrt(γ1γ2)`` placing the system on the second-kind ES."""
    return t0 * math.sqrt(gamma1 * gamma2)


def classify_point(params, tol=DEFAULT_TOLERANCE):
    """Classify a parameter point as an EP of either surface or a split phase."""
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol!r}")
    J_star = es_coupling(params.t0, params.gamma1, params.gamma2)
    split = eigen_split(params.J, params.t0, params.gamma1, params.gamma2, params.phi3)
    omega_split, kappa_split = split.splitting
    scale = max(params.J, J_star)
    threshold = tol * scale

    if params.J <= threshold:
        kind = PhaseKind.ES_KIND1
    elif abs(params.J - J_star) <= threshold and abs(params.phi3 - ES_PHASE) <= tol:
        kind = PhaseKind.ES_KIND2
    elif omega_split < threshold < kappa_split:
        kind = PhaseKind.KAPPA_SPLIT
    elif kappa_split < threshold < omega_split:
        kind = PhaseKind.OMEGA_SPLIT
    else:
        kind = PhaseKind.GENERIC_NP
    return PhaseClass(kind=kind, splitting=(omega_split, kappa_split))


@dataclasses.dataclass(frozen=True)
class EsDistance:
    second_kind: float
    first_kind: float

    def __iter__(self):
        return iter((self.second_kind, self.first_kind))


def distance_to_es(params):
    """Distances ``|J − J*|`` to the second-kind and ``J`` to the first-kind ES."""
    J_star = es_coupling(params.t0, params.gamma1, params.gamma2)
    return EsDistance(second_kind=abs(params.J - J_star), first_kind=params.J)


def eigen_scan(params, axis, values, tol=DEFAULT_TOLERANCE):
    """Evaluate eigenvalues and classes along one parameter axis.

    :return: dict of numpy arrays ``axis, omega_plus, omega_minus, kappa_plus,
        kappa_minus`` and a list ``kind``.
    """
    values = np.asarray(values, dtype=float)
    columns = {name: np.empty(values.size) for name in ("omega_plus", "omega_minus", "kappa_plus", "kappa_minus")}
    kinds = []
    for index, value in enumerate(values):
        point = params.replace(**{axis: float(value)})
        split = eigen_split(point.J, point.t0, point.gamma1, point.gamma2, point.phi3)
        for name, column in columns.items():
            column[index] = getattr(split, name)
        kinds.append(classify_point(point, tol).kind)
    LOGGER.debug("eigen scan over %s: %d points", axis, values.size)
    return {"axis": values, **columns, "kind": kinds}
