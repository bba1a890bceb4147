"""Dimensionful inputs, reduction to dimensionless couplings, energy unit views.

The reduction maps a two-species system (condensate particle 1,
impurity 2) onto two numbers: the well depth gamma^2 = g12 m2/(g11 m1)
seen by the impurity and the back-reaction parameter
kappa^2 = 2 m1 g12 / hbar^2.  All radii are measured in healing
lengths xi = hbar / sqrt(2 n0 m1 g11); dimensionless energies are
eps = 2 m2 xi^2 E / hbar^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError

HBAR = 1.054571817e-34          # J s
K_BOLTZMANN = 1.380649e-23      # J/K
ATOMIC_MASS = 1.66053906660e-27  # kg

# Optimal slope of the piecewise trial profile; fixed, not fitted.
DEFAULT_ALPHA = math.sqrt(5.0 / 6.0)

# Literature isotope masses (kg) for the heavy-impurity mixture preset.
MASS_LI7 = 7.0160034366 * ATOMIC_MASS
MASS_YB174 = 173.9388664 * ATOMIC_MASS
MASS_YB173 = 172.9382151 * ATOMIC_MASS

# Couplings are deliberately absent: only their orders of magnitude are
# known for this mixture, so g11/g12 stay user inputs.
PRESETS = {
    "yb7li": {"m1": MASS_LI7, "m2": MASS_YB174},
    "yb173li": {"m1": MASS_LI7, "m2": MASS_YB173},
}


def _require_positive(name, value):
    if not isinstance(value, (int, float)) or not math.isfinite(value) or value <= 0.0:
        raise ValidationError(f"{name} must be a finite positive number, got {value!r}")


@dataclass(frozen=True)
class PhysicalSystem:
    """Dimensionful two-species inputs (SI units, repulsive couplings)."""

    m1: float   # condensate particle mass, kg
    m2: float   # impurity mass, kg
    g11: float  # intra-species coupling, J m^2
    g12: float  # inter-species coupling, J m^2
    n0: float   # surface density, m^-2

    def __post_init__(self):
        for name in ("m1", "m2", "g11", "g12", "n0"):
            _require_positive(name, getattr(self, name))


@dataclass(frozen=True)
class DerivedScales:
    xi: float       # healing length, m
    mu: float       # chemical potential, J
    gamma2: float   # dimensionless well depth
    kappa2: float   # back-reaction parameter (dimensionless)
    zeta: float     # impurity penetration length, m
    xi_hat: float   # geometric-mean length sqrt(xi * zeta), m
    omega: float    # deep-state angular frequency, 1/s


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless problem definition."""

    gamma2: float
    alpha: float = DEFAULT_ALPHA
    r_trap: float = 1000.0  # trap radius in healing lengths

    def __post_init__(self):
        _require_positive("gamma2", self.gamma2)
        _require_positive("alpha", self.alpha)
        if not math.isfinite(self.r_trap) or self.r_trap <= 1.0:
            raise ValidationError(f"r_trap must be > 1, got {self.r_trap!r}")

    @property
    def gamma(self):
        return math.sqrt(self.gamma2)

    @property
    def gamma_alpha(self):
        return self.gamma / self.alpha

    @property
    def r_alpha(self):
        return math.sqrt(2.0) / self.alpha


def derive_scales(system: PhysicalSystem, alpha: float = DEFAULT_ALPHA) -> DerivedScales:
    """All derived scales of a physical system.

    omega is the harmonic frequency of the deep states,
    omega = (alpha/2) hbar / (m2 xi_hat^2); it inherits the default
    variational slope unless another alpha is supplied.
    """
    _require_positive("alpha", alpha)
    xi = HBAR / math.sqrt(2.0 * system.n0 * system.m1 * system.g11)
    mu = HBAR ** 2 / (2.0 * system.m1 * xi ** 2)
    gamma2 = system.g12 * system.m2 / (system.g11 * system.m1)
    kappa2 = 2.0 * system.m1 * system.g12 / HBAR ** 2
    zeta = HBAR / math.sqrt(2.0 * system.n0 * system.m2 * system.g12)
    xi_hat = math.sqrt(xi * zeta)
    omega = 0.5 * alpha * HBAR / (system.m2 * xi_hat ** 2)
    return DerivedScales(xi=xi, mu=mu, gamma2=gamma2, kappa2=kappa2,
                         zeta=zeta, xi_hat=xi_hat, omega=omega)


def decoupling_ratio(system: PhysicalSystem) -> float:
    """kappa^2/gamma^2 = (m1/m2) / (n0 xi^2); small values certify decoupling."""
    scales = derive_scales(system)
    return (system.m1 / system.m2) / (system.n0 * scales.xi ** 2)


def thermal_scale_kelvin(system: PhysicalSystem) -> float:
    """n0 g12 / k_B: the shallow-spectrum energy scale as a temperature."""
    return system.n0 * system.g12 / K_BOLTZMANN


def energy_views(eps: float, params: ModelParams) -> tuple[float, float]:
    """(E/(n0 g12), E/(hbar omega)) for a dimensionless energy eps.

    Pure algebra of the stored parameters: E/(n0 g12) = eps/gamma^2 and
    E/(hbar omega) = eps/(alpha gamma).
    """
    if not math.isfinite(eps):
        raise ValidationError(f"eps must be finite, got {eps!r}")
    return eps / params.gamma2, eps / (params.alpha * params.gamma)


def params_from_system(system: PhysicalSystem, alpha: float = DEFAULT_ALPHA,
                       r_trap: float = 1000.0) -> ModelParams:
    return ModelParams(gamma2=derive_scales(system, alpha).gamma2,
                       alpha=alpha, r_trap=r_trap)


_SYSTEM_KEYS = {"m1", "m2", "g11", "g12", "n0"}
_PARAM_KEYS = {"gamma2", "alpha", "r_trap"}


def from_config(data: dict) -> PhysicalSystem | ModelParams:
    """Build a PhysicalSystem or ModelParams from a parameter mapping.

    The key set decides which object is meant; unknown keys are rejected.
    """
    keys = set(data)
    if keys <= _PARAM_KEYS and "gamma2" in keys:
        return ModelParams(**data)
    if keys == _SYSTEM_KEYS:
        return PhysicalSystem(**data)
    if keys <= _SYSTEM_KEYS:
        raise ValidationError(f"missing physical-system keys: {sorted(_SYSTEM_KEYS - keys)}")
    raise ValidationError(
        f"unknown parameter keys: {sorted(keys - (_SYSTEM_KEYS | _PARAM_KEYS))}")


def scales_as_dict(scales: DerivedScales) -> dict:
    """Fixed-name JSON payload for the derived scales."""
    return {"xi": scales.xi, "mu": scales.mu, "gamma2": scales.gamma2,
            "kappa2": scales.kappa2, "zeta": scales.zeta,
            "xi_hat": scales.xi_hat, "omega": scales.omega}
