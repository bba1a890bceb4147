"""Bound states of a heavy impurity trapped by a quantum vortex in a 2D condensate.

Three mutually cross-validating routes to the spectrum: exact matching
on the variational vortex profile, closed-form shallow/deep
approximations, and a direct radial eigensolver; plus the finite-size
physicality analysis and the regime diagram.
"""

from .errors import AccuracyError, SolverError, ValidationError
from .model import (DEFAULT_ALPHA, DerivedScales, ModelParams, PhysicalSystem,
                    decoupling_ratio, derive_scales, energy_views)
from .spectrum import (BoundState, Channel, NoBoundStates, assemble_spectrum,
                       deep_spectrum, find_states_exact, make_channel,
                       shallow_spectrum, theta_ell)
from .vortex import (RadialProfile, effective_potential, profile_compare,
                     solve_vortex_ode, variational_profile)
from .fullnumeric import EigenProblem, convergence_report, radial_eigensolve
from .finitesize import (OnsetFit, RegimeCell, a_ell, fit_onset, is_physical,
                         onset_gamma2_analytic, regime_count, regime_grid,
                         solve_onset)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "SolverError", "ValidationError",
    "DEFAULT_ALPHA", "DerivedScales", "ModelParams", "PhysicalSystem",
    "decoupling_ratio", "derive_scales", "energy_views",
    "BoundState", "Channel", "NoBoundStates", "assemble_spectrum",
    "deep_spectrum", "find_states_exact", "make_channel", "shallow_spectrum",
    "theta_ell",
    "RadialProfile", "effective_potential", "profile_compare",
    "solve_vortex_ode", "variational_profile",
    "EigenProblem", "convergence_report", "radial_eigensolve",
    "OnsetFit", "RegimeCell", "a_ell", "fit_onset", "is_physical",
    "onset_gamma2_analytic", "regime_count", "regime_grid", "solve_onset",
]
