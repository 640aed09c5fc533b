"""Born-approximation Coulomb scattering computed along several independent routes."""

from .born import (
    Amplitude,
    CrossSection,
    Method,
    born_radial,
    coulomb_closed,
    coulomb_cylindrical,
    coulomb_oppenheimer_hard_mode,
    coulomb_screened_limit,
    cross_section,
    reduced_mass,
)
from .errors import ConvergenceError, DomainError, IdentityError, LadderError
from .kinematics import Kinematics, angle_from_q, momentum_transfer
from .potentials import Coulomb, Custom, DecayClass, Sign, Yukawa, evaluate, integrability_check
from .specfun import bessel_k0

__version__ = "0.1.0"

__all__ = [
    "Amplitude", "ConvergenceError", "Coulomb", "CrossSection", "Custom", "DecayClass", "DomainError",
    "IdentityError", "Kinematics", "LadderError", "Method", "Sign", "Yukawa", "angle_from_q",
    "bessel_k0", "born_radial", "coulomb_closed", "coulomb_cylindrical", "coulomb_oppenheimer_hard_mode",
    "coulomb_screened_limit", "cross_section", "evaluate", "integrability_check", "momentum_transfer",
    "reduced_mass",
]
