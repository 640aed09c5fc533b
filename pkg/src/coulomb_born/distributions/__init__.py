"""Tempered distributions paired against Hermite-Gaussian test functions."""

from .goodfunctions import GoodFunction, HermiteAtom, rapid_decrease_check
from .identities import (
    DELTA_HAT,
    IDENTITIES,
    LAPLACIAN_OF_INVERSE_R,
    IdentityRecord,
    inverse_r_transform,
    route3_reconstruction,
    run_identity_suite,
)
from .pairing import (
    ABS,
    COS,
    HEAVISIDE,
    INV_R,
    INVERSE_FOURIER_CONSTANT,
    ONE,
    ONE_3D,
    SIN,
    X,
    EqualityReport,
    Meaning,
    PairingReport,
    Singularity,
    SlowGrowthFunction,
    check_slow_growth,
    laplacian_parts,
    pair,
    pair_derivative,
    pair_fourier,
    pair_laplacian_radial,
    verify_fourier_laplacian,
)

__all__ = [
    "ABS", "COS", "DELTA_HAT", "HEAVISIDE", "IDENTITIES", "INVERSE_FOURIER_CONSTANT", "INV_R",
    "LAPLACIAN_OF_INVERSE_R", "ONE", "ONE_3D", "SIN", "X", "EqualityReport", "GoodFunction",
    "HermiteAtom", "IdentityRecord", "Meaning", "PairingReport", "Singularity", "SlowGrowthFunction",
    "check_slow_growth", "inverse_r_transform", "laplacian_parts", "pair", "pair_derivative",
    "pair_fourier", "pair_laplacian_radial", "rapid_decrease_check", "route3_reconstruction",
    "run_identity_suite", "verify_fourier_laplacian",
]
