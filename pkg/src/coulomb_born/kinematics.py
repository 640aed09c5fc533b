"""Elastic two-body kinematics in the centre-of-mass frame.

Everything is in natural units (hbar = c = 1): momenta carry inverse
length, angles are radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class Kinematics:
    """Centre-of-mass momentum magnitude ``p`` and scattering angle ``theta``."""

    p: float
    theta: float

    def __post_init__(self) -> None:
        if not (self.p > 0.0 and math.isfinite(self.p)):
            raise DomainError(f"momentum p must be positive and finite, got {self.p!r}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"scattering angle must lie in [0, pi], got {self.theta!r}")

    @property
    def q(self) -> float:
        return momentum_transfer(self)


def momentum_transfer(k: Kinematics | float, theta: float | None = None) -> float:
    """Magnitude of the momentum transfer, ``q = 2 p sin(theta/2)``.

    Accepts either a :class:`Kinematics` instance or ``(p, theta)``.
    """
    if not isinstance(k, Kinematics):
        if theta is None:
            raise TypeError("momentum_transfer(p, theta) needs both arguments")
        k = Kinematics(float(k), float(theta))
    return 2.0 * k.p * math.sin(0.5 * k.theta)


def angle_from_q(p: float, q: float) -> float:
    """Scattering angle that produces momentum transfer ``q`` at momentum ``p``."""
    if not p > 0.0:
        raise DomainError(f"momentum p must be positive, got {p!r}")
    if not (0.0 <= q <= 2.0 * p):
        raise DomainError(f"momentum transfer must lie in [0, 2p] = [0, {2 * p!r}], got {q!r}")
    return 2.0 * math.asin(min(1.0, q / (2.0 * p)))


def q_squared_from_cosine(p: float, theta: float) -> float:
    """``q**2`` written through the cosine of the angle, ``2 p**2 (1 - cos theta)``."""
    Kinematics(p, theta)
    return 2.0 * p * p * (1.0 - math.cos(theta))
