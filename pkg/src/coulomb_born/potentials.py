"""Spherically symmetric potential energies ``V(r)``.

Couplings are single numbers ``e2`` (fold integer charges ``N1 N2`` into it);
the sign convention is ``+`` for repulsion and ``-`` for attraction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .quadrature import doubling_ladder, ladder_keeps_growing


class Sign(enum.Enum):
    REPULSIVE = 1
    ATTRACTIVE = -1

    @property
    def multiplier(self) -> int:
        return self.value

    @classmethod
    def parse(cls, s: "Sign | str | int") -> "Sign":
        if isinstance(s, Sign):
            return s
        if isinstance(s, str):
            key = s.strip().lower()
            if key in ("repulsive", "+", "plus", "rep"):
                return cls.REPULSIVE
            if key in ("attractive", "-", "minus", "att"):
                return cls.ATTRACTIVE
        if s in (1, -1):
            return cls(s)
        raise DomainError(f"sign must be 'repulsive' or 'attractive', got {s!r}")


class DecayClass(str, enum.Enum):
    INTEGRABLE = "integrable"
    COULOMB_LIKE = "coulomb_like"


class Verdict(str, enum.Enum):
    INTEGRABLE = "integrable"
    FAILS = "fails"


def _check_radius(r):
    arr = np.asarray(r, dtype=float)
    if np.any(~(arr > 0)):
        raise DomainError("potentials are evaluated at r > 0 only")
    return arr


@dataclass(frozen=True)
class Coulomb:
    e2: float
    sign: Sign = Sign.REPULSIVE

    def __post_init__(self) -> None:
        if not self.e2 > 0:
            raise DomainError(f"coupling e2 must be positive, got {self.e2!r}")
        object.__setattr__(self, "sign", Sign.parse(self.sign))

    @property
    def decay_class(self) -> DecayClass:
        return DecayClass.COULOMB_LIKE

    def __call__(self, r):
        return (self.sign.multiplier * self.e2) / r


@dataclass(frozen=True)
class Yukawa:
    """Screened Coulomb potential ``sign * e2 * exp(-lam r) / r``; ``lam = 1/r_c``."""

    e2: float
    lam: float
    sign: Sign = Sign.REPULSIVE

    def __post_init__(self) -> None:
        if not self.e2 > 0:
            raise DomainError(f"coupling e2 must be positive, got {self.e2!r}")
        if not (self.lam >= 0 and math.isfinite(self.lam)):
            raise DomainError(f"screening mass must be finite and >= 0, got {self.lam!r}")
        object.__setattr__(self, "sign", Sign.parse(self.sign))

    @property
    def decay_class(self) -> DecayClass:
        return DecayClass.INTEGRABLE if self.lam > 0 else DecayClass.COULOMB_LIKE

    def __call__(self, r):
        return (self.sign.multiplier * self.e2) * np.exp(-self.lam * r) / r


@dataclass(frozen=True)
class Custom:
    """User-supplied ``V(r)``; ``decay_class`` is the caller's claim, checked in strict mode.

    ``range_hint`` is a radius beyond which the potential carries no
    structure; oscillatory quadrature does not stop before it.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_class: DecayClass = DecayClass.INTEGRABLE
    name: str = "custom"
    range_hint: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "decay_class", DecayClass(self.decay_class))

    def __call__(self, r):
        return self.evaluator(r)


RadialPotential = Union[Coulomb, Yukawa, Custom]


def evaluate(pot: RadialPotential, r):
    """``V(r)`` for scalar or array ``r > 0``."""
    arr = _check_radius(r)
    out = pot(arr)
    if np.ndim(r) == 0:
        return float(out)
    return np.asarray(out, dtype=float)


def integrability_check(pot: RadialPotential, r_max: float = 1.0e4, steps: int = 12) -> Verdict:
    """Probe whether ``int_0^inf r**2 |V(r)| dr`` is finite.

    Partial integrals are taken on the radii ``r_max / 2**k``; the potential
    fails when each of the last three doublings still grows the integral by
    more than half.
    """
    ladder = doubling_ladder(lambda r: r * r * np.abs(pot(r)), r_max, steps)
    return Verdict.FAILS if ladder_keeps_growing(ladder) else Verdict.INTEGRABLE
