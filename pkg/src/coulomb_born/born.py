"""Born-approximation scattering amplitudes.

The amplitude of a potential ``V`` at momentum transfer ``q`` is

    f(q) = -(m / 2 pi) int V(r) exp(-i q.r) d^3r,

which for a spherically symmetric ``V`` reduces to the radial sine transform
``-(2m/q) int_0^inf r V(r) sin(qr) dr``. The Coulomb potential is not
absolutely integrable, so its amplitude is only reachable through a limiting
procedure. Three independent ones are implemented:

* :func:`coulomb_screened_limit` -- Yukawa amplitudes by quadrature on a
  ladder of screening masses, extrapolated to zero screening;
* :func:`coulomb_cylindrical` -- the iterated integral in cylindrical
  coordinates with the ``z`` integral done first (it equals ``2 K0(q rho)``);
* :func:`coulomb_oppenheimer_hard_mode` -- the same iterated integral with
  the momentum transfer tilted off the ``z`` axis, so that the azimuthal
  integral produces a Bessel ``J0`` instead of a constant.

All of them should agree with :func:`coulomb_closed`, ``-/+ 2 m e2 / q**2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError
from .kinematics import Kinematics
from .potentials import (
    Custom,
    DecayClass,
    RadialPotential,
    Sign,
    Verdict,
    Yukawa,
    integrability_check,
)
from .quadrature import (
    QuadResult,
    extrapolate_to_zero,
    integrate_adaptive,
    integrate_oscillatory,
    validate_ladder,
)
from .specfun import bessel_k0, k0

DEFAULT_LADDER: tuple[float, ...] = tuple(0.4 * 0.5**k for k in range(5))

# q * (range of V) below this switches born_radial to its small-q series
_SERIES_SWITCH = 1e-4
_EPS = np.finfo(float).eps
# absolute accuracy asked of oscillatory inner z-integrals; their half-period
# terms are O(1), so this sits just above the round-off floor of the sums
_INNER_ABS_TOL = 1e-15
# strict outer integrals stop at (q rho) = _OUTER_REACH, where K0 ~ 1e-17
_OUTER_REACH = 36.0


class Method(str, enum.Enum):
    GENERIC_RADIAL = "generic_radial"
    SCREENED_LIMIT = "screened_limit"
    CYLINDRICAL = "cylindrical"
    CLOSED_FORM = "closed_form"
    OPPENHEIMER_HARD_MODE = "oppenheimer_hard_mode"


@dataclass(frozen=True)
class Amplitude:
    """A scattering amplitude (dimension of length) with its provenance."""

    value: float
    method: Method
    est_err: float = 0.0
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not math.isfinite(self.value):
            raise ConvergenceError(f"amplitude is not finite: {self.value!r}")
        if not self.est_err >= 0:
            raise ValueError(f"est_err must be >= 0, got {self.est_err!r}")
        object.__setattr__(self, "method", Method(self.method))


@dataclass(frozen=True)
class CrossSection:
    value: float
    theta: float

    def __post_init__(self) -> None:
        if not self.value >= 0:
            raise ValueError(f"cross section must be >= 0, got {self.value!r}")


def _positive(name: str, x: float) -> float:
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"{name} must be finite and > 0, got {x!r}")
    return x


def _coulomb_q(q: float) -> float:
    q = float(q)
    if q == 0.0:
        raise DomainError("Coulomb amplitude diverges at q = 0 (forward scattering)")
    return _positive("momentum transfer q", q)


def reduced_mass(m1: float, m2: float) -> float:
    """``m1 m2 / (m1 + m2)``; an infinite ``m2`` gives ``m1``."""
    if not m1 > 0 or not m2 > 0 or math.isnan(m1) or math.isnan(m2):
        raise DomainError(f"masses must be positive, got m1={m1!r}, m2={m2!r}")
    if math.isinf(m1) and math.isinf(m2):
        raise DomainError("at most one mass may be infinite")
    if math.isinf(m2):
        return float(m1)
    if math.isinf(m1):
        return float(m2)
    return m1 * m2 / (m1 + m2)


# --------------------------------------------------------------------------
# generic radial formula


def _effective_range(pot: RadialPotential) -> float:
    """Radius beyond which ``r**3 |V|`` is negligible against its peak."""
    r = 2.0 ** np.arange(-20, 61)
    with np.errstate(all="ignore"):
        w = np.abs(r**3 * np.asarray(pot(r), dtype=float))
    w = np.where(np.isfinite(w), w, 0.0)
    peak = w.max()
    if peak == 0:
        return 1.0
    significant = np.nonzero(w >= 1e-17 * peak)[0]
    return float(r[significant[-1]] * 2.0)


def _small_q_series(pot: RadialPotential, m: float, q: float, tol: float, reach: float) -> Amplitude:
    # sin(qr)/q = r - q^2 r^3/6 + q^4 r^5/120 - ...; three moments are plenty below q*reach = 1e-4
    moments = []
    err = 0.0
    for power, coeff in ((2, 1.0), (4, -q * q / 6.0), (6, q**4 / 120.0)):
        res = integrate_adaptive(
            lambda r, n=power: r**n * pot(r), 0.0, math.inf, tol, endpoint="left", scale=reach / 4
        )
        moments.append(res)
        err += abs(coeff) * res.est_err
    total = moments[0].value - q * q / 6.0 * moments[1].value + q**4 / 120.0 * moments[2].value
    trunc = (q * reach) ** 6 / 5040.0 * abs(moments[0].value)
    return Amplitude(
        -2.0 * m * total,
        Method.GENERIC_RADIAL,
        2.0 * m * (err + trunc),
        {"branch": "small_q_series", "range": reach, "moments": tuple(moments)},
    )


def born_radial(
    pot: RadialPotential,
    m: float,
    q: float,
    tol: float = 1e-12,
    *,
    abs_tol: float = 0.0,
    strict: bool = False,
) -> Amplitude:
    """Born amplitude ``-(2m/q) int_0^inf r V(r) sin(qr) dr`` of an integrable potential.

    Parameters
    ----------
    pot : Coulomb, Yukawa or Custom
        Must be of the ``integrable`` decay class.
    m : float
        Reduced mass.
    q : float
        Momentum transfer, ``>= 0``. Very small ``q`` (relative to the range
        of the potential) is handled by the Taylor expansion of ``sin(qr)/q``,
        which also gives the forward amplitude at ``q = 0``.
    tol : float
        Relative tolerance of the radial quadrature.
    strict : bool
        Also probe the integrability of custom potentials instead of trusting
        their declared decay class.

    Raises
    ------
    DomainError
        For Coulomb-like potentials, where ``int r**2 |V| dr`` diverges.
    """
    m = _positive("mass m", m)
    q = float(q)
    if not (q >= 0 and math.isfinite(q)):
        raise DomainError(f"momentum transfer must be finite and >= 0, got {q!r}")
    if pot.decay_class is not DecayClass.INTEGRABLE:
        raise DomainError(
            "potential is coulomb_like: the radial Born integral needs the integrability "
            "condition int_0^inf r^2 |V(r)| dr < inf; use a Coulomb route instead"
        )
    if strict and isinstance(pot, Custom) and integrability_check(pot) is Verdict.FAILS:
        raise DomainError(
            f"custom potential {pot.name!r} claims to be integrable but "
            "int_0^R r^2 |V(r)| dr keeps growing with R (integrability condition)"
        )

    reach = _effective_range(pot)
    if q * reach < _SERIES_SWITCH:
        return _small_q_series(pot, m, q, tol, reach)

    min_radius = pot.range_hint if isinstance(pot, Custom) else 0.0
    res = integrate_oscillatory(
        lambda r: r * pot(r), q, "sin", "half_line", tol, abs_tol=abs_tol, min_radius=min_radius
    )
    factor = 2.0 * m / q
    return Amplitude(-factor * res.value, Method.GENERIC_RADIAL, factor * res.est_err, {"quad": res})


# --------------------------------------------------------------------------
# Coulomb routes


def coulomb_closed(m: float, e2: float, sign: Sign | str, q: float) -> Amplitude:
    """``-sign * 2 m e2 / q**2``, exact."""
    m = _positive("mass m", m)
    e2 = _positive("coupling e2", e2)
    q = _coulomb_q(q)
    s = Sign.parse(sign).multiplier
    return Amplitude(-s * 2.0 * m * e2 / (q * q), Method.CLOSED_FORM, 0.0)


def yukawa_closed(m: float, e2: float, lam: float, sign: Sign | str, q: float) -> Amplitude:
    """``-sign * 2 m e2 / (q**2 + lam**2)``; an oracle, never used by the Coulomb routes."""
    m = _positive("mass m", m)
    e2 = _positive("coupling e2", e2)
    if not (lam >= 0 and math.isfinite(lam)):
        raise DomainError(f"screening mass must be finite and >= 0, got {lam!r}")
    if lam == 0:
        q = _coulomb_q(q)
    elif not (q >= 0 and math.isfinite(q)):
        raise DomainError(f"momentum transfer must be finite and >= 0, got {q!r}")
    s = Sign.parse(sign).multiplier
    return Amplitude(-s * 2.0 * m * e2 / (q * q + lam * lam), Method.CLOSED_FORM, 0.0)


def rutherford_amplitude(m: float, e2: float, sign: Sign | str, k: Kinematics) -> float:
    """``-/+ m e2 / (2 p**2 sin(theta/2)**2)``, the closed form written with the angle."""
    if k.theta == 0.0:
        raise DomainError("Coulomb amplitude diverges at theta = 0 (forward scattering)")
    s = Sign.parse(sign).multiplier
    half = math.sin(0.5 * k.theta)
    return -s * m * e2 / (2.0 * k.p * k.p * half * half)


def coulomb_screened_limit(
    m: float,
    e2: float,
    sign: Sign | str,
    q: float,
    ladder: Sequence[float] = DEFAULT_LADDER,
    tol: float = 1e-12,
    *,
    model: str = "auto",
) -> Amplitude:
    """Coulomb amplitude as the zero-screening limit of Yukawa amplitudes.

    Every rung is a genuine radial quadrature of the Yukawa potential; the
    results are extrapolated to ``lam = 0`` with
    :func:`~coulomb_born.quadrature.extrapolate_to_zero`.
    """
    m = _positive("mass m", m)
    e2 = _positive("coupling e2", e2)
    q = _coulomb_q(q)
    lams = validate_ladder(ladder)
    sign = Sign.parse(sign)

    samples = [born_radial(Yukawa(e2, lam, sign), m, q, tol) for lam in lams]
    report = extrapolate_to_zero([(lam, a.value) for lam, a in zip(lams, samples)], model=model)
    err = report.est_err + sum(a.est_err for a in samples)
    return Amplitude(
        report.extrapolated,
        Method.SCREENED_LIMIT,
        err,
        {"extrapolation": report, "samples": tuple(samples)},
    )


def inner_z_integral(rho: float, q: float, tol: float = 1e-12, abs_tol: float = _INNER_ABS_TOL) -> QuadResult:
    """``int_{-inf}^{inf} cos(q z) / sqrt(rho**2 + z**2) dz`` by oscillatory quadrature.

    The ``sin(q z)`` part vanishes identically because the integrand is even.
    ``abs_tol`` matters at large ``q rho``, where the integral (``2 K0(q rho)``)
    is far smaller than the individual half-period contributions.
    """
    rho = _positive("rho", rho)
    return integrate_oscillatory(lambda z: 1.0 / np.hypot(rho, z), q, "cos", "full_line", tol, abs_tol=abs_tol)


def _tail_bound(b: float, radius: float) -> float:
    """``int_R^inf rho 2 K0(b rho) d rho``; bounds what a truncated outer integral leaves out."""
    res = integrate_adaptive(lambda r: 2.0 * r * k0(b * r), radius, math.inf, 1e-6, scale=1.0 / b)
    return 2.0 * (res.value + res.est_err)


def _inner_z_sine(rho: float, q: float, tol: float) -> QuadResult:
    return integrate_oscillatory(
        lambda z: 1.0 / np.hypot(rho, z), q, "sin", "full_line", tol, abs_tol=tol / rho
    )


def cylindrical_outer_integral(q: float, tol: float = 1e-13) -> QuadResult:
    """``int_0^inf rho K0(q rho) d rho`` (equal to ``1/q**2``) by adaptive quadrature.

    The logarithmic singularity of ``K0`` at the origin is smoothed by the
    ``rho = u**2`` endpoint substitution.
    """
    q = _coulomb_q(q)
    return integrate_adaptive(
        lambda rho: rho * k0(q * rho), 0.0, math.inf, tol, endpoint="left", scale=1.0 / q
    )


def coulomb_cylindrical(
    m: float,
    e2: float,
    sign: Sign | str,
    q: float,
    tol: float = 1e-12,
    *,
    strict: bool = False,
    check_points: int = 10,
) -> Amplitude:
    """Coulomb amplitude from the iterated cylindrical integral, ``z`` first.

    In the default mode the inner ``z`` integral is taken as ``2 K0(q rho)``.
    With ``strict=True`` every inner integral is computed by oscillatory
    quadrature instead, and at ``check_points`` radii the quadrature result
    is compared against ``2 K0(q rho)``; a deviation larger than ten times
    the combined error estimate raises :class:`ConvergenceError`.
    """
    m = _positive("mass m", m)
    e2 = _positive("coupling e2", e2)
    q = _coulomb_q(q)
    s = Sign.parse(sign).multiplier
    factor = m * e2

    if not strict:
        outer = cylindrical_outer_integral(q, tol)
        # the inner integral is 2 K0 exactly; the factor 2 is folded in here
        value = -s * 2.0 * factor * outer.value
        err = 2.0 * factor * (outer.est_err + 64 * _EPS * abs(outer.value))
        return Amplitude(value, Method.CYLINDRICAL, err, {"outer": outer, "inner": "bessel_k0"})

    inner_tol = max(tol, 1e-12)
    checks = []
    for rho in np.geomspace(1e-3, 10.0, check_points) / q:
        z = inner_z_integral(rho, q, inner_tol)
        z_sin = _inner_z_sine(rho, q, inner_tol)
        ref = bessel_k0(q * rho)
        gap = abs(z.value - 2.0 * ref.value)
        budget = z.est_err + 2.0 * ref.est_err
        checks.append({"rho": float(rho), "inner": z.value, "two_k0": 2.0 * ref.value, "gap": gap, "budget": budget})
        if gap > 10.0 * budget:
            raise ConvergenceError(
                f"inner z-integral at rho={rho!r} is {z.value!r}, expected 2 K0(q rho) = "
                f"{2.0 * ref.value!r} (gap {gap:.3g} exceeds 10x error estimate {budget:.3g})"
            )
        if abs(z_sin.value) > z_sin.est_err + inner_tol / rho:
            raise ConvergenceError(f"sin(qz) part of the inner integral does not vanish at rho={rho!r}")

    worst_abs = 0.0

    def integrand(rho):
        nonlocal worst_abs
        out = np.empty_like(rho)
        for i, r in enumerate(rho):
            z = inner_z_integral(float(r), q, inner_tol)
            out[i] = r * z.value
            worst_abs = max(worst_abs, z.est_err)
        return out

    radius = _OUTER_REACH / q
    outer = integrate_adaptive(integrand, 0.0, radius, tol, endpoint="left")
    value = -s * factor * outer.value
    # inner errors integrate to at most worst_abs * R**2 / 2
    err = factor * (outer.est_err + 0.5 * worst_abs * radius**2 + _tail_bound(q, radius))
    return Amplitude(value, Method.CYLINDRICAL, err, {"outer": outer, "inner": "oscillatory", "checks": tuple(checks)})


def oppenheimer_phase(p: float, theta: float, rho, phi, z):
    """``q . r`` for incoming momentum along ``z`` and scattering angle ``theta``."""
    return p * rho * math.sin(theta) * np.cos(phi) + p * (math.cos(theta) - 1.0) * z


def azimuthal_integral(a: float, rho) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``int_0^{2 pi} exp(-i a rho cos(phi)) d phi`` by the periodic trapezoidal rule.

    Returns ``(real, imag, err)`` arrays. The node count exceeds ``a rho`` by a
    margin that puts the aliasing error, bounded by ``4 pi (x/2)**N / N!``,
    far below double precision; the imaginary part vanishes by symmetry.
    """
    rho = np.atleast_1d(np.asarray(rho, dtype=float))
    x = abs(a) * rho
    n = 2 * int(math.ceil(0.7 * float(x.max(initial=0.0)) + 20.0))
    phi = 2.0 * math.pi * np.arange(n) / n
    arg = np.outer(x, np.cos(phi))
    re = 2.0 * math.pi * np.cos(arg).mean(axis=1)
    im = -2.0 * math.pi * np.sin(arg).mean(axis=1)
    with np.errstate(divide="ignore"):
        log_bound = n * np.log(np.maximum(x, 1e-300) / 2.0) - math.lgamma(n + 1)
    err = 4.0 * math.pi * np.exp(np.minimum(log_bound, 0.0)) + 4.0 * math.pi * n * _EPS
    return re, im, err


def coulomb_oppenheimer_hard_mode(
    m: float,
    e2: float,
    sign: Sign | str,
    p: float,
    theta: float,
    tol: float = 1e-8,
    *,
    inner: str = "oscillatory",
) -> Amplitude:
    """Coulomb amplitude from the cylindrical iterated integral with a tilted momentum transfer.

    With the incoming momentum along ``z`` the phase is
    ``q.r = p rho sin(theta) cos(phi) + p (cos(theta) - 1) z``. For each
    ``rho`` the azimuthal integral is done by the trapezoidal rule and the
    ``z`` integral by oscillatory quadrature (``inner='oscillatory'``, the
    default) or as ``2 K0`` (``inner='bessel'``); the ``rho`` integral is
    outermost. This is slow: expect seconds per angle with the oscillatory
    inner integral, growing as ``theta`` decreases.
    """
    m = _positive("mass m", m)
    e2 = _positive("coupling e2", e2)
    p = _positive("momentum p", p)
    theta = float(theta)
    if not (0.0 < theta <= math.pi):
        raise DomainError(f"theta must lie in (0, pi], got {theta!r}")
    if inner not in ("oscillatory", "bessel"):
        raise ValueError(f"inner must be 'oscillatory' or 'bessel', got {inner!r}")
    s = Sign.parse(sign).multiplier

    a = p * math.sin(theta)
    half = math.sin(0.5 * theta)
    b = 2.0 * p * half * half  # |p (cos(theta) - 1)| without cancellation
    inner_tol = min(1e-10, 1e-2 * tol)
    worst_rel = 0.0
    worst_im = 0.0

    worst_z = 0.0  # absolute error of the z integrals
    worst_phi = 0.0  # absolute error of the azimuthal integrals

    def z_integral(rho: np.ndarray) -> np.ndarray:
        nonlocal worst_z
        if inner == "bessel":
            return 2.0 * k0(b * rho)
        out = np.empty_like(rho)
        for i, r in enumerate(rho):
            z = inner_z_integral(float(r), b, inner_tol)
            out[i] = z.value
            worst_z = max(worst_z, z.est_err)
        return out

    def integrand(rho):
        nonlocal worst_phi, worst_im
        re, im, err = azimuthal_integral(a, rho)
        worst_im = max(worst_im, float(np.max(np.abs(im))))
        worst_phi = max(worst_phi, float(np.max(err)))
        return rho * re * z_integral(rho)

    radius = _OUTER_REACH / b
    outer = integrate_adaptive(integrand, 0.0, radius, tol, endpoint="left")
    prefactor = m * e2 / (2.0 * math.pi)
    value = -s * prefactor * outer.value
    # |Phi| <= 2 pi and int_0^inf rho |Z| = 2 / b**2 bound how the inner errors propagate;
    # beyond the radius the integrand is below rho * 2 pi * 2 K0(b rho)
    propagated = 2.0 * math.pi * worst_z * 0.5 * radius**2 + worst_phi * 2.0 / (b * b)
    err = prefactor * (outer.est_err + propagated + math.pi * _tail_bound(b, radius))
    return Amplitude(
        value,
        Method.OPPENHEIMER_HARD_MODE,
        err,
        {"outer": outer, "inner": inner, "azimuthal_imag_max": worst_im, "q": math.hypot(a, b)},
    )


def cross_section(amp: Amplitude, k: Kinematics) -> CrossSection:
    """``d sigma / d Omega = f**2``."""
    return CrossSection(amp.value * amp.value, k.theta)
