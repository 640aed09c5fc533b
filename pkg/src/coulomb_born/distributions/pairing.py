"""Functions of slow growth and their pairings with good functions.

A function of slow growth ``f`` defines the distribution ``phi -> <f, phi> =
int f phi``. Derivatives and Fourier transforms of ``f`` are defined by moving
the operation onto ``phi``:

    <f^(k), phi> = (-1)**k <f, phi^(k)>,     <hat f, phi> = <f, hat phi>,

and since the good functions here carry exact derivatives and transforms, only
the final integral is numerical. One-dimensional integrals use adaptive
Gauss-Legendre quadrature split at the breakpoints of ``f``; three-dimensional
integrals of radial ``f`` use a spherical product grid (Gauss-Legendre in a
``sinh``-stretched radius, Gauss-Legendre in ``cos(theta)``, trapezoidal in
the azimuth) refined until two successive grids agree.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import ConvergenceError, DomainError, IdentityError
from ..quadrature import integrate_adaptive, ladder_keeps_growing
from .goodfunctions import GoodFunction

# inverse transform: f(x) = INVERSE_FOURIER_CONSTANT**n int hat f(k) e^{ikx} d^n k
INVERSE_FOURIER_CONSTANT = 1.0 / (2.0 * math.pi)

ANGULAR_TOL = 1e-9


class Singularity(str, enum.Enum):
    NONE = "none"
    INTEGRABLE_AT_ORIGIN = "integrable_at_origin"


class Meaning(str, enum.Enum):
    DIRECT = "direct"
    DERIVATIVE = "derivative"
    FOURIER = "fourier"
    LAPLACIAN = "laplacian"
    FOURIER_LAPLACIAN = "fourier_laplacian"


@dataclass(frozen=True)
class SlowGrowthFunction:
    """A function bounded by a polynomial, ``int |f| / (1 + x**2)**N < inf``.

    ``dim`` is 1 for functions on the line and 3 for radial functions
    ``f(r)`` in space. ``breakpoints`` lists points where ``f`` or its
    derivatives jump; quadrature never straddles them.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    growth_cert: int
    name: str = "f"
    dim: int = 1
    singularity: Singularity = Singularity.NONE
    breakpoints: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if self.dim not in (1, 3):
            raise ValueError(f"dim must be 1 or 3, got {self.dim}")
        if self.growth_cert < 0:
            raise ValueError("growth_cert must be >= 0")
        object.__setattr__(self, "singularity", Singularity(self.singularity))

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=float))

    @classmethod
    def from_good(cls, phi: GoodFunction, name: Optional[str] = None) -> "SlowGrowthFunction":
        """A one-dimensional good function regarded as a (trivially) slowly growing one."""
        if phi.dim != 1:
            raise ValueError("from_good takes one-dimensional functions")
        return cls(lambda x: phi(x), 0, name or phi.label or "good")


def _heaviside(x):
    return np.where(x > 0, 1.0, np.where(x < 0, 0.0, 0.5))


ONE = SlowGrowthFunction(lambda x: np.ones_like(x), 1, "1")
X = SlowGrowthFunction(lambda x: x, 2, "x")
HEAVISIDE = SlowGrowthFunction(_heaviside, 1, "theta", breakpoints=(0.0,))
ABS = SlowGrowthFunction(np.abs, 2, "|x|", breakpoints=(0.0,))
COS = SlowGrowthFunction(np.cos, 1, "cos(x)")
SIN = SlowGrowthFunction(np.sin, 1, "sin(x)")
INV_R = SlowGrowthFunction(lambda r: 1.0 / r, 2, "1/r", dim=3, singularity=Singularity.INTEGRABLE_AT_ORIGIN)
ONE_3D = SlowGrowthFunction(lambda r: np.ones_like(r), 2, "1", dim=3)

BUILTINS = {f.name if f.dim == 1 else f"{f.name} (3d)": f for f in (ONE, X, HEAVISIDE, ABS, COS, SIN, INV_R, ONE_3D)}


def _panel_integral(h, a: float, b: float, width: float = 0.5) -> float:
    # composite 16-point Gauss-Legendre; enough for a growth diagnostic even with kinks
    n = max(1, int(math.ceil((b - a) / width)))
    xg, wg = np.polynomial.legendre.leggauss(16)
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)[:, None]
    x = 0.5 * (edges[1:] + edges[:-1])[:, None] + half * xg[None, :]
    return float(np.sum(h(x) * half * wg[None, :]))


def check_slow_growth(f: SlowGrowthFunction, r_max: float = 1.0e4, steps: int = 12) -> bool:
    """Numerically confirm ``int |f| / (1 + x**2)**N`` stays bounded on a doubling ladder.

    Partial integrals up to ``r_max / 2**k`` are compared; the function fails
    when the last three doublings each grow the integral by more than half.
    """
    n = f.growth_cert
    if f.dim == 1:
        def h(x):
            return (np.abs(f(x)) + np.abs(f(-x))) / (1.0 + x * x) ** n
    else:
        def h(r):
            return 4.0 * math.pi * r * r * np.abs(f(r)) / (1.0 + r * r) ** n
    radii = [r_max / 2.0**k for k in range(steps, -1, -1)]
    partials = []
    acc = _panel_integral(h, 0.0, radii[0])
    partials.append((radii[0], acc))
    for lo, hi in zip(radii[:-1], radii[1:]):
        acc += _panel_integral(h, lo, hi)
        partials.append((hi, acc))
    return not ladder_keeps_growing(partials)


@dataclass(frozen=True)
class PairingReport:
    """``<f, phi>`` with an error estimate; ``imag`` carries the imaginary part of complex pairings."""

    value: float
    est_err: float
    meaning: Meaning = Meaning.DIRECT
    imag: float = 0.0
    extras: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.est_err >= 0:
            raise ValueError("est_err must be >= 0")
        object.__setattr__(self, "meaning", Meaning(self.meaning))

    @property
    def complex_value(self) -> complex:
        return complex(self.value, self.imag)

    def _relabel(self, meaning: Meaning, sign: float = 1.0) -> "PairingReport":
        return PairingReport(sign * self.value, self.est_err, meaning, sign * self.imag, self.extras)


# --------------------------------------------------------------------------
# one dimension


def _pair_1d(f: SlowGrowthFunction, phi: GoodFunction, tol: float) -> PairingReport:
    lo, hi = phi.reach()[0]
    cuts = [lo] + sorted(b for b in f.breakpoints if lo < b < hi) + [hi]
    probe = np.linspace(lo, hi, 1025)
    with np.errstate(all="ignore"):
        l1 = float(np.nanmean(np.abs(f(probe) * phi(probe)))) * (hi - lo)
    # integrals far below the size of their integrand are resolved to round-off, not relatively
    abs_tol = max(1e-3 * tol, 20 * np.finfo(float).eps) * l1
    parts = {"re": np.real, "im": np.imag}
    out = {"re": 0.0, "im": 0.0}
    err = 0.0
    nodes = 0
    complex_integrand = np.iscomplexobj(phi(probe)) or np.iscomplexobj(f(probe))
    for key, take in parts.items():
        if key == "im" and not complex_integrand:
            continue
        for a, b in zip(cuts[:-1], cuts[1:]):
            res = integrate_adaptive(lambda x: take(f(x) * phi(x)), a, b, tol, abs_tol=abs_tol)
            out[key] += res.value
            err += res.est_err
            nodes += res.nodes
    return PairingReport(out["re"], err, Meaning.DIRECT, out["im"], {"nodes": nodes, "interval": (lo, hi)})


# --------------------------------------------------------------------------
# three dimensions


@dataclass(frozen=True)
class SphericalGrid:
    """Product quadrature for ``int F(r, mu, psi) r**2 dr dmu dpsi`` with ``mu = cos(theta)``.

    The radius is ``r = a sinh(s)``: uniform near the origin, logarithmic
    far out; ``s`` carries ``panels`` Gauss-Legendre panels of 16 nodes.
    ``mu`` uses Gauss-Legendre nodes and the azimuth the trapezoidal rule,
    which is spectrally accurate for periodic integrands.
    """

    radius: float
    scale: float
    panels: int
    n_mu: int
    n_psi: int

    def radial_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        s_max = math.asinh(self.radius / self.scale)
        xg, wg = np.polynomial.legendre.leggauss(16)
        edges = np.linspace(0.0, s_max, self.panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        s = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
        ws = (half[:, None] * wg[None, :]).ravel()
        r = self.scale * np.sinh(s)
        return r, ws * self.scale * np.cosh(s) * r * r

    def chunks(self, size: int = 16):
        """Yield ``(R, x, y, z, W)`` blocks of ``size`` radii at a time, to bound memory."""
        r, wr = self.radial_nodes()
        mu, wmu = np.polynomial.legendre.leggauss(self.n_mu)
        psi = 2.0 * math.pi * np.arange(self.n_psi) / self.n_psi
        sin_t = np.sqrt(1.0 - mu * mu)[:, None]
        ux = sin_t * np.cos(psi)[None, :]
        uy = sin_t * np.sin(psi)[None, :]
        uz = np.broadcast_to(mu[:, None], ux.shape)
        wang = wmu[:, None] * np.full(self.n_psi, 2.0 * math.pi / self.n_psi)[None, :]
        for start in range(0, len(r), size):
            rc = r[start:start + size][:, None, None]
            R = np.broadcast_to(rc, (rc.shape[0],) + ux.shape)
            W = wr[start:start + size][:, None, None] * wang[None, :, :]
            yield R, rc * ux, rc * uy, rc * uz, W

    def refined(self) -> "SphericalGrid":
        return SphericalGrid(self.radius, self.scale, self.panels * 3 // 2 + 1,
                             self.n_mu * 3 // 2, self.n_psi * 3 // 2)


def _initial_grid(phis: list[GoodFunction]) -> SphericalGrid:
    radius = 0.0
    scale = math.inf
    band = 0.0
    for phi in phis:
        for t in phi.terms:
            c = math.sqrt(sum(a.center ** 2 for a in t))
            wmax = max(a.width for a in t)
            wmin = min(a.width for a in t)
            beta = math.sqrt(sum(a.wavenumber ** 2 for a in t))
            deg = sum(a.degree for a in t)
            r_t = c + (9.0 + math.sqrt(deg)) * wmax
            radius = max(radius, r_t)
            scale = min(scale, wmin)
            # rough angular bandwidth of the term on the sphere of radius r_t
            band = max(band, r_t * (c / wmin**2 + beta) + 0.5 * r_t**2 * (1 / wmin**2 - 1 / wmax**2) + deg)
    n_mu = int(min(max(12, 0.3 * band + 10), 120))
    panels = int(min(max(3, 1.2 * math.asinh(radius / scale)), 16))
    return SphericalGrid(radius, scale, panels, n_mu, 2 * n_mu)


def _grid_integral(kernel, phis, tol: float, max_levels: int = 4):
    """Integrate ``kernel(R, x, y, z) -> dict of arrays`` on refining grids until every entry settles.

    Returns ``(values, errors, grid)`` where the error of each entry is the
    change between the last two grids.
    """
    grid = _initial_grid(phis)
    prev = None
    mags: dict[str, float] = {}
    for _ in range(max_levels):
        vals: dict[str, complex] = {}
        level_mags: dict[str, float] = {}
        for R, x, y, z, W in grid.chunks():
            for k, v in kernel(R, x, y, z).items():
                vals[k] = vals.get(k, 0.0) + complex(np.sum(v * W))
                if prev is None:
                    level_mags[k] = level_mags.get(k, 0.0) + float(np.sum(np.abs(v) * W))
        if prev is None:
            mags = level_mags
        else:
            errs = {k: abs(vals[k] - prev[k]) for k in vals}
            floor = max(1e-3 * tol, 50 * np.finfo(float).eps)
            # entries that vanish identically (angular terms) are judged against the largest one
            scale = max(mags.values())
            if all(errs[k] <= max(tol * abs(vals[k]), floor * scale) for k in vals):
                return vals, errs, grid
        prev = vals
        grid = grid.refined()
    raise ConvergenceError(f"spherical product grid did not settle within {max_levels} refinements")


def _radial_kernel(f: SlowGrowthFunction, phi: GoodFunction):
    def kernel(R, x, y, z):
        return {"direct": f(R) * phi(x, y, z)}
    return kernel


def _pair_3d(f: SlowGrowthFunction, phi: GoodFunction, tol: float) -> PairingReport:
    if f.dim != 3:
        raise ValueError("three-dimensional pairings need a radial function (dim=3)")
    vals, errs, grid = _grid_integral(_radial_kernel(f, phi), [phi], tol)
    v = vals["direct"]
    return PairingReport(v.real, errs["direct"], Meaning.DIRECT, v.imag, {"grid": grid})


# --------------------------------------------------------------------------
# public pairings


def pair(f: SlowGrowthFunction, phi: GoodFunction, tol: float = 1e-12) -> PairingReport:
    """``<f, phi> = int f phi`` over the line or over space."""
    if f.dim != phi.dim:
        raise DomainError(f"dimension mismatch: f is {f.dim}-d, phi is {phi.dim}-d")
    if phi.dim == 1:
        return _pair_1d(f, phi, tol)
    return _pair_3d(f, phi, tol)


def pair_derivative(f: SlowGrowthFunction, phi: GoodFunction, order: int = 1, tol: float = 1e-12) -> PairingReport:
    """``<f^(k), phi> = (-1)**k <f, phi^(k)>`` in one dimension."""
    if order < 1:
        raise ValueError("order must be >= 1")
    sign = -1.0 if order % 2 else 1.0
    return pair(f, phi.derivative(order), tol)._relabel(Meaning.DERIVATIVE, sign)


def pair_fourier(f: SlowGrowthFunction, phi: GoodFunction, order: int = 0, tol: float = 1e-12) -> PairingReport:
    """``<hat g, phi> = <g, hat phi>``, where ``g`` is ``f`` or, for ``order >= 1``, ``f^(order)``.

    ``pair_fourier(HEAVISIDE, phi, order=1)`` is the transform of the delta
    function.
    """
    transformed = phi.fourier()
    if order:
        rep = pair_derivative(f, transformed, order, tol)
    else:
        rep = pair(f, transformed, tol)
    return rep._relabel(Meaning.FOURIER)


def _value_gradient_hessian(phi: GoodFunction, x, y, z):
    grad = [0.0, 0.0, 0.0]
    hess: dict[tuple[int, int], object] = {(i, j): 0.0 for i in range(3) for j in range(i, 3)}
    for jets in phi.jets(x, y, z, order=2):
        for i in range(3):
            others = [jets[k][0] for k in range(3) if k != i]
            grad[i] = grad[i] + jets[i][1] * others[0] * others[1]
            hess[i, i] = hess[i, i] + jets[i][2] * others[0] * others[1]
            for j in range(i + 1, 3):
                k = 3 - i - j
                hess[i, j] = hess[i, j] + jets[i][1] * jets[j][1] * jets[k][0]
    for i in range(3):
        for j in range(i + 1, 3):
            hess[j, i] = hess[i, j]
    return grad, hess


def laplacian_parts(phi: GoodFunction, x, y, z):
    """Radial part ``A`` and angular parts ``B`` (polar) and ``C`` (azimuthal) of ``Laplacian phi``.

    ``A = (1/r**2) d_r(r**2 d_r phi)``, ``C = (1/(r sin(theta))**2) d_psi**2 phi``
    and ``B`` is the rest of the Laplacian, all from the exact Cartesian
    gradient and Hessian.
    """
    g, hess = _value_gradient_hessian(phi, x, y, z)
    r = np.sqrt(x * x + y * y + z * z)
    u = (x / r, y / r, z / r)
    grad_r = sum(u[i] * g[i] for i in range(3))
    second_r = sum(u[i] * u[j] * hess[i, j] for i in range(3) for j in range(3))
    A = second_r + 2.0 * grad_r / r
    rho2 = x * x + y * y
    # d_psi = -y d_x + x d_y; d_psi^2 phi = t.H.t - (x g_x + y g_y) with t = (-y, x, 0)
    tht = y * y * hess[0, 0] - 2.0 * x * y * hess[0, 1] + x * x * hess[1, 1]
    C = (tht - (x * g[0] + y * g[1])) / rho2
    B = hess[0, 0] + hess[1, 1] + hess[2, 2] - A - C
    return A, B, C


def pair_laplacian_radial(
    f: SlowGrowthFunction,
    phi: GoodFunction,
    tol: float = 1e-12,
    *,
    strict: bool = False,
    angular_tol: float = ANGULAR_TOL,
) -> PairingReport:
    """``<f, A phi>`` for radial ``f``, where ``A`` is the radial part of the Laplacian.

    For radial ``f`` the angular parts of the Laplacian integrate to zero over
    each sphere, so this equals ``<f, Laplacian phi>``. The angular integrals
    are always computed and reported in ``extras``; with ``strict=True`` an
    :class:`IdentityError` is raised when either exceeds ``angular_tol``.
    """
    if f.dim != 3 or phi.dim != 3:
        raise DomainError("pair_laplacian_radial needs a radial f and a three-dimensional phi")

    def kernel(R, x, y, z):
        A, B, C = laplacian_parts(phi, x, y, z)
        fr = f(R)
        return {"A": fr * A, "B": fr * B, "C": fr * C}

    vals, errs, grid = _grid_integral(kernel, [phi], tol)
    b, c = abs(vals["B"]), abs(vals["C"])
    extras = {"B": vals["B"].real, "C": vals["C"].real, "B_err": errs["B"], "C_err": errs["C"], "grid": grid}
    if strict and (b > angular_tol or c > angular_tol):
        raise IdentityError(f"angular terms do not vanish: |B| = {b:.3g}, |C| = {c:.3g} (limit {angular_tol:g})")
    a = vals["A"]
    return PairingReport(a.real, errs["A"], Meaning.LAPLACIAN, a.imag, extras)


@dataclass(frozen=True)
class EqualityReport:
    lhs: PairingReport
    rhs: PairingReport
    gap: float


def verify_fourier_laplacian(f: SlowGrowthFunction, phi: GoodFunction, tol: float = 1e-12) -> EqualityReport:
    """Compare ``<f, Laplacian(hat phi)>`` with ``<f, hat(-|x|**2 phi)>``.

    In one dimension the Laplacian is the second derivative. The two sides go
    through different closed-form operations on ``phi`` and are integrated
    separately; ``gap`` is the modulus of their (complex) difference.
    """
    if f.dim != phi.dim:
        raise DomainError(f"dimension mismatch: f is {f.dim}-d, phi is {phi.dim}-d")
    lhs_fn = phi.fourier().laplacian()
    rhs_fn = (-phi.times_square_norm()).fourier()
    if phi.dim == 1:
        lhs = pair(f, lhs_fn, tol)._relabel(Meaning.FOURIER_LAPLACIAN)
        rhs = pair(f, rhs_fn, tol)._relabel(Meaning.FOURIER_LAPLACIAN)
    else:
        def kernel(R, x, y, z):
            fr = f(R)
            return {"lhs": fr * lhs_fn(x, y, z), "rhs": fr * rhs_fn(x, y, z)}

        vals, errs, grid = _grid_integral(kernel, [lhs_fn, rhs_fn], tol)
        lhs = PairingReport(vals["lhs"].real, errs["lhs"], Meaning.FOURIER_LAPLACIAN, vals["lhs"].imag, {"grid": grid})
        rhs = PairingReport(vals["rhs"].real, errs["rhs"], Meaning.FOURIER_LAPLACIAN, vals["rhs"].imag, {"grid": grid})
    return EqualityReport(lhs, rhs, abs(lhs.complex_value - rhs.complex_value))
