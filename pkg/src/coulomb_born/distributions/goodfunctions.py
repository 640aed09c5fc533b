"""Good (rapidly decreasing) test functions with closed-form calculus.

A one-dimensional building block is a Hermite-Gaussian atom

    a(x) = exp(i beta x) * P(u) * exp(-u**2 / 2),    u = (x - c) / w,

with ``P`` a finite series in physicists' Hermite polynomials. Atoms are
closed under differentiation, multiplication by ``x`` and the Fourier
transform ``hat a(k) = int a(x) exp(-i k x) dx``, all of which act on the
coefficients of ``P`` exactly. A :class:`GoodFunction` is a finite sum of
products of atoms, one atom per coordinate, so it lives in one or three
dimensions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import hermite as H

from ..errors import DomainError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _pad(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = max(len(a), len(b))
    return np.pad(a, (0, n - len(a))), np.pad(b, (0, n - len(b)))


@dataclass(frozen=True)
class HermiteAtom:
    """``exp(i wavenumber x) P((x - center)/width) exp(-((x - center)/width)**2 / 2)``."""

    coeffs: tuple[complex, ...] = (1.0,)
    center: float = 0.0
    width: float = 1.0
    wavenumber: float = 0.0

    def __post_init__(self) -> None:
        if not (self.width > 0 and math.isfinite(self.width)):
            raise DomainError(f"width must be finite and > 0, got {self.width!r}")
        if len(self.coeffs) == 0:
            raise ValueError("an atom needs at least one Hermite coefficient")
        c = np.asarray(self.coeffs, dtype=complex)
        if np.all(c.imag == 0):
            c = c.real
        object.__setattr__(self, "coeffs", tuple(c.tolist()))

    @property
    def c(self) -> np.ndarray:
        return np.asarray(self.coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_real(self) -> bool:
        return self.wavenumber == 0.0 and not np.iscomplexobj(self.c)

    def _with(self, coeffs, **kw) -> "HermiteAtom":
        c = np.trim_zeros(np.asarray(coeffs), "b")
        if len(c) == 0:
            c = np.zeros(1)
        return HermiteAtom(tuple(c.tolist()), kw.get("center", self.center), kw.get("width", self.width),
                           kw.get("wavenumber", self.wavenumber))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.width
        out = H.hermval(u, self.c) * np.exp(-0.5 * u * u)
        if self.wavenumber != 0.0:
            out = out * np.exp(1j * self.wavenumber * x)
        return out

    def jet(self, x, order: int = 2) -> list[np.ndarray]:
        """Values of the atom and its first ``order`` derivatives, sharing one envelope."""
        x = np.asarray(x, dtype=float)
        u = (x - self.center) / self.width
        env = np.exp(-0.5 * u * u)
        if self.wavenumber != 0.0:
            env = env * np.exp(1j * self.wavenumber * x)
        out = []
        atom = self
        for k in range(order + 1):
            out.append(H.hermval(u, atom.c) * env)
            if k < order:
                atom = atom.derivative()
        return out

    def derivative(self) -> "HermiteAtom":
        # d/du [P e^{-u^2/2}] = (P' - u P) e^{-u^2/2}; the phase contributes i beta P
        c = self.c
        dp, up = _pad(H.hermder(c) if len(c) > 1 else np.zeros(1), H.hermmulx(c))
        core = (dp - up) / self.width
        if self.wavenumber != 0.0:
            core, base = _pad(core.astype(complex), c.astype(complex))
            core = core + 1j * self.wavenumber * base
        return self._with(core)

    def times_x(self) -> "HermiteAtom":
        # x = center + width * u
        up, base = _pad(H.hermmulx(self.c), self.c)
        return self._with(self.width * up + self.center * base)

    def scaled(self, factor: complex) -> "HermiteAtom":
        return self._with(self.c * factor)

    def fourier(self) -> "HermiteAtom":
        """``int a(x) exp(-i k x) dx`` as an atom in ``k``.

        Hermite functions are eigenfunctions of the transform:
        ``int H_n(u) e^{-u^2/2} e^{-i s u} du = sqrt(2 pi) (-i)**n H_n(s) e^{-s^2/2}``.
        Substituting ``x = c + w u`` gives centre ``beta``, width ``1/w`` and
        the phase ``exp(-i k c)``.
        """
        n = np.arange(len(self.coeffs))
        phase = np.exp(1j * self.wavenumber * self.center) if self.wavenumber else 1.0
        coeffs = self.width * _SQRT_2PI * phase * self.c * (-1j) ** n
        return HermiteAtom(tuple(np.asarray(coeffs, dtype=complex).tolist()), self.wavenumber,
                           1.0 / self.width, -self.center)

    def reach(self, margin: float = 13.0) -> tuple[float, float]:
        """Interval outside which the atom is below roughly ``1e-25`` of its scale."""
        half = (margin + 2.0 * math.sqrt(self.degree)) * self.width
        return self.center - half, self.center + half


Term = tuple[HermiteAtom, ...]


@dataclass(frozen=True)
class GoodFunction:
    """Finite sum of products of Hermite-Gaussian atoms in one or three dimensions.

    Build members with :meth:`gaussian`, :meth:`hermite_gaussian` and
    :meth:`product`; combine them linearly with ``+``, ``-`` and scalar ``*``.

    Examples
    --------
    >>> phi = GoodFunction.gaussian(2.0, 1.0)
    >>> round(float(phi.value_at_origin().real), 6)
    0.135335
    """

    terms: tuple[Term, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.terms:
            raise ValueError("a good function needs at least one term")
        dims = {len(t) for t in self.terms}
        if len(dims) != 1 or dims.pop() not in (1, 3):
            raise ValueError("every term must have one atom per dimension (1 or 3)")

    # -- construction ------------------------------------------------------

    @classmethod
    def gaussian(cls, center=0.0, width: float = 1.0, dim: int = 1) -> "GoodFunction":
        """``exp(-|x - center|**2 / (2 width**2))``."""
        centers = _as_vector(center, dim)
        atoms = tuple(HermiteAtom((1.0,), float(c), float(width)) for c in centers)
        return cls((atoms,), f"gaussian(center={center!r}, width={width!r})")

    @classmethod
    def hermite_gaussian(cls, order: int, width: float = 1.0, center: float = 0.0) -> "GoodFunction":
        """``H_order(u) exp(-u**2 / 2)`` with ``u = (x - center) / width``, in one dimension."""
        if order < 0 or int(order) != order:
            raise DomainError(f"order must be a non-negative integer, got {order!r}")
        coeffs = (0.0,) * int(order) + (1.0,)
        return cls(((HermiteAtom(coeffs, float(center), float(width)),),),
                   f"hermite_gaussian(order={order}, width={width!r}, center={center!r})")

    @classmethod
    def product(cls, *factors: "GoodFunction") -> "GoodFunction":
        """Tensor product of one-dimensional good functions, ``phi(x, y, z) = f(x) g(y) h(z)``."""
        if any(f.dim != 1 for f in factors):
            raise ValueError("product() takes one-dimensional factors")
        terms: list[Term] = [()]
        for f in factors:
            terms = [t + ft for t in terms for ft in f.terms]
        label = " * ".join(f.label or "phi" for f in factors)
        return cls(tuple(terms), label)

    # -- basic properties --------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.terms[0])

    @property
    def is_real(self) -> bool:
        return all(a.is_real for t in self.terms for a in t)

    def __call__(self, *coords):
        if len(coords) != self.dim:
            raise ValueError(f"expected {self.dim} coordinate arrays, got {len(coords)}")
        coords = [np.asarray(x, dtype=float) for x in coords]
        # atoms on one axis often share centre, width and phase: reuse envelopes and values
        envelopes: dict = {}
        values: dict = {}

        def atom_value(axis: int, atom: HermiteAtom):
            key = (axis, atom)
            if key not in values:
                ekey = (axis, atom.center, atom.width, atom.wavenumber)
                if ekey not in envelopes:
                    x = coords[axis]
                    u = (x - atom.center) / atom.width
                    env = np.exp(-0.5 * u * u)
                    if atom.wavenumber != 0.0:
                        env = env * np.exp(1j * atom.wavenumber * x)
                    envelopes[ekey] = (u, env)
                u, env = envelopes[ekey]
                values[key] = H.hermval(u, atom.c) * env
            return values[key]

        total = 0.0
        for term in self.terms:
            part = atom_value(0, term[0])
            for axis in range(1, len(term)):
                part = part * atom_value(axis, term[axis])
            total = total + part
        return total

    def jets(self, *coords, order: int = 2):
        """Per term, per axis: the atom and its derivatives up to ``order`` at the coordinates."""
        return [[a.jet(x, order) for a, x in zip(t, coords)] for t in self.terms]

    def value_at_origin(self) -> complex:
        return complex(self(*([0.0] * self.dim)))

    def reach(self) -> list[tuple[float, float]]:
        """Per-axis interval carrying the function, union over all terms."""
        spans = []
        for axis in range(self.dim):
            los, his = zip(*(t[axis].reach() for t in self.terms))
            spans.append((min(los), max(his)))
        return spans

    # -- linear structure --------------------------------------------------

    def __add__(self, other: "GoodFunction") -> "GoodFunction":
        if not isinstance(other, GoodFunction):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("cannot add good functions of different dimension")
        return GoodFunction(self.terms + other.terms, "")

    def __mul__(self, factor) -> "GoodFunction":
        if isinstance(factor, GoodFunction):
            return NotImplemented
        return GoodFunction(tuple((t[0].scaled(factor),) + t[1:] for t in self.terms), "")

    __rmul__ = __mul__

    def __neg__(self) -> "GoodFunction":
        return self * -1.0

    def __sub__(self, other: "GoodFunction") -> "GoodFunction":
        return self + (-other)

    # -- calculus ----------------------------------------------------------

    def _map_axis(self, axis: int, op) -> "GoodFunction":
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis must lie in [0, {self.dim}), got {axis}")
        return GoodFunction(tuple(t[:axis] + (op(t[axis]),) + t[axis + 1:] for t in self.terms))

    def partial(self, axis: int = 0, order: int = 1) -> "GoodFunction":
        out = self
        for _ in range(order):
            out = out._map_axis(axis, HermiteAtom.derivative)
        return out

    def derivative(self, order: int = 1) -> "GoodFunction":
        """``d^order phi / dx^order`` of a one-dimensional function."""
        if self.dim != 1:
            raise ValueError("derivative() is one-dimensional; use partial()")
        return self.partial(0, order)

    def times_coordinate(self, axis: int = 0) -> "GoodFunction":
        return self._map_axis(axis, HermiteAtom.times_x)

    def times_square_norm(self) -> "GoodFunction":
        """``|x|**2 phi``."""
        parts = [self.times_coordinate(a).times_coordinate(a) for a in range(self.dim)]
        return _sum(parts)

    def laplacian(self) -> "GoodFunction":
        return _sum([self.partial(a, 2) for a in range(self.dim)])

    def fourier(self) -> "GoodFunction":
        """``hat phi(k) = int phi(x) exp(-i k.x) d^n x``, exact."""
        return GoodFunction(tuple(tuple(a.fourier() for a in t) for t in self.terms),
                            f"fourier[{self.label}]" if self.label else "")

    def describe(self) -> dict:
        """Parameters of every atom, for reports."""
        return {
            "label": self.label,
            "terms": [
                [{"coeffs": [_jsonable(c) for c in a.coeffs], "center": a.center, "width": a.width,
                  "wavenumber": a.wavenumber} for a in t]
                for t in self.terms
            ],
        }


def _jsonable(c):
    c = complex(c)
    return c.real if c.imag == 0 else [c.real, c.imag]


def _sum(parts: Iterable[GoodFunction]) -> GoodFunction:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def _as_vector(center, dim: int) -> Sequence[float]:
    if np.ndim(center) == 0:
        return [float(center)] * dim
    v = [float(c) for c in center]
    if len(v) != dim:
        raise ValueError(f"center needs {dim} components, got {len(v)}")
    return v


def rapid_decrease_check(phi: GoodFunction, max_power: int = 4, max_order: int = 4,
                         distance: float = 10.0, ratio: float = 1e-6) -> bool:
    """Check ``|x**m phi^(k)(x)|`` is negligible ``distance`` widths away, for ``m, k <= 4``.

    One-dimensional only. "Negligible" means below ``ratio`` times the largest
    value of the same expression on a grid spanning the function.
    """
    if phi.dim != 1:
        raise ValueError("rapid_decrease_check is one-dimensional")
    lo, hi = phi.reach()[0]
    grid = np.linspace(lo, hi, 2001)
    far = []
    for t in phi.terms:
        a = t[0]
        far += [a.center - distance * a.width, a.center + distance * a.width]
    far = np.array(far)
    for k in range(max_order + 1):
        d = phi.derivative(k) if k else phi
        for m in range(max_power + 1):
            peak = np.max(np.abs(grid**m * d(grid)))
            if peak == 0:
                continue
            if np.max(np.abs(far**m * d(far))) > ratio * peak:
                return False
    return True
