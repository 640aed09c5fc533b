"""Numerical integration engines.

Three tools live here:

* :func:`integrate_adaptive` -- globally adaptive Gauss-Legendre quadrature on
  finite, semi-infinite or doubly infinite intervals, with optional
  endpoint-smoothing substitutions for integrable singularities.
* :func:`integrate_oscillatory` -- integrals of ``g(x) sin(qx)`` or
  ``g(x) cos(qx)`` over a half line or the full line, summed one half period
  at a time and accelerated with Wynn's epsilon algorithm.
* :func:`extrapolate_to_zero` -- limit of a sequence of samples ``v(lam)`` as
  ``lam -> 0`` from a geometric ladder, via Richardson (polynomial) or
  Bulirsch-Stoer (rational) tableaux in ``lam**2``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, LadderError

Integrand = Callable[[np.ndarray], np.ndarray]

_EPS = np.finfo(float).eps
_GL_ORDER = 15
_GL_X, _GL_W = np.polynomial.legendre.leggauss(_GL_ORDER)


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_err: float
    nodes: int
    truncation_radius: float | None = None

    def __post_init__(self) -> None:
        if self.est_err < 0 or self.nodes < 1:
            raise ValueError("QuadResult needs est_err >= 0 and nodes >= 1")


@dataclass(frozen=True)
class ExtrapolationReport:
    """Outcome of a ``lam -> 0`` extrapolation.

    ``samples`` holds the ``(lam, value)`` pairs in the order used (strictly
    decreasing ``lam``); ``order_used`` is the order of the final tableau
    column in powers of ``lam**2`` (or ``lam`` for the odd model).
    """

    samples: tuple[tuple[float, float], ...]
    extrapolated: float
    order_used: int
    est_err: float
    model: str
    tableau: tuple[tuple[float, ...], ...] = field(default=(), repr=False)


# --------------------------------------------------------------------------
# adaptive quadrature


def _gauss(f: Integrand, lo: float, hi: float) -> tuple[float, float]:
    half = 0.5 * (hi - lo)
    x = 0.5 * (hi + lo) + half * _GL_X
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise ConvergenceError(f"integrand is not finite at x = {bad!r}")
    return half * float(_GL_W @ y), abs(half) * float(_GL_W @ np.abs(y))


def _map_to_finite(f: Integrand, a: float, b: float, scale: float):
    """Return ``(g, lo, hi)`` with ``int_a^b f = int_lo^hi g`` on a finite interval."""
    a_inf, b_inf = math.isinf(a), math.isinf(b)
    if not a_inf and not b_inf:
        return f, a, b
    if a_inf and b_inf:
        def g(t):
            d = 1.0 - t * t
            return f(scale * t / d) * scale * (1.0 + t * t) / (d * d)
        return g, -1.0, 1.0
    if b_inf:
        def g(t):
            d = 1.0 - t
            return f(a + scale * t / d) * scale / (d * d)
        return g, 0.0, 1.0

    def g(t):
        d = 1.0 - t
        return f(b - scale * t / d) * scale / (d * d)
    return g, 0.0, 1.0


def _smooth_endpoints(f: Integrand, lo: float, hi: float, endpoint: str | None) -> Integrand:
    """Substitutions that flatten integrable endpoint singularities onto ``[0, 1]``."""
    w = hi - lo
    if endpoint is None:
        return lambda u: f(lo + w * u) * w
    if endpoint == "left":
        return lambda u: f(lo + w * u * u) * (2.0 * w * u)
    if endpoint == "right":
        return lambda u: f(lo + w * u * (2.0 - u)) * (2.0 * w * (1.0 - u))
    if endpoint == "both":
        return lambda u: f(lo + w * u * u * (3.0 - 2.0 * u)) * (6.0 * w * u * (1.0 - u))
    raise ValueError(f"endpoint must be None, 'left', 'right' or 'both', got {endpoint!r}")


def integrate_adaptive(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-10,
    *,
    abs_tol: float = 0.0,
    endpoint: str | None = None,
    scale: float = 1.0,
    limit: int = 4000,
) -> QuadResult:
    """Adaptive quadrature of a vectorised integrand over ``[a, b]``.

    Parameters
    ----------
    f : callable
        Integrand accepting and returning numpy arrays.
    a, b : float
        Limits, ``a < b``; either may be infinite.
    tol : float
        Relative tolerance on the value.
    abs_tol : float
        Absolute tolerance floor, for integrals that may vanish.
    endpoint : {None, 'left', 'right', 'both'}
        Declares an integrable singularity (``1/sqrt``, ``log``) at the
        named end(s) of the (mapped) interval; a polynomial substitution
        flattens it before quadrature.
    scale : float
        Length scale of the rational map used for infinite limits.
    limit : int
        Maximum number of interval bisections.

    Returns
    -------
    QuadResult

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within ``limit`` bisections.

    Notes
    -----
    Every interval carries a 15-point Gauss-Legendre value on each of its
    halves; the error estimate is the disagreement between the rule on the
    whole interval and the sum over the halves, which bounds the error of the
    coarser value and is therefore conservative for the reported one.
    """
    if not (tol > 0 or abs_tol > 0):
        raise DomainError("need tol > 0 or abs_tol > 0")
    if not a < b:
        if a == b:
            return QuadResult(0.0, 0.0, 1)
        raise DomainError(f"integration limits must satisfy a < b, got a={a!r}, b={b!r}")
    if not scale > 0:
        raise DomainError("scale must be positive")

    g, lo, hi = _map_to_finite(f, float(a), float(b), float(scale))
    h = _smooth_endpoints(g, lo, hi, endpoint)

    nodes = 0

    def refine(l: float, r: float, whole: float):
        nonlocal nodes
        m = 0.5 * (l + r)
        vl, al = _gauss(h, l, m)
        vr, ar = _gauss(h, m, r)
        nodes += 2 * _GL_ORDER
        err = abs(whole - (vl + vr))
        floor = 50.0 * _EPS * (al + ar)
        return (vl, vr, m, err, floor)

    v0, _ = _gauss(h, 0.0, 1.0)
    nodes += _GL_ORDER
    vl, vr, m, err, floor = refine(0.0, 1.0, v0)

    heap: list[tuple[float, int, float, float, float, float, float]] = []
    counter = 0
    total_val = vl + vr
    total_err = max(err, floor)

    def push(l, r, vl, vr, m, err, floor):
        nonlocal counter
        e = max(err, floor)
        # settled or unsplittable intervals stay in the totals but leave the queue
        if err <= floor or (r - l) < 64 * _EPS * max(abs(l), abs(r), 1e-300):
            return
        counter += 1
        heapq.heappush(heap, (-e, counter, l, r, vl, vr, m))

    push(0.0, 1.0, vl, vr, m, err, floor)
    bisections = 0

    def target() -> float:
        return max(tol * abs(total_val), abs_tol)

    while heap and total_err > target():
        if bisections >= limit:
            raise ConvergenceError(
                f"adaptive quadrature did not reach tol={tol:g} (abs_tol={abs_tol:g}) "
                f"within {limit} bisections; estimate {total_val!r} +/- {total_err:.3g}"
            )
        neg_e, _, l, r, pvl, pvr, pm = heapq.heappop(heap)
        total_val -= pvl + pvr
        total_err += neg_e
        for (cl, cr, cw) in ((l, pm, pvl), (pm, r, pvr)):
            cvl, cvr, cm, cerr, cfloor = refine(cl, cr, cw)
            total_val += cvl + cvr
            total_err += max(cerr, cfloor)
            push(cl, cr, cvl, cvr, cm, cerr, cfloor)
        bisections += 1

    return QuadResult(float(total_val), float(total_err), nodes)


def doubling_ladder(h: Integrand, r_max: float, steps: int = 12, tol: float = 1e-9) -> list[tuple[float, float]]:
    """Partial integrals ``int_0^R h`` on radii ``R = r_max / 2**k``, smallest first."""
    if not r_max > 0:
        raise DomainError("r_max must be positive")
    radii = [r_max / 2.0 ** (steps - 1 - k) for k in range(steps)]
    out = []
    acc = integrate_adaptive(h, 0.0, radii[0], tol, abs_tol=1e-300, endpoint="left").value
    out.append((radii[0], acc))
    for r0, r1 in zip(radii, radii[1:]):
        acc += integrate_adaptive(h, r0, r1, tol, abs_tol=1e-300).value
        out.append((r1, acc))
    return out


def ladder_keeps_growing(partials: Sequence[tuple[float, float]], ratio: float = 1.5, last: int = 3) -> bool:
    """True when each of the last ``last`` doublings grew the partial integral by more than ``ratio``."""
    vals = [v for _, v in partials]
    if len(vals) < last + 1:
        raise ValueError("ladder too short for the growth test")
    tail = vals[-(last + 1):]
    for prev, cur in zip(tail, tail[1:]):
        if prev <= 0 or cur / prev <= ratio:
            return False
    return True


# --------------------------------------------------------------------------
# oscillatory quadrature


def _wynn_epsilon(sums: Sequence[float]) -> float:
    """Wynn epsilon extrapolation of a sequence of partial sums.

    Returns the latest entry of the highest even column that can be formed.
    A vanishing difference means that column already converged.
    """
    prev = [0.0] * (len(sums) + 1)
    cur = list(sums)
    best = cur[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0.0 or abs(d) <= 4 * _EPS * abs(cur[i + 1]):
                return cur[i + 1] if col % 2 == 0 else best
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0:
            best = cur[-1]
    return best


def integrate_oscillatory(
    g: Integrand,
    q: float,
    kind: str = "sin",
    domain: str = "half_line",
    tol: float = 1e-10,
    *,
    abs_tol: float = 0.0,
    max_periods: int = 5000,
    min_radius: float = 0.0,
    window: int = 40,
) -> QuadResult:
    """``int g(x) sin(qx) dx`` or ``int g(x) cos(qx) dx`` over ``[0, inf)`` or the real line.

    The half line is cut at the zeros of the trigonometric factor; each half
    period is integrated adaptively and the alternating partial sums are
    accelerated with Wynn's epsilon algorithm. The full line is folded onto
    the half line using the parity of ``sin``/``cos``.

    ``est_err`` is the spread of the last three accelerated estimates plus
    the accumulated per-segment quadrature error. ``truncation_radius`` is
    the right end of the last half period summed. Termination is not
    considered before ``min_radius`` has been passed, which protects
    amplitudes whose weight sits far from the origin.

    Raises
    ------
    ConvergenceError
        If no stable limit emerges within ``max_periods`` half periods.
    """
    if kind not in ("sin", "cos"):
        raise ValueError(f"kind must be 'sin' or 'cos', got {kind!r}")
    if domain not in ("half_line", "full_line"):
        raise ValueError(f"domain must be 'half_line' or 'full_line', got {domain!r}")
    if not q >= 0 or not math.isfinite(q):
        raise DomainError(f"frequency q must be finite and >= 0, got {q!r}")

    if domain == "full_line":
        if kind == "cos":
            def h(x):
                return g(x) + g(-x)
        else:
            def h(x):
                return g(x) - g(-x)
    else:
        h = g

    if q == 0.0:
        if kind == "sin":
            return QuadResult(0.0, 0.0, 1, 0.0)
        return integrate_adaptive(h, 0.0, math.inf, tol, abs_tol=abs_tol)

    trig = np.sin if kind == "sin" else np.cos
    period = math.pi / q
    offset = 0.0 if kind == "sin" else 0.5

    def breakpoint(k: int) -> float:
        return 0.0 if k == 0 else (k - offset) * period

    def integrand(x):
        return h(x) * trig(q * x)

    seg_tol = max(1e-2 * tol, 1e-13)
    sums: list[float] = []
    terms: list[float] = []
    estimates: list[float] = []
    seg_err = 0.0
    nodes = 0
    total = 0.0
    for k in range(max_periods):
        lo, hi = breakpoint(k), breakpoint(k + 1)
        res = integrate_adaptive(integrand, lo, hi, seg_tol, abs_tol=1e-2 * abs_tol + 1e-300)
        nodes += res.nodes
        seg_err += res.est_err
        total += res.value
        terms.append(res.value)
        sums.append(total)
        if hi < min_radius or k < 3:
            continue

        goal = 0.1 * max(tol * abs(total), abs_tol)
        if abs(terms[-1]) + abs(terms[-2]) <= goal:
            err = abs(terms[-1]) + abs(terms[-2]) + seg_err
            return QuadResult(float(total), float(err + 8 * _EPS * abs(total)), nodes, hi)

        estimates.append(_wynn_epsilon(sums[-window:]))
        if len(estimates) >= 3:
            e0, e1, e2 = estimates[-3:]
            spread = abs(e2 - e1) + abs(e1 - e0)
            goal = 0.1 * max(tol * abs(e2), abs_tol)
            if spread <= goal:
                err = spread + seg_err + 8 * _EPS * abs(e2)
                return QuadResult(float(e2), float(err), nodes, hi)

    raise ConvergenceError(
        f"oscillatory quadrature did not settle within {max_periods} half periods "
        f"(q={q!r}, kind={kind}, last partial sum {total!r})"
    )


# --------------------------------------------------------------------------
# extrapolation in the screening parameter

_MODELS = ("auto", "polynomial", "rational", "odd")


def _validate_ladder(samples: Sequence[tuple[float, float]], min_len: int = 3) -> tuple[np.ndarray, np.ndarray]:
    if len(samples) < min_len:
        raise LadderError(f"need at least {min_len} (lam, value) samples, got {len(samples)}")
    lam = np.array([float(s[0]) for s in samples])
    val = np.array([float(s[1]) for s in samples])
    if not np.all(np.isfinite(lam)) or not np.all(np.isfinite(val)):
        raise LadderError("ladder samples must be finite")
    if np.any(lam <= 0):
        raise LadderError("screening parameters must be positive")
    if np.any(np.diff(lam) == 0):
        raise LadderError("degenerate ladder: repeated screening parameter makes the tableau singular")
    if np.any(np.diff(lam) > 0):
        raise LadderError("screening parameters must be strictly decreasing")
    ratios = lam[1:] / lam[:-1]
    if np.any(ratios > 0.5 * (1 + 1e-12)):
        raise LadderError(f"ladder ratio must be <= 1/2, got max ratio {ratios.max():.6g}")
    return lam, val


def validate_ladder(lams: Sequence[float]) -> tuple[float, ...]:
    """Check a screening schedule before any work is spent on it."""
    lam, _ = _validate_ladder([(x, 0.0) for x in lams])
    return tuple(float(x) for x in lam)


def _polynomial_tableau(x: np.ndarray, v: np.ndarray) -> list[list[float]]:
    # Neville at zero: T[i][k] interpolates samples i-k..i with degree k in x
    T = [[float(vi)] for vi in v]
    for i in range(1, len(v)):
        for k in range(1, i + 1):
            d = T[i][k - 1] - T[i - 1][k - 1]
            T[i].append(T[i][k - 1] + d / (x[i - k] / x[i] - 1.0))
    return T


def _rational_tableau(x: np.ndarray, v: np.ndarray) -> list[list[float]]:
    # Stoer-Bulirsch diagonal rational extrapolation at zero
    T = [[float(vi)] for vi in v]

    def below(i: int, k: int) -> float:
        return 0.0 if k < 0 else T[i][k]

    for i in range(1, len(v)):
        for k in range(1, i + 1):
            d = T[i][k - 1] - T[i - 1][k - 1]
            inner = T[i][k - 1] - below(i - 1, k - 2)
            if d == 0.0 or inner == 0.0:
                T[i].append(T[i][k - 1])
                continue
            den = (x[i - k] / x[i]) * (1.0 - d / inner) - 1.0
            T[i].append(T[i][k - 1] + d / den if den != 0.0 else T[i][k - 1])
    return T


def _level_error(T: list[list[float]]) -> float:
    n = len(T) - 1
    return max(abs(T[n][n] - T[n][n - 1]), abs(T[n][n] - T[n - 1][n - 1]))


def extrapolate_to_zero(samples: Sequence[tuple[float, float]], model: str = "auto") -> ExtrapolationReport:
    """Extrapolate ``(lam, value)`` samples to ``lam = 0``.

    Parameters
    ----------
    samples : sequence of (lam, value)
        At least three samples with strictly decreasing positive ``lam`` and
        successive ratios at most 1/2.
    model : {'auto', 'polynomial', 'rational', 'odd'}
        ``polynomial`` is Richardson extrapolation in ``lam**2``; ``rational``
        is Bulirsch-Stoer rational extrapolation in ``lam**2``; ``auto`` runs
        both and keeps the one whose last two levels agree best; ``odd`` is
        Richardson in ``lam`` itself, for amplitudes with a linear term.

    Raises
    ------
    LadderError
        For short, unordered, non-geometric or repeated ladders.
    """
    if model not in _MODELS:
        raise ValueError(f"model must be one of {_MODELS}, got {model!r}")
    lam, val = _validate_ladder(samples)
    pairs = tuple((float(a), float(b)) for a, b in zip(lam, val))
    order = len(val) - 1

    if model == "odd":
        T = _polynomial_tableau(lam, val)
        chosen = ("odd", T)
    else:
        x = lam * lam
        candidates = []
        if model in ("auto", "polynomial"):
            candidates.append(("polynomial", _polynomial_tableau(x, val)))
        if model in ("auto", "rational"):
            candidates.append(("rational", _rational_tableau(x, val)))
        chosen = min(candidates, key=lambda c: _level_error(c[1]))

    name, T = chosen
    return ExtrapolationReport(
        samples=pairs,
        extrapolated=float(T[-1][-1]),
        order_used=order,
        est_err=float(_level_error(T)),
        model=name,
        tableau=tuple(tuple(row) for row in T),
    )
