"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the lines are repeated in
the "acceptance criteria" section of the terminal summary.
"""

import math

import mpmath
import numpy as np
import pytest

from coulomb_born.born import (
    DEFAULT_LADDER,
    born_radial,
    coulomb_closed,
    coulomb_cylindrical,
    coulomb_oppenheimer_hard_mode,
    coulomb_screened_limit,
    cross_section,
    cylindrical_outer_integral,
    yukawa_closed,
)
from coulomb_born.distributions import IDENTITIES, route3_reconstruction, run_identity_suite
from coulomb_born.kinematics import Kinematics
from coulomb_born.potentials import Sign, Yukawa
from coulomb_born.specfun import bessel_k0

Q_GRID = (0.1, 0.5, 1.0, 2.0, 5.0, 10.0)
SIGNS = (Sign.REPULSIVE, Sign.ATTRACTIVE)


def rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


def k0_series_oracle(x: float) -> float:
    """Ascending series at 60 digits; cancellation costs at most ~26 digits on (0, 30]."""
    with mpmath.workdps(60):
        x = mpmath.mpf(x)
        t = x * x / 4
        term, h = mpmath.mpf(1), mpmath.mpf(0)
        i0, rest = term, mpmath.mpf(0)
        k = 0
        while True:
            k += 1
            term *= t / (k * k)
            h += mpmath.mpf(1) / k
            i0 += term
            rest += term * h
            if term * h < mpmath.mpf(10) ** -70 * abs(rest):
                break
        return float(-(mpmath.log(x / 2) + mpmath.euler) * i0 + rest)


def k0_asymptotic_oracle(x: float) -> float:
    """Hankel expansion to its smallest term; that term is below 1e-16 relative for x >= 18."""
    with mpmath.workdps(40):
        x = mpmath.mpf(x)
        total = term = mpmath.mpf(1)
        for k in range(1, 200):
            new = term * -((2 * k - 1) ** 2) / (k * 8 * x)
            if abs(new) > abs(term):
                break
            term = new
            total += term
        return float(mpmath.sqrt(mpmath.pi / (2 * x)) * mpmath.exp(-x) * total)


def test_criterion_1_closed_form(criterion):
    with criterion(1, "closed form equals -/+ 2/q^2 exactly", 1.0) as c:
        for q in Q_GRID:
            assert coulomb_closed(1.0, 1.0, Sign.REPULSIVE, q).value == -2.0 / q**2
            assert coulomb_closed(1.0, 1.0, Sign.ATTRACTIVE, q).value == 2.0 / q**2
        c.note(f"{2 * len(Q_GRID)} exact equalities")


def test_criterion_2_screened_limit(criterion):
    with criterion(2, "screened-limit route within 1e-6, lam=0.4 rung within 1e-9", 5.0) as c:
        worst = worst_rung = 0.0
        for q in Q_GRID:
            for s in SIGNS:
                amp = coulomb_screened_limit(1.0, 1.0, s, q, DEFAULT_LADDER)
                exact = coulomb_closed(1.0, 1.0, s, q).value
                rung = amp.diagnostics["samples"][0]
                rung_exact = -s.multiplier * 2.0 / (q * q + 0.16)
                worst = max(worst, rel(amp.value, exact))
                worst_rung = max(worst_rung, rel(rung.value, rung_exact))
        c.note(f"max rel gap {worst:.2e}, lam=0.4 rung {worst_rung:.2e}")
        assert worst <= 1e-6
        assert worst_rung <= 1e-9


def test_criterion_3_cylindrical(criterion):
    with criterion(3, "cylindrical route within 1e-8, strict inner integrals equal 2 K0", 10.0) as c:
        worst = 0.0
        for q in Q_GRID:
            for s in SIGNS:
                amp = coulomb_cylindrical(1.0, 1.0, s, q)
                worst = max(worst, rel(amp.value, coulomb_closed(1.0, 1.0, s, q).value))
        strict_worst = 0.0
        ratio = 0.0
        n_checks = 0
        for q in (0.1, 1.0, 10.0):
            amp = coulomb_cylindrical(1.0, 1.0, Sign.REPULSIVE, q, strict=True)
            strict_worst = max(strict_worst, rel(amp.value, -2.0 / q**2))
            checks = amp.diagnostics["checks"]
            assert len(checks) == 10
            for chk in checks:
                n_checks += 1
                assert chk["gap"] <= chk["budget"]
                ratio = max(ratio, chk["gap"] / chk["budget"])
        c.note(f"max rel gap {worst:.2e} (strict {strict_worst:.2e}); "
               f"{n_checks} inner checks, worst gap/est_err {ratio:.3f}")
        assert worst <= 1e-8
        assert strict_worst <= 1e-8


def test_criterion_4_hard_mode(criterion):
    with criterion(4, "tilted iterated integral within 1e-5 at theta = pi/2, 2pi/3, pi", 60.0) as c:
        gaps = []
        for theta in (math.pi / 2, 2 * math.pi / 3, math.pi):
            q = 2.0 * math.sin(theta / 2)
            amp = coulomb_oppenheimer_hard_mode(1.0, 1.0, Sign.REPULSIVE, 1.0, theta)
            gaps.append(rel(amp.value, coulomb_closed(1.0, 1.0, Sign.REPULSIVE, q).value))
        c.note("rel gaps " + ", ".join(f"{g:.1e}" for g in gaps))
        assert max(gaps) <= 1e-5


def test_criterion_5_yukawa(criterion):
    with criterion(5, "generic radial route reproduces the Yukawa closed form within 1e-10", 2.0) as c:
        worst = 0.0
        for q in (0.5, 1.0, 2.0):
            for lam in (0.5, 1.0, 2.0):
                amp = born_radial(Yukawa(1.0, lam, Sign.REPULSIVE), 1.0, q)
                worst = max(worst, rel(amp.value, yukawa_closed(1.0, 1.0, lam, Sign.REPULSIVE, q).value))
        c.note(f"max rel gap {worst:.2e} over 9 points")
        assert worst <= 1e-10


def test_criterion_6_rutherford(criterion):
    with criterion(6, "Rutherford point value and sin^-4(theta/2) law", 1.0) as c:
        k = Kinematics(1.0, math.pi / 2)
        amp = coulomb_closed(1.0, 1.0, Sign.REPULSIVE, k.q)
        assert abs(abs(amp.value) - 1.0) <= 1e-15
        assert abs(cross_section(amp, k).value - 1.0) <= 1e-15
        back = Kinematics(1.0, math.pi)
        ref = cross_section(coulomb_closed(1.0, 1.0, Sign.REPULSIVE, back.q), back).value
        worst = 0.0
        for theta in (math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3, math.pi):
            kt = Kinematics(1.0, theta)
            ratio = cross_section(coulomb_closed(1.0, 1.0, Sign.REPULSIVE, kt.q), kt).value / ref
            worst = max(worst, rel(ratio, math.sin(theta / 2) ** -4))
        c.note(f"|f| = {abs(amp.value)!r}, max rel deviation of angular law {worst:.1e}")
        assert worst <= 1e-12


def test_criterion_7_identity_suite(criterion):
    with criterion(7, "distribution identities on 20 random good functions each", 30.0) as c:
        records = run_identity_suite(n_functions=20, seed=20240601, strict=True)
        by_name = {}
        for r in records:
            by_name.setdefault(r.identity, []).append(r)
        assert set(by_name) == set(IDENTITIES)
        for name, recs in by_name.items():
            assert len(recs) >= 20
            tol = IDENTITIES[name][1]
            assert all(r.gap <= tol for r in recs), name
        for r in by_name["angular_vanishing"]:
            assert abs(r.extras["B"]) < 1e-9 and abs(r.extras["C"]) < 1e-9
        c.note(", ".join(f"{n} {max(r.gap for r in recs):.1e}" for n, recs in by_name.items()))


def test_criterion_8_k0(criterion):
    with criterion(8, "K0 against series/asymptotic oracles to 1e-12, radial moment 1/q^2 to 1e-10", 2.0) as c:
        worst = 0.0
        for x in np.geomspace(1e-6, 50.0, 80):
            oracle = k0_series_oracle(x) if x <= 18.0 else k0_asymptotic_oracle(x)
            worst = max(worst, rel(bessel_k0(x).value, oracle))
        # the two oracles agree where both are valid
        for x in (18.0, 24.0, 30.0):
            assert rel(k0_series_oracle(x), k0_asymptotic_oracle(x)) <= 1e-15
        moment = max(rel(cylindrical_outer_integral(q).value, 1.0 / q**2) for q in (0.5, 1.0, 2.0, 5.0))
        c.note(f"K0 max rel err {worst:.1e}, moment max rel err {moment:.1e}")
        assert worst <= 1e-12
        assert moment <= 1e-10


def test_criterion_9_sign_and_scaling(criterion):
    with criterion(9, "sign antisymmetry on every route, exact 1/q^2 scaling and sign-free |f|^2", 1.0) as c:
        q = 1.3
        routes = {
            "closed_form": lambda s: coulomb_closed(1.0, 1.0, s, q),
            "screened_limit": lambda s: coulomb_screened_limit(1.0, 1.0, s, q),
            "cylindrical": lambda s: coulomb_cylindrical(1.0, 1.0, s, q),
            "oppenheimer_hard_mode": lambda s: coulomb_oppenheimer_hard_mode(
                1.0, 1.0, s, 1.0, 2.0 * math.asin(q / 2.0), inner="bessel"),
            "generic_radial": lambda s: born_radial(Yukawa(1.0, 0.7, s), 1.0, q),
            "distributional": lambda s: route3_reconstruction(1.0, 1.0, s, q),
        }
        for name, route in routes.items():
            plus, minus = route(Sign.REPULSIVE), route(Sign.ATTRACTIVE)
            assert abs(plus.value + minus.value) <= plus.est_err + minus.est_err, name
        for q in Q_GRID:
            for s in SIGNS:
                assert coulomb_closed(1.0, 1.0, s, 2 * q).value == coulomb_closed(1.0, 1.0, s, q).value / 4
            f_plus = coulomb_closed(1.0, 1.0, Sign.REPULSIVE, q).value
            f_minus = coulomb_closed(1.0, 1.0, Sign.ATTRACTIVE, q).value
            assert abs(f_plus) ** 2 == abs(f_minus) ** 2
        c.note(f"{len(routes)} routes antisymmetric, scaling exact on {len(Q_GRID)} q values")
